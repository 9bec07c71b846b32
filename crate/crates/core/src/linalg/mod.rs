//! Dense real matrices and monic polynomials.
//!
//! Everything here is generic over [`Scalar`] so the same routines run in
//! `f64` and in exact rational arithmetic ([`num::BigRational`]).

mod io;
mod matrix;
mod modular;
mod poly;

pub use io::{format_g17, matrix_from_csv, matrix_from_json, matrix_from_text, matrix_to_csv,
    matrix_to_json, matrix_tokens};
pub use matrix::{direct_sum, DenseMatrix, Matrix};
pub use poly::{char_poly, faddeev_leverrier, poly_from_roots, Polynomial, MAX_CHAR_POLY_DIM};

use num::{BigRational, Num, Signed, ToPrimitive};
use std::fmt::Debug;

/// Field elements the constructions and certificates operate on.
pub trait Scalar: Clone + PartialOrd + Debug + Num + Signed + Send + Sync + 'static {
    fn from_usize(n: usize) -> Self;

    fn to_f64(&self) -> f64;

    /// Factor to divide a matrix by before running an unstable recurrence.
    /// `None` means no rescaling (exact arithmetic never needs it).
    fn balance_factor(_max_abs: &Self) -> Option<Self> {
        None
    }

    fn char_poly(m: &Matrix<Self>) -> crate::Result<Polynomial<Self>> {
        faddeev_leverrier(m)
    }
}

impl Scalar for f64 {
    fn from_usize(n: usize) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    // Powers of two keep the rescaling itself exact.
    fn balance_factor(max_abs: &Self) -> Option<Self> {
        if *max_abs > 0.0 && max_abs.is_finite() {
            let e = max_abs.log2().round() as i32;
            (e != 0).then(|| 2f64.powi(e))
        } else {
            None
        }
    }

    fn char_poly(m: &Matrix<Self>) -> crate::Result<Polynomial<Self>> {
        let n = m.ensure_square()?;
        if n > MAX_CHAR_POLY_DIM {
            return Err(crate::Error::DimensionTooLarge { n, max: MAX_CHAR_POLY_DIM });
        }
        match modular::exact_char_poly(m) {
            Some(p) => Ok(p),
            None => faddeev_leverrier(m),
        }
    }
}

impl Scalar for BigRational {
    fn from_usize(n: usize) -> Self {
        BigRational::from_integer(n.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// `max(abs_tol, rel_tol * scale)`, the mixed tolerance used for coefficient
/// comparisons.
pub fn mixed_tolerance(abs_tol: f64, rel_tol: f64, scale: f64) -> f64 {
    abs_tol.max(rel_tol * scale)
}

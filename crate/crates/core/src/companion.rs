//! Companion-matrix baseline.
//!
//! For `p(t) = t^n + Σ c_k t^k` the companion matrix used here has ones on
//! the subdiagonal and `-c_0, ..., -c_{n-1}` down the last column. It is
//! nonnegative exactly when every `c_k <= 0`, which holds for Suleimanova
//! spectra.

use crate::error::{Error, Result};
use crate::linalg::{poly_from_roots, DenseMatrix, Matrix, Polynomial, Scalar};
use crate::spectrum::Spectrum;
use crate::verify::{Method, Realization, RealizationParams};

/// Stored in realization metadata.
pub const ORIENTATION: &str = "subdiagonal-ones, coefficients in last column";

/// Relative band for the coefficient sign test, scaled by
/// `max(1, max |c_k|)`.
pub const DEFAULT_COEFF_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionRealization {
    pub poly: Polynomial,
    pub matrix: DenseMatrix,
    pub nonneg: bool,
}

pub fn companion_matrix<T: Scalar>(p: &Polynomial<T>) -> Matrix<T> {
    let n = p.degree().max(1);
    let mut m = Matrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = T::one();
    }
    for (i, c) in p.lower_coeffs().iter().enumerate() {
        m[(i, n - 1)] = -c.clone();
    }
    m
}

/// `true` iff every non-leading coefficient is `<= tol * max(1, max|c_k|)`.
pub fn coefficients_nonpositive(p: &Polynomial, tol: f64) -> bool {
    let band = tol * p.max_abs_coeff().max(1.0);
    p.lower_coeffs().iter().all(|c| *c <= band)
}

pub fn realize_companion(spectrum: &Spectrum) -> CompanionRealization {
    let poly = poly_from_roots(spectrum);
    let matrix = companion_matrix(&poly);
    let nonneg = coefficients_nonpositive(&poly, DEFAULT_COEFF_TOL);
    CompanionRealization {
        poly,
        matrix,
        nonneg,
    }
}

/// `true` iff `|p(λ_i)| <= tol * max(1, max|c_k|)` for every target value.
pub fn verify_roots(cr: &CompanionRealization, spectrum: &Spectrum, tol: f64) -> bool {
    let scale = cr.poly.max_abs_coeff().max(1.0);
    spectrum
        .values()
        .iter()
        .all(|l| cr.poly.eval(l).abs() <= tol * scale)
}

impl CompanionRealization {
    pub fn into_realization(self, spectrum: &Spectrum) -> Realization {
        let params = RealizationParams {
            orientation: Some(ORIENTATION.to_string()),
            ..Default::default()
        };
        Realization::new(self.matrix, Method::Companion, spectrum, params)
    }
}

/// Checks the companion zero pattern: ones on the subdiagonal, anything in
/// the last column, zeros elsewhere.
pub fn is_companion_form(m: &DenseMatrix, tol: f64) -> bool {
    let n = m.n_rows();
    if !m.is_square() {
        return false;
    }
    (0..n).all(|i| {
        (0..n.saturating_sub(1)).all(|j| {
            let want = if i == j + 1 { 1.0 } else { 0.0 };
            (m[(i, j)] - want).abs() <= tol
        })
    })
}

/// Reads the polynomial back from a companion-form matrix.
pub fn read_back(m: &DenseMatrix) -> Result<Polynomial> {
    let n = m.ensure_square()?;
    if !is_companion_form(m, 0.0) {
        return Err(Error::Parse("matrix is not in companion form".into()));
    }
    let mut coeffs: Vec<f64> = (0..n).map(|i| -m[(i, n - 1)]).collect();
    coeffs.push(1.0);
    Polynomial::from_coeffs(coeffs)
}

use super::{Matrix, Scalar};
use crate::error::{Error, Result};
use std::fmt;

/// Largest matrix accepted by [`char_poly`]; the recurrence is O(n^4).
pub const MAX_CHAR_POLY_DIM: usize = 64;

/// Monic polynomial stored degree-ascending with the leading 1 explicit:
/// `coeffs = [c_0, c_1, ..., c_{n-1}, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T = f64> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    /// Builds a polynomial from ascending coefficients. The leading
    /// coefficient is not forced to 1.
    pub fn from_coeffs(coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Polynomial { coeffs })
    }

    /// `∏ (t - r)` by multiplying in one root at a time, in the given order.
    pub fn from_roots(roots: &[T]) -> Self {
        let mut coeffs = Vec::with_capacity(roots.len() + 1);
        coeffs.push(T::one());
        for r in roots {
            coeffs.push(T::zero());
            for k in (0..coeffs.len()).rev() {
                let lower = if k > 0 { coeffs[k - 1].clone() } else { T::zero() };
                coeffs[k] = lower - r.clone() * coeffs[k].clone();
            }
        }
        Polynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `c_0 .. c_{n-1}`, the non-leading coefficients.
    pub fn lower_coeffs(&self) -> &[T] {
        &self.coeffs[..self.degree()]
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial { coeffs }
    }

    pub fn max_abs_coeff(&self) -> T {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .fold(T::zero(), |m, v| if v > m { v } else { m })
    }
}

impl Polynomial<f64> {
    /// Largest coefficientwise difference; infinite when degrees differ.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        if self.degree() != other.degree() {
            return f64::INFINITY;
        }
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Coefficientwise comparison under `max(abs_tol, rel_tol * max|c_k|)`,
    /// the scale taken from `self`.
    pub fn approx_eq(&self, other: &Self, abs_tol: f64, rel_tol: f64) -> bool {
        let tol = super::mixed_tolerance(abs_tol, rel_tol, self.max_abs_coeff());
        self.max_coeff_diff(other) <= tol
    }
}

impl fmt::Display for Polynomial<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0.0 && !(first && k == 0) {
                continue;
            }
            let sign = if *c < 0.0 { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let show_mag = k == 0 || mag != 1.0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// `det(tI - M)`.
///
/// In `f64` this is the exact characteristic polynomial of the stored
/// matrix, rounded once per coefficient; entries spanning more binades than
/// the modular path supports fall back to [`faddeev_leverrier`].
pub fn char_poly<T: Scalar>(m: &Matrix<T>) -> Result<Polynomial<T>> {
    T::char_poly(m)
}

/// `det(tI - M)` by the Faddeev–LeVerrier trace recurrence.
///
/// With `M_1 = I`, each step forms `A M_k`, reads `c_{n-k} = -tr(A M_k) / k`
/// and sets `M_{k+1} = A M_k + c_{n-k} I`. Floating-point input is first
/// divided by a power of two near its largest entry and the coefficients
/// rescaled afterwards.
pub fn faddeev_leverrier<T: Scalar>(m: &Matrix<T>) -> Result<Polynomial<T>> {
    let n = m.ensure_square()?;
    if n > MAX_CHAR_POLY_DIM {
        return Err(Error::DimensionTooLarge {
            n,
            max: MAX_CHAR_POLY_DIM,
        });
    }
    let balance = T::balance_factor(&m.max_abs());
    let a = match &balance {
        Some(s) => m.map(|v| v.clone() / s.clone()),
        None => m.clone(),
    };

    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut mk = Matrix::identity(n);
    for k in 1..=n {
        let mut am = a.matmul(&mk)?;
        let c = -am.trace() / T::from_usize(k);
        for i in 0..n {
            am[(i, i)] = am[(i, i)].clone() + c.clone();
        }
        coeffs[n - k] = c;
        mk = am;
    }

    if let Some(s) = balance {
        // c_k picks up s^(n-k)
        let mut factor = T::one();
        for k in (0..n).rev() {
            factor = factor * s.clone();
            coeffs[k] = coeffs[k].clone() * factor.clone();
        }
    }
    Ok(Polynomial { coeffs })
}

/// Monic `∏ (t - λ_k)` over the spectrum's values, sorted descending.
pub fn poly_from_roots(spectrum: &crate::spectrum::Spectrum) -> Polynomial<f64> {
    Polynomial::from_roots(spectrum.values())
}

//! Exact rational arithmetic mode.
//!
//! The constructions are linear in the spectrum with coefficients `1/n`,
//! `1/2` and `1/4`, so rational input gives rational matrices, and the
//! characteristic polynomial can be compared for equality rather than
//! within a tolerance.

use crate::companion::companion_matrix;
use crate::error::{Error, Result};
use crate::linalg::{char_poly, Matrix, Polynomial};
use crate::small_order::{plan_small, SmallOrderCase};
use crate::suleimanova::{build_alpha_permutative, first_row, suleimanova_pattern, zero_trace_first_row};
use crate::verify::{CheckStatus, Method, TolProfile, VerificationReport};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub type RationalMatrix = Matrix<BigRational>;

/// Parses `3`, `-0.25`, `1e-3`, `2.5E+2` or `7/3` exactly.
pub fn parse_rational(token: &str) -> Result<BigRational> {
    let t = token.trim();
    let bad = || Error::Parse(format!("not a rational number: `{token}`"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(all.parse::<BigInt>().map_err(|_| bad())?);
    let shift = exp - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let pow = num::pow(ten, shift.unsigned_abs() as usize);
    value = if shift >= 0 { value * pow } else { value / pow };
    Ok(if negative { -value } else { value })
}

/// `7`, `-3`, or `p/q`.
pub fn format_rational(v: &BigRational) -> String {
    if v.is_integer() {
        v.to_integer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

pub fn matrix_to_csv_exact(m: &RationalMatrix) -> String {
    m.row_iter()
        .map(|row| row.iter().map(format_rational).collect::<Vec<_>>().join(",") + "\n")
        .collect()
}

pub fn to_f64_matrix(m: &RationalMatrix) -> crate::linalg::DenseMatrix {
    m.map(|v| v.to_f64().unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactRealization {
    pub matrix: RationalMatrix,
    pub method: Method,
    pub case: Option<SmallOrderCase>,
    pub block_sizes: Vec<usize>,
    /// Sorted descending.
    pub target: Vec<BigRational>,
}

fn sorted_desc(mut values: Vec<BigRational>) -> Vec<BigRational> {
    values.sort_by(|a, b| b.cmp(a));
    values
}

/// Mirrors the floating-point auto dispatch with a zero sign band.
pub fn realize_exact(values: Vec<BigRational>) -> Result<ExactRealization> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let target = sorted_desc(values);
    let n = target.len();
    let zero = BigRational::zero();
    let s1: BigRational = target.iter().sum();
    let positives = target.iter().filter(|v| v.is_positive()).count();

    let (matrix, method, case, block_sizes) = if positives == 1 && !s1.is_negative() {
        suleimanova_pattern(&target, &zero).map_err(Error::NotSuleimanova)?;
        let (x, method) = if s1.is_zero() {
            (zero_trace_first_row(&target), Method::ZeroTrace)
        } else {
            (first_row(&target), Method::Suleimanova)
        };
        (build_alpha_permutative(x)?.into_matrix(), method, None, vec![n])
    } else if n <= 4 {
        let plan = plan_small(&target, &zero)?;
        let sizes = plan.block_sizes();
        (plan.assemble()?, Method::SmallOrder, Some(plan.case), sizes)
    } else if !target[n - 1].is_negative() {
        let mut m = Matrix::zeros(n, n);
        for (i, v) in target.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        (m, Method::Diagonal, None, vec![1; n])
    } else {
        let p = Polynomial::from_roots(&target);
        if p.lower_coeffs().iter().any(|c| c.is_positive()) {
            return Err(Error::NotRealizableByAvailableMethods(
                "exact mode covers Suleimanova, n <= 4, nonnegative and companion cases".into(),
            ));
        }
        (companion_matrix(&p), Method::Companion, None, vec![n])
    };
    Ok(ExactRealization {
        matrix,
        method,
        case,
        block_sizes,
        target,
    })
}

fn blocks_permutative_exact(m: &RationalMatrix, sizes: &[usize]) -> bool {
    let zero = BigRational::zero();
    if m.off_block_max_abs(sizes) > zero {
        return false;
    }
    let mut start = 0;
    sizes.iter().all(|&k| {
        let block = m.principal_block(start..start + k);
        start += k;
        block.is_permutative(&zero).unwrap_or(false)
    })
}

fn is_companion_exact(m: &RationalMatrix) -> bool {
    let n = m.n_rows();
    (0..n).all(|i| {
        (0..n.saturating_sub(1)).all(|j| {
            let want = if i == j + 1 { BigRational::one() } else { BigRational::zero() };
            m[(i, j)] == want
        })
    })
}

/// Certificate with every tolerance at zero.
pub fn certify_exact(matrix: &RationalMatrix, method: Method, block_sizes: &[usize], target: &[BigRational]) -> VerificationReport {
    let zero = BigRational::zero();
    let n = target.len();
    let to_f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
    let status = |ok: bool| if ok { CheckStatus::Pass } else { CheckStatus::Fail };
    let mut report = VerificationReport {
        passed: false,
        nonneg_ok: CheckStatus::Fail,
        structure_ok: CheckStatus::Fail,
        charpoly_ok: CheckStatus::Fail,
        eigenpair_ok: CheckStatus::NotApplicable,
        max_residual: 0.0,
        charpoly_max_diff: f64::INFINITY,
        charpoly_tol: 0.0,
        min_entry: to_f(&matrix.min_entry()),
        block_sizes: block_sizes.to_vec(),
        exact: true,
        tolerances: TolProfile {
            abs: 0.0,
            rel: 0.0,
            entry: 0.0,
            residual: 0.0,
        },
    };
    if !matrix.is_square() || matrix.n_rows() != n {
        return report.finish();
    }
    report.nonneg_ok = status(matrix.is_nonnegative(&zero));
    report.structure_ok = match method {
        Method::External => CheckStatus::NotApplicable,
        Method::Companion => status(is_companion_exact(matrix)),
        Method::SmallOrder | Method::Diagonal => status(
            block_sizes.iter().sum::<usize>() == n && blocks_permutative_exact(matrix, block_sizes),
        ),
        _ => status(matrix.is_permutative(&zero).unwrap_or(false)),
    };
    let target_poly = Polynomial::from_roots(target);
    match char_poly(matrix) {
        Ok(p) => {
            let diff = p
                .coeffs()
                .iter()
                .zip(target_poly.coeffs())
                .map(|(a, b)| (a - b).abs())
                .max()
                .unwrap_or_else(BigRational::zero);
            report.charpoly_max_diff = to_f(&diff);
            report.charpoly_ok = status(p == target_poly);
        }
        Err(_) => report.charpoly_ok = CheckStatus::Fail,
    }
    if matches!(method, Method::Suleimanova | Method::ZeroTrace) {
        let alpha = build_alpha_permutative(matrix.row(0).to_vec()).expect("nonempty");
        let eig = alpha.closed_eigensystem();
        let ones = vec![BigRational::one(); n];
        let mut worst = BigRational::zero();
        for v in matrix.matvec(&ones).expect("square") {
            worst = worst.max((v - &eig.s).abs());
        }
        for (d, v) in eig.deltas.iter().zip(&eig.vectors) {
            for (a, b) in matrix.matvec(v).expect("square").iter().zip(v) {
                worst = worst.max((a - d * b).abs());
            }
        }
        let values_ok = eig.s == target[0] && eig.deltas.iter().zip(&target[1..]).all(|(d, l)| d == l);
        report.max_residual = to_f(&worst);
        report.eigenpair_ok = status(worst.is_zero() && values_ok);
    }
    report.finish()
}

impl ExactRealization {
    pub fn certify(&self) -> VerificationReport {
        certify_exact(&self.matrix, self.method, &self.block_sizes, &self.target)
    }
}

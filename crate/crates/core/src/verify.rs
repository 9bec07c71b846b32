//! Certification of realizing matrices without an eigensolver.
//!
//! A [`Realization`] is checked for entrywise nonnegativity, for the
//! structure its construction promises (permutative, direct sum of
//! permutative blocks, companion form), for characteristic-polynomial
//! agreement with the target, and, for the transposition pattern, for the
//! closed-form eigenpair residuals.

use crate::companion;
use crate::error::{Error, Result};
use crate::linalg::{char_poly, mixed_tolerance, poly_from_roots, DenseMatrix, Polynomial,
    MAX_CHAR_POLY_DIM};
use crate::small_order::SmallOrderCase;
use crate::spectrum::Spectrum;
use crate::suleimanova::build_alpha_permutative;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

/// Which construction produced a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "suleimanova-permutative")]
    Suleimanova,
    #[serde(rename = "zero-trace-permutative")]
    ZeroTrace,
    #[serde(rename = "small-order")]
    SmallOrder,
    #[serde(rename = "companion")]
    Companion,
    #[serde(rename = "diagonal")]
    Diagonal,
    #[serde(rename = "explorer-permutative")]
    Explorer,
    #[serde(rename = "external")]
    External,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::Suleimanova => "suleimanova-permutative",
            Method::ZeroTrace => "zero-trace-permutative",
            Method::SmallOrder => "small-order",
            Method::Companion => "companion",
            Method::Diagonal => "diagonal",
            Method::Explorer => "explorer-permutative",
            Method::External => "external",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Construction metadata carried alongside the matrix.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RealizationParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<SmallOrderCase>,
    /// Sizes of consecutive diagonal blocks; one block for a single
    /// permutative matrix.
    pub block_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_row: Option<Vec<f64>>,
    /// Raw input position of each sorted target entry.
    pub input_order: Vec<usize>,
    /// Named scalars of the construction (for example `a`, `b`, `c`, `d`).
    pub scalars: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tuple: Option<String>,
}

/// A matrix together with the spectrum it is claimed to realize.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Realization {
    pub matrix: DenseMatrix,
    pub method: Method,
    pub target: Spectrum,
    pub params: RealizationParams,
    pub certificate: Option<VerificationReport>,
}

impl Realization {
    pub fn new(matrix: DenseMatrix, method: Method, target: &Spectrum, mut params: RealizationParams) -> Self {
        if params.block_sizes.is_empty() {
            params.block_sizes = vec![matrix.n_rows()];
        }
        params.input_order = target.input_order().to_vec();
        Realization {
            matrix,
            method,
            target: target.clone(),
            params,
            certificate: None,
        }
    }

    /// Runs [`certify`] and stores the report.
    pub fn certified(mut self, profile: &TolProfile) -> Self {
        self.certificate = Some(certify(&self, profile));
        self
    }

    pub fn is_certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.passed)
    }
}

/// Tolerances threaded through every check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolProfile {
    /// Absolute floor for coefficient comparisons.
    pub abs: f64,
    /// Relative tolerance for coefficient comparisons, scaled by the
    /// largest target coefficient.
    pub rel: f64,
    /// Entry tolerance for nonnegativity and permutativity, scaled by
    /// `max(1, max |a_ij|)`.
    pub entry: f64,
    /// Eigenpair residual tolerance, scaled by `max(1, ‖x‖∞²)`.
    pub residual: f64,
}

impl Default for TolProfile {
    fn default() -> Self {
        TolProfile {
            abs: 1e-10,
            rel: 1e-9,
            entry: 1e-12,
            residual: 1e-9,
        }
    }
}

impl TolProfile {
    /// Reads `abs,rel` (optionally `abs,rel,entry,residual`) from a comma
    /// separated string. Missing fields keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut profile = TolProfile::default();
        let fields = [
            &mut profile.abs,
            &mut profile.rel,
            &mut profile.entry,
            &mut profile.residual,
        ];
        let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if parts.is_empty() || parts.len() > fields.len() {
            return Err(Error::Parse(format!("bad tolerance profile `{text}`")));
        }
        for (slot, part) in fields.into_iter().zip(parts) {
            let v: f64 = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad tolerance `{part}`")))?;
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Parse(format!("tolerance must be finite and >= 0: `{part}`")));
            }
            *slot = v;
        }
        Ok(profile)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotApplicable,
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn is_fail(self) -> bool {
        self == CheckStatus::Fail
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::NotApplicable => "n/a",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub nonneg_ok: CheckStatus,
    pub structure_ok: CheckStatus,
    pub charpoly_ok: CheckStatus,
    pub eigenpair_ok: CheckStatus,
    /// Largest eigenpair residual `‖P v_i - δ_i v_i‖∞` (also covering
    /// `P e = s e`); zero when not applicable.
    pub max_residual: f64,
    pub charpoly_max_diff: f64,
    pub charpoly_tol: f64,
    pub min_entry: f64,
    pub block_sizes: Vec<usize>,
    pub exact: bool,
    pub tolerances: TolProfile,
}

impl VerificationReport {
    pub(crate) fn finish(mut self) -> Self {
        self.passed = ![self.nonneg_ok, self.structure_ok, self.charpoly_ok, self.eigenpair_ok]
            .iter()
            .any(|s| s.is_fail());
        self
    }
}

/// Runs every applicable check on `r`. Failures are reported, never raised.
pub fn certify(r: &Realization, profile: &TolProfile) -> VerificationReport {
    let m = &r.matrix;
    let n = r.target.len();
    let mut report = VerificationReport {
        passed: false,
        nonneg_ok: CheckStatus::Fail,
        structure_ok: CheckStatus::Fail,
        charpoly_ok: CheckStatus::Fail,
        eigenpair_ok: CheckStatus::NotApplicable,
        max_residual: 0.0,
        charpoly_max_diff: f64::INFINITY,
        charpoly_tol: 0.0,
        min_entry: m.min_entry(),
        block_sizes: r.params.block_sizes.clone(),
        exact: false,
        tolerances: *profile,
    };
    if !m.is_square() || m.n_rows() != n || m.ensure_finite().is_err() {
        return report.finish();
    }

    let entry_tol = profile.entry * m.max_abs().max(1.0);
    report.nonneg_ok = CheckStatus::from_bool(m.is_nonnegative(&entry_tol));
    report.structure_ok = structure_check(r, entry_tol);

    let target_poly = poly_from_roots(&r.target);
    report.charpoly_tol = mixed_tolerance(profile.abs, profile.rel, target_poly.max_abs_coeff());
    let matrix_poly = if n <= MAX_CHAR_POLY_DIM {
        char_poly(m).ok()
    } else {
        structured_char_poly(m)
    };
    match matrix_poly {
        Some(p) => {
            report.charpoly_max_diff = p.max_coeff_diff(&target_poly);
            report.charpoly_ok = CheckStatus::from_bool(report.charpoly_max_diff <= report.charpoly_tol);
        }
        None => report.charpoly_ok = CheckStatus::NotApplicable,
    }

    if uses_alpha_pattern(r) || (r.method == Method::External && is_alpha_pattern(m, entry_tol)) {
        let (ok, residual) = eigenpair_check(m, &r.target, profile);
        report.eigenpair_ok = CheckStatus::from_bool(ok);
        report.max_residual = residual;
    }
    // large matrices need at least one spectral certificate
    if report.charpoly_ok == CheckStatus::NotApplicable
        && report.eigenpair_ok == CheckStatus::NotApplicable
    {
        report.charpoly_ok = CheckStatus::Fail;
    }
    report.finish()
}

/// Polynomials readable without elimination: companion and diagonal forms.
fn structured_char_poly(m: &DenseMatrix) -> Option<Polynomial> {
    if let Ok(p) = companion::read_back(m) {
        return Some(p);
    }
    let n = m.n_rows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)] == 0.0));
    diagonal.then(|| Polynomial::from_roots(&(0..n).map(|i| m[(i, i)]).collect::<Vec<_>>()))
}

/// True iff `m` is the transposition pattern generated by its first row.
fn is_alpha_pattern(m: &DenseMatrix, tol: f64) -> bool {
    let Ok(alpha) = build_alpha_permutative(m.row(0).to_vec()) else {
        return false;
    };
    alpha
        .matrix()
        .entries()
        .iter()
        .zip(m.entries())
        .all(|(a, b)| (a - b).abs() <= tol)
}

fn uses_alpha_pattern(r: &Realization) -> bool {
    matches!(r.method, Method::Suleimanova | Method::ZeroTrace)
        || matches!(
            r.params.case,
            Some(SmallOrderCase::N3Suleimanova | SmallOrderCase::N4Suleimanova)
        )
}

fn structure_check(r: &Realization, tol: f64) -> CheckStatus {
    let m = &r.matrix;
    match r.method {
        Method::External => CheckStatus::NotApplicable,
        Method::Companion => CheckStatus::from_bool(companion::is_companion_form(m, tol)),
        Method::Suleimanova | Method::ZeroTrace | Method::Explorer => {
            CheckStatus::from_bool(m.is_permutative(&tol).unwrap_or(false))
        }
        Method::SmallOrder | Method::Diagonal => {
            let sizes = &r.params.block_sizes;
            if sizes.iter().sum::<usize>() != m.n_rows() {
                return CheckStatus::Fail;
            }
            CheckStatus::from_bool(blocks_permutative(m, sizes, tol))
        }
    }
}

/// True iff `m` vanishes off the consecutive diagonal blocks and every
/// block is permutative.
pub fn blocks_permutative(m: &DenseMatrix, block_sizes: &[usize], tol: f64) -> bool {
    if m.off_block_max_abs(block_sizes) > tol {
        return false;
    }
    let mut start = 0;
    block_sizes.iter().all(|&k| {
        let block = m.principal_block(start..start + k);
        start += k;
        block.is_permutative(&tol).unwrap_or(false)
    })
}

/// Residuals of the closed-form eigenpairs of the transposition pattern
/// built from the first row of `m`, plus agreement of the closed-form
/// eigenvalues `s, δ_2, ..., δ_n` with the sorted target.
fn eigenpair_check(m: &DenseMatrix, target: &Spectrum, profile: &TolProfile) -> (bool, f64) {
    let x = m.row(0).to_vec();
    let x_scale = x.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    let Ok(alpha) = build_alpha_permutative(x) else {
        return (false, f64::INFINITY);
    };
    let eig = alpha.closed_eigensystem();
    let n = m.n_rows();

    let mut residual = 0.0f64;
    let pe = m.matvec(&vec![1.0; n]).expect("square");
    for v in &pe {
        residual = residual.max((v - eig.s).abs());
    }
    for (delta, v) in eig.deltas.iter().zip(&eig.vectors) {
        let pv = m.matvec(v).expect("square");
        for (a, b) in pv.iter().zip(v) {
            residual = residual.max((a - delta * b).abs());
        }
    }
    let residual_ok = residual <= profile.residual * x_scale * x_scale;

    let values = target.values();
    let value_tol = mixed_tolerance(profile.abs, profile.rel, target.spectral_radius());
    let spectrum_ok = (eig.s - values[0]).abs() <= value_tol
        && eig
            .deltas
            .iter()
            .zip(&values[1..])
            .all(|(d, l)| (d - l).abs() <= value_tol);
    (residual_ok && spectrum_ok, residual)
}

/// Finest contiguous block-diagonal decomposition of `m`, treating entries
/// with `|a_ij| <= tol` as zero.
pub fn detect_blocks(m: &DenseMatrix, tol: f64) -> Result<Vec<Range<usize>>> {
    let n = m.ensure_square()?;
    // reach[i]: largest index coupled to i in either direction
    let mut reach: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)].abs() > tol {
                let hi = i.max(j);
                reach[i] = reach[i].max(hi);
                reach[j] = reach[j].max(hi);
            }
        }
    }
    let mut blocks = Vec::new();
    let mut start = 0;
    let mut end = 0;
    for (i, &r) in reach.iter().enumerate() {
        end = end.max(r);
        if end == i {
            blocks.push(start..i + 1);
            start = i + 1;
        }
    }
    Ok(blocks)
}

/// Certificate for a matrix of unknown origin: a realization tagged
/// [`Method::External`].
pub fn certify_external(m: DenseMatrix, target: &Spectrum, profile: &TolProfile) -> Realization {
    let blocks: Vec<usize> = detect_blocks(&m, 0.0)
        .map(|b| b.into_iter().map(|r| r.len()).collect())
        .unwrap_or_default();
    let params = RealizationParams {
        block_sizes: blocks,
        ..Default::default()
    };
    Realization::new(m, Method::External, target, params).certified(profile)
}

/// Polynomial check used in exact mode and by tests; `true` iff
/// coefficients agree under the mixed tolerance scaled by the target.
pub fn charpoly_matches(m: &DenseMatrix, target: &Spectrum, profile: &TolProfile) -> Result<bool> {
    let p = char_poly(m)?;
    let q: Polynomial = poly_from_roots(target);
    Ok(p.max_coeff_diff(&q) <= mixed_tolerance(profile.abs, profile.rel, q.max_abs_coeff()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{direct_sum, Matrix};
    use crate::suleimanova::realize_suleimanova;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn integer_example_certifies_with_zero_residual() {
        let r = realize_suleimanova(&spec(&[10., -1., -2., -3.])).unwrap();
        let rep = certify(&r, &TolProfile::default());
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep.nonneg_ok, CheckStatus::Pass);
        assert_eq!(rep.structure_ok, CheckStatus::Pass);
        assert_eq!(rep.charpoly_ok, CheckStatus::Pass);
        assert_eq!(rep.eigenpair_ok, CheckStatus::Pass);
        assert_eq!(rep.max_residual, 0.0);
        assert_eq!(rep.charpoly_max_diff, 0.0);
    }

    #[test]
    fn zero_matrix_certifies() {
        let r = realize_suleimanova(&spec(&[0., 0.])).unwrap();
        assert!(certify(&r, &TolProfile::default()).passed);
    }

    #[test]
    fn wrong_target_fails_charpoly() {
        let r = realize_suleimanova(&spec(&[10., -1., -2., -3.])).unwrap();
        let wrong = Realization::new(r.matrix.clone(), Method::External, &spec(&[9., -1., -2., -3.]),
            RealizationParams::default());
        let rep = certify(&wrong, &TolProfile::default());
        assert_eq!(rep.charpoly_ok, CheckStatus::Fail);
        // (t-9)(t+1)(t+2)(t+3) = t^4 - 3t^3 - 43t^2 - 93t - 54; largest gap is c_1
        assert_eq!(rep.charpoly_max_diff, 11.0);
        assert!(!rep.passed);
    }

    #[test]
    fn tampered_alpha_matrix_fails_eigenpairs() {
        let mut r = realize_suleimanova(&spec(&[10., -1., -2., -3.])).unwrap();
        r.matrix[(3, 1)] = 3.0;
        r.matrix[(3, 2)] = 2.0;
        let rep = certify(&r, &TolProfile::default());
        // still permutative, still nonnegative, but not the transposition pattern
        assert_eq!(rep.structure_ok, CheckStatus::Pass);
        assert_eq!(rep.eigenpair_ok, CheckStatus::Fail);
        assert!(!rep.passed);
    }

    #[test]
    fn blocks_detection() {
        let a = Matrix::from_rows(vec![vec![1., 2.], vec![2., 1.]]).unwrap();
        let d = direct_sum(&[a.clone(), a]).unwrap();
        assert_eq!(detect_blocks(&d, 0.0).unwrap(), vec![0..2, 2..4]);
        assert_eq!(detect_blocks(&DenseMatrix::ones_matrix(3), 0.0).unwrap(), vec![0..3]);
        assert_eq!(
            detect_blocks(&DenseMatrix::zeros(3, 3), 0.0).unwrap(),
            vec![0..1, 1..2, 2..3]
        );
        // a single coupling entry far from the diagonal merges everything between
        let mut m = DenseMatrix::identity(4);
        m[(3, 0)] = 1.0;
        assert_eq!(detect_blocks(&m, 0.0).unwrap(), vec![0..4]);
        assert!(detect_blocks(&DenseMatrix::zeros(2, 3), 0.0).is_err());
    }

    #[test]
    fn tolerance_profile_parsing() {
        let p = TolProfile::parse("1e-8, 1e-7").unwrap();
        assert_eq!((p.abs, p.rel), (1e-8, 1e-7));
        assert_eq!(p.entry, TolProfile::default().entry);
        assert!(TolProfile::parse("").is_err());
        assert!(TolProfile::parse("a,b").is_err());
        assert!(TolProfile::parse("-1").is_err());
        assert!(TolProfile::parse("1,2,3,4,5").is_err());
    }

    #[test]
    fn report_json_field_names() {
        let r = realize_suleimanova(&spec(&[10., -1., -2., -3.])).unwrap();
        let rep = certify(&r, &TolProfile::default());
        let v = serde_json::to_value(&rep).unwrap();
        for key in ["passed", "nonneg_ok", "structure_ok", "charpoly_ok", "eigenpair_ok",
                    "max_residual", "tolerances"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["eigenpair_ok"], "pass");
    }

    #[test]
    fn dimension_mismatch_fails_cleanly() {
        let r = Realization::new(DenseMatrix::identity(2), Method::External, &spec(&[1., 1., 1.]),
            RealizationParams::default());
        assert!(!certify(&r, &TolProfile::default()).passed);
    }

    #[test]
    fn large_external_matrices_use_structure() {
        let mut v = vec![-1.0; 99];
        v.push(150.0);
        let s = spec(&v);
        let profile = TolProfile::default();

        let alpha = realize_suleimanova(&s).unwrap().matrix;
        let r = certify_external(alpha.clone(), &s, &profile);
        assert!(r.is_certified());
        assert_eq!(r.certificate.as_ref().unwrap().eigenpair_ok, CheckStatus::Pass);
        let mut shifted = alpha;
        shifted[(1, 1)] += 1e-3;
        assert!(!certify_external(shifted, &s, &profile).is_certified());

        let comp = companion::realize_companion(&s).matrix;
        assert!(certify_external(comp, &s, &profile).is_certified());

        let nonneg = spec(&vec![0.5; 80]);
        let r = certify_external(DenseMatrix::identity(80).scaled(&0.5), &nonneg, &profile);
        assert!(r.is_certified());
        let full = certify_external(Matrix::ones_matrix(80).scaled(&(0.5 / 80.0)), &nonneg, &profile);
        // constant rows are a degenerate transposition pattern; its eigenvalues are wrong
        let report = full.certificate.unwrap();
        assert!(!report.passed);
        assert_eq!(report.eigenpair_ok, CheckStatus::Fail);
    }
}

//! Budgeted search for permutative realizations of spectra beyond the
//! constructive cases.
//!
//! A candidate is a [`PermTuple`] (row `i` of the matrix is the first row
//! `x` permuted by the `i`-th permutation) plus a nonnegative `x`. The
//! search minimizes the weighted squared mismatch between the candidate's
//! characteristic coefficients and the target's. A failed search proves
//! nothing; results are reported, never read as counterexamples.

use crate::error::{Error, Result};
use crate::linalg::{faddeev_leverrier, poly_from_roots, DenseMatrix, Matrix};
use crate::spectrum::Spectrum;
use crate::verify::{certify, Method, Realization, RealizationParams, TolProfile};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;

/// Results at or below `CERT_OBJECTIVE * n` are re-certified.
pub const CERT_OBJECTIVE: f64 = 1e-16;

/// A permutation per row; the first is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermTuple {
    perms: Vec<Vec<usize>>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&v| v < p.len() && !std::mem::replace(&mut seen[v], true))
}

impl PermTuple {
    /// `perms[i][j]` is the index of `x` placed at column `j` of row `i`.
    pub fn new(perms: Vec<Vec<usize>>) -> Result<Self> {
        let n = perms.len();
        if n == 0 {
            return Err(Error::EmptyInput);
        }
        for p in &perms {
            if p.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.len() });
            }
            if !is_permutation(p) {
                return Err(Error::Parse(format!("not a permutation: {p:?}")));
            }
        }
        if perms[0].iter().enumerate().any(|(i, &v)| i != v) {
            return Err(Error::Parse("first permutation must be the identity".into()));
        }
        Ok(PermTuple { perms })
    }

    /// Row `i` swaps positions 1 and `i` of the identity.
    pub fn alpha(n: usize) -> Self {
        let perms = (0..n)
            .map(|i| {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(0, i);
                p
            })
            .collect();
        PermTuple { perms }
    }

    /// Powers of the n-cycle: the circulant pattern.
    pub fn cyclic(n: usize) -> Self {
        let perms = (0..n)
            .map(|i| (0..n).map(|j| (j + n - i) % n).collect())
            .collect();
        PermTuple { perms }
    }

    /// Every row equal to the first.
    pub fn identity_rows(n: usize) -> Self {
        PermTuple {
            perms: vec![(0..n).collect(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn matrix(&self, x: &[f64]) -> Result<DenseMatrix> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: x.len() });
        }
        let data = self
            .perms
            .iter()
            .flat_map(|p| p.iter().map(|&k| x[k]))
            .collect();
        Matrix::from_row_major(n, n, data)
    }

    /// One-based permutation words joined by `|`, for example
    /// `1234|2134|3214|4231`.
    pub fn encoding(&self) -> String {
        let sep = if self.n() > 9 { "." } else { "" };
        self.perms
            .iter()
            .map(|p| {
                p.iter()
                    .map(|v| (v + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(sep)
            })
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Rows sorted lexicographically. Only used to filter duplicate
    /// samples; distinct row orders give distinct matrices.
    fn canonical_key(&self) -> Vec<Vec<usize>> {
        let mut rows = self.perms.clone();
        rows.sort();
        rows
    }
}

impl fmt::Display for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encoding())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Alpha,
    Cyclic,
    Transpositions,
    Random,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Strategy::Alpha),
            "cyclic" => Ok(Strategy::Cyclic),
            "transpositions" => Ok(Strategy::Transpositions),
            "random" => Ok(Strategy::Random),
            other => Err(Error::Parse(format!("unknown strategy `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub tuple: PermTuple,
    pub x: Vec<f64>,
    pub objective: f64,
    pub certified: bool,
    pub evaluations: usize,
}

impl SearchResult {
    pub fn matrix(&self) -> DenseMatrix {
        self.tuple.matrix(&self.x).expect("dimensions checked at construction")
    }

    pub fn into_realization(self, spectrum: &Spectrum) -> Realization {
        let matrix = self.matrix();
        let mut params = RealizationParams {
            first_row: Some(self.x),
            tuple: Some(self.tuple.encoding()),
            ..Default::default()
        };
        params.scalars.insert("objective".into(), self.objective);
        Realization::new(matrix, Method::Explorer, spectrum, params)
    }

    /// One JSON-lines record.
    pub fn log_record(&self) -> serde_json::Value {
        serde_json::json!({
            "tuple": self.tuple.encoding(),
            "x": self.x,
            "objective": self.objective,
            "certified": self.certified,
            "evaluations": self.evaluations,
        })
    }
}

pub fn to_jsonl(results: &[SearchResult]) -> String {
    results
        .iter()
        .map(|r| r.log_record().to_string() + "\n")
        .collect()
}

/// Target coefficients and weights `1 / max(1, |c_k|)²`.
struct Target {
    coeffs: Vec<f64>,
    weights: Vec<f64>,
}

impl Target {
    fn new(spectrum: &Spectrum) -> Self {
        let p = poly_from_roots(spectrum);
        let coeffs = p.lower_coeffs().to_vec();
        let weights = coeffs.iter().map(|c| 1.0 / c.abs().max(1.0).powi(2)).collect();
        Target { coeffs, weights }
    }

    fn residuals(&self, tuple: &PermTuple, x: &[f64]) -> Result<Vec<f64>> {
        let p = faddeev_leverrier(&tuple.matrix(x)?)?;
        Ok(p.lower_coeffs()
            .iter()
            .zip(&self.coeffs)
            .zip(&self.weights)
            .map(|((c, t), w)| w.sqrt() * (c - t))
            .collect())
    }

    fn objective(&self, tuple: &PermTuple, x: &[f64]) -> f64 {
        match self.residuals(tuple, x) {
            Ok(r) => {
                let v: f64 = r.iter().map(|e| e * e).sum();
                if v.is_nan() {
                    f64::INFINITY
                } else {
                    v
                }
            }
            Err(_) => f64::INFINITY,
        }
    }
}

/// `Σ_k w_k (c_k(P) - c_k(σ))²` over the non-leading coefficients, with
/// `P` the tuple's matrix for first row `x`.
pub fn objective(tuple: &PermTuple, x: &[f64], spectrum: &Spectrum) -> Result<f64> {
    let n = spectrum.len();
    if tuple.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: tuple.n() });
    }
    let target = Target::new(spectrum);
    let r = target.residuals(tuple, x)?;
    Ok(r.iter().map(|e| e * e).sum())
}

struct Search<'a> {
    tuple: &'a PermTuple,
    target: Target,
    evals: usize,
    limit: usize,
}

impl Search<'_> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        self.target.objective(self.tuple, x)
    }

    fn exhausted(&self) -> bool {
        self.evals >= self.limit
    }

    /// Coordinate line search: try `±h` on each coordinate, keep the first
    /// improvement, halve `h` after a sweep without one.
    fn coordinate_descent(&mut self, x: &mut [f64], fx: &mut f64, scale: f64, stop: usize) {
        let mut h = 0.25 * scale;
        let h_min = 1e-13 * scale;
        while h > h_min && self.evals < stop && *fx > 0.0 {
            let mut improved = false;
            for j in 0..x.len() {
                for step in [h, -h] {
                    let old = x[j];
                    x[j] = (old + step).max(0.0);
                    if x[j] == old {
                        continue;
                    }
                    let f = self.eval(x);
                    if f < *fx {
                        *fx = f;
                        improved = true;
                        break;
                    }
                    x[j] = old;
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
    }

    /// Levenberg–Marquardt on the coefficient residuals with a
    /// forward-difference Jacobian, projected onto `x >= 0`.
    fn polish(&mut self, x: &mut Vec<f64>, fx: &mut f64, scale: f64) {
        let n = x.len();
        let mut mu = 1e-6;
        for _ in 0..60 {
            if self.exhausted() || *fx == 0.0 {
                return;
            }
            let Ok(r0) = self.target.residuals(self.tuple, x) else { return };
            self.evals += 1;
            let mut jac = vec![vec![0.0; n]; r0.len()];
            for j in 0..n {
                let h = 1e-7 * x[j].abs().max(scale).max(1e-300);
                let mut xp = x.clone();
                xp[j] += h;
                let Ok(rp) = self.target.residuals(self.tuple, &xp) else { return };
                self.evals += 1;
                for (k, row) in jac.iter_mut().enumerate() {
                    row[j] = (rp[k] - r0[k]) / h;
                }
            }
            let mut jtj = vec![vec![0.0; n]; n];
            let mut jtr = vec![0.0; n];
            for (row, rk) in jac.iter().zip(&r0) {
                for a in 0..n {
                    jtr[a] -= row[a] * rk;
                    for b in 0..n {
                        jtj[a][b] += row[a] * row[b];
                    }
                }
            }
            let mut accepted = false;
            while mu < 1e12 && !self.exhausted() {
                let mut lhs = jtj.clone();
                for (a, row) in lhs.iter_mut().enumerate() {
                    row[a] += mu * (jtj[a][a].max(1e-300));
                }
                let Some(step) = solve(lhs, jtr.clone()) else {
                    mu *= 10.0;
                    continue;
                };
                let trial: Vec<f64> = x.iter().zip(&step).map(|(a, d)| (a + d).max(0.0)).collect();
                let f = self.eval(&trial);
                if f < *fx {
                    *x = trial;
                    *fx = f;
                    mu = (mu / 10.0).max(1e-12);
                    accepted = true;
                    break;
                }
                mu *= 10.0;
            }
            if !accepted {
                return;
            }
        }
    }
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 || !a[piv][col].is_finite() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            let (upper, lower) = a.split_at_mut(row);
            for (t, s) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *t -= f * s;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Derivative-free fit of a nonnegative first row for a fixed tuple.
///
/// Starts (in order): the uniform row `λ_1/n`, the unit row `λ_1 e_1`, then
/// seeded random rows summing to `λ_1`. Each start runs coordinate descent
/// followed by a Levenberg–Marquardt polish. `iters` bounds objective
/// evaluations. Deterministic for a fixed seed.
pub fn fit_first_row(tuple: &PermTuple, spectrum: &Spectrum, seed: u64, iters: usize) -> Result<SearchResult> {
    let n = spectrum.len();
    if tuple.n() != n {
        return Err(Error::DimensionMismatch { expected: n, got: tuple.n() });
    }
    if n > MAX_DIM {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: MAX_DIM });
    }
    let iters = iters.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // a nonnegative matrix with constant row sums has them equal to its
    // spectral radius, so rows sum to λ_1
    let head = spectrum.max().max(0.0);
    let scale = head.max(spectrum.spectral_radius()).max(f64::MIN_POSITIVE);
    let mut search = Search {
        tuple,
        target: Target::new(spectrum),
        evals: 0,
        limit: iters,
    };

    let restarts = (iters / 400).clamp(1, 8);
    let per_start = (iters / restarts).max(1);
    let mut best: Option<(Vec<f64>, f64)> = None;
    for start in 0..restarts {
        if search.exhausted() {
            break;
        }
        let mut x: Vec<f64> = match start {
            0 => vec![head / n as f64; n],
            1 => {
                let mut e = vec![0.0; n];
                e[0] = head;
                e
            }
            _ => {
                let u: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
                let total: f64 = u.iter().sum();
                u.iter().map(|v| head * v / total).collect()
            }
        };
        let mut fx = search.eval(&x);
        let stop = (search.evals + per_start * 3 / 4).min(search.limit);
        search.coordinate_descent(&mut x, &mut fx, scale, stop);
        search.limit = (search.evals + per_start / 4).min(iters).max(search.evals + 1);
        search.polish(&mut x, &mut fx, scale);
        search.limit = iters;
        if best.as_ref().is_none_or(|(_, f)| fx < *f) {
            best = Some((x, fx));
        }
        if best.as_ref().is_some_and(|(_, f)| *f == 0.0) {
            break;
        }
    }
    let (x, objective) = best.expect("at least one start");
    Ok(SearchResult {
        tuple: tuple.clone(),
        x,
        objective,
        certified: false,
        evaluations: search.evals,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExploreConfig {
    pub strategy: Strategy,
    /// Total objective evaluations across all tuples.
    pub budget: usize,
    /// Evaluations allotted to each tuple.
    pub per_tuple: usize,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            strategy: Strategy::Alpha,
            budget: 20_000,
            per_tuple: 4_000,
            seed: 0,
            parallel: false,
        }
    }
}

fn random_transposition_tuple(n: usize, rng: &mut ChaCha8Rng) -> PermTuple {
    let mut perms = vec![(0..n).collect::<Vec<usize>>()];
    for i in 1..n {
        let mut p: Vec<usize> = (0..n).collect();
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        p.swap(i, j);
        perms.push(p);
    }
    PermTuple { perms }
}

fn random_tuple(n: usize, rng: &mut ChaCha8Rng) -> PermTuple {
    let mut perms = vec![(0..n).collect::<Vec<usize>>()];
    for _ in 1..n {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(rng);
        perms.push(p);
    }
    PermTuple { perms }
}

/// Candidate tuples for a strategy, deduplicated by canonical row order.
pub fn candidate_tuples(n: usize, strategy: Strategy, count: usize, seed: u64) -> Vec<PermTuple> {
    match strategy {
        Strategy::Alpha => vec![PermTuple::alpha(n)],
        Strategy::Cyclic => vec![PermTuple::cyclic(n)],
        Strategy::Transpositions | Strategy::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0005_eed7_u64);
            let mut seen = HashSet::new();
            let mut out = Vec::new();
            if strategy == Strategy::Transpositions {
                let a = PermTuple::alpha(n);
                seen.insert(a.canonical_key());
                out.push(a);
            }
            let mut attempts = 0;
            while out.len() < count && attempts < 20 * count.max(1) {
                attempts += 1;
                let t = if strategy == Strategy::Transpositions {
                    random_transposition_tuple(n, &mut rng)
                } else {
                    random_tuple(n, &mut rng)
                };
                if seen.insert(t.canonical_key()) {
                    out.push(t);
                }
            }
            out
        }
    }
}

fn tuple_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((index as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

/// Runs the strategy within the budget. Results are sorted by objective,
/// then tuple encoding, so serial and parallel runs agree.
pub fn explore(spectrum: &Spectrum, config: &ExploreConfig) -> Result<Vec<SearchResult>> {
    let n = spectrum.len();
    if !(MIN_DIM..=MAX_DIM).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: MIN_DIM, max: MAX_DIM });
    }
    let per_tuple = config.per_tuple.clamp(1, config.budget.max(1));
    let count = (config.budget / per_tuple).max(1);
    let tuples = candidate_tuples(n, config.strategy, count, config.seed);

    let run = |(i, t): (usize, &PermTuple)| fit_first_row(t, spectrum, tuple_seed(config.seed, i), per_tuple);
    let mut results: Vec<SearchResult> = if config.parallel {
        tuples.par_iter().enumerate().map(run).collect::<Result<_>>()?
    } else {
        tuples.iter().enumerate().map(run).collect::<Result<_>>()?
    };
    results.sort_by(|a, b| {
        a.objective
            .total_cmp(&b.objective)
            .then_with(|| a.tuple.encoding().cmp(&b.tuple.encoding()))
    });

    let profile = TolProfile::default();
    for r in &mut results {
        if r.objective <= CERT_OBJECTIVE * n as f64 && r.x.iter().all(|v| *v >= 0.0) {
            let realization = r.clone().into_realization(spectrum);
            r.certified = certify(&realization, &profile).passed;
        }
    }
    Ok(results)
}

//! Target spectra, the necessary realizability conditions, and the
//! classification that drives method dispatch.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Default power-sum depth for [`Spectrum::check_necessary`].
pub const DEFAULT_DEPTH: usize = 50;

/// Default relative sign band; an entry counts as positive iff
/// `λ > DEFAULT_SIGN_TOL * max(1, |λ_1|)`.
pub const DEFAULT_SIGN_TOL: f64 = 1e-12;

/// An ordered multiset of real eigenvalue targets, sorted descending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
    /// `input_order[i]` is the position in the raw input of `values[i]`.
    input_order: Vec<usize>,
    trace: f64,
}

impl Spectrum {
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(index) = raw.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry {
                index,
                value: raw[index],
            });
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        // stable, so equal values keep their input order
        order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]));
        let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
        let trace = values.iter().sum();
        Ok(Spectrum {
            values,
            input_order: order,
            trace,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn input_order(&self) -> &[usize] {
        &self.input_order
    }

    pub fn is_input_sorted(&self) -> bool {
        self.input_order.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Largest element, `λ_1`.
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `s_1`, cached.
    pub fn trace(&self) -> f64 {
        self.trace
    }

    /// `sr(σ) = max |λ_i|`.
    pub fn spectral_radius(&self) -> f64 {
        self.max().abs().max(self.min().abs())
    }

    /// `s_k = Σ λ_i^k`, summed in sorted order.
    pub fn power_sum(&self, k: u32) -> f64 {
        self.values.iter().map(|v| v.powi(k as i32)).sum()
    }

    /// Absolute sign band `rel_tol * max(1, |λ_1|)`.
    pub fn sign_band(&self, rel_tol: f64) -> f64 {
        rel_tol * self.max().abs().max(1.0)
    }

    /// Multiplies every entry by `t`. Ordering is kept for `t > 0`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        Spectrum::new(self.values.iter().map(|v| v * t).collect())
    }

    /// Checks `s_k >= 0` for `k = 1..=depth` and the Perron condition
    /// `sr(σ) ∈ σ`.
    ///
    /// Power sums are tested after dividing through by `sr(σ)^k`, so deep
    /// checks do not overflow; a normalized sum passes when it is at least
    /// `-tol * max(1, Σ |λ_i / sr|^k)`.
    pub fn check_necessary(&self, depth: usize, tol: f64) -> ConditionReport {
        let depth = depth.max(1);
        let sr = self.spectral_radius();
        let mut power_sums = Vec::with_capacity(depth);
        let mut power_sum_ok = true;
        for k in 1..=depth {
            let k = k as u32;
            power_sums.push(self.power_sum(k));
            if sr > 0.0 {
                let (sum, mag) = self.values.iter().fold((0.0, 0.0), |(s, m), v| {
                    let p = (v / sr).powi(k as i32);
                    (s + p, m + p.abs())
                });
                if sum < -tol * f64::max(1.0, mag) {
                    power_sum_ok = false;
                }
            }
        }
        let perron_ok = self.max() >= sr - tol * sr.max(1.0);
        ConditionReport {
            power_sums,
            power_sum_ok,
            perron_ok,
            spectral_radius: sr,
            depth,
            tol,
        }
    }

    /// Classifies under the sign band `tol * max(1, |λ_1|)`.
    pub fn classify(&self, tol: f64) -> Classification {
        let band = self.sign_band(tol);
        let positives = self.values.iter().filter(|&&v| v > band).count();
        let kind = if positives == 1 && self.trace >= -band {
            if self.trace.abs() <= band {
                SpectrumKind::ZeroTraceSuleimanova
            } else {
                SpectrumKind::Suleimanova
            }
        } else if self.len() <= 4 {
            SpectrumKind::SmallOrder
        } else if self.min() >= -band {
            SpectrumKind::AllNonnegative
        } else {
            SpectrumKind::Unclassified
        };
        Classification {
            kind,
            positives,
            trace: self.trace,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SpectrumKind {
    Suleimanova,
    ZeroTraceSuleimanova,
    SmallOrder,
    AllNonnegative,
    Unclassified,
}

impl SpectrumKind {
    /// Both Suleimanova variants.
    pub fn is_suleimanova(self) -> bool {
        matches!(self, Self::Suleimanova | Self::ZeroTraceSuleimanova)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: SpectrumKind,
    pub positives: usize,
    pub trace: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub power_sums: Vec<f64>,
    pub power_sum_ok: bool,
    pub perron_ok: bool,
    pub spectral_radius: f64,
    pub depth: usize,
    pub tol: f64,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.power_sum_ok && self.perron_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    #[test]
    fn sorts_descending() {
        let s = spec(&[-1., 10., -3., -2.]);
        assert_eq!(s.values(), &[10., -1., -2., -3.]);
        assert_eq!(s.input_order(), &[1, 0, 3, 2]);
        assert!(!s.is_input_sorted());
        assert_eq!(spec(&[1.]).values(), &[1.]);
        assert_eq!(spec(&[0., 0.]).values(), &[0., 0.]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Spectrum::new(vec![]), Err(Error::EmptyInput));
        assert!(matches!(
            Spectrum::new(vec![1.0, f64::NAN]),
            Err(Error::NonFiniteEntry { index: 1, .. })
        ));
        assert!(Spectrum::new(vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn power_sums() {
        let s = spec(&[10., -1., -2., -3.]);
        assert_eq!(s.power_sum(1), 4.0);
        assert_eq!(spec(&[1., -1.]).power_sum(2), 2.0);
        assert_eq!(s.power_sum(3), 1000.0 - 1.0 - 8.0 - 27.0);
    }

    #[test]
    fn necessary_conditions() {
        let s = spec(&[10., -1., -2., -3.]);
        let r = s.check_necessary(20, 1e-12);
        // brute force: every s_k positive since 10^k dominates
        for (k, sk) in r.power_sums.iter().enumerate() {
            let k = k as i32 + 1;
            let direct = 10f64.powi(k) + (-1f64).powi(k) + (-2f64).powi(k) + (-3f64).powi(k);
            assert_eq!(*sk, direct);
            assert!(direct > 0.0);
        }
        assert!(r.power_sum_ok && r.perron_ok);
        assert_eq!(r.depth, 20);

        let r = spec(&[1., 1., -1., -1.]).check_necessary(9, 0.0);
        for (k, sk) in r.power_sums.iter().enumerate() {
            let want = if (k + 1) % 2 == 1 { 0.0 } else { 4.0 };
            assert_eq!(*sk, want);
        }
        assert!(r.passed());

        let r = spec(&[-1., 0.5]).check_necessary(1, 1e-12);
        assert!(!r.perron_ok);
        assert_eq!(r.spectral_radius, 1.0);
    }

    #[test]
    fn perron_tie_needs_positive_value() {
        assert!(spec(&[2., -2.]).check_necessary(5, 0.0).perron_ok);
        assert!(!spec(&[1., -2.]).check_necessary(5, 0.0).perron_ok);
    }

    #[test]
    fn deep_checks_do_not_overflow() {
        let r = spec(&[1e10, -1e10, 5.0]).check_necessary(50, 1e-12);
        assert!(r.power_sum_ok);
        let r = spec(&[1., 0.9, -1., -1.]).check_necessary(50, 1e-12);
        // s_1 = -0.1
        assert!(!r.power_sum_ok);
    }

    #[test]
    fn classification() {
        let c = spec(&[10., -1., -2., -3.]).classify(DEFAULT_SIGN_TOL);
        assert_eq!(c.kind, SpectrumKind::Suleimanova);
        assert_eq!((c.positives, c.trace), (1, 4.0));
        let c = spec(&[6., -1., -2., -3.]).classify(DEFAULT_SIGN_TOL);
        assert_eq!(c.kind, SpectrumKind::ZeroTraceSuleimanova);
        let c = spec(&[1., 0.5, -0.5]).classify(DEFAULT_SIGN_TOL);
        assert_eq!((c.kind, c.positives), (SpectrumKind::SmallOrder, 2));
        let c = spec(&[1., 1., 0., 2., 3.]).classify(DEFAULT_SIGN_TOL);
        assert_eq!(c.kind, SpectrumKind::AllNonnegative);
        let c = spec(&[3., 3., -2., -2., -2.]).classify(DEFAULT_SIGN_TOL);
        assert_eq!(c.kind, SpectrumKind::Unclassified);
        // zeros are admissible among the non-positive entries
        let c = spec(&[2., 0., 0., -1., 0.]).classify(DEFAULT_SIGN_TOL);
        assert_eq!(c.kind, SpectrumKind::Suleimanova);
        // a negative trace disqualifies
        let c = spec(&[1., -1., -1., -1., -1.]).classify(DEFAULT_SIGN_TOL);
        assert_eq!(c.kind, SpectrumKind::Unclassified);
    }

    proptest! {
        #[test]
        fn even_power_sums_nonnegative(v in proptest::collection::vec(-1e3f64..1e3, 1..20),
                                       half in 1u32..6) {
            prop_assert!(spec(&v).power_sum(2 * half) >= 0.0);
        }

        #[test]
        fn classify_ignores_input_order(v in proptest::collection::vec(-10f64..10.0, 1..9),
                                        rot in 0usize..9) {
            let mut w = v.clone();
            w.reverse();
            let r = rot % w.len();
            w.rotate_left(r);
            prop_assert_eq!(spec(&v).classify(DEFAULT_SIGN_TOL), spec(&w).classify(DEFAULT_SIGN_TOL));
        }

        #[test]
        fn suleimanova_implies_perron(neg in proptest::collection::vec(-100f64..0.0, 1..30),
                                      u in 0f64..10.0, depth in 1usize..60) {
            let mut v: Vec<f64> = neg.clone();
            v.push(-neg.iter().sum::<f64>() + u + 1e-6);
            let s = spec(&v);
            prop_assume!(s.classify(DEFAULT_SIGN_TOL).kind.is_suleimanova());
            prop_assert!(s.check_necessary(depth, 1e-12).perron_ok);
        }
    }
}

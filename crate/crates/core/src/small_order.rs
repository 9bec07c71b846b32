//! Realizations for spectra of order at most four.
//!
//! Every spectrum with `n <= 4`, `s_1 >= 0` and `λ_1 = sr(σ)` is realized
//! by a permutative matrix or a direct sum of permutative blocks:
//!
//! * `n = 1`: `[λ_1]`.
//! * `n = 2`: `½[[λ_1+λ_2, λ_1-λ_2], [λ_1-λ_2, λ_1+λ_2]]`.
//! * `n = 3`: `{λ_1, λ_3} ⊕ [λ_2]` when `λ_2 > 0`, else the Suleimanova
//!   construction.
//! * `n = 4`: Suleimanova when `λ_2 <= 0`; otherwise the Klein four-group
//!   pattern when its parameters are nonnegative; otherwise the paired
//!   sum `{λ_1, λ_4} ⊕ {λ_2, λ_3}`.
//!
//! For `n = 4` with `λ_2 > 0`, `a = s_1/4 >= 0`, and `b, c >= 0` follow
//! from the ordering alone. Only `d = (λ_1-λ_2-λ_3+λ_4)/4` can be negative,
//! and then `λ_2 + λ_3 > λ_1 + λ_4 >= 0`, which is exactly what the
//! `{λ_2, λ_3}` block needs. The paired branch re-checks this and reports
//! [`Error::InternalCaseGap`] if it ever fails.

use crate::error::{Error, Result};
use crate::linalg::{direct_sum, DenseMatrix, Matrix, Scalar};
use crate::spectrum::{Spectrum, DEFAULT_SIGN_TOL};
use crate::suleimanova::{build_alpha_permutative, first_row};
use crate::verify::{Method, Realization, RealizationParams};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SmallOrderCase {
    N1,
    N2,
    #[serde(rename = "N3-DirectSum")]
    N3DirectSum,
    #[serde(rename = "N3-Suleimanova")]
    N3Suleimanova,
    #[serde(rename = "N4-Suleimanova")]
    N4Suleimanova,
    #[serde(rename = "N4-Group")]
    N4Group,
    #[serde(rename = "N4-PairedDirectSum")]
    N4PairedDirectSum,
}

impl SmallOrderCase {
    pub fn tag(self) -> &'static str {
        match self {
            SmallOrderCase::N1 => "N1",
            SmallOrderCase::N2 => "N2",
            SmallOrderCase::N3DirectSum => "N3-DirectSum",
            SmallOrderCase::N3Suleimanova => "N3-Suleimanova",
            SmallOrderCase::N4Suleimanova => "N4-Suleimanova",
            SmallOrderCase::N4Group => "N4-Group",
            SmallOrderCase::N4PairedDirectSum => "N4-PairedDirectSum",
        }
    }
}

impl fmt::Display for SmallOrderCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// The blocks and scalars chosen for one small-order spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallPlan<T = f64> {
    pub case: SmallOrderCase,
    pub blocks: Vec<Matrix<T>>,
    pub params: Vec<(&'static str, T)>,
}

impl<T: Scalar> SmallPlan<T> {
    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Matrix::n_rows).collect()
    }

    pub fn assemble(&self) -> Result<Matrix<T>> {
        direct_sum(&self.blocks)
    }
}

/// `½[[λ_1+λ_2, λ_1-λ_2], [λ_1-λ_2, λ_1+λ_2]]`, spectrum `{λ_1, λ_2}`.
pub fn pair_block<T: Scalar>(l1: &T, l2: &T) -> Matrix<T> {
    let two = T::from_usize(2);
    let p = (l1.clone() + l2.clone()) / two.clone();
    let q = (l1.clone() - l2.clone()) / two;
    Matrix::from_row_major(2, 2, vec![p.clone(), q.clone(), q, p]).expect("2x2")
}

/// Quarter sums `(a, b, c, d)` for the Klein four-group pattern. The map is
/// its own inverse up to a factor of 4.
pub fn group_params<T: Scalar>(l: &[T; 4]) -> [T; 4] {
    let four = T::from_usize(4);
    let [l1, l2, l3, l4] = l.clone();
    [
        (l1.clone() + l2.clone() + l3.clone() + l4.clone()) / four.clone(),
        (l1.clone() + l2.clone() - l3.clone() - l4.clone()) / four.clone(),
        (l1.clone() - l2.clone() + l3.clone() - l4.clone()) / four.clone(),
        (l1 - l2 - l3 + l4) / four,
    ]
}

/// Eigenvalues `(a+b+c+d, a+b-c-d, a-b+c-d, a-b-c+d)` of the group pattern.
pub fn group_eigenvalues<T: Scalar>(p: &[T; 4]) -> [T; 4] {
    let [a, b, c, d] = p.clone();
    [
        a.clone() + b.clone() + c.clone() + d.clone(),
        a.clone() + b.clone() - c.clone() - d.clone(),
        a.clone() - b.clone() + c.clone() - d.clone(),
        a - b - c + d,
    ]
}

/// `[[a,b,c,d],[b,a,d,c],[c,d,a,b],[d,c,b,a]]`.
pub fn group_matrix<T: Scalar>(p: &[T; 4]) -> Matrix<T> {
    let [a, b, c, d] = p.clone();
    let rows = vec![
        vec![a.clone(), b.clone(), c.clone(), d.clone()],
        vec![b.clone(), a.clone(), d.clone(), c.clone()],
        vec![c.clone(), d.clone(), a.clone(), b.clone()],
        vec![d, c, b, a],
    ];
    Matrix::from_rows(rows).expect("4x4")
}

fn sum<T: Scalar>(v: &[T]) -> T {
    v.iter().cloned().fold(T::zero(), |a, b| a + b)
}

/// Picks the case and blocks for values sorted descending, with `band` the
/// absolute sign tolerance.
pub fn plan_small<T: Scalar>(sorted: &[T], band: &T) -> Result<SmallPlan<T>> {
    let n = sorted.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if n > 4 {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: 4 });
    }
    let neg_band = -band.clone();
    let s1 = sum(sorted);
    if s1 < neg_band {
        return Err(Error::NecessaryConditionViolation(format!("s_1 = {s1:?} < 0")));
    }
    let l1 = &sorted[0];
    let ln = &sorted[n - 1];
    if l1.clone() < ln.abs() - band.clone() {
        return Err(Error::NecessaryConditionViolation(format!(
            "spectral radius {:?} not attained by the largest entry {l1:?}",
            ln.abs()
        )));
    }

    let suleimanova = |case| -> Result<SmallPlan<T>> {
        let x = first_row(sorted);
        let block = build_alpha_permutative(x.clone())?.into_matrix();
        let params = vec![("x1", x[0].clone())];
        Ok(SmallPlan { case, blocks: vec![block], params })
    };

    match n {
        1 => Ok(SmallPlan {
            case: SmallOrderCase::N1,
            blocks: vec![Matrix::from_row_major(1, 1, vec![l1.clone()])?],
            params: vec![],
        }),
        2 => Ok(SmallPlan {
            case: SmallOrderCase::N2,
            blocks: vec![pair_block(l1, &sorted[1])],
            params: vec![("lambda", sorted[1].clone())],
        }),
        3 => {
            let (mu, lambda) = (&sorted[1], &sorted[2]);
            if mu > band {
                Ok(SmallPlan {
                    case: SmallOrderCase::N3DirectSum,
                    blocks: vec![
                        pair_block(l1, lambda),
                        Matrix::from_row_major(1, 1, vec![mu.clone()])?,
                    ],
                    params: vec![("mu", mu.clone()), ("lambda", lambda.clone())],
                })
            } else {
                suleimanova(SmallOrderCase::N3Suleimanova)
            }
        }
        _ => {
            let l: [T; 4] = [
                sorted[0].clone(),
                sorted[1].clone(),
                sorted[2].clone(),
                sorted[3].clone(),
            ];
            if l[1] <= *band {
                return suleimanova(SmallOrderCase::N4Suleimanova);
            }
            let p = group_params(&l);
            if p.iter().all(|v| *v >= neg_band) {
                let names = ["a", "b", "c", "d"];
                return Ok(SmallPlan {
                    case: SmallOrderCase::N4Group,
                    blocks: vec![group_matrix(&p)],
                    params: names.into_iter().zip(p).collect(),
                });
            }
            if l[1].clone() < l[2].abs() - band.clone() {
                return Err(Error::InternalCaseGap(format!(
                    "paired block {{{:?}, {:?}}} violates the Perron condition",
                    l[1], l[2]
                )));
            }
            Ok(SmallPlan {
                case: SmallOrderCase::N4PairedDirectSum,
                blocks: vec![pair_block(&l[0], &l[3]), pair_block(&l[1], &l[2])],
                params: vec![("d", p[3].clone())],
            })
        }
    }
}

fn plan_to_realization(plan: SmallPlan<f64>, spectrum: &Spectrum) -> Result<Realization> {
    let matrix = plan.assemble()?;
    let mut params = RealizationParams {
        case: Some(plan.case),
        block_sizes: plan.block_sizes(),
        ..Default::default()
    };
    if matches!(plan.case, SmallOrderCase::N3Suleimanova | SmallOrderCase::N4Suleimanova) {
        params.first_row = Some(matrix.row(0).to_vec());
    }
    params.scalars = plan.params.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    Ok(Realization::new(matrix, Method::SmallOrder, spectrum, params))
}

/// The 2x2 permutative realization of `{λ_1, λ_2}` with `λ_1 >= |λ_2|`.
pub fn realize_2(l1: f64, l2: f64) -> Result<Realization> {
    let spectrum = Spectrum::new(vec![l1, l2])?;
    let band = spectrum.sign_band(DEFAULT_SIGN_TOL);
    if l1 < l2.abs() - band {
        return Err(Error::PerronViolation(format!("{l1} < |{l2}|")));
    }
    let plan = SmallPlan {
        case: SmallOrderCase::N2,
        blocks: vec![pair_block(&l1, &l2)],
        params: vec![("lambda", l2)],
    };
    plan_to_realization(plan, &spectrum)
}

fn realize_fixed(spectrum: &Spectrum, n: usize) -> Result<Realization> {
    if spectrum.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: spectrum.len(),
        });
    }
    realize_small(spectrum)
}

pub fn realize_3(spectrum: &Spectrum) -> Result<Realization> {
    realize_fixed(spectrum, 3)
}

pub fn realize_4(spectrum: &Spectrum) -> Result<Realization> {
    realize_fixed(spectrum, 4)
}

/// Dispatches on `n` in `1..=4`.
pub fn realize_small(spectrum: &Spectrum) -> Result<Realization> {
    let band = spectrum.sign_band(DEFAULT_SIGN_TOL);
    let plan = plan_small(spectrum.values(), &band)?;
    plan_to_realization(plan, spectrum)
}

/// The realizing matrix alone.
pub fn small_matrix(spectrum: &Spectrum) -> Result<DenseMatrix> {
    realize_small(spectrum).map(|r| r.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{char_poly, poly_from_roots};
    use num::BigRational;
    use proptest::prelude::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    fn close(a: &DenseMatrix, b: &[&[f64]]) -> bool {
        a.row_iter()
            .zip(b)
            .all(|(r, s)| r.iter().zip(s.iter()).all(|(x, y)| (x - y).abs() < 1e-14))
    }

    #[test]
    fn order_two() {
        let r = realize_2(1.0, 0.3).unwrap();
        assert!(close(&r.matrix, &[&[0.65, 0.35], &[0.35, 0.65]]));
        assert_eq!(realize_2(1.0, 1.0).unwrap().matrix, DenseMatrix::identity(2));
        let r = realize_2(1.0, -1.0).unwrap();
        assert_eq!(r.matrix.to_rows(), vec![vec![0., 1.], vec![1., 0.]]);
        assert!(matches!(realize_2(0.5, -1.0), Err(Error::PerronViolation(_))));
    }

    #[test]
    fn order_three() {
        let r = realize_3(&spec(&[1., 0.5, -0.5])).unwrap();
        assert_eq!(r.params.case, Some(SmallOrderCase::N3DirectSum));
        assert!(close(&r.matrix, &[&[0.25, 0.75, 0.], &[0.75, 0.25, 0.], &[0., 0., 0.5]]));
        assert_eq!(r.params.block_sizes, vec![2, 1]);

        let r = realize_3(&spec(&[1., -0.3, -0.6])).unwrap();
        assert_eq!(r.params.case, Some(SmallOrderCase::N3Suleimanova));
        let x = [0.1 / 3.0, 1.0 / 3.0, 1.9 / 3.0];
        assert!(r.matrix.row(0).iter().zip(x).all(|(a, b)| (a - b).abs() < 1e-15));

        let r = realize_3(&spec(&[1., 1., 1.])).unwrap();
        assert_eq!(r.matrix, DenseMatrix::identity(3));

        // λ_2 = 0 goes to the single permutative block
        let r = realize_3(&spec(&[1., 0., -0.5])).unwrap();
        assert_eq!(r.params.case, Some(SmallOrderCase::N3Suleimanova));

        assert!(matches!(realize_3(&spec(&[1., 1.])), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            realize_3(&spec(&[1., -1., -1.])),
            Err(Error::NecessaryConditionViolation(_))
        ));
    }

    #[test]
    fn order_four_cases() {
        let r = realize_4(&spec(&[1., 0.2, -0.5, -0.6])).unwrap();
        assert_eq!(r.params.case, Some(SmallOrderCase::N4Group));
        let want = [0.025, 0.575, 0.225, 0.175];
        for (k, w) in ["a", "b", "c", "d"].iter().zip(want) {
            assert!((r.params.scalars[*k] - w).abs() < 1e-15, "{k}");
        }
        assert!(char_poly(&r.matrix)
            .unwrap()
            .approx_eq(&poly_from_roots(&r.target), 1e-12, 1e-12));

        let r = realize_4(&spec(&[1., 0.9, 0.9, -1.])).unwrap();
        assert_eq!(r.params.case, Some(SmallOrderCase::N4PairedDirectSum));
        assert!((r.params.scalars["d"] + 0.45).abs() < 1e-15);
        assert!(close(
            &r.matrix,
            &[&[0., 1., 0., 0.], &[1., 0., 0., 0.], &[0., 0., 0.9, 0.], &[0., 0., 0., 0.9]]
        ));

        let r = realize_4(&spec(&[1., 1., 1., 1.])).unwrap();
        assert_eq!(r.params.case, Some(SmallOrderCase::N4Group));
        assert_eq!(r.matrix, DenseMatrix::identity(4));

        let r = realize_4(&spec(&[10., -1., -2., -3.])).unwrap();
        assert_eq!(r.params.case, Some(SmallOrderCase::N4Suleimanova));
        assert_eq!(r.matrix.row(3), &[4., 2., 3., 1.]);
    }

    #[test]
    fn dispatch_small() {
        assert_eq!(realize_small(&spec(&[1.])).unwrap().matrix.to_rows(), vec![vec![1.]]);
        assert_eq!(
            realize_small(&spec(&[5., -5.])).unwrap().matrix.to_rows(),
            vec![vec![0., 5.], vec![5., 0.]]
        );
        assert!(matches!(
            realize_small(&spec(&[1., 1., 1., 1., 1.])),
            Err(Error::DimensionOutOfRange { .. })
        ));
        assert!(matches!(realize_small(&spec(&[-1.])), Err(Error::NecessaryConditionViolation(_))));
    }

    #[test]
    fn group_transform_is_an_involution_up_to_scale() {
        let l = [1.0, 0.3, -0.2, -0.7];
        let p = group_params(&l);
        for (e, v) in group_eigenvalues(&p).iter().zip(l) {
            assert!((e - v).abs() < 1e-15);
        }
        let twice = group_params(&group_params(&l));
        for (t, v) in twice.iter().zip(l) {
            assert!((4.0 * t - v).abs() < 1e-15);
        }
    }

    #[test]
    fn rational_plans_are_exact() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let vals = [q(1, 1), q(9, 10), q(9, 10), q(-1, 1)];
        let plan = plan_small(&vals, &q(0, 1)).unwrap();
        assert_eq!(plan.case, SmallOrderCase::N4PairedDirectSum);
        let m = plan.assemble().unwrap();
        let p = char_poly(&m).unwrap();
        let target = crate::linalg::Polynomial::from_roots(&vals);
        assert_eq!(p, target);
    }

    proptest! {
        #[test]
        fn group_eigenvalues_reproduce_input(l in proptest::array::uniform4(-100i32..100)) {
            let l = l.map(|v| BigRational::from_integer(v.into()));
            prop_assert_eq!(group_eigenvalues(&group_params(&l)), l);
        }

        #[test]
        fn scaling_equivariance(rest in proptest::collection::vec(-1f64..1.0, 0..4), t in 0.01f64..100.0) {
            let mut v = vec![1.0];
            v.extend(rest);
            let s = spec(&v);
            prop_assume!(s.trace() >= 1e-6);
            // stay away from branch boundaries, which the band can move
            prop_assume!(v[1..].iter().all(|x| x.abs() > 1e-6));
            let base = realize_small(&s).unwrap();
            prop_assume!(base.params.case != Some(SmallOrderCase::N4Group)
                || base.params.scalars.values().all(|x| x.abs() > 1e-6));
            let scaled = realize_small(&s.scaled(t).unwrap()).unwrap();
            prop_assert_eq!(base.params.case, scaled.params.case);
            for (a, b) in base.matrix.entries().iter().zip(scaled.matrix.entries()) {
                prop_assert!((a * t - b).abs() <= 1e-12 * t.max(1.0));
            }
        }
    }
}

//! Permutative realizations of Suleimanova spectra.
//!
//! The building block is the transposition pattern: row 1 is `x` and row
//! `i` is `x` with entries 1 and `i` swapped. Every row sums to
//! `s = Σ x_i`, and for `i >= 2` the vector equal to `x_i` everywhere
//! except `x_1 - s` at position `i` is an eigenvector with eigenvalue
//! `δ_i = x_1 - x_i`. Choosing `x` so that `s = λ_1` and `δ_i = λ_i`
//! realizes the spectrum; for a Suleimanova spectrum that `x` is
//! nonnegative.

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::spectrum::{Spectrum, DEFAULT_SIGN_TOL};
use crate::verify::{Method, Realization, RealizationParams};

/// The transposition-pattern permutative matrix of a first row `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaPermutative<T = f64> {
    x: Vec<T>,
    matrix: Matrix<T>,
}

/// Closed-form eigensystem of an [`AlphaPermutative`] matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedEigensystem<T = f64> {
    /// Eigenvalue for the all-ones vector.
    pub s: T,
    /// `δ_i = x_1 - x_i` for `i = 2..n`.
    pub deltas: Vec<T>,
    /// `vectors[i - 2]` pairs with `deltas[i - 2]`.
    pub vectors: Vec<Vec<T>>,
}

pub fn build_alpha_permutative<T: Scalar>(x: Vec<T>) -> Result<AlphaPermutative<T>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let mut data = Vec::with_capacity(n * n);
    data.extend(x.iter().cloned());
    for i in 1..n {
        let start = data.len();
        data.extend(x.iter().cloned());
        data.swap(start, start + i);
    }
    let matrix = Matrix::from_row_major(n, n, data)?;
    Ok(AlphaPermutative { x, matrix })
}

impl<T: Scalar> AlphaPermutative<T> {
    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn closed_eigensystem(&self) -> ClosedEigensystem<T> {
        let x = &self.x;
        let s = x.iter().cloned().fold(T::zero(), |a, b| a + b);
        let head = x[0].clone();
        let mut deltas = Vec::with_capacity(x.len().saturating_sub(1));
        let mut vectors = Vec::with_capacity(deltas.capacity());
        for i in 1..x.len() {
            deltas.push(head.clone() - x[i].clone());
            let mut v = vec![x[i].clone(); x.len()];
            v[i] = head.clone() - s.clone();
            vectors.push(v);
        }
        ClosedEigensystem { s, deltas, vectors }
    }
}

/// First row `x = M_n⁻¹ λ = (s_1, s_1 - nλ_2, ..., s_1 - nλ_n) / n` for
/// values sorted descending, without forming `M_n⁻¹`.
pub fn first_row<T: Scalar>(sorted: &[T]) -> Vec<T> {
    let n = T::from_usize(sorted.len());
    let s1 = sorted.iter().cloned().fold(T::zero(), |a, b| a + b);
    let mut x = Vec::with_capacity(sorted.len());
    if sorted.is_empty() {
        return x;
    }
    x.push(s1.clone() / n.clone());
    for l in &sorted[1..] {
        x.push((s1.clone() - n.clone() * l.clone()) / n.clone());
    }
    x
}

/// First row for a zero-trace spectrum: `(0, -λ_2, ..., -λ_n)`.
pub fn zero_trace_first_row<T: Scalar>(sorted: &[T]) -> Vec<T> {
    let mut x: Vec<T> = sorted.iter().map(|l| -l.clone()).collect();
    if let Some(first) = x.first_mut() {
        *first = T::zero();
    }
    x
}

/// `M_n = [[1, eᵀ], [e, -I]]`.
pub fn mn_matrix<T: Scalar>(n: usize) -> Result<Matrix<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let mut m = Matrix::zeros(n, n);
    m[(0, 0)] = T::one();
    for i in 1..n {
        m[(0, i)] = T::one();
        m[(i, 0)] = T::one();
        m[(i, i)] = -T::one();
    }
    Ok(m)
}

/// `M_n⁻¹ = (1/n) [[1, eᵀ], [e, J - nI]]`.
pub fn mn_inverse<T: Scalar>(n: usize) -> Result<Matrix<T>> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n, min: 2 });
    }
    let nn = T::from_usize(n);
    let inv_n = T::one() / nn.clone();
    let mut m = Matrix::ones_matrix(n);
    for i in 1..n {
        m[(i, i)] = T::one() - nn.clone();
    }
    Ok(m.scaled(&inv_n))
}

/// Sign pattern test for `λ_1 >= 0 >= λ_2 >= ... >= λ_n` with `s_1 >= 0`,
/// under the absolute band `band`. The all-zero spectrum passes.
pub fn suleimanova_pattern<T: Scalar>(sorted: &[T], band: &T) -> std::result::Result<(), String> {
    let s1 = sorted.iter().cloned().fold(T::zero(), |a, b| a + b);
    if let Some((i, v)) = sorted.iter().enumerate().skip(1).find(|(_, v)| *v > band) {
        return Err(format!("entry {} = {:?} is positive", i + 1, v));
    }
    if s1 < -band.clone() {
        return Err(format!("s_1 = {s1:?} is negative"));
    }
    Ok(())
}

/// Realizes a Suleimanova spectrum by the transposition pattern.
pub fn realize_suleimanova(spectrum: &Spectrum) -> Result<Realization> {
    let values = spectrum.values();
    let band = spectrum.sign_band(DEFAULT_SIGN_TOL);
    suleimanova_pattern(values, &band).map_err(Error::NotSuleimanova)?;
    let x = first_row(values);
    let matrix = build_alpha_permutative(x.clone())?.into_matrix();
    let mut params = RealizationParams {
        first_row: Some(x),
        ..Default::default()
    };
    params.scalars.insert("s1".into(), spectrum.trace());
    Ok(Realization::new(matrix, Method::Suleimanova, spectrum, params))
}

/// Realizes a zero-trace Suleimanova spectrum by the zero-diagonal
/// transposition pattern with first row `(0, |λ_2|, ..., |λ_n|)`.
pub fn realize_zero_trace(spectrum: &Spectrum) -> Result<Realization> {
    let values = spectrum.values();
    let band = spectrum.sign_band(DEFAULT_SIGN_TOL);
    suleimanova_pattern(values, &band).map_err(Error::NotSuleimanova)?;
    if spectrum.trace().abs() > band {
        return Err(Error::NotZeroTrace(spectrum.trace()));
    }
    let x = zero_trace_first_row(values);
    let matrix = build_alpha_permutative(x.clone())?.into_matrix();
    let params = RealizationParams {
        first_row: Some(x),
        ..Default::default()
    };
    Ok(Realization::new(matrix, Method::ZeroTrace, spectrum, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{char_poly, poly_from_roots, DenseMatrix};
    use num::BigRational;
    use proptest::prelude::*;

    fn spec(v: &[f64]) -> Spectrum {
        Spectrum::new(v.to_vec()).unwrap()
    }

    fn rows(m: &DenseMatrix) -> Vec<Vec<f64>> {
        m.to_rows()
    }

    #[test]
    fn alpha_pattern_examples() {
        let a = build_alpha_permutative(vec![1., 2., 3., 4.]).unwrap();
        assert_eq!(
            rows(a.matrix()),
            vec![
                vec![1., 2., 3., 4.],
                vec![2., 1., 3., 4.],
                vec![3., 2., 1., 4.],
                vec![4., 2., 3., 1.]
            ]
        );
        let a = build_alpha_permutative(vec![0., 1., 2., 3.]).unwrap();
        assert_eq!(
            rows(a.matrix()),
            vec![
                vec![0., 1., 2., 3.],
                vec![1., 0., 2., 3.],
                vec![2., 1., 0., 3.],
                vec![3., 1., 2., 0.]
            ]
        );
        let a = build_alpha_permutative(vec![7.5]).unwrap();
        assert_eq!(rows(a.matrix()), vec![vec![7.5]]);
        assert_eq!(build_alpha_permutative::<f64>(vec![]), Err(Error::EmptyInput));
    }

    #[test]
    fn closed_eigensystem_examples() {
        let e = build_alpha_permutative(vec![1., 2., 3., 4.]).unwrap().closed_eigensystem();
        assert_eq!(e.s, 10.0);
        assert_eq!(e.deltas, vec![-1., -2., -3.]);
        assert_eq!(e.vectors[0], vec![2., -9., 2., 2.]);
        let e = build_alpha_permutative(vec![0., 1., 2., 3.]).unwrap().closed_eigensystem();
        assert_eq!((e.s, e.deltas.clone()), (6.0, vec![-1., -2., -3.]));
        let e = build_alpha_permutative(vec![2.5; 5]).unwrap().closed_eigensystem();
        assert_eq!(e.s, 12.5);
        assert!(e.deltas.iter().all(|d| *d == 0.0));
    }

    #[test]
    fn closed_eigenpairs_hold_exactly_in_rationals() {
        let q = |v: i64| BigRational::from_integer(v.into());
        let x: Vec<BigRational> = [3, 0, 7, 1, 5].iter().map(|&v| q(v)).collect();
        let a = build_alpha_permutative(x).unwrap();
        let e = a.closed_eigensystem();
        for (d, v) in e.deltas.iter().zip(&e.vectors) {
            let pv = a.matrix().matvec(v).unwrap();
            let dv: Vec<BigRational> = v.iter().map(|c| c * d).collect();
            assert_eq!(pv, dv);
        }
        let pe = a.matrix().matvec(&vec![q(1); 5]).unwrap();
        assert!(pe.iter().all(|v| *v == e.s));
    }

    #[test]
    fn mn_small_cases() {
        let m: DenseMatrix = mn_matrix(2).unwrap();
        assert_eq!(rows(&m), vec![vec![1., 1.], vec![1., -1.]]);
        let inv: DenseMatrix = mn_inverse(2).unwrap();
        assert_eq!(rows(&inv), vec![vec![0.5, 0.5], vec![0.5, -0.5]]);

        // M_3 inverted by Gauss–Jordan by hand: (1/3)[[1,1,1],[1,-2,1],[1,1,-2]]
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let inv3: Matrix<BigRational> = mn_inverse(3).unwrap();
        let want = Matrix::from_rows(vec![
            vec![q(1, 3), q(1, 3), q(1, 3)],
            vec![q(1, 3), q(-2, 3), q(1, 3)],
            vec![q(1, 3), q(1, 3), q(-2, 3)],
        ])
        .unwrap();
        assert_eq!(inv3, want);

        for n in 2..12 {
            let m: Matrix<BigRational> = mn_matrix(n).unwrap();
            let inv = mn_inverse(n).unwrap();
            assert_eq!(m.matmul(&inv).unwrap(), Matrix::identity(n));
        }
        assert!(matches!(mn_matrix::<f64>(1), Err(Error::DimensionTooSmall { .. })));
        assert!(mn_inverse::<f64>(0).is_err());
    }

    #[test]
    fn first_row_solves_the_linear_system() {
        let lambda = [10., -1., -2., -3.];
        let x = first_row(&lambda);
        assert_eq!(x, vec![1., 2., 3., 4.]);
        let m: DenseMatrix = mn_matrix(4).unwrap();
        assert_eq!(m.matvec(&x).unwrap(), lambda.to_vec());
        let inv: DenseMatrix = mn_inverse(4).unwrap();
        assert_eq!(inv.matvec(&lambda).unwrap(), x);
    }

    #[test]
    fn integer_examples() {
        let r = realize_suleimanova(&spec(&[10., -1., -2., -3.])).unwrap();
        assert_eq!(r.params.first_row.as_deref(), Some(&[1., 2., 3., 4.][..]));
        assert_eq!(r.matrix, build_alpha_permutative(vec![1., 2., 3., 4.]).unwrap().into_matrix());
        assert_eq!(r.method, Method::Suleimanova);

        let r = realize_suleimanova(&spec(&[6., -1., -2., -3.])).unwrap();
        assert_eq!(r.params.first_row.as_deref(), Some(&[0., 1., 2., 3.][..]));

        let r = realize_suleimanova(&spec(&[0., 0., 0.])).unwrap();
        assert_eq!(r.matrix, DenseMatrix::zeros(3, 3));
    }

    #[test]
    fn unsorted_input_records_order() {
        let r = realize_suleimanova(&spec(&[-2., 10., -3., -1.])).unwrap();
        assert_eq!(r.params.first_row.as_deref(), Some(&[1., 2., 3., 4.][..]));
        assert_eq!(r.params.input_order, vec![1, 3, 0, 2]);
    }

    #[test]
    fn rejects_non_suleimanova() {
        assert!(matches!(
            realize_suleimanova(&spec(&[1., 0.5, -0.5])),
            Err(Error::NotSuleimanova(_))
        ));
        assert!(matches!(
            realize_suleimanova(&spec(&[1., -2.])),
            Err(Error::NotSuleimanova(_))
        ));
    }

    #[test]
    fn zero_trace_examples() {
        let r = realize_zero_trace(&spec(&[6., -1., -2., -3.])).unwrap();
        assert_eq!(
            rows(&r.matrix),
            vec![
                vec![0., 1., 2., 3.],
                vec![1., 0., 2., 3.],
                vec![2., 1., 0., 3.],
                vec![3., 1., 2., 0.]
            ]
        );
        let r = realize_zero_trace(&spec(&[1., -1.])).unwrap();
        assert_eq!(rows(&r.matrix), vec![vec![0., 1.], vec![1., 0.]]);
        let r = realize_zero_trace(&spec(&[0., 0.])).unwrap();
        assert_eq!(r.matrix, DenseMatrix::zeros(2, 2));
        assert!(matches!(
            realize_zero_trace(&spec(&[10., -1., -2., -3.])),
            Err(Error::NotZeroTrace(_))
        ));
    }

    fn suleimanova_strategy(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
        (proptest::collection::vec(-100f64..=0.0, 1..max_n), 0f64..50.0, any::<bool>()).prop_map(
            |(neg, u, zero_trace)| {
                let mut v = neg.clone();
                let u = if zero_trace { 0.0 } else { u };
                v.push(-neg.iter().sum::<f64>() + u);
                v
            },
        )
    }

    proptest! {
        #[test]
        fn realization_properties(v in suleimanova_strategy(60)) {
            let s = spec(&v);
            let r = realize_suleimanova(&s).unwrap();
            let l1 = s.max();
            prop_assert!(r.matrix.is_nonnegative(&(1e-12 * l1.max(1.0))));
            for row in r.matrix.row_iter() {
                let sum: f64 = row.iter().sum();
                prop_assert!((sum - l1).abs() <= 1e-12 * l1.max(1.0));
            }
            let alpha = build_alpha_permutative(r.params.first_row.clone().unwrap()).unwrap();
            let e = alpha.closed_eigensystem();
            let xs = alpha.x().iter().fold(1.0f64, |a, v| a.max(v.abs()));
            for (d, vec) in e.deltas.iter().zip(&e.vectors) {
                let pv = r.matrix.matvec(vec).unwrap();
                let res = pv.iter().zip(vec).fold(0.0f64, |a, (p, w)| a.max((p - d * w).abs()));
                prop_assert!(res <= 1e-10 * xs * xs);
            }
        }

        #[test]
        fn char_poly_matches_target(v in suleimanova_strategy(12)) {
            let s = spec(&v);
            let r = realize_suleimanova(&s).unwrap();
            let p = char_poly(&r.matrix).unwrap();
            prop_assert!(p.approx_eq(&poly_from_roots(&s), 1e-10, 1e-9),
                "{:?} vs {:?}", p, poly_from_roots(&s));
        }

        #[test]
        fn zero_trace_agrees_with_general(neg in proptest::collection::vec(-100f64..=0.0, 1..40)) {
            let mut v = neg.clone();
            v.push(-neg.iter().sum::<f64>());
            let s = spec(&v);
            prop_assume!(s.classify(DEFAULT_SIGN_TOL).kind == crate::spectrum::SpectrumKind::ZeroTraceSuleimanova);
            let a = realize_zero_trace(&s).unwrap().matrix;
            let b = realize_suleimanova(&s).unwrap().matrix;
            let tol = 1e-12 * s.max().max(1.0);
            for (x, y) in a.entries().iter().zip(b.entries()) {
                prop_assert!((x - y).abs() <= tol);
            }
        }

        #[test]
        fn integer_spectra_with_divisible_trace_are_integral(
            neg in proptest::collection::vec(-20i64..=0, 1..10), extra in 0i64..5) {
            let n = neg.len() as i64 + 1;
            let sum_neg: i64 = neg.iter().sum();
            // pick λ_1 so that s_1 = n * extra
            let l1 = -sum_neg + n * extra;
            let mut v: Vec<f64> = neg.iter().map(|&k| k as f64).collect();
            v.push(l1 as f64);
            let r = realize_suleimanova(&spec(&v)).unwrap();
            prop_assert!(r.matrix.entries().iter().all(|e| e.fract() == 0.0));
        }
    }
}

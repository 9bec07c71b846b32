//! Exact characteristic polynomials of floating-point matrices.
//!
//! Every finite `f64` is a dyadic rational, so `A = 2^e B` with `B` an
//! integer matrix. The coefficients of `det(tI - B)` are recovered from
//! their residues modulo word-sized primes (Hessenberg reduction mod `p`,
//! then the Hessenberg recurrence) and the Chinese remainder theorem, and
//! rounded to `f64` once at the end.

use super::{DenseMatrix, Polynomial};
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::sync::OnceLock;

const PRIME_COUNT: usize = 320;
/// Integer entries wider than this fall back to the floating recurrence.
const MAX_ENTRY_BITS: u64 = 600;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(PRIME_COUNT);
        let mut c = (1u64 << 62) - 1;
        while out.len() < PRIME_COUNT {
            if is_prime(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

/// `(negative, odd mantissa, exponent)` with `|x| = m * 2^e`.
fn decompose(x: f64) -> (bool, u64, i64) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let tz = m.trailing_zeros();
    (x.is_sign_negative(), m >> tz, e + i64::from(tz))
}

struct IntegerMatrix {
    n: usize,
    /// `(negative, mantissa, shift)`; value `±m 2^shift`, all shifts >= 0.
    entries: Vec<(bool, u64, u64)>,
    exponent: i64,
    max_bits: u64,
}

fn to_integer_matrix(m: &DenseMatrix) -> Option<IntegerMatrix> {
    let n = m.n_rows();
    let parts: Vec<(bool, u64, i64)> = m.entries().iter().map(|&v| {
        if v == 0.0 { (false, 0, 0) } else { decompose(v) }
    }).collect();
    let exponent = parts.iter().filter(|p| p.1 != 0).map(|p| p.2).min()?;
    let mut max_bits = 0;
    let entries = parts
        .into_iter()
        .map(|(neg, mant, e)| {
            if mant == 0 {
                return (false, 0, 0);
            }
            let shift = (e - exponent) as u64;
            max_bits = max_bits.max(64 - u64::from(mant.leading_zeros()) + shift);
            (neg, mant, shift)
        })
        .collect();
    Some(IntegerMatrix {
        n,
        entries,
        exponent,
        max_bits,
    })
}

/// Coefficients of `det(tI - B) mod p`, ascending, leading 1 included.
fn char_poly_mod(b: &IntegerMatrix, p: u64) -> Vec<u64> {
    let n = b.n;
    let mut h: Vec<u64> = b
        .entries
        .iter()
        .map(|&(neg, mant, shift)| {
            let v = mul_mod(mant % p, pow_mod(2, shift, p), p);
            if neg && v != 0 { p - v } else { v }
        })
        .collect();
    let at = |i: usize, j: usize| i * n + j;
    // similarity reduction to upper Hessenberg form
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| h[at(i, j)] != 0) else { continue };
        if piv != j + 1 {
            for c in 0..n {
                h.swap(at(piv, c), at(j + 1, c));
            }
            for r in 0..n {
                h.swap(at(r, piv), at(r, j + 1));
            }
        }
        let inv = pow_mod(h[at(j + 1, j)], p - 2, p);
        for i in j + 2..n {
            let u = mul_mod(h[at(i, j)], inv, p);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                let s = mul_mod(u, h[at(j + 1, c)], p);
                h[at(i, c)] = (h[at(i, c)] + p - s) % p;
            }
            for r in 0..n {
                let s = mul_mod(u, h[at(r, i)], p);
                h[at(r, j + 1)] = (h[at(r, j + 1)] + s) % p;
            }
        }
    }
    // p_m(t) = (t - h_{m-1,m-1}) p_{m-1} - sum_i (prod of subdiagonal) h_{m-i-1,m-1} p_{m-i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut next = vec![0u64; m + 1];
        let d = h[at(m - 1, m - 1)];
        for (k, &c) in prev.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + p - mul_mod(d, c, p)) % p;
        }
        let mut t = 1u64;
        for i in 1..m {
            t = mul_mod(t, h[at(m - i, m - i - 1)], p);
            if t == 0 {
                break;
            }
            let coef = mul_mod(t, h[at(m - i - 1, m - 1)], p);
            for (k, &c) in polys[m - i - 1].iter().enumerate() {
                next[k] = (next[k] + p - mul_mod(coef, c, p)) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("n + 1 polynomials")
}

fn bits_for(n: usize, max_bits: u64) -> u64 {
    // |c_k| <= C(n, k) rho^(n-k) with rho <= n 2^max_bits
    let log_n = 64 - u64::from((n as u64).leading_zeros());
    n as u64 * (max_bits + log_n) + n as u64 + 2
}

fn scaled_to_f64(c: BigInt, shift: i64) -> f64 {
    if c.is_zero() {
        return 0.0;
    }
    let q = if shift >= 0 {
        BigRational::from_integer(c << shift as usize)
    } else {
        BigRational::new(c, BigInt::one() << (-shift) as usize)
    };
    q.to_f64().unwrap_or(if q.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Exact `det(tI - M)` rounded to `f64`, or `None` when the entries are
/// not all finite or span too many binades.
pub(crate) fn exact_char_poly(m: &DenseMatrix) -> Option<Polynomial<f64>> {
    let n = m.n_rows();
    if m.entries().iter().any(|v| !v.is_finite()) {
        return None;
    }
    let Some(b) = to_integer_matrix(m) else {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        return Polynomial::from_coeffs(coeffs).ok();
    };
    if b.max_bits > MAX_ENTRY_BITS {
        return None;
    }
    let needed = (bits_for(n, b.max_bits) / 61 + 1) as usize;
    let primes = primes();
    if needed > primes.len() {
        return None;
    }

    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut modulus = BigInt::one();
    for &p in &primes[..needed] {
        let res = char_poly_mod(&b, p);
        let m_mod_p = (&modulus % p).to_u64().expect("reduced");
        let inv = pow_mod(m_mod_p, p - 2, p);
        for (x, r) in acc.iter_mut().zip(res) {
            let x_mod_p = (&*x % p).to_u64().expect("reduced");
            let t = mul_mod((r + p - x_mod_p) % p, inv, p);
            *x += &modulus * t;
        }
        modulus *= p;
    }
    let half = &modulus >> 1usize;
    let coeffs = acc
        .into_iter()
        .enumerate()
        .map(|(k, x)| {
            let x = if x > half { x - &modulus } else { x };
            scaled_to_f64(x, b.exponent * (n - k) as i64)
        })
        .collect();
    Polynomial::from_coeffs(coeffs).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::poly::faddeev_leverrier;
    use crate::linalg::Matrix;
    use proptest::prelude::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert!(is_prime((1u64 << 61) - 1));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(primes().windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn decompose_round_trips() {
        for x in [1.0, -0.75, 3.0e-310, 1e300, 6.0] {
            let (neg, m, e) = decompose(x);
            let back = (m as f64) * 2f64.powi(e as i32);
            assert_eq!(if neg { -back } else { back }, x);
        }
    }

    #[test]
    fn known_polynomials() {
        let m = Matrix::from_rows(vec![
            vec![1., 2., 3., 4.],
            vec![2., 1., 3., 4.],
            vec![3., 2., 1., 4.],
            vec![4., 2., 3., 1.],
        ])
        .unwrap();
        assert_eq!(exact_char_poly(&m).unwrap().coeffs(), &[-60., -104., -49., -4., 1.]);
        assert_eq!(exact_char_poly(&DenseMatrix::zeros(3, 3)).unwrap().coeffs(), &[0., 0., 0., 1.]);
        let half = Matrix::from_rows(vec![vec![0.5, 0.25], vec![0.25, 0.5]]).unwrap();
        assert_eq!(exact_char_poly(&half).unwrap().coeffs(), &[0.1875, -1.0, 1.0]);
        let inf = Matrix::from_rows(vec![vec![f64::INFINITY]]).unwrap();
        assert!(exact_char_poly(&inf).is_none());
    }

    #[test]
    fn zero_pivots_need_row_swaps() {
        // first subdiagonal entry is zero, the one below it is not
        let m = Matrix::from_rows(vec![vec![1., 2., 0.], vec![0., 3., 1.], vec![5., 0., 2.]]).unwrap();
        let q = m.map(|v| BigRational::from_float(*v).unwrap());
        let want = faddeev_leverrier(&q).unwrap();
        let got = exact_char_poly(&m).unwrap();
        for (a, b) in got.coeffs().iter().zip(want.coeffs()) {
            assert_eq!(*a, b.to_f64().unwrap());
        }
    }

    proptest! {
        #[test]
        fn agrees_with_rational_recurrence(
            n in 1usize..7,
            seed in proptest::collection::vec(-1000i32..1000, 36),
            scale in -8i32..8,
        ) {
            let f = 2f64.powi(scale);
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| f64::from(seed[i * 6 + j]) * f).collect())
                .collect();
            let m = Matrix::from_rows(rows).unwrap();
            let q = m.map(|v| BigRational::from_float(*v).unwrap());
            let want = faddeev_leverrier(&q).unwrap();
            let got = exact_char_poly(&m).unwrap();
            for (a, b) in got.coeffs().iter().zip(want.coeffs()) {
                prop_assert_eq!(*a, b.to_f64().unwrap());
            }
        }
    }
}

//! Exact determinants: fraction-free Bareiss elimination for entries of any
//! integral domain, plus a CRT-based integer path for large rational
//! matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::polyring::{Polynomial, Scalar};

/// Entry of a matrix over an integral domain, as needed by fraction-free
/// elimination. `exact_div` may assume divisibility (Bareiss guarantees the
/// intermediate divisions are exact).
pub trait DetEntry: Clone + Send + Sync {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn exact_div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl DetEntry for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, other: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % other)), "inexact integer division");
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl DetEntry for Scalar {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl DetEntry for Polynomial {
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn exact_div(&self, other: &Self) -> Self {
        self.exact_divide(other)
            .expect("Bareiss intermediate division is exact")
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Fraction-free (Bareiss) determinant over an integral domain.
///
/// One-step elimination with row pivoting: after step `k` every active entry
/// is a `(k+1)`-minor of the input, so the division by the previous pivot is
/// exact. Returns `None` for a zero determinant (which avoids needing a zero
/// constructor for `T`). Panics on an empty or non-square matrix.
pub fn determinant_fraction_free<T: DetEntry>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    assert!(n > 0, "determinant of an empty matrix");
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut negate = false;
    for k in 0..n - 1 {
        let pivot_row = (k..n).find(|&r| !m[r][k].is_zero());
        let pivot_row = pivot_row?;
        if pivot_row != k {
            m.swap(k, pivot_row);
            negate = !negate;
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let prev_pivot = (k > 0).then(|| top[k - 1][k - 1].clone());
        let pivot_row_ref = &top[k];
        let pivot = pivot_row_ref[k].clone();
        for row in rest.iter_mut() {
            let lead = row[k].clone();
            let lead_zero = lead.is_zero();
            for j in k + 1..n {
                let t = if lead_zero {
                    row[j].mul(&pivot)
                } else {
                    row[j].mul(&pivot).sub(&lead.mul(&pivot_row_ref[j]))
                };
                row[j] = match &prev_pivot {
                    None => t,
                    Some(prev) => t.exact_div(prev),
                };
            }
        }
    }
    let last = m[n - 1][n - 1].clone();
    if last.is_zero() {
        None
    } else if negate {
        Some(last.neg())
    } else {
        Some(last)
    }
}

/// Determinant of a rational matrix: denominators are cleared per row (the
/// scaling tracked) and the integer determinant is computed fraction-free,
/// or by CRT over word-sized primes when the matrix is large.
pub fn determinant_scalar(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    assert!(m.iter().all(|row| row.len() == n), "matrix must be square");
    let mut scale = BigInt::one();
    let mut int_rows: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        let mut lcm = BigInt::one();
        for e in row {
            lcm = lcm.lcm(e.denom());
        }
        scale *= &lcm;
        int_rows.push(
            row.iter()
                .map(|e| e.numer() * (&lcm / e.denom()))
                .collect(),
        );
    }
    const BAREISS_CUTOFF: usize = 16;
    let det = if n <= BAREISS_CUTOFF {
        determinant_fraction_free(int_rows).unwrap_or_else(BigInt::zero)
    } else {
        crt_integer_determinant(&int_rows)
    };
    Scalar::new(det, scale)
}

/// Hadamard bound: `|det| <= prod_i ||row_i||_2`; the column version also
/// holds, take the smaller. Zero signals an identically zero determinant.
fn hadamard_bound(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut row_bound = BigInt::one();
    for row in m {
        let s: BigInt = row.iter().map(|e| e * e).sum();
        if Zero::is_zero(&s) {
            return BigInt::zero();
        }
        row_bound *= s.sqrt() + 1;
    }
    let mut col_bound = BigInt::one();
    for j in 0..n {
        let s: BigInt = m.iter().map(|row| &row[j] * &row[j]).sum();
        if Zero::is_zero(&s) {
            return BigInt::zero();
        }
        col_bound *= s.sqrt() + 1;
    }
    row_bound.min(col_bound)
}

/// Exact integer determinant by Chinese remaindering modular determinants
/// over a deterministic sequence of 62-bit primes covering twice the
/// Hadamard bound.
fn crt_integer_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let bound = hadamard_bound(m);
    if Zero::is_zero(&bound) {
        return BigInt::zero();
    }
    let target: BigInt = &bound * 2 + 1;
    let mut primes: Vec<u64> = Vec::new();
    let mut prod = BigInt::one();
    let mut candidate = (1u64 << 62) - 1;
    while prod < target {
        let p = prev_prime(candidate);
        prod *= BigInt::from(p);
        primes.push(p);
        candidate = p - 1;
    }

    // i128 fast path: Macaulay entries are small after clearing.
    let small: Option<Vec<Vec<i128>>> = m
        .iter()
        .map(|row| row.iter().map(|e| e.to_i128()).collect())
        .collect();

    let residues: Vec<u64> = primes
        .par_iter()
        .map(|&p| {
            let reduced: Vec<Vec<u64>> = match &small {
                Some(rows) => rows
                    .iter()
                    .map(|row| row.iter().map(|&v| reduce_i128(v, p)).collect())
                    .collect(),
                None => m
                    .iter()
                    .map(|row| row.iter().map(|v| reduce_bigint(v, p)).collect())
                    .collect(),
            };
            determinant_mod_p(reduced, p)
        })
        .collect();

    // incremental CRT, then center into (-P/2, P/2]
    let mut x = BigInt::from(residues[0]);
    let mut modulus = BigInt::from(primes[0]);
    for (&r, &p) in residues.iter().zip(primes.iter()).skip(1) {
        let x_mod = reduce_bigint(&x, p);
        let diff = (r + p - x_mod) % p;
        let inv = mod_inverse(reduce_bigint(&modulus, p), p);
        let t = mul_mod(diff, inv, p);
        x += &modulus * BigInt::from(t);
        modulus *= BigInt::from(p);
    }
    if &x * 2 > modulus {
        x -= &modulus;
    }
    x
}

fn reduce_i128(v: i128, p: u64) -> u64 {
    let r = v % p as i128;
    if r < 0 {
        (r + p as i128) as u64
    } else {
        r as u64
    }
}

fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    v.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Gaussian elimination determinant in `F_p`.
fn determinant_mod_p(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = m.len();
    let mut det = 1u64;
    for k in 0..n {
        let pivot_row = match (k..n).find(|&r| m[r][k] != 0) {
            Some(r) => r,
            None => return 0,
        };
        if pivot_row != k {
            m.swap(k, pivot_row);
            det = p - det;
        }
        let pivot = m[k][k];
        det = mul_mod(det, pivot, p);
        let inv = mod_inverse(pivot, p);
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_vals = &top[k];
        for row in rest.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let factor = mul_mod(row[k], inv, p);
            for j in k..n {
                let sub = mul_mod(factor, pivot_vals[j], p);
                row[j] = (row[j] + p - sub) % p;
            }
        }
    }
    det % p
}

fn prev_prime(mut candidate: u64) -> u64 {
    if candidate.is_multiple_of(2) {
        candidate -= 1;
    }
    while !is_prime_u64(candidate) {
        candidate -= 2;
    }
    candidate
}

/// Deterministic Miller-Rabin for u64 (the listed bases decide primality for
/// all 64-bit integers).
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse, scalar_int, RingContext};

    fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    fn scalar_matrix(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| scalar_int(v)).collect())
            .collect()
    }

    /// Independent oracle: determinant by cofactor expansion.
    fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = BigInt::zero();
        for j in 0..n {
            if Zero::is_zero(&m[0][j]) {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn identity_and_symbolic_two_by_two() {
        let id = scalar_matrix(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(determinant_scalar(&id), scalar_int(1));

        let ctx = RingContext::new(vec!["x"], vec!["a", "b", "c", "d"]).unwrap();
        let sym = vec![
            vec![parse("a", &ctx).unwrap(), parse("b", &ctx).unwrap()],
            vec![parse("c", &ctx).unwrap(), parse("d", &ctx).unwrap()],
        ];
        let det = determinant_fraction_free(sym).unwrap();
        assert_eq!(det, parse("a*d - b*c", &ctx).unwrap());
    }

    #[test]
    fn four_by_four_matches_cofactor_oracle() {
        let m = int_matrix(&[
            &[3, -1, 4, 1],
            &[5, 9, -2, 6],
            &[5, 3, 5, -8],
            &[9, -7, 9, 3],
        ]);
        let expected = cofactor_det(&m);
        assert_eq!(determinant_fraction_free(m.clone()), Some(expected));
    }

    #[test]
    fn zero_determinant_is_none() {
        let m = int_matrix(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant_fraction_free(m), None);
    }

    #[test]
    fn rational_rows_are_cleared() {
        let m = vec![
            vec![Scalar::new(1.into(), 2.into()), Scalar::new(1.into(), 3.into())],
            vec![Scalar::new(1.into(), 5.into()), Scalar::new(1.into(), 7.into())],
        ];
        // det = 1/14 - 1/15 = 1/210
        assert_eq!(determinant_scalar(&m), Scalar::new(1.into(), 210.into()));
    }

    #[test]
    fn crt_agrees_with_bareiss_on_random_matrices() {
        let mut state = 0x1234_5678_u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 33) % 41) as i64 - 20
        };
        for _ in 0..5 {
            let n = 20;
            let rows: Vec<Vec<BigInt>> = (0..n)
                .map(|_| (0..n).map(|_| BigInt::from(next())).collect())
                .collect();
            let bareiss = determinant_fraction_free(rows.clone()).unwrap_or_else(BigInt::zero);
            let crt = crt_integer_determinant(&rows);
            assert_eq!(bareiss, crt);
        }
    }

    #[test]
    fn prime_generator_yields_primes() {
        let p = prev_prime((1u64 << 62) - 1);
        assert!(is_prime_u64(p));
        assert!(p > 1 << 61);
        assert!(is_prime_u64(2305843009213693951)); // 2^61 - 1, Mersenne
        assert!(!is_prime_u64(2305843009213693953));
    }
}

//! Rank and membership modulo a large prime.
//!
//! These routines only ever act as a prefilter. A positive answer is always
//! re-derived exactly before anything is reported. A negative answer is
//! final only when [`modular_verdict_is_exact`] holds: every nonzero minor
//! of the matrices involved is then smaller than the prime in absolute value
//! (Hadamard's bound), so rank modulo the prime equals rank over the
//! rationals.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

use super::{ConstraintMatrix, IntVector};
use crate::error::{invalid, Result};

/// 2^61 - 1.
pub const DEFAULT_PRIME: u64 = (1 << 61) - 1;

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
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

/// Inverse of a nonzero residue modulo a prime.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n % b == 0 {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
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

/// Uniformly sampled candidate in `[lo, hi)`, advanced to the next prime.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R, lo: u64, hi: u64) -> u64 {
    loop {
        let mut n = rng.gen_range(lo..hi) | 1;
        while n < hi {
            if is_prime(n) {
                return n;
            }
            n += 2;
        }
    }
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x % BigInt::from(p);
    let r = if r < BigInt::zero() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

fn reduce_rows(rows: &[IntVector], p: u64) -> Vec<Vec<u64>> {
    rows.iter()
        .map(|r| r.entries().iter().map(|x| reduce(x, p)).collect())
        .collect()
}

/// In-place echelon form; returns the rank.
fn echelon(m: &mut [Vec<u64>], p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            for (x, y) in row.iter_mut().zip(pivot_row) {
                *x = sub_mod(*x, mul_mod(f, *y, p), p);
            }
        }
        r += 1;
    }
    r
}

/// Rank of `matrix` over `F_p`.
pub fn rank_mod_p(matrix: &ConstraintMatrix, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    matrix.width()?;
    let mut m = reduce_rows(matrix.rows(), p);
    Ok(echelon(&mut m, p))
}

/// Row-span membership over `F_p`.
pub fn span_member_mod_p(matrix: &ConstraintMatrix, target: &IntVector, p: u64) -> Result<bool> {
    let base = rank_mod_p(matrix, p)?;
    if let Some(w) = matrix.width()? {
        if w != target.len() {
            return Err(invalid("target length differs from row length"));
        }
    }
    let mut m = reduce_rows(matrix.rows(), p);
    m.push(target.entries().iter().map(|x| reduce(x, p)).collect());
    Ok(echelon(&mut m, p) == base)
}

/// True when every square minor of `rows` (any choice of rows and columns)
/// is below `p` in absolute value, by Hadamard's inequality applied to the
/// `width` largest row norms.
pub fn modular_verdict_is_exact(rows: &[IntVector], width: usize, p: u64) -> bool {
    let mut logs: Vec<f64> = rows
        .iter()
        .map(|r| {
            let sq: f64 = r.entries().iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY).powi(2)).sum();
            0.5 * sq.ln()
        })
        .filter(|l| *l > 0.0)
        .collect();
    logs.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = logs.iter().take(width).sum();
    // One unit of log-margin for rounding.
    total < (p as f64).ln() - 1.0
}

/// The bound above for the engine's matrices: 0/1 rows of length `k` plus one
/// candidate row with entries in {-1, 0, 1, 2} and norm at most `max(2, sqrt(k))`.
pub fn binary_rows_exact(k: usize, p: u64) -> bool {
    let kf = k as f64;
    let candidate = 2f64.max(kf.sqrt()).ln();
    candidate + (kf - 1.0) * 0.5 * kf.ln() < (p as f64).ln() - 1.0
}

/// Membership prefilter: `false` is final when the exactness bound holds,
/// `true` means "confirm exactly".
pub fn prefilter_member(matrix: &ConstraintMatrix, target: &IntVector) -> Result<Prefilter> {
    let hit = span_member_mod_p(matrix, target, DEFAULT_PRIME)?;
    if hit {
        return Ok(Prefilter::Candidate);
    }
    let mut all = matrix.rows().to_vec();
    all.push(target.clone());
    if modular_verdict_is_exact(&all, target.len(), DEFAULT_PRIME) {
        Ok(Prefilter::Excluded)
    } else {
        Ok(Prefilter::Candidate)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prefilter {
    /// Provably outside the rational span.
    Excluded,
    /// Needs exact confirmation.
    Candidate,
}

/// Kernel data for a 0/1 matrix given as bitmask rows, modulo [`DEFAULT_PRIME`].
///
/// `label_keys[i]` is row `i` of a basis matrix `N` of the right kernel of the
/// constraint rows. A vector `u` lies in the row span iff `Σ u_i · label_keys[i]`
/// vanishes, so `e_i`, `e_i - e_j` and `e_i + e_j` reduce to comparisons
/// between keys.
#[derive(Clone, Debug)]
pub struct MaskKernel {
    pub rank: usize,
    pub label_keys: Vec<Vec<u64>>,
}

impl MaskKernel {
    pub fn new(rows: &[u32], width: usize) -> Self {
        let p = DEFAULT_PRIME;
        let mut m: Vec<Vec<u64>> = rows
            .iter()
            .map(|&mask| (0..width).map(|i| u64::from((mask >> i) & 1)).collect())
            .collect();
        let rank = echelon(&mut m, p);
        m.truncate(rank);
        // Back-substitute to reduced form.
        let pivots: Vec<usize> = m
            .iter()
            .map(|row| row.iter().position(|&x| x != 0).expect("nonzero echelon row"))
            .collect();
        for i in (0..rank).rev() {
            let c = pivots[i];
            for j in 0..i {
                let f = m[j][c];
                if f == 0 {
                    continue;
                }
                for col in c..width {
                    let y = m[i][col];
                    m[j][col] = sub_mod(m[j][col], mul_mod(f, y, p), p);
                }
            }
        }
        let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
        let mut label_keys = vec![vec![0u64; free.len()]; width];
        for (t, &f) in free.iter().enumerate() {
            label_keys[f][t] = 1;
            for (i, &c) in pivots.iter().enumerate() {
                let v = m[i][f];
                if v != 0 {
                    label_keys[c][t] = p - v;
                }
            }
        }
        MaskKernel { rank, label_keys }
    }

    pub fn nullity(&self) -> usize {
        self.label_keys.first().map_or(0, Vec::len)
    }

    pub fn unit_in_span(&self, i: usize) -> bool {
        self.label_keys[i].iter().all(|&x| x == 0)
    }

    pub fn difference_in_span(&self, i: usize, j: usize) -> bool {
        self.label_keys[i] == self.label_keys[j]
    }

    pub fn sum_in_span(&self, i: usize, j: usize) -> bool {
        self.label_keys[i]
            .iter()
            .zip(&self.label_keys[j])
            .all(|(&a, &b)| add_mod(a, b, DEFAULT_PRIME) == 0)
    }

    pub fn mask_in_span(&self, mask: u32) -> bool {
        let n = self.nullity();
        let mut acc = vec![0u64; n];
        let mut bits = mask;
        while bits != 0 {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            for (a, &x) in acc.iter_mut().zip(&self.label_keys[i]) {
                *a = add_mod(*a, x, DEFAULT_PRIME);
            }
        }
        acc.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational_span_member;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        assert!(is_prime(DEFAULT_PRIME));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1_000_000_007 * 3));
        assert!(!is_prime(561));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_prime(&mut rng, 1 << 30, 1 << 40);
        assert!(p > 1 << 30 && is_prime(p));
    }

    #[test]
    fn bound_covers_engine_sizes() {
        assert!(binary_rows_exact(23, DEFAULT_PRIME));
        assert!(binary_rows_exact(25, DEFAULT_PRIME));
        assert!(!binary_rows_exact(26, DEFAULT_PRIME));
        let ones = vec![IntVector::from_i64s(&[1; 23]); 23];
        assert!(modular_verdict_is_exact(&ones, 23, DEFAULT_PRIME));
        let big = vec![IntVector::from_i64s(&[1000; 10]); 10];
        assert!(!modular_verdict_is_exact(&big, 10, DEFAULT_PRIME));
    }

    #[test]
    fn prefilter_agrees_with_exact() {
        let m = ConstraintMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let hit = IntVector::from_i64s(&[1, 0, -1]);
        let miss = IntVector::from_i64s(&[1, 0, 0]);
        assert_eq!(prefilter_member(&m, &hit).unwrap(), Prefilter::Candidate);
        assert_eq!(prefilter_member(&m, &miss).unwrap(), Prefilter::Excluded);
        assert!(rational_span_member(&m, &miss).unwrap().is_none());
    }

    #[test]
    fn mask_kernel_matches_exact_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let k = rng.gen_range(2..9);
            let m = rng.gen_range(0..7);
            let rows: Vec<u32> = (0..m).map(|_| rng.gen_range(0..1u32 << k)).collect();
            let kernel = MaskKernel::new(&rows, k);
            let cm = ConstraintMatrix::new(rows.iter().map(|&r| IntVector::from_mask(r, k)).collect());
            assert_eq!(kernel.rank, cm.rank().unwrap());
            for i in 0..k {
                let exact = rational_span_member(&cm, &IntVector::unit(k, i)).unwrap().is_some();
                assert_eq!(kernel.unit_in_span(i), exact);
                for j in 0..k {
                    let mut d = vec![0i64; k];
                    d[i] += 1;
                    d[j] -= 1;
                    let exact = rational_span_member(&cm, &IntVector::from_i64s(&d)).unwrap().is_some();
                    assert_eq!(kernel.difference_in_span(i, j), exact);
                    let mut s = vec![0i64; k];
                    s[i] += 1;
                    s[j] += 1;
                    let exact = rational_span_member(&cm, &IntVector::from_i64s(&s)).unwrap().is_some();
                    assert_eq!(kernel.sum_in_span(i, j), exact);
                }
            }
            let w = rng.gen_range(0..1u32 << k);
            let exact = rational_span_member(&cm, &IntVector::from_mask(w, k)).unwrap().is_some();
            assert_eq!(kernel.mask_in_span(w), exact);
        }
    }
}

//! Exact coefficients of
//! `F_k = (x_1 + x_2) · Π_{i=3..k} (x_1 + x_2 - x_i) · V_k`, where `V_k` is a
//! Vandermonde product.
//!
//! The two orientations of `V_k` differ by the global sign `(-1)^{k(k-1)/2}`.
//! [`Orientation::Descending`] is `Π_{i>j} (x_i - x_j)`;
//! [`Orientation::Ascending`] is `Π_{i<j} (x_i - x_j)` and is the convention
//! in which [`REFERENCE_TABLE`] is stated, so it is the default.
//!
//! The fast path never expands `F_k`. The Vandermonde factor contributes
//! `sign(σ) · Π x_i^{σ(i)}` for every permutation `σ` of `0..k`, so a target
//! monomial only needs the terms of the first two factors whose residual
//! exponent vector is such a permutation. Those terms are indexed by the set
//! `S ⊆ {3..k}` of factors contributing `-x_i` and by the binomial split of the
//! remaining power of `(x_1 + x_2)`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};

pub const MIN_K: usize = 3;
pub const MAX_K: usize = 30;
/// Largest `k` the brute-force expansion accepts.
pub const BRUTE_FORCE_MAX_K: usize = 8;

/// Reference values: coefficient of `x_1^{k-1} x_2 x_3^2 ... x_k^{k-1}` in `F_k`.
pub const REFERENCE_TABLE: [(usize, i64); 14] = [
    (10, 44),
    (11, 54),
    (12, -65),
    (13, -77),
    (14, 90),
    (15, 104),
    (16, -119),
    (17, -135),
    (18, 152),
    (19, 170),
    (20, -189),
    (21, -209),
    (22, 230),
    (23, 252),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Orientation {
    #[default]
    Ascending,
    Descending,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Ascending => "ascending",
            Orientation::Descending => "descending",
        }
    }

    /// Sign relating this orientation to `Π_{i>j} (x_i - x_j)`.
    pub fn sign(self, k: usize) -> i128 {
        match self {
            Orientation::Descending => 1,
            Orientation::Ascending if (k * (k - 1) / 2) % 2 == 1 => -1,
            Orientation::Ascending => 1,
        }
    }
}

impl std::str::FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ascending" => Ok(Orientation::Ascending),
            "descending" => Ok(Orientation::Descending),
            other => Err(invalid(format!("unknown orientation `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    /// `(k-1, 1, 2, 3, ..., k-1)`.
    pub fn target(k: usize) -> Self {
        let mut e: Vec<u32> = (0..k as u32).collect();
        e[0] = k as u32 - 1;
        e[1] = 1;
        ExponentVector(e)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }
}

/// Total degree of `F_k`: `(k - 1)(k + 2) / 2`.
pub fn fk_degree(k: usize) -> u64 {
    ((k - 1) * (k + 2) / 2) as u64
}

fn check_k(k: usize) -> Result<()> {
    if !(MIN_K..=MAX_K).contains(&k) {
        return Err(invalid(format!("k = {k} outside the supported range {MIN_K}..={MAX_K}")));
    }
    Ok(())
}

/// Coefficient of the target monomial in `F_k`, ascending orientation.
pub fn fk_target_coefficient(k: usize) -> Result<BigInt> {
    fk_target_coefficient_with(k, Orientation::Ascending)
}

pub fn fk_target_coefficient_with(k: usize, orientation: Orientation) -> Result<BigInt> {
    check_k(k)?;
    let target = ExponentVector::target(k);
    assert_eq!(target.total_degree(), fk_degree(k));
    assert!(target.0.iter().all(|&t| (t as usize) < k));
    fk_coefficient(k, &target, orientation)
}

/// `|c| = (k+1)(k-2)/2`, positive iff `k ≡ 2, 3 (mod 4)`, ascending orientation.
pub fn closed_form_guess(k: usize) -> BigInt {
    let magnitude = BigInt::from((k + 1) * (k - 2) / 2);
    if matches!(k % 4, 2 | 3) {
        magnitude
    } else {
        -magnitude
    }
}

/// Coefficient of an arbitrary monomial in `F_k` via the Vandermonde route.
pub fn fk_coefficient(k: usize, target: &ExponentVector, orientation: Orientation) -> Result<BigInt> {
    check_k(k)?;
    if target.0.len() != k {
        return Err(invalid(format!("exponent vector has length {}, expected {k}", target.0.len())));
    }
    if target.total_degree() != fk_degree(k) {
        return Ok(BigInt::zero());
    }
    let t = &target.0;
    let rest = k - 2;
    // Binomials C(n, a) for n <= k - 1.
    let binom: Vec<Vec<i128>> = (0..k)
        .map(|n| {
            let mut row = vec![1i128; n + 1];
            for a in 1..n {
                row[a] = row[a - 1] * (n - a + 1) as i128 / a as i128;
            }
            row
        })
        .collect();

    let total: i128 = (0u32..1u32 << rest)
        .into_par_iter()
        .with_min_len(1 << 12)
        .map(|subset| {
            // Exponents of x_3..x_k from the chosen -x_i terms.
            let mut used = 0u64;
            for i in 0..rest {
                let e = t[i + 2] as i64 - ((subset >> i) & 1) as i64;
                if e < 0 || e as usize >= k || used >> e & 1 == 1 {
                    return 0;
                }
                used |= 1 << e;
            }
            let s = subset.count_ones() as usize;
            let n = k - 1 - s;
            let mut acc = 0i128;
            for a in 0..=n {
                let (e1, e2) = (t[0] as i64 - a as i64, t[1] as i64 - (n - a) as i64);
                if e1 < 0 || e2 < 0 || e1 == e2 {
                    continue;
                }
                let (e1, e2) = (e1 as usize, e2 as usize);
                if e1 >= k || e2 >= k || used >> e1 & 1 == 1 || used >> e2 & 1 == 1 {
                    continue;
                }
                let mut perm: Vec<usize> = Vec::with_capacity(k);
                perm.push(e1);
                perm.push(e2);
                perm.extend((0..rest).map(|i| t[i + 2] as usize - ((subset >> i) & 1) as usize));
                let sign = if permutation_is_odd(&perm) { -1 } else { 1 };
                let sub_sign = if s % 2 == 1 { -1 } else { 1 };
                acc += sign * sub_sign * binom[n][a];
            }
            acc
        })
        .sum();
    Ok(BigInt::from(orientation.sign(k) * total))
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

type Poly = HashMap<Vec<u32>, BigInt>;

fn multiply_pruned(p: &Poly, factor: &[(usize, i64)], k: usize, cap: &[u32]) -> Poly {
    let mut out: Poly = HashMap::with_capacity(p.len() * 2);
    for (mono, c) in p {
        for &(var, coeff) in factor {
            if mono[var] + 1 > cap[var] {
                continue;
            }
            let mut m = mono.clone();
            m[var] += 1;
            let e = out.entry(m).or_insert_with(BigInt::zero);
            *e += c * coeff;
        }
    }
    out.retain(|m, c| m.len() == k && !c.is_zero());
    out
}

/// Coefficient by explicit sparse expansion of all factors, discarding any
/// monomial whose exponent of some variable already exceeds the target.
pub fn fk_coefficient_bruteforce(k: usize, target: &ExponentVector, orientation: Orientation) -> Result<BigInt> {
    if k > BRUTE_FORCE_MAX_K {
        return Err(Error::ResourceGuard(format!(
            "brute-force expansion is limited to k <= {BRUTE_FORCE_MAX_K}, got {k}"
        )));
    }
    if k < 2 || target.0.len() != k {
        return Err(invalid("exponent vector length must equal k >= 2"));
    }
    let cap = &target.0;
    let mut factors: Vec<Vec<(usize, i64)>> = vec![vec![(0, 1), (1, 1)]];
    for i in 2..k {
        factors.push(vec![(0, 1), (1, 1), (i, -1)]);
    }
    for i in 0..k {
        for j in 0..i {
            factors.push(match orientation {
                Orientation::Descending => vec![(i, 1), (j, -1)],
                Orientation::Ascending => vec![(j, 1), (i, -1)],
            });
        }
    }
    let mut poly: Poly = HashMap::new();
    poly.insert(vec![0; k], BigInt::from(1));
    for f in &factors {
        poly = multiply_pruned(&poly, f, k, cap);
    }
    Ok(poly.get(&target.0).cloned().unwrap_or_else(BigInt::zero))
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs.
pub fn factorize(n: &BigInt) -> Vec<(u64, u32)> {
    let mut m = n.abs().to_u64().unwrap_or(0);
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Human-readable factorization such as `-5 · 13` or `2^2 · 11`.
pub fn format_factorization(n: &BigInt) -> String {
    if n.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = factorize(n)
        .into_iter()
        .map(|(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect();
    let body = if parts.is_empty() { "1".into() } else { parts.join(" · ") };
    if n.is_negative() {
        format!("-{body}")
    } else {
        body
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub k: usize,
    pub computed: BigInt,
    /// Same coefficient with the descending orientation.
    pub descending: BigInt,
    pub expected: BigInt,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.computed == self.expected
    }

    /// Primes `p` for which the coefficient vanishes modulo `p`.
    pub fn dividing_primes(&self) -> Vec<u64> {
        factorize(&self.computed).into_iter().map(|(p, _)| p).collect()
    }
}

#[derive(Clone, Debug)]
pub struct TableReport {
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn all_match(&self) -> bool {
        self.rows.iter().all(TableRow::matches)
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>3}  {:>6}  {:<16}  {:>10}  {:>8}  status",
            "k", "coeff", "factorization", "descending", "expected"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3}  {:>6}  {:<16}  {:>10}  {:>8}  {}",
                r.k,
                r.computed,
                format_factorization(&r.computed),
                r.descending,
                r.expected,
                if r.matches() { "ok" } else { "MISMATCH" }
            )?;
        }
        Ok(())
    }
}

pub fn verify_table(k_min: usize, k_max: usize) -> Result<TableReport> {
    verify_table_against(k_min, k_max, &REFERENCE_TABLE)
}

/// Compares computed coefficients for `k_min..=k_max` with `reference`.
pub fn verify_table_against(k_min: usize, k_max: usize, reference: &[(usize, i64)]) -> Result<TableReport> {
    if !(10 <= k_min && k_min <= k_max && k_max <= 23) {
        return Err(invalid(format!("table range {k_min}..={k_max} must lie within 10..=23")));
    }
    let rows = (k_min..=k_max)
        .map(|k| {
            let expected = reference
                .iter()
                .find(|(rk, _)| *rk == k)
                .map(|&(_, v)| BigInt::from(v))
                .ok_or_else(|| invalid(format!("no reference value for k = {k}")))?;
            let computed = fk_target_coefficient(k)?;
            let descending = &computed * BigInt::from(Orientation::Ascending.sign(k));
            Ok(TableRow {
                k,
                computed,
                descending,
                expected,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_shape() {
        let t = ExponentVector::target(5);
        assert_eq!(t.0, vec![4, 1, 2, 3, 4]);
        for k in MIN_K..=MAX_K {
            assert_eq!(ExponentVector::target(k).total_degree(), fk_degree(k));
        }
    }

    #[test]
    fn table_spot_values() {
        assert_eq!(fk_target_coefficient(10).unwrap(), BigInt::from(44));
        assert_eq!(fk_target_coefficient(12).unwrap(), BigInt::from(-65));
        assert_eq!(fk_target_coefficient(23).unwrap(), BigInt::from(252));
    }

    #[test]
    fn range_guards() {
        assert!(fk_target_coefficient(2).is_err());
        assert!(fk_target_coefficient(31).is_err());
        assert!(matches!(
            fk_coefficient_bruteforce(9, &ExponentVector::target(9), Orientation::Descending),
            Err(Error::ResourceGuard(_))
        ));
    }

    #[test]
    fn repeated_exponents_vanish_in_pure_vandermonde() {
        // Degree mismatch for F_3 as well, so both routes give zero.
        let t = ExponentVector(vec![1, 1, 1]);
        for o in [Orientation::Ascending, Orientation::Descending] {
            assert_eq!(fk_coefficient_bruteforce(3, &t, o).unwrap(), BigInt::zero());
            assert_eq!(fk_coefficient(3, &t, o).unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn descending_values_from_symbolic_expansion() {
        // Full symbolic expansion of the product as written with i > j.
        for (k, v) in [(4, -5), (5, -9), (6, -14)] {
            let c = fk_target_coefficient_with(k, Orientation::Descending).unwrap();
            assert_eq!(c, BigInt::from(v));
        }
    }

    #[test]
    fn orientations_differ_by_global_sign() {
        for k in 3..=12 {
            let a = fk_target_coefficient_with(k, Orientation::Ascending).unwrap();
            let d = fk_target_coefficient_with(k, Orientation::Descending).unwrap();
            assert_eq!(a, d * BigInt::from(Orientation::Ascending.sign(k)));
        }
    }

    #[test]
    fn factorization_format() {
        assert_eq!(format_factorization(&BigInt::from(44)), "2^2 · 11");
        assert_eq!(format_factorization(&BigInt::from(-65)), "-5 · 13");
        assert_eq!(format_factorization(&BigInt::from(90)), "2 · 3^2 · 5");
    }

    #[test]
    fn corrupted_reference_detected() {
        let mut bad = REFERENCE_TABLE;
        bad[0].1 = 45;
        let report = verify_table_against(10, 10, &bad).unwrap();
        assert!(!report.all_match());
        assert!(verify_table(10, 10).unwrap().all_match());
        assert!(verify_table(9, 12).is_err());
    }

    #[test]
    fn single_row_k14() {
        let r = verify_table(14, 14).unwrap();
        assert_eq!(r.rows[0].computed, BigInt::from(90));
        assert_eq!(r.rows[0].dividing_primes(), vec![2, 3, 5]);
    }
}

//! Exact rank and span-membership over the rationals and over the integer
//! lattice.
//!
//! Nothing in this module touches floating point. Rank uses fraction-free
//! (Bareiss) elimination on big integers, rational membership uses Gaussian
//! elimination over `BigRational`, and lattice membership uses a Hermite-style
//! echelon form with a tracked unimodular transform (see [`hnf`]). The
//! modular routines in [`modp`] are a prefilter only.

pub mod hnf;
pub mod modp;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{invalid, Result};

/// An integer row or candidate vector over the `k` labels of a run.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn from_i64s(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(len: usize) -> Self {
        IntVector(vec![BigInt::zero(); len])
    }

    /// `e_i` with a zero-based index.
    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = BigInt::one();
        v
    }

    /// Builds a 0/1 vector from the low `len` bits of `mask` (bit `i` is label `i + 1`).
    pub fn from_mask(mask: u32, len: usize) -> Self {
        IntVector(
            (0..len)
                .map(|i| BigInt::from((mask >> i) & 1))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// Entries as machine integers, when they all fit.
    pub fn to_i64s(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| i64::try_from(x).ok()).collect()
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// A list of integer rows, each a relation assumed to hold along a branch.
#[derive(Debug, Default)]
pub struct ConstraintMatrix {
    rows: Vec<IntVector>,
    cached_rank: OnceLock<usize>,
}

impl Clone for ConstraintMatrix {
    fn clone(&self) -> Self {
        let cached_rank = OnceLock::new();
        if let Some(&r) = self.cached_rank.get() {
            let _ = cached_rank.set(r);
        }
        ConstraintMatrix {
            rows: self.rows.clone(),
            cached_rank,
        }
    }
}

impl PartialEq for ConstraintMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}

impl Eq for ConstraintMatrix {}

impl ConstraintMatrix {
    pub fn new(rows: Vec<IntVector>) -> Self {
        ConstraintMatrix {
            rows,
            cached_rank: OnceLock::new(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::new(rows.iter().map(|r| IntVector::from_i64s(r)).collect())
    }

    pub fn rows(&self) -> &[IntVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains_row(&self, row: &IntVector) -> bool {
        self.rows.contains(row)
    }

    /// Appends a row and drops the cached rank.
    pub fn push(&mut self, row: IntVector) {
        self.rows.push(row);
        self.cached_rank = OnceLock::new();
    }

    /// Common row length, `None` for an empty matrix.
    pub fn width(&self) -> Result<Option<usize>> {
        let Some(first) = self.rows.first() else {
            return Ok(None);
        };
        let w = first.len();
        if let Some((i, r)) = self.rows.iter().enumerate().find(|(_, r)| r.len() != w) {
            return Err(invalid(format!(
                "ragged matrix: row {i} has length {} but row 0 has length {w}",
                r.len()
            )));
        }
        Ok(Some(w))
    }

    /// Exact rank over the rationals; memoized.
    pub fn rank(&self) -> Result<usize> {
        if let Some(&r) = self.cached_rank.get() {
            return Ok(r);
        }
        self.width()?;
        let r = bareiss_rank(self.rows.iter().map(|r| r.0.clone()).collect());
        let _ = self.cached_rank.set(r);
        Ok(r)
    }
}

/// Exact rank of `matrix` over the rationals.
pub fn rank(matrix: &ConstraintMatrix) -> Result<usize> {
    matrix.rank()
}

/// Fraction-free elimination. Every intermediate entry is a minor of the
/// input, so the division by the previous pivot is exact.
pub(crate) fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Coefficients expressing a target vector as a combination of matrix rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanWitness {
    /// One multiplier per row of the matrix the witness was computed against.
    pub multipliers: Vec<BigRational>,
    /// Least positive `d` with `d * multipliers[r]` integral for every `r`.
    pub denominator: BigInt,
    /// Present only for lattice membership; then `denominator == 1`.
    pub integer_multipliers: Option<Vec<BigInt>>,
}

impl SpanWitness {
    pub(crate) fn from_rationals(multipliers: Vec<BigRational>) -> Self {
        let denominator = multipliers
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        SpanWitness {
            multipliers,
            denominator,
            integer_multipliers: None,
        }
    }

    pub(crate) fn from_integers(multipliers: Vec<BigInt>) -> Self {
        SpanWitness {
            multipliers: multipliers
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
            denominator: BigInt::one(),
            integer_multipliers: Some(multipliers),
        }
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    /// `Σ multipliers_r · row_r`, computed exactly.
    pub fn recombine(&self, matrix: &ConstraintMatrix, width: usize) -> Vec<BigRational> {
        recombine(&self.multipliers, matrix.rows(), width)
    }

    /// True iff the witness reproduces `target` exactly from `matrix`.
    pub fn reproduces(&self, matrix: &ConstraintMatrix, target: &IntVector) -> bool {
        if self.multipliers.len() != matrix.len() {
            return false;
        }
        let sum = self.recombine(matrix, target.len());
        let rational_ok = sum
            .iter()
            .zip(target.entries())
            .all(|(s, t)| s == &BigRational::from_integer(t.clone()));
        let integer_ok = match &self.integer_multipliers {
            None => true,
            Some(ints) => {
                self.denominator.is_one()
                    && ints.len() == matrix.len()
                    && ints
                        .iter()
                        .zip(&self.multipliers)
                        .all(|(a, q)| &BigRational::from_integer(a.clone()) == q)
            }
        };
        rational_ok && integer_ok
    }
}

pub(crate) fn recombine(
    multipliers: &[BigRational],
    rows: &[IntVector],
    width: usize,
) -> Vec<BigRational> {
    let mut sum = vec![BigRational::zero(); width];
    for (q, row) in multipliers.iter().zip(rows) {
        if q.is_zero() {
            continue;
        }
        for (s, x) in sum.iter_mut().zip(row.entries()) {
            if !x.is_zero() {
                *s += q * BigRational::from_integer(x.clone());
            }
        }
    }
    sum
}

fn check_target(matrix: &ConstraintMatrix, target: &IntVector) -> Result<()> {
    if let Some(w) = matrix.width()? {
        if w != target.len() {
            return Err(invalid(format!(
                "target has length {} but matrix rows have length {w}",
                target.len()
            )));
        }
    }
    Ok(())
}

/// Rational row-span membership with a materialized witness.
///
/// Free multipliers are set to zero, so the witness is the particular
/// solution of the eliminated system.
pub fn rational_span_member(
    matrix: &ConstraintMatrix,
    target: &IntVector,
) -> Result<Option<SpanWitness>> {
    check_target(matrix, target)?;
    let m = matrix.len();
    if m == 0 {
        return Ok(target.is_zero().then(|| SpanWitness::from_rationals(vec![])));
    }
    let k = target.len();
    // Unknowns are the m row multipliers; one equation per column of the matrix.
    let mut sys: Vec<Vec<BigRational>> = (0..k)
        .map(|c| {
            let mut eq: Vec<BigRational> = matrix
                .rows()
                .iter()
                .map(|r| BigRational::from_integer(r.entries()[c].clone()))
                .collect();
            eq.push(BigRational::from_integer(target.entries()[c].clone()));
            eq
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..m {
        let Some(p) = (row..k).find(|&i| !sys[i][col].is_zero()) else {
            continue;
        };
        sys.swap(row, p);
        let inv = sys[row][col].recip();
        for x in sys[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = sys[row].clone();
        for (i, eq) in sys.iter_mut().enumerate() {
            if i == row || eq[col].is_zero() {
                continue;
            }
            let f = eq[col].clone();
            for (x, p) in eq.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == k {
            break;
        }
    }
    if sys[row..].iter().any(|eq| !eq[m].is_zero()) {
        return Ok(None);
    }
    let mut multipliers = vec![BigRational::zero(); m];
    for (i, &col) in pivots.iter().enumerate() {
        multipliers[col] = sys[i][m].clone();
    }
    let witness = SpanWitness::from_rationals(multipliers);
    debug_assert!(witness.reproduces(matrix, target));
    Ok(Some(witness))
}

/// Integer-lattice membership: `target = Σ λ_r row_r` with every `λ_r ∈ Z`.
///
/// When the rational particular solution is already integral it is reused,
/// which keeps witnesses small; otherwise the lattice solver decides.
pub fn integer_span_member(
    matrix: &ConstraintMatrix,
    target: &IntVector,
) -> Result<Option<SpanWitness>> {
    let Some(rational) = rational_span_member(matrix, target)? else {
        return Ok(None);
    };
    if rational.is_integral() {
        let ints = rational
            .multipliers
            .iter()
            .map(|q| q.to_integer())
            .collect();
        return Ok(Some(SpanWitness::from_integers(ints)));
    }
    let rows: Vec<Vec<BigInt>> = matrix.rows().iter().map(|r| r.0.clone()).collect();
    Ok(hnf::lattice_solve(&rows, target.entries()).map(|ints| {
        let w = SpanWitness::from_integers(ints);
        debug_assert!(w.reproduces(matrix, target));
        w
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: &[&[i64]]) -> ConstraintMatrix {
        ConstraintMatrix::from_i64_rows(rows)
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rank_small_cases() {
        assert_eq!(rank(&cm(&[])).unwrap(), 0);
        assert_eq!(rank(&cm(&[&[1, 1, 0], &[1, 1, 0]])).unwrap(), 1);
        assert_eq!(rank(&cm(&[&[1, 1, 0], &[0, 1, 1]])).unwrap(), 2);
        assert_eq!(rank(&cm(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]])).unwrap(), 3);
        assert_eq!(rank(&cm(&[&[0, 0, 0]])).unwrap(), 0);
    }

    #[test]
    fn ragged_rows_rejected() {
        let m = cm(&[&[1, 1, 0], &[1, 0]]);
        assert!(matches!(rank(&m), Err(crate::Error::InvalidInput(_))));
    }

    #[test]
    fn length_mismatch_rejected() {
        let m = cm(&[&[1, 1, 0]]);
        let u = IntVector::from_i64s(&[1, 0]);
        assert!(rational_span_member(&m, &u).is_err());
        assert!(integer_span_member(&m, &u).is_err());
    }

    #[test]
    fn rational_membership_examples() {
        let m = cm(&[&[1, 1, 0], &[0, 1, 1]]);
        let w = rational_span_member(&m, &IntVector::from_i64s(&[1, 0, -1]))
            .unwrap()
            .unwrap();
        assert_eq!(w.multipliers, vec![q(1, 1), q(-1, 1)]);
        assert_eq!(w.denominator, BigInt::one());

        let single = cm(&[&[1, 1, 0]]);
        assert!(rational_span_member(&single, &IntVector::from_i64s(&[1, 0, 0]))
            .unwrap()
            .is_none());

        let tri = cm(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        let w = rational_span_member(&tri, &IntVector::from_i64s(&[1, 0, 0]))
            .unwrap()
            .unwrap();
        assert_eq!(w.multipliers, vec![q(1, 2), q(1, 2), q(-1, 2)]);
        assert_eq!(w.denominator, BigInt::from(2));
    }

    #[test]
    fn integer_membership_examples() {
        let m = cm(&[&[1, 1, 0], &[0, 1, 1]]);
        let w = integer_span_member(&m, &IntVector::from_i64s(&[1, 0, -1]))
            .unwrap()
            .unwrap();
        assert_eq!(
            w.integer_multipliers,
            Some(vec![BigInt::from(1), BigInt::from(-1)])
        );

        let tri = cm(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]);
        assert!(integer_span_member(&tri, &IntVector::from_i64s(&[1, 0, 0]))
            .unwrap()
            .is_none());

        let w = integer_span_member(&tri, &IntVector::zeros(3)).unwrap().unwrap();
        assert!(w.integer_multipliers.unwrap().iter().all(Zero::is_zero));
        let w = integer_span_member(&cm(&[]), &IntVector::zeros(4)).unwrap().unwrap();
        assert!(w.multipliers.is_empty());
    }

    #[test]
    fn lattice_needs_hnf_when_particular_solution_is_fractional() {
        // (2,0) and (3,0) are dependent; the particular solution of (1,0)
        // is 1/2 on the first row, but -1*(2,0) + 1*(3,0) is integral.
        let m = cm(&[&[2, 0], &[3, 0]]);
        let u = IntVector::from_i64s(&[1, 0]);
        let rat = rational_span_member(&m, &u).unwrap().unwrap();
        assert_eq!(rat.denominator, BigInt::from(2));
        let int = integer_span_member(&m, &u).unwrap().unwrap();
        assert!(int.is_integral());
        assert!(int.reproduces(&m, &u));
    }

    #[test]
    fn corrupted_witness_does_not_reproduce() {
        let m = cm(&[&[1, 1, 0], &[0, 1, 1]]);
        let u = IntVector::from_i64s(&[1, 0, -1]);
        let mut w = rational_span_member(&m, &u).unwrap().unwrap();
        w.multipliers[1] = q(1, 1);
        assert!(!w.reproduces(&m, &u));
    }
}

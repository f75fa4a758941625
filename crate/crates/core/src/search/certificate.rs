//! Terminal certificates: linear consequences of a branch's relations that
//! contradict the hypotheses on `A`.
//!
//! Candidates are tried in a fixed order: `e_i`; `e_i - e_j` for `i < j`;
//! `e_i + e_j` for `i <= j` (no-inverse mode only); then every forbidden
//! compression vector in list order. The first candidate in the span wins.

use std::fmt;

use num_bigint::BigInt;

use super::config::{Arith, Mode, ModeConfig};
use super::node::SearchNode;
use crate::compression::InitialCons;
use crate::error::Result;
use crate::linalg::modp::{binary_rows_exact, MaskKernel, DEFAULT_PRIME};
use crate::linalg::{integer_span_member, rational_span_member, ConstraintMatrix, IntVector, SpanWitness};

/// Labels are one-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    /// `a_i = 0`.
    ZeroElement(usize),
    /// `a_i = a_j`.
    Equality(usize, usize),
    /// `a_i = -a_j`; `i == j` means `2 a_i = 0`.
    InversePair(usize, usize),
    /// A block known to be non-zero-sum sums to zero.
    Compression(IntVector),
}

impl CertificateKind {
    pub fn tag(&self) -> &'static str {
        match self {
            CertificateKind::ZeroElement(_) => "zero_element",
            CertificateKind::Equality(..) => "equality",
            CertificateKind::InversePair(..) => "inverse_pair",
            CertificateKind::Compression(_) => "compression",
        }
    }

    pub fn labels(&self) -> Vec<usize> {
        match self {
            CertificateKind::ZeroElement(i) => vec![*i],
            CertificateKind::Equality(i, j) | CertificateKind::InversePair(i, j) => vec![*i, *j],
            CertificateKind::Compression(_) => vec![],
        }
    }

    /// The vector whose membership in the row span is the contradiction.
    pub fn target(&self, k: usize) -> IntVector {
        let mut v = vec![0i64; k];
        match self {
            CertificateKind::ZeroElement(i) => v[i - 1] = 1,
            CertificateKind::Equality(i, j) => {
                v[i - 1] += 1;
                v[j - 1] -= 1;
            }
            CertificateKind::InversePair(i, j) => {
                v[i - 1] += 1;
                v[j - 1] += 1;
            }
            CertificateKind::Compression(w) => return w.clone(),
        }
        IntVector::from_i64s(&v)
    }
}

impl fmt::Display for CertificateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateKind::ZeroElement(i) => write!(f, "zero_element({i})"),
            CertificateKind::Equality(i, j) => write!(f, "equality({i},{j})"),
            CertificateKind::InversePair(i, j) => write!(f, "inverse_pair({i},{j})"),
            CertificateKind::Compression(w) => write!(f, "compression{w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub target: IntVector,
    /// Multipliers over all rows of the node, seeds included.
    pub witness: SpanWitness,
}

/// Upper bound on candidates examined per node.
pub fn candidate_count(k: usize, mode: Mode, initial_cons: &InitialCons) -> usize {
    let inverse = if mode == Mode::ZeroSumNoInverse { k * (k + 1) / 2 } else { 0 };
    k + k * (k - 1) / 2 + inverse + initial_cons.len()
}

fn candidates(k: usize, mode: Mode, initial_cons: &InitialCons) -> impl Iterator<Item = CertificateKind> + '_ {
    let zero = (1..=k).map(CertificateKind::ZeroElement);
    let eq = (1..=k).flat_map(move |i| (i + 1..=k).map(move |j| CertificateKind::Equality(i, j)));
    let inv = (mode == Mode::ZeroSumNoInverse)
        .then(|| (1..=k).flat_map(move |i| (i..=k).map(move |j| CertificateKind::InversePair(i, j))))
        .into_iter()
        .flatten();
    let comp = initial_cons
        .masks()
        .iter()
        .map(move |&m| CertificateKind::Compression(IntVector::from_mask(m, k)));
    zero.chain(eq).chain(inv).chain(comp)
}

/// Exact witness for `target`, or `None` if it is outside the span (or, in
/// integer mode, outside the lattice).
///
/// In rational mode a fractional witness is replaced by an integral one when
/// the target lies in the lattice, so the recorded denominator is 1 exactly
/// when the relation holds in every abelian group.
pub fn exact_witness(matrix: &ConstraintMatrix, target: &IntVector, arith: Arith) -> Result<Option<SpanWitness>> {
    match arith {
        Arith::Integer => integer_span_member(matrix, target),
        Arith::Rational => {
            let Some(w) = rational_span_member(matrix, target)? else {
                return Ok(None);
            };
            if w.is_integral() {
                return Ok(Some(w));
            }
            Ok(Some(integer_span_member(matrix, target)?.unwrap_or(w)))
        }
    }
}

/// Fast certificate search: a kernel modulo a 61-bit prime screens every
/// candidate and each hit is confirmed by exact arithmetic.
pub fn check_certificates(
    node: &SearchNode,
    initial_cons: &InitialCons,
    config: &ModeConfig,
) -> Result<Option<Certificate>> {
    let k = config.k;
    if !binary_rows_exact(k, DEFAULT_PRIME) {
        return check_certificates_exact(node, initial_cons, config);
    }
    let kernel = MaskKernel::new(&node.rows, k);
    let mut matrix: Option<ConstraintMatrix> = None;
    for kind in candidates(k, config.mode, initial_cons) {
        let hit = match &kind {
            CertificateKind::ZeroElement(i) => kernel.unit_in_span(i - 1),
            CertificateKind::Equality(i, j) => kernel.difference_in_span(i - 1, j - 1),
            CertificateKind::InversePair(i, j) => kernel.sum_in_span(i - 1, j - 1),
            CertificateKind::Compression(w) => kernel.mask_in_span(binary_mask(w)),
        };
        if !hit {
            continue;
        }
        let matrix = matrix.get_or_insert_with(|| node.constraints());
        let target = kind.target(k);
        if let Some(witness) = exact_witness(matrix, &target, config.arith)? {
            return Ok(Some(Certificate { kind, target, witness }));
        }
    }
    Ok(None)
}

fn binary_mask(w: &IntVector) -> u32 {
    w.entries()
        .iter()
        .enumerate()
        .filter(|(_, x)| **x == BigInt::from(1))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// Reference path: exact membership for every candidate, no prefilter.
pub fn check_certificates_exact(
    node: &SearchNode,
    initial_cons: &InitialCons,
    config: &ModeConfig,
) -> Result<Option<Certificate>> {
    let matrix = node.constraints();
    for kind in candidates(config.k, config.mode, initial_cons) {
        let target = kind.target(config.k);
        if let Some(witness) = exact_witness(&matrix, &target, config.arith)? {
            return Ok(Some(Certificate { kind, target, witness }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn node(k: usize, rows: &[u32]) -> SearchNode {
        SearchNode {
            rows: rows.to_vec(),
            ..SearchNode::root(k, vec![])
        }
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn worked_example_equality() {
        let cfg = ModeConfig::new(3, Mode::General);
        let c = check_certificates(&node(3, &[0b011, 0b110]), &InitialCons::empty(3), &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(c.kind, CertificateKind::Equality(1, 3));
        assert_eq!(c.witness.multipliers, vec![q(1, 1), q(-1, 1)]);
    }

    #[test]
    fn zero_element_from_difference() {
        let cfg = ModeConfig::new(3, Mode::General);
        let c = check_certificates(&node(3, &[0b111, 0b110]), &InitialCons::empty(3), &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(c.kind, CertificateKind::ZeroElement(1));
        assert_eq!(c.witness.multipliers, vec![q(1, 1), q(-1, 1)]);
    }

    #[test]
    fn rational_integer_divergence() {
        let n = node(3, &[0b011, 0b101, 0b110]);
        let mut cfg = ModeConfig::new(3, Mode::General);
        cfg.arith = Arith::Rational;
        let c = check_certificates(&n, &InitialCons::empty(3), &cfg).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::ZeroElement(1));
        assert_eq!(c.witness.denominator, BigInt::from(2));
        // e_1 is outside the lattice, but r2 - r3 = e_1 - e_2 is integral.
        cfg.arith = Arith::Integer;
        let c = check_certificates(&n, &InitialCons::empty(3), &cfg).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::Equality(1, 2));
        assert_eq!(c.witness.integer_multipliers, Some(vec![0.into(), 1.into(), (-1).into()]));
    }

    #[test]
    fn inverse_pairs_only_in_no_inverse_mode() {
        // a1 + a2 = 0 alone.
        let n = node(3, &[0b011]);
        let cfg = ModeConfig::new(3, Mode::ZeroSum);
        assert!(check_certificates(&n, &InitialCons::empty(3), &cfg).unwrap().is_none());
        let cfg = ModeConfig::new(3, Mode::ZeroSumNoInverse);
        let c = check_certificates(&n, &InitialCons::empty(3), &cfg).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::InversePair(1, 2));
    }

    #[test]
    fn compression_candidates_come_last() {
        let n = node(4, &[0b0011]);
        let cfg = ModeConfig::new(4, Mode::General);
        let ic = InitialCons::from_masks(4, vec![0b1100, 0b0011]);
        let c = check_certificates(&n, &ic, &cfg).unwrap().unwrap();
        assert_eq!(c.kind, CertificateKind::Compression(IntVector::from_i64s(&[1, 1, 0, 0])));
        assert!(c.witness.reproduces(&n.constraints(), &c.target));
    }

    #[test]
    fn candidate_bound() {
        let ic = InitialCons::from_masks(5, vec![1, 2, 3]);
        assert_eq!(candidate_count(5, Mode::General, &ic), 5 + 10 + 3);
        assert_eq!(candidate_count(5, Mode::ZeroSumNoInverse, &ic), 5 + 10 + 15 + 3);
    }
}

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use seqprove::compression::{build_initial_cons, scenarios, InitialCons};
use seqprove::linalg::modp::{random_prime, rank_mod_p};
use seqprove::linalg::{integer_span_member, rational_span_member, ConstraintMatrix, IntVector};
use seqprove::search::{check_certificates, check_certificates_exact, Arith, Mode, ModeConfig, SearchNode};

fn det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, &x)| x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1 } else { -1 };
            sign * m[0][c] as i128 * det(&minor)
        })
        .sum()
}

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Largest nonsingular square minor.
fn rank_by_minors(rows: &[Vec<i64>]) -> usize {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    for r in (1..=m.min(n)).rev() {
        for rs in subsets(m, r) {
            for cs in subsets(n, r) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                if det(&sub) != 0 {
                    return r;
                }
            }
        }
    }
    0
}

fn matrix(rows: &[Vec<i64>]) -> ConstraintMatrix {
    ConstraintMatrix::new(rows.iter().map(|r| IntVector::from_i64s(r)).collect())
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(m, n)| prop::collection::vec(prop::collection::vec(-3i64..=3, n), m))
}

fn binary_system() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (2usize..=6).prop_flat_map(|k| {
        (
            prop::collection::vec(prop::collection::vec(0i64..=1, k), 0..=k),
            prop::collection::vec(-2i64..=2, k),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rank_agrees_with_minor_oracle(rows in small_matrix()) {
        prop_assert_eq!(matrix(&rows).rank().unwrap(), rank_by_minors(&rows));
    }

    #[test]
    fn rank_ignores_row_and_column_order(rows in small_matrix(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cols: Vec<usize> = (0..rows[0].len()).collect();
        cols.shuffle(&mut rng);
        let mut shuffled: Vec<Vec<i64>> = rows.iter().map(|r| cols.iter().map(|&c| r[c]).collect()).collect();
        shuffled.shuffle(&mut rng);
        prop_assert_eq!(matrix(&rows).rank().unwrap(), matrix(&shuffled).rank().unwrap());
    }

    #[test]
    fn large_prime_rank_matches_exact(rows in small_matrix(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_prime(&mut rng, 1 << 30, 1 << 31);
        prop_assert_eq!(rank_mod_p(&matrix(&rows), p).unwrap(), matrix(&rows).rank().unwrap());
    }

    #[test]
    fn integer_membership_implies_rational((rows, target) in binary_system()) {
        let m = matrix(&rows);
        let t = IntVector::from_i64s(&target);
        let rational = rational_span_member(&m, &t).unwrap();
        if let Some(w) = integer_span_member(&m, &t).unwrap() {
            prop_assert!(w.is_integral());
            prop_assert!(w.reproduces(&m, &t));
            prop_assert!(rational.is_some());
        }
        if let Some(w) = rational {
            prop_assert!(w.reproduces(&m, &t));
            let d = &w.denominator;
            prop_assert!(w.multipliers.iter().all(|q| (q * BigInt::from(d.clone())).is_integer()));
        }
    }

    #[test]
    fn rational_membership_matches_rank((rows, target) in binary_system()) {
        let m = matrix(&rows);
        let t = IntVector::from_i64s(&target);
        let mut extended = rows.clone();
        extended.push(target.clone());
        let k = target.len();
        let member = rational_span_member(&m, &t).unwrap().is_some();
        let r0 = if rows.is_empty() { 0 } else { rank_by_minors(&rows) };
        let r1 = rank_by_minors(&extended);
        prop_assert_eq!(member, r0 == r1, "k = {}", k);
    }

    #[test]
    fn fast_certificates_match_exact(
        k in 3usize..=7,
        masks in prop::collection::vec(1u32..128, 0..=6),
        mode_ix in 0usize..3,
        merge_pick in 0usize..8,
        rational in any::<bool>(),
    ) {
        let mode = [Mode::General, Mode::ZeroSum, Mode::ZeroSumNoInverse][mode_ix];
        let rows: Vec<u32> = masks.iter().map(|m| m & ((1 << k) - 1)).filter(|&m| m != 0).collect();
        let node = SearchNode { rows, ..SearchNode::root(k, vec![]) };
        let list = scenarios(k, mode).unwrap();
        let cons = if merge_pick == 0 { InitialCons::empty(k) } else { build_initial_cons(&list[merge_pick % list.len()]) };
        let mut config = ModeConfig::new(k, mode);
        if rational {
            config.arith = Arith::Rational;
        }
        let fast = check_certificates(&node, &cons, &config).unwrap();
        let exact = check_certificates_exact(&node, &cons, &config).unwrap();
        prop_assert_eq!(fast.map(|c| c.kind), exact.map(|c| c.kind));
    }
}

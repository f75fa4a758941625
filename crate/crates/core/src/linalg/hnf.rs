//! Integer row echelon form with a unimodular transform, and lattice solving
//! on top of it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row echelon form `H = U · A` over the integers with `U` unimodular.
///
/// Pivots are made positive and entries above each pivot are reduced into
/// `[0, pivot)`, which is the row-style Hermite normal form.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub h: Vec<Vec<BigInt>>,
    pub u: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

/// Extended gcd with `g >= 0`.
fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

fn combine(rows: &mut [Vec<BigInt>], p: usize, r: usize, s: &BigInt, t: &BigInt, a: &BigInt, b: &BigInt) {
    // [p; r] <- [[s, t], [-b, a]] · [p; r], determinant s*a + t*b = 1.
    let len = rows[p].len();
    for j in 0..len {
        let x = rows[p][j].clone();
        let y = rows[r][j].clone();
        rows[p][j] = s * &x + t * &y;
        rows[r][j] = a * &y - b * &x;
    }
}

pub fn hermite(a: &[Vec<BigInt>]) -> Echelon {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..m)
        .map(|i| (0..m).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == m {
            break;
        }
        for r in row + 1..m {
            if h[r][col].is_zero() {
                continue;
            }
            if h[row][col].is_zero() {
                h.swap(row, r);
                u.swap(row, r);
                continue;
            }
            let (g, s, t) = egcd(&h[row][col], &h[r][col]);
            let a_ = &h[row][col] / &g;
            let b_ = &h[r][col] / &g;
            combine(&mut h, row, r, &s, &t, &a_, &b_);
            combine(&mut u, row, r, &s, &t, &a_, &b_);
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            for x in h[row].iter_mut() {
                *x = -&*x;
            }
            for x in u[row].iter_mut() {
                *x = -&*x;
            }
        }
        let piv = h[row][col].clone();
        for i in 0..row {
            let f = h[i][col].div_floor(&piv);
            if f.is_zero() {
                continue;
            }
            for j in 0..n {
                let d = &f * &h[row][j];
                h[i][j] -= d;
            }
            for j in 0..m {
                let d = &f * &u[row][j];
                u[i][j] -= d;
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon { h, u, pivots }
}

/// Solves `Σ λ_r rows[r] = target` over the integers, or reports that no
/// integral solution exists.
pub fn lattice_solve(rows: &[Vec<BigInt>], target: &[BigInt]) -> Option<Vec<BigInt>> {
    if rows.is_empty() {
        return target.iter().all(Zero::is_zero).then(Vec::new);
    }
    let Echelon { h, u, pivots } = hermite(rows);
    let mut residual: Vec<BigInt> = target.to_vec();
    let mut mu = Vec::with_capacity(pivots.len());
    for (i, &col) in pivots.iter().enumerate() {
        let (q, rem) = residual[col].div_rem(&h[i][col]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (x, hv) in residual.iter_mut().zip(&h[i]) {
                *x -= &q * hv;
            }
        }
        mu.push(q);
    }
    if residual.iter().any(|x| !x.is_zero()) {
        return None;
    }
    let m = rows.len();
    let lambda = (0..m)
        .map(|r| {
            mu.iter()
                .enumerate()
                .fold(BigInt::zero(), |acc, (i, q)| acc + q * &u[i][r])
        })
        .collect();
    Some(lambda)
}

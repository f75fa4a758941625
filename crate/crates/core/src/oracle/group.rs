//! Finite abelian groups given as products of cyclic factors.
//!
//! Elements are encoded as mixed-radix indices so that subsets can be stored
//! as plain integer lists; `0` is always the identity.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest group order the oracle will handle.
pub const MAX_ORDER: u64 = 1 << 24;

pub type Elem = u64;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelianGroup {
    factors: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    pub residues: Vec<u64>,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.residues.len() == 1 {
            return write!(f, "{}", self.residues[0]);
        }
        let parts: Vec<String> = self.residues.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("a group needs at least one cyclic factor"));
        }
        if let Some(f) = factors.iter().find(|&&f| f < 2) {
            return Err(invalid(format!("cyclic factor Z{f} must have order at least 2")));
        }
        let mut order: u64 = 1;
        for &f in &factors {
            order = order
                .checked_mul(f)
                .filter(|&o| o <= MAX_ORDER)
                .ok_or_else(|| Error::ResourceGuard(format!("group order exceeds {MAX_ORDER}")))?;
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn cyclic(n: u64) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn is_cyclic_presentation(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if let [n] = self.factors[..] {
            let s = a + b;
            return if s >= n { s - n } else { s };
        }
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0, 1);
        for &f in self.factors.iter().rev() {
            let s = (a % f + b % f) % f;
            out += s * scale;
            scale *= f;
            a /= f;
            b /= f;
        }
        out
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let mut a = a;
        let (mut out, mut scale) = (0, 1);
        for &f in self.factors.iter().rev() {
            out += ((f - a % f) % f) * scale;
            scale *= f;
            a /= f;
        }
        out
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    /// `m · a` for a nonnegative multiplier.
    pub fn scale(&self, a: Elem, m: u64) -> Elem {
        let mut a = a;
        let (mut out, mut scale) = (0, 1);
        for &f in self.factors.iter().rev() {
            out += ((a % f) * (m % f) % f) * scale;
            scale *= f;
            a /= f;
        }
        out
    }

    pub fn sum(&self, elems: impl IntoIterator<Item = Elem>) -> Elem {
        elems.into_iter().fold(0, |acc, e| self.add(acc, e))
    }

    pub fn nonzero_elements(&self) -> Vec<Elem> {
        (1..self.order()).collect()
    }

    pub fn element(&self, residues: &[u64]) -> Result<Elem> {
        if residues.len() != self.factors.len() {
            return Err(invalid(format!(
                "element has {} residues, group has {} factors",
                residues.len(),
                self.factors.len()
            )));
        }
        residues.iter().zip(&self.factors).try_fold(0, |acc, (&r, &f)| {
            if r >= f {
                Err(invalid(format!("residue {r} out of range for Z{f}")))
            } else {
                Ok(acc * f + r)
            }
        })
    }

    pub fn decode(&self, mut a: Elem) -> GroupElement {
        let mut residues = vec![0; self.factors.len()];
        for (slot, &f) in residues.iter_mut().zip(&self.factors).rev() {
            *slot = a % f;
            a /= f;
        }
        GroupElement { residues }
    }

    pub fn display_elements(&self, elems: &[Elem]) -> String {
        let parts: Vec<String> = elems.iter().map(|&e| self.decode(e).to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Prime-power cyclic factors, sorted by prime then exponent.
    pub fn elementary_divisors(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for &f in &self.factors {
            let mut m = f;
            let mut p = 2;
            while p * p <= m {
                let mut q = 1;
                while m % p == 0 {
                    m /= p;
                    q *= p;
                }
                if q > 1 {
                    out.push((p, q));
                }
                p += 1;
            }
            if m > 1 {
                out.push((m, m));
            }
        }
        out.sort_unstable();
        out.into_iter().map(|(_, q)| q).collect()
    }

    pub fn elementary_divisor_string(&self) -> String {
        join_factors(&self.elementary_divisors())
    }

    /// Whether `set` is closed under addition and contains the identity.
    pub fn is_subgroup(&self, set: &[Elem]) -> bool {
        let mut member = vec![false; self.order() as usize];
        for &e in set {
            member[e as usize] = true;
        }
        member[0] && set.iter().all(|&a| set.iter().all(|&b| member[self.add(a, b) as usize]))
    }
}

fn join_factors(factors: &[u64]) -> String {
    let parts: Vec<String> = factors.iter().map(|f| format!("Z{f}")).collect();
    parts.join("x")
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_factors(&self.factors))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// Parses `Z12`, `Z2xZ4`, `Z2 x Z2 x Z3`.
    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split(['x', 'X', '×'])
            .map(|part| {
                let part = part.trim();
                part.strip_prefix('Z')
                    .and_then(|n| n.parse::<u64>().ok())
                    .ok_or_else(|| invalid(format!("bad group factor `{part}` in `{s}`; expected e.g. Z2xZ4")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }
}

/// Every way of writing each order `2..=max_order` as a non-decreasing
/// product of cyclic factors of order at least 2.
pub fn all_factorizations(max_order: u64) -> Vec<FiniteAbelianGroup> {
    fn rec(rest: u64, min: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        for f in min..=rest {
            if rest % f == 0 {
                acc.push(f);
                rec(rest / f, f, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    for n in 2..=max_order {
        rec(n, 2, &mut Vec::new(), &mut out);
    }
    out.into_iter()
        .map(|f| FiniteAbelianGroup::new(f).expect("small factors"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let g: FiniteAbelianGroup = "Z2xZ4".parse().unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.to_string(), "Z2xZ4");
        assert!("Z1".parse::<FiniteAbelianGroup>().is_err());
        assert!("Y3".parse::<FiniteAbelianGroup>().is_err());
        assert!("".parse::<FiniteAbelianGroup>().is_err());
        let g: FiniteAbelianGroup = "Z12".parse().unwrap();
        assert_eq!(g.elementary_divisor_string(), "Z4xZ3");
        let g: FiniteAbelianGroup = "Z6 x Z10".parse().unwrap();
        assert_eq!(g.elementary_divisors(), vec![2, 2, 3, 5]);
    }

    #[test]
    fn arithmetic_is_componentwise() {
        let g: FiniteAbelianGroup = "Z2xZ4".parse().unwrap();
        let a = g.element(&[1, 3]).unwrap();
        let b = g.element(&[1, 2]).unwrap();
        assert_eq!(g.decode(g.add(a, b)).residues, vec![0, 1]);
        assert_eq!(g.decode(g.neg(a)).residues, vec![1, 1]);
        assert_eq!(g.add(a, g.neg(a)), 0);
        assert_eq!(g.decode(g.scale(a, 3)).residues, vec![1, 1]);
        assert_eq!(g.decode(a).to_string(), "(1,3)");
    }

    #[test]
    fn subgroups() {
        let g = FiniteAbelianGroup::cyclic(6).unwrap();
        assert!(g.is_subgroup(&[0, 2, 4]));
        assert!(!g.is_subgroup(&[0, 1, 2]));
        assert!(!g.is_subgroup(&[2, 4]));
    }

    #[test]
    fn factorization_enumeration() {
        let groups = all_factorizations(16);
        let of16: Vec<String> = groups.iter().filter(|g| g.order() == 16).map(|g| g.to_string()).collect();
        assert_eq!(of16, vec!["Z2xZ2xZ2xZ2", "Z2xZ2xZ4", "Z2xZ8", "Z4xZ4", "Z16"]);
        assert!(groups.iter().any(|g| g.to_string() == "Z2xZ6"));
        assert!(groups.iter().any(|g| g.to_string() == "Z3xZ4"));
    }
}

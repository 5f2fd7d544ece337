//! Finite vertex groups with elements encoded as dense indices, identity 0.

use crate::error::{input, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FiniteGroup {
    /// `Z/p`, element `k` is the residue `k`.
    Cyclic(u32),
    /// An explicit multiplication table with identity at index 0.
    Table { mul: Vec<Vec<u32>>, inv: Vec<u32> },
}

impl FiniteGroup {
    pub fn cyclic(order: u32) -> Result<Self> {
        if order < 2 {
            return input(format!("cyclic order must be at least 2, got {order}"));
        }
        Ok(FiniteGroup::Cyclic(order))
    }

    /// Validates a Cayley table and precomputes inverses.
    pub fn from_table(mul: Vec<Vec<u32>>) -> Result<Self> {
        let n = mul.len();
        if n < 2 {
            return input("group table must have at least two elements");
        }
        if mul.iter().any(|row| row.len() != n) {
            return input("group table must be square");
        }
        if mul.iter().flatten().any(|&x| x as usize >= n) {
            return input("group table entry out of range");
        }
        for a in 0..n {
            if mul[0][a] as usize != a || mul[a][0] as usize != a {
                return input("index 0 is not an identity of the group table");
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let left = mul[mul[a][b] as usize][c];
                    let right = mul[a][mul[b][c] as usize];
                    if left != right {
                        return input(format!("group table not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        let mut inv = Vec::with_capacity(n);
        for (a, row) in mul.iter().enumerate() {
            match row.iter().position(|&x| x == 0) {
                Some(b) if mul[b][a] == 0 => inv.push(b as u32),
                _ => return input(format!("element {a} has no inverse")),
            }
        }
        Ok(FiniteGroup::Table { mul, inv })
    }

    pub fn order(&self) -> u32 {
        match self {
            FiniteGroup::Cyclic(p) => *p,
            FiniteGroup::Table { mul, .. } => mul.len() as u32,
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            FiniteGroup::Cyclic(p) => (a + b) % p,
            FiniteGroup::Table { mul, .. } => mul[a as usize][b as usize],
        }
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        match self {
            FiniteGroup::Cyclic(p) => (p - a) % p,
            FiniteGroup::Table { inv, .. } => inv[a as usize],
        }
    }

    pub fn is_abelian(&self) -> bool {
        match self {
            FiniteGroup::Cyclic(_) => true,
            FiniteGroup::Table { mul, .. } => {
                (0..mul.len()).all(|a| (0..mul.len()).all(|b| mul[a][b] == mul[b][a]))
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order()
    }

    pub fn non_identity(&self) -> impl Iterator<Item = u32> {
        1..self.order()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Vec<Vec<u32>> {
        // Permutations of {0,1,2} in the order e, (01), (02), (12), (012), (021).
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap() as u32;
        perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn cyclic_arithmetic() {
        let g = FiniteGroup::cyclic(3).unwrap();
        assert_eq!(g.mul(1, 1), 2);
        assert_eq!(g.mul(2, 1), 0);
        assert_eq!(g.inv(1), 2);
        assert_eq!(g.inv(0), 0);
        assert!(FiniteGroup::cyclic(1).is_err());
    }

    #[test]
    fn table_validation() {
        let g = FiniteGroup::from_table(s3()).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
        let mut bad = s3();
        bad[1][1] = 2;
        assert!(FiniteGroup::from_table(bad).is_err());
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).is_err());
    }
}

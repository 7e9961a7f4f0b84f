//! Exact row reduction over the rationals, plus a modular rank sieve used to
//! pick independent candidates cheaply before doing exact work.

use num_traits::{One, Zero};

use crate::rational::{mul_mod, reduce_mod, Rational};

/// Reduced row-echelon form of a matrix together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rows: Vec<Vec<Rational>>,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Gauss–Jordan elimination, pivoting on the leftmost available column.
/// Zero rows are dropped.
pub fn rref(mut m: Vec<Vec<Rational>>) -> Rref {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(i) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, i);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            for x in m[r][c..].iter_mut() {
                *x *= &inv;
            }
        }
        let (top, rest) = m.split_at_mut(r);
        let (row, bottom) = rest.split_first_mut().unwrap();
        for other in top.iter_mut().chain(bottom.iter_mut()) {
            if other[c].is_zero() {
                continue;
            }
            let f = other[c].clone();
            for (x, y) in other[c..].iter_mut().zip(&row[c..]) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    Rref { rows: m, pivots }
}

/// A basis of {x : M x = 0}, one vector per free column, in echelon order.
pub fn nullspace(m: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let red = rref(m.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !red.pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); ncols];
            v[fc] = Rational::one();
            for (row, &pc) in red.rows.iter().zip(&red.pivots) {
                v[pc] = -row[fc].clone();
            }
            v
        })
        .collect()
}

/// Solves M x = b; returns one solution if the system is consistent.
pub fn solve(m: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let ncols = m.first().map_or(0, Vec::len);
    let aug: Vec<Vec<Rational>> = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(aug);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Rational::zero(); ncols];
    for (row, &pc) in red.rows.iter().zip(&red.pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Incremental echelon form modulo a prime, for independence tests.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(p: u64) -> Self {
        ModEchelon {
            p,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; keeps it and returns true if it
    /// is independent of them.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (piv, row) in &self.rows {
            let f = v[*piv];
            if f != 0 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x = (*x + p - mul_mod(f, *y, p)) % p;
                }
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = crate::rational::inv_mod(v[piv], p).expect("prime modulus");
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        self.rows.push((piv, v));
        true
    }

    /// Reduces a rational vector; entries whose denominator vanishes mod p
    /// make the vector unusable and yield `None`.
    pub fn reduce_vector(&self, v: &[Rational]) -> Option<Vec<u64>> {
        v.iter().map(|x| reduce_mod(x, self.p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn rref_small() {
        let red = rref(mat(&[&[2, 4, 6], &[1, 2, 4], &[3, 6, 10]]));
        assert_eq!(red.pivots, vec![0, 2]);
        assert_eq!(red.rows, mat(&[&[1, 2, 0], &[0, 0, 1]]));
    }

    #[test]
    fn nullspace_and_solve() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&m, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &m {
                let s: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
        let x = solve(&mat(&[&[2, 1], &[1, 3]]), &[int(1), int(2)]).unwrap();
        assert_eq!(x, vec![frac(1, 5), frac(3, 5)]);
        assert!(solve(&mat(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]).is_none());
    }

    #[test]
    fn modular_rank() {
        let p = (1u64 << 61) - 1;
        let mut e = ModEchelon::new(p);
        assert!(e.insert(vec![1, 2, 3]));
        assert!(e.insert(vec![0, 1, 1]));
        assert!(!e.insert(vec![2, 5, 7]));
        assert_eq!(e.rank(), 2);
    }

    proptest! {
        #[test]
        fn nullspace_vectors_are_annihilated(
            entries in proptest::collection::vec(-5i64..5, 12)
        ) {
            let m: Vec<Vec<Rational>> = entries.chunks(4).map(|r| r.iter().map(|&x| int(x)).collect()).collect();
            let ns = nullspace(&m, 4);
            prop_assert_eq!(ns.len() + rref(m.clone()).rank(), 4);
            for v in &ns {
                for row in &m {
                    let s: Rational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                    prop_assert!(s.is_zero());
                }
            }
        }
    }
}

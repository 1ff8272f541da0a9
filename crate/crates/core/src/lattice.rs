//! Lattices given by rational Gram matrices and exact shell enumeration.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::exact::rational::{ceil_sub_sqrt, floor_add_sqrt};
use crate::exact::{RatMatrix, Rational};

/// Integer coordinates with respect to a lattice basis.
pub type ShellVector = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("Gram matrix is not square")]
    NotSquare,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("Gram matrix is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    gram: RatMatrix,
    /// `q[i][j]` for `j > i` and `q[i][i]`: the form is
    /// `sum_i q_ii (m_i + sum_{j>i} q_ij m_j)^2`.
    q: Vec<Vec<Rational>>,
}

impl Lattice {
    pub fn new(gram: RatMatrix) -> Result<Self, LatticeError> {
        if !gram.is_square() {
            return Err(LatticeError::NotSquare);
        }
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        let q = ldl(&gram)?;
        Ok(Lattice { gram, q })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// The lattice of the dual basis, with Gram matrix `G^{-1}`.
    pub fn dual(&self) -> Lattice {
        let inv = self.gram.inverse().expect("positive definite Gram is invertible");
        Lattice::new(inv).expect("inverse of a positive definite matrix is positive definite")
    }

    pub fn norm(&self, m: &[i64]) -> Rational {
        let n = self.dim();
        assert_eq!(m.len(), n);
        let mut total = Rational::zero();
        for i in 0..n {
            if m[i] == 0 {
                continue;
            }
            for j in 0..n {
                if m[j] != 0 {
                    total += &self.gram[(i, j)] * BigInt::from(m[i] * m[j]);
                }
            }
        }
        total
    }

    /// Inner product of two rational coordinate vectors.
    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let gb = self.gram.mul_vec(b);
        a.iter().zip(&gb).map(|(x, y)| x * y).sum()
    }

    /// All `m` with `m^T G m <= bound`, each paired with its norm, sorted by norm
    /// then lexicographically.
    pub fn enumerate_ball(&self, bound: &Rational) -> Vec<(Rational, ShellVector)> {
        let mut out = Vec::new();
        if bound.is_negative() {
            return out;
        }
        let n = self.dim();
        let mut m = vec![0i64; n];
        self.descend(n, bound.clone(), &mut m, &mut out);
        out.sort();
        out
    }

    fn descend(&self, level: usize, remaining: Rational, m: &mut [i64], out: &mut Vec<(Rational, ShellVector)>) {
        if level == 0 {
            out.push((self.norm(m), m.to_vec()));
            return;
        }
        let i = level - 1;
        let mut center = Rational::zero();
        for (qj, &mj) in self.q[i].iter().zip(m.iter()).skip(i + 1) {
            if mj != 0 {
                center -= qj * BigInt::from(mj);
            }
        }
        let radius_sq = &remaining / &self.q[i][i];
        let lo = ceil_sub_sqrt(&center, &radius_sq).to_i64().expect("coordinate bound fits in i64");
        let hi = floor_add_sqrt(&center, &radius_sq).to_i64().expect("coordinate bound fits in i64");
        for v in lo..=hi {
            let offset = Rational::from_integer(BigInt::from(v)) - &center;
            let next = &remaining - &self.q[i][i] * &offset * &offset;
            if next.is_negative() {
                continue;
            }
            m[i] = v;
            self.descend(i, next, m, out);
        }
        m[i] = 0;
    }

    /// All `m` with `m^T G m = mu`, lexicographically increasing.
    pub fn enumerate_shell(&self, mu: &Rational) -> Vec<ShellVector> {
        self.enumerate_ball(mu).into_iter().filter(|(norm, _)| norm == mu).map(|(_, v)| v).collect()
    }

    /// Every nonempty shell with norm at most `cutoff`, keyed by norm.
    pub fn shells_up_to(&self, cutoff: &Rational) -> BTreeMap<Rational, Vec<ShellVector>> {
        let mut shells: BTreeMap<Rational, Vec<ShellVector>> = BTreeMap::new();
        for (norm, v) in self.enumerate_ball(cutoff) {
            shells.entry(norm).or_default().push(v);
        }
        shells
    }

    /// Distinct values of `m^T G m` up to `cutoff`, ascending.
    pub fn norm_values(&self, cutoff: &Rational) -> Vec<Rational> {
        self.shells_up_to(cutoff).into_keys().collect()
    }
}

fn ldl(g: &RatMatrix) -> Result<Vec<Vec<Rational>>, LatticeError> {
    let n = g.rows();
    let mut l = vec![vec![Rational::zero(); n]; n];
    let mut d = vec![Rational::zero(); n];
    for j in 0..n {
        let mut dj = g[(j, j)].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return Err(LatticeError::NotPositiveDefinite(j + 1));
        }
        for i in j + 1..n {
            let mut v = g[(i, j)].clone();
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = v / &dj;
        }
        d[j] = dj;
    }
    let mut q = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        q[i][i] = d[i].clone();
        for j in i + 1..n {
            q[i][j] = l[j][i].clone();
        }
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use alloc::vec;

    fn diag(entries: &[Rational]) -> Lattice {
        Lattice::new(RatMatrix::diagonal(entries)).unwrap()
    }

    #[test]
    fn rejects_bad_gram() {
        let g = RatMatrix::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(1)]]);
        assert_eq!(Lattice::new(g), Err(LatticeError::NotPositiveDefinite(2)));
        let g = RatMatrix::from_rows(vec![vec![int(1), int(0)], vec![int(1), int(1)]]);
        assert_eq!(Lattice::new(g), Err(LatticeError::NotSymmetric));
    }

    #[test]
    fn dual_of_rectangular() {
        let l = diag(&[int(4), int(4), int(1)]);
        assert_eq!(l.dual(), diag(&[rat(1, 4), rat(1, 4), int(1)]));
        assert_eq!(l.dual().dual(), l);
        let l = diag(&[int(1), int(1), rat(1, 2)]);
        assert_eq!(l.dual(), diag(&[int(1), int(1), int(2)]));
    }

    #[test]
    fn cubic_shells() {
        let z3 = diag(&[int(1), int(1), int(1)]);
        assert_eq!(z3.enumerate_shell(&int(1)).len(), 6);
        assert!(z3.enumerate_shell(&int(7)).is_empty());
        assert_eq!(z3.enumerate_shell(&int(0)), vec![vec![0, 0, 0]]);
        assert_eq!(z3.norm_values(&int(3)), vec![int(0), int(1), int(2), int(3)]);
        assert_eq!(z3.norm_values(&int(0)), vec![int(0)]);
    }

    #[test]
    fn dual_rectangular_shell() {
        let l = diag(&[rat(1, 4), rat(1, 4), int(1)]);
        assert_eq!(
            l.enumerate_shell(&int(1)),
            vec![vec![-2, 0, 0], vec![0, -2, 0], vec![0, 0, -1], vec![0, 0, 1], vec![0, 2, 0], vec![2, 0, 0]]
        );
        // m1^2 + m2^2 + 4 m3^2 = 3 has no solution, so 3/4 is absent.
        assert_eq!(l.norm_values(&int(1)), vec![int(0), rat(1, 4), rat(1, 2), int(1)]);
    }

    #[test]
    fn hexagonal_shell() {
        let g = RatMatrix::from_rows(vec![
            vec![int(4), int(2), int(0)],
            vec![int(2), int(4), int(0)],
            vec![int(0), int(0), int(1)],
        ]);
        let l = Lattice::new(g).unwrap();
        assert_eq!(l.enumerate_shell(&int(4)).len(), 6 + 2);
    }
}

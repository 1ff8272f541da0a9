//! Multiplicities by brute force: build the pullback action of every coset on
//! the Fourier basis `f_m dx_I` of one torus eigenspace, average, check the
//! average is a projection, and take its trace.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{to_multiplicity, SpectrumError};
use crate::crystal::CrystalGroup;
use crate::exact::matrix::k_subsets;
use crate::exact::{CyclotomicSum, Rational};

/// Sparse square matrix over formal root-of-unity sums; `rows[i]` maps column to entry.
type SparseMatrix = Vec<BTreeMap<usize, CyclotomicSum>>;

fn minor(p: &crate::exact::IntMatrix, rows: &[usize], cols: &[usize]) -> i64 {
    if rows.is_empty() {
        return 1;
    }
    p.select(rows, cols).det()
}

pub fn oracle_multiplicity(g: &CrystalGroup, k: usize, mu: &Rational) -> Result<u64, SpectrumError> {
    let n = g.dim();
    if k > n {
        return Err(SpectrumError::DegreeOutOfRange { k, n });
    }
    let shell = g.lattice().dual().enumerate_shell(mu);
    let subsets = k_subsets(n, k);
    let index_of_m: BTreeMap<&[i64], usize> = shell.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect();
    let dim = shell.len() * subsets.len();
    let basis = |mi: usize, si: usize| mi * subsets.len() + si;

    let mut sum: SparseMatrix = (0..dim).map(|_| BTreeMap::new()).collect();
    for rep in g.reps() {
        let p = &rep.linear;
        for (mi, m) in shell.iter().enumerate() {
            // f_m o gamma = exp(2 pi i m.c) f_{P^T m}
            let image: Vec<i64> = (0..n).map(|j| (0..n).map(|i| p[(i, j)] * m[i]).sum()).collect();
            let phase: Rational = m.iter().zip(&rep.transl).map(|(&a, c)| c * BigInt::from(a)).sum();
            let target = *index_of_m.get(image.as_slice()).expect("orthogonal maps preserve dual shells");
            for (si, set_i) in subsets.iter().enumerate() {
                for (sj, set_j) in subsets.iter().enumerate() {
                    let coeff = minor(p, set_i, set_j);
                    if coeff == 0 {
                        continue;
                    }
                    let entry = sum[basis(target, sj)].entry(basis(mi, si)).or_default();
                    entry.add_term(&phase, BigInt::from(coeff));
                }
            }
        }
    }

    let order = BigInt::from(g.order());
    let square = multiply(&sum, &sum);
    for (row_s, row_sq) in sum.iter().zip(&square) {
        let cols = row_s.keys().chain(row_sq.keys());
        for c in cols {
            let mut diff = row_sq.get(c).cloned().unwrap_or_default();
            if let Some(v) = row_s.get(c) {
                diff.merge(&v.scale(&-order.clone()));
            }
            if !diff.is_zero()? {
                return Err(SpectrumError::NotProjection);
            }
        }
    }

    let mut trace = CyclotomicSum::new();
    for (i, row) in sum.iter().enumerate() {
        if let Some(v) = row.get(&i) {
            trace.merge(v);
        }
    }
    let value = trace.eval()? / order;
    if value < Rational::zero() {
        return Err(SpectrumError::IntegralityFailure { mu: mu.clone(), value: Box::new(value) });
    }
    to_multiplicity(mu, value)
}

fn multiply(a: &SparseMatrix, b: &SparseMatrix) -> SparseMatrix {
    a.iter()
        .map(|row| {
            let mut out: BTreeMap<usize, CyclotomicSum> = BTreeMap::new();
            for (&mid, x) in row {
                for (&col, y) in &b[mid] {
                    out.entry(col).or_default().merge(&x.mul(y));
                }
            }
            out.retain(|_, v| !v.is_formally_zero());
            out
        })
        .collect()
}

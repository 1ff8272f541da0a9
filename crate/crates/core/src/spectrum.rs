//! Multiplicities `d_{k,mu}` of the Laplace eigenvalue `4 pi^2 mu` on `k`-forms.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::crystal::CrystalGroup;
use crate::exact::{CycloError, CyclotomicSum, IntMatrix, Rational};
use crate::lattice::ShellVector;

pub mod oracle;

pub use oracle::oracle_multiplicity;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectrumError {
    #[error("form degree {k} outside 0..={n}")]
    DegreeOutOfRange { k: usize, n: usize },
    #[error("eigenvalue parameter {0} is negative")]
    NegativeMu(Rational),
    #[error("multiplicity at mu = {mu} evaluates to {value}, not a nonnegative integer")]
    IntegralityFailure { mu: Rational, value: Box<Rational> },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("averaged action is not a projection; the cosets do not form a group")]
    NotProjection,
}

/// Trace of `P` acting on `k`-vectors: the sum of its principal `k x k` minors.
pub fn trace_k(p: &IntMatrix, k: usize) -> i64 {
    p.to_rational()
        .principal_minor_sum(k)
        .to_integer()
        .to_i64()
        .expect("exterior trace of a small integer matrix fits in i64")
}

fn dot(m: &[i64], c: &[Rational]) -> Rational {
    m.iter().zip(c).filter(|(&a, _)| a != 0).map(|(&a, b)| b * BigInt::from(a)).sum()
}

fn transpose_fixes(p: &IntMatrix, m: &[i64]) -> bool {
    (0..m.len()).all(|j| (0..m.len()).map(|i| p[(i, j)] * m[i]).sum::<i64>() == m[j])
}

fn e_term_from_shell(g: &CrystalGroup, rep: usize, shell: &[ShellVector]) -> CyclotomicSum {
    let r = &g.reps()[rep];
    let mut s = CyclotomicSum::new();
    for m in shell {
        if transpose_fixes(&r.linear, m) {
            s.add_term(&dot(m, &r.transl), BigInt::from(1));
        }
    }
    s
}

/// `sum exp(2 pi i m.c)` over dual shell vectors `m` of norm `mu` with `P^T m = m`.
pub fn e_term(g: &CrystalGroup, rep: usize, mu: &Rational) -> CyclotomicSum {
    let shell = g.lattice().dual().enumerate_shell(mu);
    e_term_from_shell(g, rep, &shell)
}

fn check_args(g: &CrystalGroup, k: usize, mu: &Rational) -> Result<(), SpectrumError> {
    if k > g.dim() {
        return Err(SpectrumError::DegreeOutOfRange { k, n: g.dim() });
    }
    if mu.is_negative() {
        return Err(SpectrumError::NegativeMu(mu.clone()));
    }
    Ok(())
}

pub(crate) fn to_multiplicity(mu: &Rational, value: Rational) -> Result<u64, SpectrumError> {
    match value.to_integer().to_u64() {
        Some(d) if value.is_integer() => Ok(d),
        _ => Err(SpectrumError::IntegralityFailure { mu: mu.clone(), value: Box::new(value) }),
    }
}

fn multiplicity_from_shell(
    g: &CrystalGroup,
    k: usize,
    mu: &Rational,
    shell: &[ShellVector],
) -> Result<u64, SpectrumError> {
    let mut total = Rational::zero();
    for (i, r) in g.reps().iter().enumerate() {
        let tr = trace_k(&r.linear, k);
        if tr == 0 {
            continue;
        }
        let e = e_term_from_shell(g, i, shell);
        total += e.eval()? * BigInt::from(tr);
    }
    let value = total / BigInt::from(g.order());
    to_multiplicity(mu, value)
}

/// Multiplicity of `4 pi^2 mu` on `k`-forms of the quotient.
pub fn multiplicity(g: &CrystalGroup, k: usize, mu: &Rational) -> Result<u64, SpectrumError> {
    check_args(g, k, mu)?;
    let shell = g.lattice().dual().enumerate_shell(mu);
    multiplicity_from_shell(g, k, mu, &shell)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumTable {
    pub k: usize,
    pub cutoff: Rational,
    /// Every dual norm value up to the cutoff, zero multiplicities included.
    pub entries: BTreeMap<Rational, u64>,
}

impl SpectrumTable {
    pub fn get(&self, mu: &Rational) -> u64 {
        self.entries.get(mu).copied().unwrap_or(0)
    }
}

pub fn spectrum_table(g: &CrystalGroup, k: usize, cutoff: &Rational) -> Result<SpectrumTable, SpectrumError> {
    check_args(g, k, cutoff)?;
    let shells = g.lattice().dual().shells_up_to(cutoff);
    let mut entries = BTreeMap::new();
    for (mu, shell) in &shells {
        entries.insert(mu.clone(), multiplicity_from_shell(g, k, mu, shell)?);
    }
    Ok(SpectrumTable { k, cutoff: cutoff.clone(), entries })
}

/// Tables for every degree `0..=n` sharing one shell enumeration.
pub fn spectrum_tables(g: &CrystalGroup, cutoff: &Rational) -> Result<Vec<SpectrumTable>, SpectrumError> {
    check_args(g, 0, cutoff)?;
    let shells = g.lattice().dual().shells_up_to(cutoff);
    (0..=g.dim())
        .map(|k| {
            let mut entries = BTreeMap::new();
            for (mu, shell) in &shells {
                entries.insert(mu.clone(), multiplicity_from_shell(g, k, mu, shell)?);
            }
            Ok(SpectrumTable { k, cutoff: cutoff.clone(), entries })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    FirstDifference { mu: Rational, a: u64, b: u64 },
}

/// Compares two tables over the union of their keys.
pub fn compare_tables(a: &SpectrumTable, b: &SpectrumTable) -> Comparison {
    let keys: BTreeSet<&Rational> = a.entries.keys().chain(b.entries.keys()).collect();
    for mu in keys {
        let (da, db) = (a.get(mu), b.get(mu));
        if da != db {
            return Comparison::FirstDifference { mu: mu.clone(), a: da, b: db };
        }
    }
    Comparison::Equal
}

pub fn compare(ga: &CrystalGroup, gb: &CrystalGroup, k: usize, cutoff: &Rational) -> Result<Comparison, SpectrumError> {
    let ta = spectrum_table(ga, k, cutoff)?;
    let tb = spectrum_table(gb, k, cutoff)?;
    Ok(compare_tables(&ta, &tb))
}

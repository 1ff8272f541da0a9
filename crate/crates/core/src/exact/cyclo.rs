//! Formal integer combinations of roots of unity, `sum c_q exp(2 pi i q)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::rational::{frac, lcm_of_denominators, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicSum {
    coeffs: BTreeMap<Rational, BigInt>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("cyclotomic sum does not evaluate to a rational number")]
    NotRational,
    #[error("cyclotomic order {0} is too large")]
    OrderTooLarge(BigInt),
}

impl CyclotomicSum {
    pub fn new() -> Self {
        Self::default()
    }

    /// The single term `exp(2 pi i q)`, with `q` reduced mod 1.
    pub fn root(q: &Rational) -> Self {
        let mut s = Self::new();
        s.add_term(q, BigInt::one());
        s
    }

    pub fn constant(c: i64) -> Self {
        let mut s = Self::new();
        s.add_term(&Rational::zero(), BigInt::from(c));
        s
    }

    pub fn add_term(&mut self, q: &Rational, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let key = frac(q);
        let entry = self.coeffs.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    /// Multiset union.
    pub fn merge(&mut self, other: &Self) {
        for (q, c) in &other.coeffs {
            self.add_term(q, c.clone());
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = Self::new();
        for (q, c) in &self.coeffs {
            out.add_term(q, c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::new();
        for (q1, c1) in &self.coeffs {
            for (q2, c2) in &other.coeffs {
                out.add_term(&(q1 + q2), c1 * c2);
            }
        }
        out
    }

    /// True when no formal term survives; a nonzero sum may still evaluate to 0.
    pub fn is_formally_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &BigInt)> {
        self.coeffs.iter()
    }

    /// Lcm of the key denominators.
    pub fn order(&self) -> BigInt {
        lcm_of_denominators(self.coeffs.keys())
    }

    /// Coefficients of the reduced representative in `Q(zeta_N)[x] / Phi_N`,
    /// power basis, with `N = self.order()`.
    pub fn reduce(&self) -> Result<Vec<BigInt>, CycloError> {
        let big_n = self.order();
        let n = big_n.to_usize().filter(|&n| n <= 1 << 16).ok_or(CycloError::OrderTooLarge(big_n.clone()))?;
        let mut poly = vec![BigInt::zero(); n];
        for (q, c) in &self.coeffs {
            let e = (q * Rational::from_integer(big_n.clone())).to_integer();
            let idx = e.to_usize().expect("exponent below order");
            poly[idx] += c;
        }
        Ok(poly_rem_monic(poly, &cyclotomic_poly(n)))
    }

    /// Exact value, which must be rational.
    pub fn eval(&self) -> Result<Rational, CycloError> {
        let r = self.reduce()?;
        if r.iter().skip(1).any(|c| !c.is_zero()) {
            return Err(CycloError::NotRational);
        }
        Ok(Rational::from_integer(r.into_iter().next().unwrap_or_default()))
    }

    /// Whether the represented complex number is zero.
    pub fn is_zero(&self) -> Result<bool, CycloError> {
        Ok(self.reduce()?.iter().all(Zero::is_zero))
    }
}

impl fmt::Display for CyclotomicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (q, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}*e({q})")?;
        }
        Ok(())
    }
}

/// Remainder of `p` modulo a monic polynomial `m` (coefficients low to high).
fn poly_rem_monic(mut p: Vec<BigInt>, m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    while p.len() > dm {
        let lead = p.pop().expect("nonempty");
        if lead.is_zero() {
            continue;
        }
        let shift = p.len() - dm;
        for (i, c) in m[..dm].iter().enumerate() {
            p[shift + i] -= &lead * c;
        }
    }
    p
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact quotient of `p` by a monic divisor `m`.
fn poly_div_exact(p: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    let mut rem = p.to_vec();
    let mut quot = vec![BigInt::zero(); p.len() - dm];
    for k in (0..quot.len()).rev() {
        let lead = rem[k + dm].clone();
        for (i, c) in m.iter().enumerate() {
            rem[k + i] -= &lead * c;
        }
        quot[k] = lead;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// The `n`-th cyclotomic polynomial, coefficients low to high.
pub fn cyclotomic_poly(n: usize) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut divisor_product = vec![BigInt::one()];
    for d in 1..n {
        if n.is_multiple_of(d) {
            divisor_product = poly_mul(&divisor_product, &cyclotomic_poly(d));
        }
    }
    let mut xn_minus_1 = vec![BigInt::zero(); n + 1];
    xn_minus_1[0] = -BigInt::one();
    xn_minus_1[n] = BigInt::one();
    poly_div_exact(&xn_minus_1, &divisor_product)
}

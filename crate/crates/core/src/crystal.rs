//! Affine isometries and crystallographic groups in lattice coordinates.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::exact::rational::{frac, DisplayVec};
use crate::exact::{IntMatrix, RatVector, Rational};
use crate::group::{self, GroupElement};
use crate::lattice::Lattice;

/// Default element bound for closures.
pub const DEFAULT_CLOSURE_BOUND: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CrystalError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coset {0}: linear part does not preserve the Gram matrix or is not unimodular")]
    NotOrthogonal(usize),
    #[error("cosets {0} and {1}: product is not among the cosets modulo the lattice")]
    NotClosed(usize, usize),
    #[error("no coset with identity linear part and integral translation")]
    BadIdentity,
    #[error("cosets {0} and {1} share a linear part")]
    DuplicateLinearPart(usize, usize),
    #[error("coset {0}: linear part does not preserve the sublattice")]
    NotInvariant(usize),
    #[error("sublattice matrix is singular")]
    NotSublattice,
    #[error("group closure exceeded {0} elements")]
    BoundExceeded(usize),
}

impl From<group::BoundExceeded> for CrystalError {
    fn from(e: group::BoundExceeded) -> Self {
        CrystalError::BoundExceeded(e.0)
    }
}

/// The map `x -> P x + c`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineIsometry {
    pub linear: IntMatrix,
    pub transl: RatVector,
}

impl AffineIsometry {
    pub fn new(linear: IntMatrix, transl: RatVector) -> Self {
        assert!(linear.is_square() && linear.rows() == transl.len(), "affine map shape mismatch");
        AffineIsometry { linear, transl }
    }

    pub fn identity(n: usize) -> Self {
        AffineIsometry::new(IntMatrix::identity(n), vec_zero(n))
    }

    pub fn translation(c: RatVector) -> Self {
        AffineIsometry::new(IntMatrix::identity(c.len()), c)
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    /// `self` after `other`: `x -> P_a (P_b x + c_b) + c_a`.
    pub fn compose(&self, other: &Self) -> Result<Self, CrystalError> {
        if self.dim() != other.dim() {
            return Err(CrystalError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let transl = add(&self.linear.mul_rat_vec(&other.transl), &self.transl);
        Ok(AffineIsometry::new(self.linear.mul(&other.linear), transl))
    }

    pub fn invert(&self) -> Self {
        let inv = self.linear.inverse_unimodular().expect("linear part of an isometry is unimodular");
        let transl = inv.mul_rat_vec(&self.transl).into_iter().map(|v| -v).collect();
        AffineIsometry::new(inv, transl)
    }

    pub fn apply(&self, x: &[Rational]) -> RatVector {
        add(&self.linear.mul_rat_vec(x), &self.transl)
    }

    /// Composes with the lattice translation `lambda` on the left.
    pub fn shifted(&self, lambda: &[i64]) -> Self {
        let transl =
            self.transl.iter().zip(lambda).map(|(c, &l)| c + Rational::from_integer(BigInt::from(l))).collect();
        AffineIsometry::new(self.linear.clone(), transl)
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.transl.iter().all(Zero::is_zero)
    }

    /// The coset modulo integer translations, translation reduced into `[0,1)^n`.
    pub fn canonical(&self) -> FiniteAffine {
        FiniteAffine::new(self.linear.clone(), self.transl.clone())
    }
}

impl fmt::Display for AffineIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {} x + {}", self.linear, DisplayVec(&self.transl))
    }
}

fn vec_zero(n: usize) -> RatVector {
    (0..n).map(|_| Rational::zero()).collect()
}

fn add(a: &[Rational], b: &[Rational]) -> RatVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// An isometry of a torus: integer linear part, translation in `[0,1)^n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteAffine {
    pub linear: IntMatrix,
    pub transl: RatVector,
}

impl FiniteAffine {
    pub fn new(linear: IntMatrix, transl: RatVector) -> Self {
        assert!(linear.is_square() && linear.rows() == transl.len(), "affine map shape mismatch");
        FiniteAffine { linear, transl: transl.iter().map(frac).collect() }
    }

    pub fn identity(n: usize) -> Self {
        FiniteAffine::new(IntMatrix::identity(n), vec_zero(n))
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn to_affine(&self) -> AffineIsometry {
        AffineIsometry::new(self.linear.clone(), self.transl.clone())
    }
}

impl GroupElement for FiniteAffine {
    fn compose(&self, other: &Self) -> Self {
        let transl = add(&self.linear.mul_rat_vec(&other.transl), &self.transl);
        FiniteAffine::new(self.linear.mul(&other.linear), transl)
    }

    fn inverse(&self) -> Self {
        self.to_affine().invert().canonical()
    }

    fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.transl.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for FiniteAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x -> {} x + {} mod Z^{}", self.linear, DisplayVec(&self.transl), self.dim())
    }
}

impl GroupElement for AffineIsometry {
    fn compose(&self, other: &Self) -> Self {
        AffineIsometry::compose(self, other).expect("affine maps of equal dimension")
    }

    fn inverse(&self) -> Self {
        self.invert()
    }

    fn is_identity(&self) -> bool {
        AffineIsometry::is_identity(self)
    }
}

/// Unimodular integer matrices under multiplication.
impl GroupElement for IntMatrix {
    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inverse(&self) -> Self {
        self.inverse_unimodular().expect("unimodular matrix")
    }

    fn is_identity(&self) -> bool {
        IntMatrix::is_identity(self)
    }
}

/// A finite group of torus isometries, elements sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAffineGroup {
    elements: Vec<FiniteAffine>,
}

impl FiniteAffineGroup {
    /// Wraps an element list after checking it is a group.
    pub fn from_elements(mut elements: Vec<FiniteAffine>) -> Option<Self> {
        elements.sort();
        elements.dedup();
        group::is_closed(&elements).then_some(FiniteAffineGroup { elements })
    }

    pub fn elements(&self) -> &[FiniteAffine] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: &FiniteAffine) -> bool {
        self.elements.binary_search(x).is_ok()
    }
}

/// The group generated by `generators`, failing once it exceeds `bound` elements.
pub fn closure(generators: &[FiniteAffine], bound: usize) -> Result<FiniteAffineGroup, CrystalError> {
    let Some(first) = generators.first() else {
        return Err(CrystalError::DimensionMismatch { expected: 1, found: 0 });
    };
    let n = first.dim();
    if let Some(g) = generators.iter().find(|g| g.dim() != n) {
        return Err(CrystalError::DimensionMismatch { expected: n, found: g.dim() });
    }
    let elements = group::generate(FiniteAffine::identity(n), generators, bound)?;
    Ok(FiniteAffineGroup { elements })
}

/// A crystallographic group: a lattice and one representative per coset of
/// the lattice translations. The identity coset is stored first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalGroup {
    lattice: Lattice,
    reps: Vec<AffineIsometry>,
}

impl CrystalGroup {
    pub fn new(lattice: Lattice, reps: Vec<AffineIsometry>) -> Result<Self, CrystalError> {
        let g = Self::from_parts_unchecked(lattice, reps);
        g.validate()?;
        Ok(g)
    }

    /// Skips validation; the identity coset is still moved to the front.
    pub fn from_parts_unchecked(lattice: Lattice, mut reps: Vec<AffineIsometry>) -> Self {
        if let Some(pos) = reps.iter().position(|r| r.linear.is_identity()) {
            let id = reps.remove(pos);
            reps.insert(0, id);
        }
        CrystalGroup { lattice, reps }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn reps(&self) -> &[AffineIsometry] {
        &self.reps
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Number of cosets, the order of the point group.
    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn validate(&self) -> Result<(), CrystalError> {
        let n = self.dim();
        let gram = self.lattice.gram();
        for (i, r) in self.reps.iter().enumerate() {
            if r.dim() != n {
                return Err(CrystalError::DimensionMismatch { expected: n, found: r.dim() });
            }
            let p = r.linear.to_rational();
            if p.transpose().mul(gram).mul(&p) != *gram || r.linear.det().abs() != 1 {
                return Err(CrystalError::NotOrthogonal(i));
            }
        }
        match self.reps.first() {
            Some(id) if id.linear.is_identity() && id.transl.iter().all(Rational::is_integer) => {}
            _ => return Err(CrystalError::BadIdentity),
        }
        for i in 0..self.reps.len() {
            for j in i + 1..self.reps.len() {
                if self.reps[i].linear == self.reps[j].linear {
                    return Err(CrystalError::DuplicateLinearPart(i, j));
                }
            }
        }
        let cosets: BTreeSet<FiniteAffine> = self.reps.iter().map(AffineIsometry::canonical).collect();
        for (i, a) in self.reps.iter().enumerate() {
            for (j, b) in self.reps.iter().enumerate() {
                let ab = a.compose(b)?.canonical();
                if !cosets.contains(&ab) {
                    return Err(CrystalError::NotClosed(i, j));
                }
            }
        }
        Ok(())
    }

    /// Linear parts, identity first.
    pub fn point_group(&self) -> Vec<IntMatrix> {
        self.reps.iter().map(|r| r.linear.clone()).collect()
    }

    /// Index of the coset with linear part `p`.
    pub fn rep_index(&self, p: &IntMatrix) -> Option<usize> {
        self.reps.iter().position(|r| r.linear == *p)
    }

    /// `Gamma / L_Lambda` as torus isometries.
    pub fn cosets(&self) -> Vec<FiniteAffine> {
        let mut v: Vec<FiniteAffine> = self.reps.iter().map(AffineIsometry::canonical).collect();
        v.sort();
        v
    }

    /// Same group, coset `index` represented by `c + lambda` instead of `c`.
    pub fn with_shifted_rep(&self, index: usize, lambda: &[i64]) -> Self {
        let mut reps = self.reps.clone();
        reps[index] = reps[index].shifted(lambda);
        CrystalGroup { lattice: self.lattice.clone(), reps }
    }

    /// The same group written in the basis given by the columns of the
    /// unimodular `u`: `G -> U^T G U`, `P -> U^{-1} P U`, `c -> U^{-1} c`.
    pub fn change_basis(&self, u: &IntMatrix) -> Option<Self> {
        let u_inv = u.inverse_unimodular()?;
        let ur = u.to_rational();
        let gram = ur.transpose().mul(self.lattice.gram()).mul(&ur);
        let lattice = Lattice::new(gram).ok()?;
        let reps = self
            .reps
            .iter()
            .map(|r| AffineIsometry::new(u_inv.mul(&r.linear).mul(u), u_inv.mul_rat_vec(&r.transl)))
            .collect();
        Some(CrystalGroup { lattice, reps })
    }

    /// The finite group `Gamma / L_{Lambda'}` acting on the torus of the
    /// sublattice whose basis is given by the columns of `s`, in
    /// `Lambda'`-coordinates.
    pub fn quotient_mod_sublattice(&self, s: &IntMatrix) -> Result<FiniteAffineGroup, CrystalError> {
        let n = self.dim();
        if s.rows() != n || s.cols() != n {
            return Err(CrystalError::DimensionMismatch { expected: n, found: s.rows() });
        }
        let index = s.det().unsigned_abs() as usize;
        if index == 0 {
            return Err(CrystalError::NotSublattice);
        }
        let s_inv = s.to_rational().inverse().ok_or(CrystalError::NotSublattice)?;
        let sr = s.to_rational();
        let mut linear = Vec::with_capacity(self.reps.len());
        for (i, r) in self.reps.iter().enumerate() {
            let p = s_inv.mul(&r.linear.to_rational()).mul(&sr).to_integer().ok_or(CrystalError::NotInvariant(i))?;
            linear.push(p);
        }
        let shifts = sublattice_cosets(s, &s_inv, index);
        let mut elements = Vec::with_capacity(self.reps.len() * index);
        for (r, p) in self.reps.iter().zip(&linear) {
            let c = s_inv.mul_vec(&r.transl);
            for shift in &shifts {
                elements.push(FiniteAffine::new(p.clone(), add(&c, shift)));
            }
        }
        elements.sort();
        Ok(FiniteAffineGroup { elements })
    }
}

/// Representatives of `Lambda / Lambda'` written in `Lambda'`-coordinates,
/// reduced into `[0,1)^n`.
fn sublattice_cosets(s: &IntMatrix, s_inv: &crate::exact::RatMatrix, index: usize) -> Vec<RatVector> {
    let n = s.rows();
    let mut found: BTreeSet<RatVector> = BTreeSet::new();
    let mut lambda = alloc::vec![0i64; n];
    let bound = index as i64;
    loop {
        let v: RatVector = s_inv
            .mul_vec(&lambda.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect::<Vec<_>>())
            .iter()
            .map(frac)
            .collect();
        found.insert(v);
        if found.len() == index {
            break;
        }
        // Odometer over [0, index)^n; |det S| Lambda lies in Lambda', so this box suffices.
        let mut k = 0;
        loop {
            if k == n {
                return found.into_iter().collect();
            }
            lambda[k] += 1;
            if lambda[k] < bound {
                break;
            }
            lambda[k] = 0;
            k += 1;
        }
    }
    found.into_iter().collect()
}

pub fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_integer)
}

/// `(P, c)` from an integer matrix and a translation of `(numerator, denominator)` pairs.
pub fn affine(linear: &[&[i64]], transl: &[(i64, i64)]) -> AffineIsometry {
    let m = IntMatrix::from_rows(linear.iter().map(|r| r.to_vec()).collect());
    AffineIsometry::new(m, crate::exact::rational::rat_vec(transl))
}

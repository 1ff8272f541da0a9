//! Finite orthogonal matrix groups: almost conjugacy, conjugacy in `O(n)`,
//! fixed-space dimensions, intersection numbers and sphere strata.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::exact::intlin::kernel_saturated;
use crate::exact::{RatMatrix, Rational};
use crate::group::{self, GroupElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomogError {
    #[error("group has no elements")]
    Empty,
    #[error("element {0} has the wrong shape")]
    DimensionMismatch(usize),
    #[error("element {0} is not orthogonal")]
    NotOrthogonal(usize),
    #[error("elements are not closed under products and inverses")]
    NotClosed,
    #[error("an element of the compared groups is not in the ambient group")]
    AmbientMismatch,
    #[error("invariants agree but no signed-permutation conjugator was found")]
    Inconclusive,
    #[error("only groups of signed diagonal matrices are supported here")]
    UnsupportedGroupClass,
}

/// Rational matrices under multiplication.
impl GroupElement for RatMatrix {
    fn compose(&self, other: &Self) -> Self {
        self.mul(other)
    }

    fn inverse(&self) -> Self {
        RatMatrix::inverse(self).expect("invertible group element")
    }

    fn is_identity(&self) -> bool {
        RatMatrix::is_identity(self)
    }
}

/// A finite subgroup of `O(n)`, elements sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrthGroup {
    n: usize,
    elements: Vec<RatMatrix>,
}

impl FiniteOrthGroup {
    pub fn new(mut elements: Vec<RatMatrix>) -> Result<Self, HomogError> {
        let n = elements.first().ok_or(HomogError::Empty)?.rows();
        for (i, m) in elements.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(HomogError::DimensionMismatch(i));
            }
            if !m.transpose().mul(m).is_identity() {
                return Err(HomogError::NotOrthogonal(i));
            }
        }
        elements.sort();
        elements.dedup();
        if !group::is_closed(&elements) {
            return Err(HomogError::NotClosed);
        }
        Ok(FiniteOrthGroup { n, elements })
    }

    /// The group of diagonal matrices with the given `±1` diagonals.
    pub fn signed_diagonal(diagonals: &[&[i64]]) -> Result<Self, HomogError> {
        let elements = diagonals
            .iter()
            .map(|d| {
                RatMatrix::diagonal(&d.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect::<Vec<_>>())
            })
            .collect();
        Self::new(elements)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[RatMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &RatMatrix) -> bool {
        self.elements.binary_search(m).is_ok()
    }

    pub fn is_signed_diagonal(&self) -> bool {
        self.elements.iter().all(|m| {
            (0..self.n).all(|i| {
                (0..self.n).all(|j| {
                    let v = &m[(i, j)];
                    if i == j {
                        v.is_one() || (-v).is_one()
                    } else {
                        v.is_zero()
                    }
                })
            })
        })
    }

    pub fn subgroups(&self) -> Vec<Vec<RatMatrix>> {
        group::subgroups(&self.elements)
    }
}

/// Dimension of the common fixed space of `s` acting on `R^n`.
pub fn fixed_dim(s: &[RatMatrix], n: usize) -> usize {
    n - stacked_minus_identity(s, n).rank()
}

fn stacked_minus_identity(s: &[RatMatrix], n: usize) -> RatMatrix {
    let id = RatMatrix::identity(n);
    let mut rows = Vec::new();
    for m in s {
        rows.extend(m.sub(&id).to_rows());
    }
    if rows.is_empty() {
        rows.push(vec![Rational::zero(); n]);
    }
    RatMatrix::from_rows(rows)
}

/// Basis of the common fixed space.
fn fixed_basis(s: &[RatMatrix], n: usize) -> Vec<Vec<Rational>> {
    kernel_saturated(&stacked_minus_identity(s, n))
        .into_iter()
        .map(|v| v.into_iter().map(Rational::from_integer).collect())
        .collect()
}

/// One element of `G1` paired with one of `G2`, and what conjugates the first to the second.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatch<T, C> {
    pub from: T,
    pub to: T,
    pub conjugator: C,
}

/// A signed permutation `Q e_i = signs[i] e_{perm[i]}`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct SignedPerm {
    perm: Vec<usize>,
    signs: Vec<i64>,
}

impl SignedPerm {
    fn det(&self) -> i64 {
        let inversions =
            (0..self.perm.len()).tuple_combinations().filter(|&(i, j)| self.perm[i] > self.perm[j]).count();
        let parity = if inversions % 2 == 0 { 1 } else { -1 };
        parity * self.signs.iter().product::<i64>()
    }

    /// `Q M Q^T` on a scaled integer matrix.
    fn conjugate(&self, m: &[i64], n: usize) -> Vec<i64> {
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[self.perm[i] * n + self.perm[j]] = self.signs[i] * self.signs[j] * m[i * n + j];
            }
        }
        out
    }

    fn matrix(&self) -> RatMatrix {
        let n = self.perm.len();
        RatMatrix::from_fn(n, n, |r, c| {
            if self.perm[c] == r {
                Rational::from_integer(BigInt::from(self.signs[c]))
            } else {
                Rational::zero()
            }
        })
    }
}

/// All signed permutations of `n` letters, optionally only those of determinant `+1`.
fn signed_perms(n: usize, even_only: bool) -> impl Iterator<Item = SignedPerm> {
    (0..n).permutations(n).flat_map(move |perm| {
        (0..1u32 << n).filter_map(move |mask| {
            let signs: Vec<i64> = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            let q = SignedPerm { perm: perm.clone(), signs };
            (!even_only || q.det() == 1).then_some(q)
        })
    })
}

/// Integer images of rational matrices after clearing one common denominator.
fn scaled(ms: &[&RatMatrix]) -> Vec<Vec<i64>> {
    let l = ms
        .iter()
        .flat_map(|m| m.iter_rows().flatten())
        .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
    let l = Rational::from_integer(l);
    ms.iter()
        .map(|m| {
            m.iter_rows().flatten().map(|v| (v * &l).to_integer().to_i64().expect("scaled entry fits in i64")).collect()
        })
        .collect()
}

fn find_signed_conjugator(a: &RatMatrix, b: &RatMatrix, even_only: bool) -> Option<RatMatrix> {
    let n = a.rows();
    let s = scaled(&[a, b]);
    signed_perms(n, even_only).find(|q| q.conjugate(&s[0], n) == s[1]).map(|q| q.matrix())
}

/// Class-preserving bijection `G1 -> G2` for conjugacy in the full orthogonal
/// group, detected by characteristic polynomials. Each pair is additionally
/// certified by a determinant-one signed permutation when one exists.
pub fn almost_conjugate_orthogonal(
    g1: &FiniteOrthGroup,
    g2: &FiniteOrthGroup,
) -> Option<Vec<ClassMatch<RatMatrix, Option<RatMatrix>>>> {
    if g1.dim() != g2.dim() || g1.order() != g2.order() {
        return None;
    }
    let by_charpoly = |g: &FiniteOrthGroup| {
        let mut classes: BTreeMap<Vec<Rational>, Vec<RatMatrix>> = BTreeMap::new();
        for m in g.elements() {
            classes.entry(m.charpoly()).or_default().push(m.clone());
        }
        classes
    };
    let (c1, c2) = (by_charpoly(g1), by_charpoly(g2));
    if c1.keys().ne(c2.keys()) || c1.values().zip(c2.values()).any(|(a, b)| a.len() != b.len()) {
        return None;
    }
    let mut out = Vec::new();
    for (a, b) in c1.values().zip(c2.values()) {
        for (x, y) in a.iter().zip(b) {
            let conjugator = find_signed_conjugator(x, y, true);
            out.push(ClassMatch { from: x.clone(), to: y.clone(), conjugator });
        }
    }
    Some(out)
}

/// Class-preserving bijection `G1 -> G2` for conjugacy inside a finite
/// ambient group, with an explicit ambient conjugator for each pair.
pub fn almost_conjugate_finite<T: GroupElement>(
    g1: &[T],
    g2: &[T],
    ambient: &[T],
) -> Result<Option<Vec<ClassMatch<T, T>>>, HomogError> {
    let members: BTreeSet<&T> = ambient.iter().collect();
    if g1.iter().chain(g2).any(|x| !members.contains(x)) {
        return Err(HomogError::AmbientMismatch);
    }
    if g1.len() != g2.len() {
        return Ok(None);
    }
    let inverses: Vec<T> = ambient.iter().map(GroupElement::inverse).collect();
    // Label each element by the least member of its class, remembering a conjugator reaching it.
    let label = |x: &T| {
        ambient
            .iter()
            .zip(&inverses)
            .map(|(g, gi)| (g.compose(x).compose(gi), g.clone()))
            .min()
            .expect("ambient group is nonempty")
    };
    let mut pending: BTreeMap<T, Vec<(T, T)>> = BTreeMap::new();
    for x in g2 {
        let (rep, g) = label(x);
        pending.entry(rep).or_default().push((x.clone(), g));
    }
    let mut out = Vec::new();
    for x in g1 {
        let (rep, gx) = label(x);
        let Some((y, gy)) = pending.get_mut(&rep).and_then(Vec::pop) else {
            return Ok(None);
        };
        // gx x gx^-1 = gy y gy^-1, so y = (gy^-1 gx) x (gy^-1 gx)^-1.
        out.push(ClassMatch { from: x.clone(), to: y, conjugator: gy.inverse().compose(&gx) });
    }
    Ok(Some(out))
}

/// Count of subgroups with a given order and common fixed-space dimension.
fn subgroup_profile(g: &FiniteOrthGroup) -> BTreeMap<(usize, usize), usize> {
    let mut profile = BTreeMap::new();
    for s in g.subgroups() {
        *profile.entry((fixed_dim(&s, g.dim()), s.len())).or_insert(0) += 1;
    }
    profile
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonConjugacyWitness {
    /// The groups have different numbers of subgroups of this order whose
    /// common fixed space has this dimension.
    SubgroupFixedDim { order: usize, fixed_dim: usize, count_a: usize, count_b: usize },
    /// Both groups are signed diagonal and no coordinate permutation maps one
    /// onto the other; for such groups this search is complete.
    NoCoordinatePermutation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrthConjugacy {
    /// `Q G1 Q^T = G2`.
    Conjugate(RatMatrix),
    ProvablyNot(NonConjugacyWitness),
}

/// Decides conjugacy of two finite subgroups of `O(n)`.
pub fn conjugate_in_orthogonal(g1: &FiniteOrthGroup, g2: &FiniteOrthGroup) -> Result<OrthConjugacy, HomogError> {
    if g1.dim() != g2.dim() {
        return Err(HomogError::DimensionMismatch(0));
    }
    let (p1, p2) = (subgroup_profile(g1), subgroup_profile(g2));
    let keys: BTreeSet<&(usize, usize)> = p1.keys().chain(p2.keys()).collect();
    // Highest fixed dimension first, then largest order.
    if let Some(&&(fixed_dim, order)) = keys.iter().rev().find(|k| p1.get(k) != p2.get(k)) {
        let count_a = p1.get(&(fixed_dim, order)).copied().unwrap_or(0);
        let count_b = p2.get(&(fixed_dim, order)).copied().unwrap_or(0);
        return Ok(OrthConjugacy::ProvablyNot(NonConjugacyWitness::SubgroupFixedDim {
            order,
            fixed_dim,
            count_a,
            count_b,
        }));
    }
    let n = g1.dim();
    let all: Vec<&RatMatrix> = g1.elements().iter().chain(g2.elements()).collect();
    let s = scaled(&all);
    let (s1, s2) = s.split_at(g1.order());
    let target: BTreeSet<&Vec<i64>> = s2.iter().collect();
    let found = signed_perms(n, false).find(|q| s1.iter().all(|m| target.contains(&q.conjugate(m, n))));
    match found {
        Some(q) => Ok(OrthConjugacy::Conjugate(q.matrix())),
        None if g1.is_signed_diagonal() && g2.is_signed_diagonal() => {
            Ok(OrthConjugacy::ProvablyNot(NonConjugacyWitness::NoCoordinatePermutation))
        }
        None => Err(HomogError::Inconclusive),
    }
}

/// Largest order of a subgroup fixing a `d`-dimensional subspace pointwise,
/// with every subgroup attaining it.
pub fn max_order_with_fixed_dim(g: &FiniteOrthGroup, d: usize) -> (usize, Vec<Vec<RatMatrix>>) {
    let subs: Vec<Vec<RatMatrix>> = g.subgroups().into_iter().filter(|s| fixed_dim(s, g.dim()) >= d).collect();
    let best = subs.iter().map(Vec::len).max().unwrap_or(0);
    (best, subs.into_iter().filter(|s| s.len() == best).collect())
}

fn diagonal_signs(m: &RatMatrix) -> Vec<i64> {
    (0..m.rows()).map(|i| if m[(i, i)].is_one() { 1 } else { -1 }).collect()
}

/// `max #(G ∩ a H a^-1)` over `a` in `SO(n)`, for signed diagonal `G` and `H`.
/// Two such groups are conjugate exactly when a coordinate permutation maps
/// one onto the other; a sign change on one coordinate fixes the determinant.
pub fn m_number_finite_h(g: &FiniteOrthGroup, h: &FiniteOrthGroup) -> Result<usize, HomogError> {
    if !g.is_signed_diagonal() || !h.is_signed_diagonal() || g.dim() != h.dim() {
        return Err(HomogError::UnsupportedGroupClass);
    }
    let n = g.dim();
    let as_sets = |subs: Vec<Vec<RatMatrix>>| -> Vec<BTreeSet<Vec<i64>>> {
        subs.iter().map(|s| s.iter().map(diagonal_signs).collect()).collect()
    };
    let sub_g = as_sets(g.subgroups());
    let sub_h = as_sets(h.subgroups());
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    for s in &sub_g {
        let fits = sub_h.iter().filter(|t| t.len() == s.len()).any(|t| {
            perms.iter().any(|p| {
                s.iter().all(|signs| {
                    let mut moved = vec![0; n];
                    for i in 0..n {
                        moved[p[i]] = signs[i];
                    }
                    t.contains(&moved)
                })
            })
        });
        if fits {
            // Subgroups come in nonincreasing order.
            return Ok(s.len());
        }
    }
    Ok(1)
}

/// `G ∩ {±I}`: the part of `G` lying in every `SO(n)`-conjugate of `G`.
pub fn ambient_core(g: &FiniteOrthGroup) -> FiniteOrthGroup {
    let n = g.dim();
    let id = RatMatrix::identity(n);
    let minus = id.scale(&-Rational::one());
    let elements = g.elements().iter().filter(|m| **m == id || **m == minus).cloned().collect();
    FiniteOrthGroup::new(elements).expect("subgroup of a group")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum QuotientKind {
    /// Some element acts as `-1` on the fixed space, so antipodes are identified.
    ProjectiveSpace,
    Sphere,
}

/// Unit vectors of `Fix(S)` for one subgroup `S` of maximal isotropy order,
/// taken modulo the group.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SphereStratum {
    pub isotropy_order: usize,
    pub fixed_dim: usize,
    pub kind: QuotientKind,
    pub components: usize,
    /// Number of points when `fixed_dim = 1`.
    pub point_count: Option<usize>,
}

impl SphereStratum {
    pub fn dim(&self) -> usize {
        self.fixed_dim - 1
    }
}

/// Strata of maximal isotropy order of `G` acting on the unit sphere, for
/// signed diagonal `G`.
pub fn sphere_strata(g: &FiniteOrthGroup) -> Result<Vec<SphereStratum>, HomogError> {
    if !g.is_signed_diagonal() {
        return Err(HomogError::UnsupportedGroupClass);
    }
    let n = g.dim();
    let (best, witnesses) = max_order_with_fixed_dim(g, 1);
    if best <= 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for s in witnesses {
        let d = fixed_dim(&s, n);
        let basis = fixed_basis(&s, n);
        let antipodal =
            g.elements().iter().any(|m| basis.iter().all(|v| m.mul_vec(v).iter().zip(v).all(|(a, b)| *a == -b)));
        let kind = if antipodal { QuotientKind::ProjectiveSpace } else { QuotientKind::Sphere };
        let (components, point_count) = if d == 1 {
            let points = if antipodal { 1 } else { 2 };
            (points, Some(points))
        } else {
            (1, None)
        };
        out.push(SphereStratum { isotropy_order: best, fixed_dim: d, kind, components, point_count });
    }
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

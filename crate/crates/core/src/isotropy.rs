//! Fixed sets, stabilizers, maximal isotropy and singular strata.
//!
//! Every singular point of `Gamma \ R^n` has a preimage `x` in the unit cube,
//! and for `x` in the cube a lift `(P, c + lambda)` fixing `x` has `lambda`
//! inside a small box determined by `P` and `c`. Enumerating lifts of the
//! subgroups of the point group over these boxes yields every affine subspace
//! `Fix(S)` for finite `S` up to integer translation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::crystal::{AffineIsometry, CrystalGroup};
use crate::exact::intlin::{kernel_saturated, primitive_normalized, to_i64_vec, unimodular_completion};
use crate::exact::rational::{ceil_int, frac, lcm_of_denominators};
use crate::exact::{solve_affine, IntMatrix, RatMatrix, RatVector, Rational};
use crate::group::{self, IsotropyType};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IsotropyError {
    #[error("strata are only analysed in dimension at most 3, got {0}")]
    UnsupportedDimension(usize),
}

/// `base + span(directions)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubspace {
    pub base: RatVector,
    pub directions: Vec<RatVector>,
}

impl AffineSubspace {
    pub fn dim(&self) -> usize {
        self.directions.len()
    }
}

fn i_minus(p: &IntMatrix) -> IntMatrix {
    IntMatrix::identity(p.rows()).sub(p)
}

fn to_rat(v: &[i64]) -> RatVector {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

fn is_integral(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_integer)
}

/// Solutions of `P x + c = x`, or `None`.
pub fn fixed_set(element: &AffineIsometry) -> Option<AffineSubspace> {
    let m = i_minus(&element.linear).to_rational();
    let (base, kernel) = solve_affine(&m, &element.transl)?;
    Some(AffineSubspace { base, directions: kernel })
}

/// All elements of `g` fixing `x`, with the isomorphism type of that group.
/// A coset `(P, c)` contributes the lift `(P, c + lambda)` with
/// `lambda = x - P x - c` whenever that is integral.
pub fn stabilizer(g: &CrystalGroup, x: &[Rational]) -> (Vec<AffineIsometry>, IsotropyType) {
    let mut elements = Vec::new();
    for r in g.reps() {
        let px = r.apply(x);
        let lambda: RatVector = x.iter().zip(&px).map(|(a, b)| a - b).collect();
        if is_integral(&lambda) {
            let transl = r.transl.iter().zip(&lambda).map(|(c, l)| c + l).collect();
            elements.push(AffineIsometry::new(r.linear.clone(), transl));
        }
    }
    let ty = group::classify(&elements);
    (elements, ty)
}

/// Per-coordinate window for `lambda` in `(I - P) x = c + lambda`, `x` in the unit cube.
fn window(p: &IntMatrix, c: &[Rational]) -> Vec<i64> {
    let max_c = c.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero);
    let m = i_minus(p);
    m.iter_rows()
        .map(|row| {
            let rowsum: i64 = row.iter().map(|v| v.abs()).sum();
            ceil_int(&(Rational::from_integer(BigInt::from(rowsum)) + &max_c)).to_i64().expect("window fits in i64")
        })
        .collect()
}

fn box_points(radii: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &r in radii {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (-r..=r).map(move |v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

/// Greedy generating set of a subgroup.
fn generators(subgroup: &[IntMatrix]) -> Vec<IntMatrix> {
    let n = subgroup[0].rows();
    let mut gens: Vec<IntMatrix> = Vec::new();
    let mut span = vec![IntMatrix::identity(n)];
    for x in subgroup {
        if span.contains(x) {
            continue;
        }
        gens.push(x.clone());
        span = group::generate(IntMatrix::identity(n), &gens, subgroup.len()).expect("finite subgroup");
    }
    gens
}

/// Canonical description of an affine subspace modulo integer translations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum FlatKey {
    Point(RatVector),
    Line(Vec<i64>, RatVector),
    Plane(Vec<i64>, Rational),
    Whole,
}

#[derive(Debug, Clone)]
struct Flat {
    base: RatVector,
    /// Primitive integer basis of the direction space.
    dirs: Vec<Vec<i64>>,
}

impl Flat {
    fn dim(&self) -> usize {
        self.dirs.len()
    }

    fn key(&self) -> FlatKey {
        let n = self.base.len();
        match self.dirs.len() {
            0 => FlatKey::Point(self.base.iter().map(frac).collect()),
            1 => {
                let d = primitive_normalized(&self.dirs[0]);
                let v = unimodular_completion(&d).expect("primitive direction");
                let y = v.mul_rat_vec(&self.base);
                FlatKey::Line(d, y[1..].iter().map(frac).collect())
            }
            k if k == n => FlatKey::Whole,
            _ => {
                // n = 3, a plane: its primitive normal covector.
                let dirs = RatMatrix::from_rows(self.dirs.iter().map(|d| to_rat(d)).collect());
                let w = kernel_saturated(&dirs);
                let w = primitive_normalized(&to_i64_vec(&w[0]).expect("small normal"));
                let level: Rational = w.iter().zip(&self.base).map(|(&a, b)| b * BigInt::from(a)).sum();
                FlatKey::Plane(w, frac(&level))
            }
        }
    }

    fn image(&self, r: &AffineIsometry) -> Flat {
        Flat { base: r.apply(&self.base), dirs: self.dirs.iter().map(|d| r.linear.mul_vec(d)).collect() }
    }

    /// Elements of `g` fixing every point of the flat.
    fn pointwise_stabilizer(&self, g: &CrystalGroup) -> Vec<AffineIsometry> {
        let (elements, _) = stabilizer(g, &self.base);
        elements.into_iter().filter(|e| self.dirs.iter().all(|d| e.linear.mul_vec(d) == *d)).collect()
    }
}

/// Every `Fix(S)` for nontrivial finite `S`, up to integer translation.
fn singular_flats(g: &CrystalGroup) -> BTreeMap<FlatKey, Flat> {
    let n = g.dim();
    let point_group = g.point_group();
    let mut flats = BTreeMap::new();
    for sub in group::subgroups(&point_group) {
        if sub.len() == 1 {
            continue;
        }
        let gens = generators(&sub);
        let lifts: Vec<(IntMatrix, RatVector, Vec<Vec<i64>>)> = gens
            .iter()
            .map(|p| {
                let r = &g.reps()[g.rep_index(p).expect("generator from point group")];
                (i_minus(p), r.transl.clone(), box_points(&window(p, &r.transl)))
            })
            .collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rhs: Vec<Rational> = Vec::new();
        collect_solutions(&lifts, 0, &mut rows, &mut rhs, n, &mut flats);
    }
    flats
}

fn collect_solutions(
    lifts: &[(IntMatrix, RatVector, Vec<Vec<i64>>)],
    depth: usize,
    rows: &mut Vec<Vec<Rational>>,
    rhs: &mut Vec<Rational>,
    n: usize,
    out: &mut BTreeMap<FlatKey, Flat>,
) {
    if depth == lifts.len() {
        let m = RatMatrix::from_rows(rows.clone());
        let Some((base, kernel)) = solve_affine(&m, rhs) else {
            return;
        };
        let dirs =
            kernel.iter().map(|k| k.iter().map(|v| v.to_integer().to_i64().expect("small kernel")).collect()).collect();
        let flat = Flat { base, dirs };
        out.entry(flat.key()).or_insert(flat);
        return;
    }
    let (a, c, points) = &lifts[depth];
    for lambda in points {
        let before = rows.len();
        for i in 0..n {
            rows.push(to_rat(a.row(i)));
            rhs.push(&c[i] + Rational::from_integer(BigInt::from(lambda[i])));
        }
        // Prune inconsistent partial systems early.
        if solve_affine(&RatMatrix::from_rows(rows.clone()), rhs).is_some() {
            collect_solutions(lifts, depth + 1, rows, rhs, n, out);
        }
        rows.truncate(before);
        rhs.truncate(before);
    }
}

/// Groups flats into orbits under the cosets; returns one representative per orbit.
fn flat_orbits(g: &CrystalGroup, flats: &BTreeMap<FlatKey, Flat>) -> Vec<Flat> {
    let mut seen: BTreeSet<FlatKey> = BTreeSet::new();
    let mut reps = Vec::new();
    for (key, flat) in flats {
        if seen.contains(key) {
            continue;
        }
        for r in g.reps() {
            seen.insert(flat.image(r).key());
        }
        reps.push(flat.clone());
    }
    reps
}

/// The maximal stabilizer order over all points and the isomorphism types attaining it.
pub fn max_isotropy(g: &CrystalGroup) -> (usize, Vec<IsotropyType>) {
    let mut best = 1;
    let mut types: BTreeSet<IsotropyType> = BTreeSet::new();
    for flat in singular_flats(g).values() {
        let k = flat.pointwise_stabilizer(g);
        if k.len() > best {
            best = k.len();
            types.clear();
        }
        if k.len() == best && best > 1 {
            types.insert(group::classify(&k));
        }
    }
    if best == 1 {
        types.insert(IsotropyType::Cyclic(1));
    }
    (best, types.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Topology {
    Point,
    Circle,
    OpenSegment,
    /// A two-dimensional stratum; detected but not analysed further.
    Surface,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Stratum {
    pub dim: usize,
    pub isotropy: IsotropyType,
    pub topology: Topology,
    /// Squared length, for one-dimensional strata.
    pub sq_length: Option<Rational>,
    pub count: usize,
}

/// Components of one singular line's image in the quotient, as
/// `(topology, squared length)`.
fn line_components(g: &CrystalGroup, flat: &Flat) -> Vec<(Topology, Rational)> {
    let d = &flat.dirs[0];
    let x0 = &flat.base;
    let sq_norm = g.lattice().norm(d);
    let v = unimodular_completion(&primitive_normalized(d)).expect("primitive direction");
    let sign = if primitive_normalized(d) == *d { 1 } else { -1 };

    let mut special: BTreeSet<Rational> = BTreeSet::new();
    let mut shifts: BTreeSet<Rational> = BTreeSet::new();
    let mut reflection: Option<Rational> = None;
    for r in g.reps() {
        let p = &r.linear;
        let pd = p.mul_vec(d);
        let u: RatVector = i_minus(p).mul_rat_vec(x0).iter().zip(&r.transl).map(|(a, c)| a - c).collect();
        let fixes_pointwise = pd == *d && is_integral(&u);
        if !fixes_pointwise {
            // Points x0 + t d fixed by some lift: u + t w integral, w = (I - P) d.
            let w = i_minus(p).mul_vec(d);
            if let Some(j) = w.iter().position(|&x| x != 0) {
                let wj = Rational::from_integer(BigInt::from(w[j]));
                let (lo, hi) = if w[j] > 0 { (u[j].clone(), &u[j] + &wj) } else { (&u[j] + &wj, u[j].clone()) };
                let mut k = ceil_int(&lo);
                while Rational::from_integer(k.clone()) <= hi {
                    let t = (Rational::from_integer(k.clone()) - &u[j]) / &wj;
                    let on_line: RatVector = u.iter().zip(&w).map(|(a, &b)| a + &t * BigInt::from(b)).collect();
                    if t >= Rational::zero() && t < Rational::one() && is_integral(&on_line) {
                        special.insert(t);
                    }
                    k += 1;
                }
            }
        }
        let eps = if pd == *d {
            1
        } else if pd.iter().zip(d).all(|(a, b)| *a == -*b) {
            -1
        } else {
            continue;
        };
        // r maps x0 + t d to x0 + (a + eps t) d up to integer translation
        // exactly when (V (P x0 + c - x0))[1..] is integral.
        let moved: RatVector = r.apply(x0).iter().zip(x0).map(|(a, b)| a - b).collect();
        let y = v.mul_rat_vec(&moved);
        if !is_integral(&y[1..]) {
            continue;
        }
        let a = frac(&(&y[0] * BigInt::from(sign)));
        if eps == 1 {
            shifts.insert(a);
        } else if reflection.is_none() {
            reflection = Some(a);
        }
    }

    let period = Rational::new(BigInt::one(), lcm_of_denominators(&shifts));
    let mut cuts: Vec<Rational> = Vec::new();
    let span = match &reflection {
        None => {
            for t in &special {
                cuts.push(t - &period * (t / &period).floor());
            }
            period.clone()
        }
        Some(a) => {
            let half = &period / BigInt::from(2);
            let center = a / BigInt::from(2);
            let c0 = &center - &half * (&center / &half).floor();
            for t in &special {
                let s = t - &c0;
                let mut r = &s - &period * (&s / &period).floor();
                if r > half {
                    r = &period - r;
                }
                cuts.push(r);
            }
            cuts.push(Rational::zero());
            cuts.push(half.clone());
            half
        }
    };
    cuts.sort();
    cuts.dedup();

    let topology = if reflection.is_some() || !cuts.is_empty() { Topology::OpenSegment } else { Topology::Circle };
    if cuts.is_empty() {
        return vec![(topology, &span * &span * &sq_norm)];
    }
    let mut lengths = Vec::new();
    match reflection {
        Some(_) => {
            for w in cuts.windows(2) {
                lengths.push(&w[1] - &w[0]);
            }
        }
        None => {
            for i in 0..cuts.len() {
                let next = if i + 1 < cuts.len() { cuts[i + 1].clone() } else { &cuts[0] + &span };
                lengths.push(next - &cuts[i]);
            }
        }
    }
    lengths.into_iter().map(|l| (Topology::OpenSegment, &l * &l * &sq_norm)).collect()
}

/// Inventory of the singular set of `Gamma \ R^n` for `n <= 3`.
pub fn singular_strata(g: &CrystalGroup) -> Result<Vec<Stratum>, IsotropyError> {
    if g.dim() > 3 {
        return Err(IsotropyError::UnsupportedDimension(g.dim()));
    }
    let flats = singular_flats(g);
    let mut tally: BTreeMap<(usize, IsotropyType, Topology, Option<Rational>), usize> = BTreeMap::new();
    for flat in flat_orbits(g, &flats) {
        let k = flat.pointwise_stabilizer(g);
        if k.len() <= 1 {
            continue;
        }
        let ty = group::classify(&k);
        match flat.dim() {
            0 => *tally.entry((0, ty, Topology::Point, None)).or_default() += 1,
            1 => {
                for (topology, sq) in line_components(g, &flat) {
                    *tally.entry((1, ty.clone(), topology, Some(sq))).or_default() += 1;
                }
            }
            dim => *tally.entry((dim, ty, Topology::Surface, None)).or_default() += 1,
        }
    }
    let mut strata: Vec<Stratum> = tally
        .into_iter()
        .map(|((dim, isotropy, topology, sq_length), count)| Stratum { dim, isotropy, topology, sq_length, count })
        .collect();
    strata.sort();
    Ok(strata)
}

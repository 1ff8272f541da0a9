//! The worked example pairs, in lattice coordinates, with their known values.
//!
//! Conversions from Euclidean coordinates: a lattice with basis `a_1..a_n`
//! has Gram matrix `(a_i . a_j)`; a linear map `B` becomes the integer matrix
//! of `B a_j` in the basis, and a translation `b` becomes its coordinate vector.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::crystal::{closure, AffineIsometry, CrystalGroup, FiniteAffine, FiniteAffineGroup, DEFAULT_CLOSURE_BOUND};
use crate::exact::rational::rat_vec;
use crate::exact::{int, rat, IntMatrix, RatMatrix, Rational};
use crate::group::IsotropyType;
use crate::homog::{self, FiniteOrthGroup, QuotientKind, SphereStratum};
use crate::isotropy::{self, Stratum, Topology};
use crate::lattice::Lattice;
use crate::spectrum::{self, Comparison};

pub const NAMES: [&str; 8] = ["flat1", "flat2", "flat3", "flat4", "flat5", "so6_stiefel", "so6_group", "so6_sphere"];

/// Cutoff for the spectral comparisons run by the checks.
pub const CHECK_CUTOFF: i64 = 25;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
}

#[derive(Debug, Clone)]
pub struct FlatPair {
    pub a: CrystalGroup,
    pub b: CrystalGroup,
    /// Columns give a sublattice basis in lattice coordinates.
    pub sublattice: Option<IntMatrix>,
    /// Generators of a finite isometry group of the sublattice torus, in
    /// sublattice coordinates, containing both quotient groups.
    pub ambient_generators: Vec<FiniteAffine>,
    pub orientable: bool,
}

impl FlatPair {
    /// Both groups modulo the sublattice (the full lattice if none is given).
    pub fn quotients(&self) -> (FiniteAffineGroup, FiniteAffineGroup) {
        let s = self.sublattice.clone().unwrap_or_else(|| IntMatrix::identity(self.a.dim()));
        let qa = self.a.quotient_mod_sublattice(&s).expect("catalog sublattice is invariant");
        let qb = self.b.quotient_mod_sublattice(&s).expect("catalog sublattice is invariant");
        (qa, qb)
    }

    pub fn ambient(&self) -> Option<FiniteAffineGroup> {
        if self.ambient_generators.is_empty() {
            return None;
        }
        Some(closure(&self.ambient_generators, DEFAULT_CLOSURE_BOUND).expect("catalog ambient group is finite"))
    }
}

/// Which homogeneous space the finite orthogonal pair acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrthSetting {
    /// Orthonormal 3-frames in `R^6`.
    Stiefel,
    /// The group `SO(6)` modulo the first group of the pair.
    Group,
    /// The unit sphere in `R^6`.
    Sphere,
}

#[derive(Debug, Clone)]
pub struct OrthPair {
    pub a: FiniteOrthGroup,
    pub b: FiniteOrthGroup,
    pub setting: OrthSetting,
}

#[derive(Debug, Clone)]
pub enum EntryData {
    Flat(FlatPair),
    Orth(OrthPair),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatExpected {
    pub isospectral_functions: bool,
    pub isospectral_one_forms: bool,
    pub isospectral_all_forms: bool,
    pub max_isotropy: [(usize, Vec<IsotropyType>); 2],
    pub strata: [Vec<Stratum>; 2],
    pub quotient_order: Option<usize>,
    pub ambient_order: Option<usize>,
    pub almost_conjugate_in_ambient: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthExpected {
    pub almost_conjugate: bool,
    /// `(order, fixed_dim)` of the subgroup type only the first group has.
    pub non_conjugacy_witness: (usize, usize),
    /// `(d, value for a, value for b)`.
    pub max_order_with_fixed_dim: Vec<(usize, usize, usize)>,
    /// Maximal isotropy orders on the homogeneous space.
    pub max_isotropy: (usize, usize),
    pub m_numbers: Option<(usize, usize)>,
    pub core_order: Option<usize>,
    pub sphere_strata: Option<[Vec<SphereStratum>; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Flat(FlatExpected),
    Orth(OrthExpected),
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub data: EntryData,
    pub expected: Expected,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

pub fn list() -> Vec<&'static str> {
    NAMES.to_vec()
}

pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
    match name {
        "flat1" => Ok(flat1()),
        "flat2" => Ok(flat2()),
        "flat3" => Ok(flat3()),
        "flat4" => Ok(flat4()),
        "flat5" => Ok(flat5()),
        "so6_stiefel" => Ok(so6(OrthSetting::Stiefel)),
        "so6_group" => Ok(so6(OrthSetting::Group)),
        "so6_sphere" => Ok(so6(OrthSetting::Sphere)),
        other => Err(CatalogError::UnknownEntry(other.into())),
    }
}

fn m(rows: &[[i64; 3]]) -> IntMatrix {
    IntMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
}

fn iso(linear: &IntMatrix, transl: &[(i64, i64)]) -> AffineIsometry {
    AffineIsometry::new(linear.clone(), rat_vec(transl))
}

fn lattice(rows: [[Rational; 3]; 3]) -> Lattice {
    Lattice::new(RatMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()))
        .expect("catalog Gram is positive definite")
}

fn diag_lattice(d: [Rational; 3]) -> Lattice {
    Lattice::new(RatMatrix::diagonal(&d)).expect("catalog Gram is positive definite")
}

fn group(l: &Lattice, reps: Vec<AffineIsometry>) -> CrystalGroup {
    CrystalGroup::new(l.clone(), reps).expect("catalog group validates")
}

fn powers(p: &IntMatrix, k: u32) -> Vec<AffineIsometry> {
    (0..k).map(|j| AffineIsometry::new(p.pow(j), rat_vec(&[(0, 1); 3]))).collect()
}

fn circle(isotropy: IsotropyType, sq: Rational, count: usize) -> Stratum {
    Stratum { dim: 1, isotropy, topology: Topology::Circle, sq_length: Some(sq), count }
}

fn segment(isotropy: IsotropyType, sq: Rational, count: usize) -> Stratum {
    Stratum { dim: 1, isotropy, topology: Topology::OpenSegment, sq_length: Some(sq), count }
}

fn points(isotropy: IsotropyType, count: usize) -> Stratum {
    Stratum { dim: 0, isotropy, topology: Topology::Point, sq_length: None, count }
}

fn sorted(mut v: Vec<Stratum>) -> Vec<Stratum> {
    v.sort();
    v
}

const Z2: IsotropyType = IsotropyType::Cyclic(2);
const Z4: IsotropyType = IsotropyType::Cyclic(4);

/// Quarter turn about the third axis.
fn tau() -> IntMatrix {
    m(&[[0, -1, 0], [1, 0, 0], [0, 0, 1]])
}

fn chi(signs: [i64; 3]) -> IntMatrix {
    IntMatrix::diagonal(&signs)
}

/// Lattice `2Z x 2Z x Z`, basis `2e_1, 2e_2, e_3`. The second group uses
/// `chi_j L_{b_j}` with `b_1 = e_1, b_2 = 0, b_3 = -e_1`, i.e. translation
/// `chi_j b_j`, which is `(1/2,0,0)` for `j = 1, 3` up to the lattice; the
/// third is stored as `(-1/2,0,0)`.
fn flat1() -> CatalogEntry {
    let l = diag_lattice([int(4), int(4), int(1)]);
    let a = group(&l, powers(&tau(), 4));
    let b = group(
        &l,
        vec![
            AffineIsometry::identity(3),
            iso(&chi([1, -1, -1]), &[(1, 2), (0, 1), (0, 1)]),
            iso(&chi([-1, 1, -1]), &[(0, 1), (0, 1), (0, 1)]),
            iso(&chi([-1, -1, 1]), &[(-1, 2), (0, 1), (0, 1)]),
        ],
    );
    CatalogEntry {
        name: "flat1",
        summary: "quarter-turn orbifold vs glide/half-turn orbifold on 2Z x 2Z x Z: isospectral on functions, not on 1-forms, maximal isotropy Z4 vs Z2",
        data: EntryData::Flat(FlatPair { a, b, sublattice: None, ambient_generators: vec![], orientable: true }),
        expected: Expected::Flat(FlatExpected {
            isospectral_functions: true,
            isospectral_one_forms: false,
            isospectral_all_forms: false,
            max_isotropy: [(4, vec![Z4]), (2, vec![Z2])],
            strata: [
                sorted(vec![circle(Z4, int(1), 2), circle(Z2, int(1), 1)]),
                sorted(vec![circle(Z2, int(4), 2), circle(Z2, int(1), 2)]),
            ],
            quotient_order: None,
            ambient_order: None,
            almost_conjugate_in_ambient: false,
        }),
    }
}

/// Lattice `(2Z)^3`; the second group is the Klein four-group of half-turns
/// without translations.
fn flat2() -> CatalogEntry {
    let l = diag_lattice([int(4), int(4), int(4)]);
    let a = group(&l, powers(&tau(), 4));
    let zero = [(0, 1); 3];
    let b = group(
        &l,
        vec![
            AffineIsometry::identity(3),
            iso(&chi([1, -1, -1]), &zero),
            iso(&chi([-1, 1, -1]), &zero),
            iso(&chi([-1, -1, 1]), &zero),
        ],
    );
    CatalogEntry {
        name: "flat2",
        summary: "quarter-turn vs Klein four half-turn orbifold on (2Z)^3: isospectral on functions, maximal isotropy Z4 on circles vs Z2xZ2 at points",
        data: EntryData::Flat(FlatPair { a, b, sublattice: None, ambient_generators: vec![], orientable: true }),
        expected: Expected::Flat(FlatExpected {
            isospectral_functions: true,
            isospectral_one_forms: false,
            isospectral_all_forms: false,
            max_isotropy: [(4, vec![Z4]), (4, vec![IsotropyType::KleinFour])],
            strata: [
                sorted(vec![circle(Z4, int(4), 2), circle(Z2, int(4), 1)]),
                sorted(vec![points(IsotropyType::KleinFour, 8), segment(Z2, int(1), 12)]),
            ],
            quotient_order: None,
            ambient_order: None,
            almost_conjugate_in_ambient: false,
        }),
    }
}

/// Lattice `Z x Z x (1/sqrt 2) Z` with basis `e_1, e_2, e_3/sqrt 2`; both
/// generators keep the basis vectors on coordinate axes so their matrices
/// are unchanged. The sublattice has basis `(1,1,0), (1,-1,0), (0,0,2)` in
/// lattice coordinates. In that basis the two involutions are
/// `diag(-1,1,-1)` and `diag(-1,-1,1)`, and the conjugating rotation sends
/// the basis vectors to `-v_2`, `v_3`, `v_1`.
fn flat3() -> CatalogEntry {
    let l = diag_lattice([int(1), int(1), rat(1, 2)]);
    let zero = [(0, 1); 3];
    let t = m(&[[0, -1, 0], [-1, 0, 0], [0, 0, -1]]);
    let r = chi([-1, -1, 1]);
    let a = group(&l, vec![AffineIsometry::identity(3), iso(&t, &zero)]);
    let b = group(&l, vec![AffineIsometry::identity(3), iso(&r, &zero)]);
    let s = m(&[[1, 1, 0], [1, -1, 0], [0, 0, 2]]);
    let fa = |p: IntMatrix, c: &[(i64, i64)]| FiniteAffine::new(p, rat_vec(c));
    let ambient_generators = vec![
        fa(chi([-1, 1, -1]), &zero),
        fa(chi([-1, -1, 1]), &zero),
        fa(m(&[[0, 0, 1], [-1, 0, 0], [0, 1, 0]]), &zero),
        fa(IntMatrix::identity(3), &[(1, 4), (0, 1), (0, 1)]),
        fa(IntMatrix::identity(3), &[(0, 1), (1, 4), (0, 1)]),
        fa(IntMatrix::identity(3), &[(0, 1), (0, 1), (1, 4)]),
    ];
    CatalogEntry {
        name: "flat3",
        summary: "Sunada pair on Z x Z x (1/sqrt2) Z: order-8 quotient groups almost conjugate in a finite isometry group of a sublattice torus; singular circles 2 x sqrt2 vs 4 x 1/sqrt2",
        data: EntryData::Flat(FlatPair { a, b, sublattice: Some(s), ambient_generators, orientable: true }),
        expected: Expected::Flat(FlatExpected {
            isospectral_functions: true,
            isospectral_one_forms: true,
            isospectral_all_forms: true,
            max_isotropy: [(2, vec![Z2]), (2, vec![Z2])],
            strata: [vec![circle(Z2, int(2), 2)], vec![circle(Z2, rat(1, 2), 4)]],
            quotient_order: Some(8),
            ambient_order: None,
            almost_conjugate_in_ambient: true,
        }),
    }
}

/// Lattice `(2Z)^3`, reflections `chi_j` with `b_j = e_1 + e_2` or `e_3`;
/// translations `chi_j b_j` in lattice coordinates.
fn flat4() -> CatalogEntry {
    let l = diag_lattice([int(4), int(4), int(4)]);
    let chis = [chi([-1, 1, 1]), chi([-1, -1, 1]), chi([1, -1, 1])];
    let a = group(
        &l,
        vec![
            AffineIsometry::identity(3),
            iso(&chis[0], &[(-1, 2), (1, 2), (0, 1)]),
            iso(&chis[1], &[(0, 1), (0, 1), (0, 1)]),
            iso(&chis[2], &[(1, 2), (-1, 2), (0, 1)]),
        ],
    );
    let b = group(
        &l,
        vec![
            AffineIsometry::identity(3),
            iso(&chis[0], &[(0, 1), (0, 1), (1, 2)]),
            iso(&chis[1], &[(0, 1), (0, 1), (0, 1)]),
            iso(&chis[2], &[(0, 1), (0, 1), (1, 2)]),
        ],
    );
    let zero = [(0, 1); 3];
    let fa = |p: IntMatrix, c: &[(i64, i64)]| FiniteAffine::new(p, rat_vec(c));
    let mut ambient_generators: Vec<FiniteAffine> = a.cosets().into_iter().chain(b.cosets()).collect();
    ambient_generators.extend([
        fa(m(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]), &zero),
        fa(m(&[[1, 0, 0], [0, 0, 1], [0, 1, 0]]), &zero),
        fa(IntMatrix::identity(3), &[(1, 4), (0, 1), (0, 1)]),
        fa(IntMatrix::identity(3), &[(0, 1), (1, 4), (0, 1)]),
        fa(IntMatrix::identity(3), &[(0, 1), (0, 1), (1, 4)]),
    ]);
    CatalogEntry {
        name: "flat4",
        summary:
            "non-orientable Sunada pair on (2Z)^3 with reflections: singular circles 2 of length 2 vs 4 of length 1",
        data: EntryData::Flat(FlatPair { a, b, sublattice: None, ambient_generators, orientable: false }),
        expected: Expected::Flat(FlatExpected {
            isospectral_functions: true,
            isospectral_one_forms: true,
            isospectral_all_forms: true,
            max_isotropy: [(2, vec![Z2]), (2, vec![Z2])],
            strata: [vec![circle(Z2, int(4), 2)], vec![circle(Z2, int(1), 4)]],
            quotient_order: Some(4),
            ambient_order: Some(3072),
            almost_conjugate_in_ambient: true,
        }),
    }
}

/// Hexagonal lattice with basis `(2,0,0), (1,sqrt3,0), (0,0,1)`. The sixth
/// turn sends `a_1 -> a_2` and `a_2 -> a_2 - a_1`; the half-turn about the
/// first axis sends `a_2 -> a_1 - a_2` and `a_3 -> -a_3`.
fn flat5() -> CatalogEntry {
    let l = lattice([[int(4), int(2), int(0)], [int(2), int(4), int(0)], [int(0), int(0), int(1)]]);
    let h = m(&[[0, -1, 0], [1, 1, 0], [0, 0, 1]]);
    let r = m(&[[1, 1, 0], [0, -1, 0], [0, 0, -1]]);
    let a = group(&l, powers(&h, 6));
    let zero = rat_vec(&[(0, 1); 3]);
    let mut reps = Vec::new();
    for j in 0..3 {
        for k in 0..2 {
            reps.push(AffineIsometry::new(h.pow(2 * j).mul(&r.pow(k)), zero.clone()));
        }
    }
    let b = group(&l, reps);
    let z3 = IsotropyType::Cyclic(3);
    let d6 = IsotropyType::Dihedral(3);
    CatalogEntry {
        name: "flat5",
        summary: "hexagonal pair: isospectral on functions, not on 1-forms, maximal isotropy Z6 along a circle vs dihedral of order 6 at two points",
        data: EntryData::Flat(FlatPair { a, b, sublattice: None, ambient_generators: vec![], orientable: true }),
        expected: Expected::Flat(FlatExpected {
            isospectral_functions: true,
            isospectral_one_forms: false,
            isospectral_all_forms: false,
            max_isotropy: [(6, vec![IsotropyType::Cyclic(6)]), (6, vec![d6.clone()])],
            strata: [
                sorted(vec![circle(IsotropyType::Cyclic(6), int(1), 1), circle(z3.clone(), int(1), 1), circle(Z2, int(1), 1)]),
                sorted(vec![points(d6, 2), segment(z3.clone(), rat(1, 4), 1), circle(z3, int(1), 1), segment(Z2, int(4), 2)]),
            ],
            quotient_order: None,
            ambient_order: None,
            almost_conjugate_in_ambient: false,
        }),
    }
}

fn so6_groups() -> (FiniteOrthGroup, FiniteOrthGroup) {
    let a = FiniteOrthGroup::signed_diagonal(&[
        &[1, 1, 1, 1, 1, 1],
        &[-1, -1, -1, -1, -1, -1],
        &[-1, -1, 1, 1, 1, 1],
        &[-1, 1, -1, 1, 1, 1],
        &[1, -1, -1, 1, 1, 1],
        &[-1, 1, 1, -1, -1, -1],
        &[1, -1, 1, -1, -1, -1],
        &[1, 1, -1, -1, -1, -1],
    ])
    .expect("signed diagonal group");
    let b = FiniteOrthGroup::signed_diagonal(&[
        &[1, 1, 1, 1, 1, 1],
        &[-1, -1, -1, -1, -1, -1],
        &[-1, -1, 1, 1, 1, 1],
        &[1, 1, -1, -1, 1, 1],
        &[1, 1, 1, 1, -1, -1],
        &[-1, -1, -1, -1, 1, 1],
        &[-1, -1, 1, 1, -1, -1],
        &[1, 1, -1, -1, -1, -1],
    ])
    .expect("signed diagonal group");
    (a, b)
}

fn so6(setting: OrthSetting) -> CatalogEntry {
    let (a, b) = so6_groups();
    let base = OrthExpected {
        almost_conjugate: true,
        non_conjugacy_witness: (4, 3),
        max_order_with_fixed_dim: vec![(3, 4, 2), (2, 4, 4), (1, 4, 4), (0, 8, 8)],
        max_isotropy: (4, 2),
        m_numbers: None,
        core_order: None,
        sphere_strata: None,
    };
    let (name, summary, expected) = match setting {
        OrthSetting::Stiefel => (
            "so6_stiefel",
            "two order-8 signed diagonal groups acting on 3-frames in R^6: maximal isotropy 4 vs 2",
            base,
        ),
        OrthSetting::Group => (
            "so6_group",
            "the same pair acting on SO(6) modulo the first group: m-numbers 8 and 4 over a core of order 2",
            OrthExpected { m_numbers: Some((8, 4)), core_order: Some(2), ..base },
        ),
        OrthSetting::Sphere => {
            let point = SphereStratum {
                isotropy_order: 4,
                fixed_dim: 1,
                kind: QuotientKind::ProjectiveSpace,
                components: 1,
                point_count: Some(1),
            };
            let plane = SphereStratum {
                isotropy_order: 4,
                fixed_dim: 3,
                kind: QuotientKind::ProjectiveSpace,
                components: 1,
                point_count: None,
            };
            let circle = SphereStratum { fixed_dim: 2, point_count: None, ..point.clone() };
            (
                "so6_sphere",
                "the same pair acting on the unit sphere in R^6: equal maximal isotropy Z2xZ2, strata RP^2 plus three points vs three circles",
                OrthExpected {
                    max_isotropy: (4, 4),
                    sphere_strata: Some([vec![plane, point.clone(), point.clone(), point], vec![circle.clone(), circle.clone(), circle]]),
                    ..base
                },
            )
        }
    };
    CatalogEntry {
        name,
        summary,
        data: EntryData::Orth(OrthPair { a, b, setting }),
        expected: Expected::Orth(expected),
    }
}

fn check(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
    Check { label: label.into(), passed, detail: detail.into() }
}

fn describe_comparison(c: &Result<Comparison, spectrum::SpectrumError>) -> String {
    match c {
        Ok(Comparison::Equal) => "equal".into(),
        Ok(Comparison::FirstDifference { mu, a, b }) => format!("first difference at mu = {mu}: {a} vs {b}"),
        Err(e) => format!("error: {e}"),
    }
}

fn describe_strata(s: &[Stratum]) -> String {
    let parts: Vec<String> = s
        .iter()
        .map(|x| match &x.sq_length {
            Some(sq) => format!("{}x {:?} {} sqlen {}", x.count, x.topology, x.isotropy, sq),
            None => format!("{}x {:?} {}", x.count, x.topology, x.isotropy),
        })
        .collect();
    format!("[{}]", parts.join("; "))
}

fn flat_checks(name: &str, pair: &FlatPair, exp: &FlatExpected) -> Vec<Check> {
    let mut out = Vec::new();
    let cutoff = int(CHECK_CUTOFF);
    let groups = [&pair.a, &pair.b];
    for (tag, g) in ["a", "b"].iter().zip(groups) {
        out.push(check(format!("{name}: group {tag} validates"), g.validate().is_ok(), format!("order {}", g.order())));
    }
    let degrees: Vec<usize> = if exp.isospectral_all_forms { (0..=3).collect() } else { vec![0, 1] };
    for k in degrees {
        let c = spectrum::compare(&pair.a, &pair.b, k, &cutoff);
        let want_equal = match k {
            0 => exp.isospectral_functions,
            1 => exp.isospectral_one_forms,
            _ => exp.isospectral_all_forms,
        };
        let passed = matches!(c, Ok(Comparison::Equal)) == want_equal && c.is_ok();
        let verdict = if want_equal { "isospectral" } else { "not isospectral" };
        out.push(check(
            format!("{name}: {verdict} on {k}-forms up to mu = {CHECK_CUTOFF}"),
            passed,
            describe_comparison(&c),
        ));
    }
    if pair.orientable {
        for (tag, g) in ["a", "b"].iter().zip(groups) {
            let ok =
                spectrum::spectrum_tables(g, &int(10)).is_ok_and(|t| (0..=3).all(|k| t[k].entries == t[3 - k].entries));
            out.push(check(format!("{name}: group {tag} satisfies Poincare duality up to mu = 10"), ok, ""));
        }
    }
    for (i, (tag, g)) in ["a", "b"].iter().zip(groups).enumerate() {
        let got = isotropy::max_isotropy(g);
        let want = &exp.max_isotropy[i];
        let names: Vec<String> = got.1.iter().map(|t| format!("{t}")).collect();
        out.push(check(
            format!("{name}: group {tag} maximal isotropy order {}", want.0),
            got == *want,
            format!("order {} types {}", got.0, names.join(",")),
        ));
    }
    for (i, (tag, g)) in ["a", "b"].iter().zip(groups).enumerate() {
        let got = isotropy::singular_strata(g);
        let passed = got.as_ref().is_ok_and(|s| *s == exp.strata[i]);
        let detail = match &got {
            Ok(s) => describe_strata(s),
            Err(e) => format!("error: {e}"),
        };
        out.push(check(
            format!("{name}: group {tag} singular strata {}", describe_strata(&exp.strata[i])),
            passed,
            detail,
        ));
    }
    if let Some(order) = exp.quotient_order {
        let (qa, qb) = pair.quotients();
        out.push(check(
            format!("{name}: quotient groups have order {order}"),
            qa.order() == order && qb.order() == order,
            format!("{} and {}", qa.order(), qb.order()),
        ));
    }
    if let Some(ambient) = pair.ambient() {
        if let Some(order) = exp.ambient_order {
            out.push(check(
                format!("{name}: ambient group has order {order}"),
                ambient.order() == order,
                format!("{}", ambient.order()),
            ));
        }
        let (qa, qb) = pair.quotients();
        let r = homog::almost_conjugate_finite(qa.elements(), qb.elements(), ambient.elements());
        let found = matches!(r, Ok(Some(_)));
        let detail = match &r {
            Ok(Some(m)) => format!("bijection of {} pairs in an ambient group of order {}", m.len(), ambient.order()),
            Ok(None) => "no class-preserving bijection".into(),
            Err(e) => format!("error: {e}"),
        };
        out.push(check(
            format!("{name}: quotient groups almost conjugate in the ambient group"),
            found == exp.almost_conjugate_in_ambient,
            detail,
        ));
    }
    out
}

fn orth_checks(name: &str, pair: &OrthPair, exp: &OrthExpected) -> Vec<Check> {
    let mut out = Vec::new();
    let found = homog::almost_conjugate_orthogonal(&pair.a, &pair.b);
    let certified = found.as_ref().is_some_and(|m| m.iter().all(|p| p.conjugator.is_some()));
    out.push(check(
        format!("{name}: almost conjugate in SO(6)"),
        found.is_some() == exp.almost_conjugate && certified == exp.almost_conjugate,
        format!("bijection {}, every pair certified by an even signed permutation: {certified}", found.is_some()),
    ));
    let verdict = homog::conjugate_in_orthogonal(&pair.a, &pair.b);
    let (order, fixed) = exp.non_conjugacy_witness;
    let passed = matches!(
        &verdict,
        Ok(homog::OrthConjugacy::ProvablyNot(homog::NonConjugacyWitness::SubgroupFixedDim { order: o, fixed_dim: f, count_a, count_b: 0 }))
            if *o == order && *f == fixed && *count_a > 0
    );
    out.push(check(
        format!("{name}: not conjugate, witness subgroup of order {order} fixing a {fixed}-space"),
        passed,
        format!("{verdict:?}"),
    ));
    for &(d, va, vb) in &exp.max_order_with_fixed_dim {
        let (ga, _) = homog::max_order_with_fixed_dim(&pair.a, d);
        let (gb, _) = homog::max_order_with_fixed_dim(&pair.b, d);
        out.push(check(
            format!("{name}: largest subgroup fixing a {d}-space has order {va} vs {vb}"),
            (ga, gb) == (va, vb),
            format!("{ga} vs {gb}"),
        ));
    }
    match pair.setting {
        OrthSetting::Stiefel => {
            // The frame stabilizer has trivial normal core, so isotropy orders are the m-numbers.
            let ga = homog::max_order_with_fixed_dim(&pair.a, 3).0;
            let gb = homog::max_order_with_fixed_dim(&pair.b, 3).0;
            out.push(check(
                format!("{name}: maximal isotropy orders {} vs {}", exp.max_isotropy.0, exp.max_isotropy.1),
                (ga, gb) == exp.max_isotropy,
                format!("{ga} vs {gb}"),
            ));
        }
        OrthSetting::Group => {
            let (m11, m21) = exp.m_numbers.expect("group setting lists m-numbers");
            let got = (homog::m_number_finite_h(&pair.a, &pair.a), homog::m_number_finite_h(&pair.b, &pair.a));
            out.push(check(
                format!("{name}: m-numbers {m11} and {m21}"),
                got == (Ok(m11), Ok(m21)),
                format!("{got:?}"),
            ));
            let core = homog::ambient_core(&pair.a).order();
            let want_core = exp.core_order.expect("group setting lists the core order");
            out.push(check(format!("{name}: normal core has order {want_core}"), core == want_core, format!("{core}")));
            if let (Ok(a), Ok(b)) = got {
                let derived = (a / core, b / core);
                out.push(check(
                    format!("{name}: maximal isotropy orders {} vs {}", exp.max_isotropy.0, exp.max_isotropy.1),
                    derived == exp.max_isotropy && a % core == 0 && b % core == 0,
                    format!("{} vs {}", derived.0, derived.1),
                ));
            }
        }
        OrthSetting::Sphere => {
            let want = exp.sphere_strata.as_ref().expect("sphere setting lists strata");
            for (i, (tag, g)) in ["a", "b"].iter().zip([&pair.a, &pair.b]).enumerate() {
                let got = homog::sphere_strata(g);
                out.push(check(
                    format!("{name}: group {tag} maximal-isotropy sphere strata"),
                    got.as_ref() == Ok(&want[i]),
                    format!("{got:?}"),
                ));
            }
            let ga = homog::max_order_with_fixed_dim(&pair.a, 1);
            let gb = homog::max_order_with_fixed_dim(&pair.b, 1);
            let klein = |w: &[Vec<RatMatrix>]| w.iter().all(|s| crate::group::classify(s) == IsotropyType::KleinFour);
            out.push(check(
                format!("{name}: maximal isotropy Z2xZ2 of order {} for both", exp.max_isotropy.0),
                (ga.0, gb.0) == exp.max_isotropy && klein(&ga.1) && klein(&gb.1),
                format!("{} vs {}", ga.0, gb.0),
            ));
        }
    }
    out
}

/// Recomputes every expected value of an entry.
pub fn run_checks(entry: &CatalogEntry) -> Vec<Check> {
    match (&entry.data, &entry.expected) {
        (EntryData::Flat(p), Expected::Flat(e)) => flat_checks(entry.name, p, e),
        (EntryData::Orth(p), Expected::Orth(e)) => orth_checks(entry.name, p, e),
        _ => vec![check(format!("{}: data and expectations agree in kind", entry.name), false, "")],
    }
}

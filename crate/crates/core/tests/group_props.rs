use std::collections::BTreeSet;
use std::sync::OnceLock;

use orbispec_core::catalog::{self, EntryData};
use orbispec_core::crystal::{AffineIsometry, CrystalGroup};
use orbispec_core::exact::{int, rat, IntMatrix, RatMatrix, Rational};
use orbispec_core::homog::{self, FiniteOrthGroup, OrthConjugacy};
use orbispec_core::isotropy;
use orbispec_core::spectrum;
use proptest::prelude::*;

const FLATS: [&str; 5] = ["flat1", "flat2", "flat3", "flat4", "flat5"];

fn flat_group(index: usize) -> CrystalGroup {
    let name = FLATS[index / 2];
    match catalog::get(name).unwrap().data {
        EntryData::Flat(p) if index.is_multiple_of(2) => p.a,
        EntryData::Flat(p) => p.b,
        EntryData::Orth(_) => unreachable!(),
    }
}

fn orth_groups() -> Vec<FiniteOrthGroup> {
    match catalog::get("so6_group").unwrap().data {
        EntryData::Orth(p) => vec![p.a, p.b],
        EntryData::Flat(_) => unreachable!(),
    }
}

fn orth_subgroups() -> &'static [Vec<Vec<RatMatrix>>] {
    static SUBS: OnceLock<Vec<Vec<Vec<RatMatrix>>>> = OnceLock::new();
    SUBS.get_or_init(|| orth_groups().iter().map(FiniteOrthGroup::subgroups).collect())
}

fn any_flat() -> impl Strategy<Value = CrystalGroup> {
    (0..2 * FLATS.len()).prop_map(flat_group)
}

/// A product of elementary integer matrices, optionally with a sign flip.
fn unimodular() -> impl Strategy<Value = IntMatrix> {
    let step = (0usize..3, 1usize..3, prop::bool::ANY);
    (prop::collection::vec(step, 1..4), prop::bool::ANY).prop_map(|(steps, flip)| {
        let mut u = IntMatrix::identity(3);
        for (i, off, neg) in steps {
            let j = (i + off) % 3;
            let e = IntMatrix::from_fn(3, 3, |r, c| match (r == c, (r, c) == (i, j)) {
                (true, _) => 1,
                (_, true) if neg => -1,
                (_, true) => 1,
                _ => 0,
            });
            u = u.mul(&e);
        }
        if flip {
            u = u.mul(&IntMatrix::diagonal(&[-1, 1, 1]));
        }
        u
    })
}

/// A group element: a coset representative shifted by a lattice vector.
fn element(g: &CrystalGroup) -> impl Strategy<Value = AffineIsometry> {
    let reps = g.reps().to_vec();
    (0..reps.len(), prop::collection::vec(-2i64..=2, 3)).prop_map(move |(i, l)| reps[i].shifted(&l))
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec((-4i64..=4).prop_map(|v| rat(v, 4)), 3)
}

fn sorted(v: Vec<AffineIsometry>) -> Vec<AffineIsometry> {
    let mut v = v;
    v.sort();
    v
}

fn signed_perm(perm: &[usize], signs: &[bool]) -> RatMatrix {
    RatMatrix::from_fn(6, 6, |r, c| match (perm[c] == r, signs[c]) {
        (true, true) => int(-1),
        (true, false) => int(1),
        _ => int(0),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn composition_is_associative_with_inverses(
        (a, b, c) in any_flat().prop_flat_map(|g| (element(&g), element(&g), element(&g)))
    ) {
        let ab_c = a.compose(&b).unwrap().compose(&c).unwrap();
        let a_bc = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        prop_assert!(a.compose(&a.invert()).unwrap().is_identity());
        prop_assert!(a.invert().compose(&a).unwrap().is_identity());
    }

    #[test]
    fn point_group_is_closed(g in any_flat()) {
        prop_assert!(g.validate().is_ok());
        let pg: BTreeSet<IntMatrix> = g.point_group().into_iter().collect();
        for p in &pg {
            prop_assert!(pg.contains(&p.inverse_unimodular().unwrap()));
            for q in &pg {
                prop_assert!(pg.contains(&p.mul(q)));
            }
        }
    }

    #[test]
    fn quotient_order_is_point_group_order_times_index(g in any_flat(), k in 1i64..=3) {
        // Scalar sublattices are invariant under every linear part.
        let s = IntMatrix::diagonal(&[k, k, k]);
        let q = g.quotient_mod_sublattice(&s).unwrap();
        prop_assert_eq!(q.order(), g.order() * (k * k * k) as usize);
    }

    #[test]
    fn multiplicities_ignore_the_choice_of_representative(
        g in any_flat(),
        i in 0usize..8,
        lambda in prop::collection::vec(-2i64..=2, 3),
        k in 0usize..=3,
    ) {
        let h = g.with_shifted_rep(i % g.order(), &lambda);
        for mu in g.lattice().dual().norm_values(&int(6)) {
            prop_assert_eq!(spectrum::multiplicity(&g, k, &mu).unwrap(), spectrum::multiplicity(&h, k, &mu).unwrap());
        }
    }

    #[test]
    fn multiplicities_ignore_the_lattice_basis(g in any_flat(), u in unimodular(), k in 0usize..=3) {
        let h = g.change_basis(&u).unwrap();
        prop_assert_eq!(spectrum::spectrum_table(&g, k, &int(6)).unwrap(), spectrum::spectrum_table(&h, k, &int(6)).unwrap());
    }

    #[test]
    fn alternating_sums_vanish_off_zero(g in any_flat()) {
        let tables = spectrum::spectrum_tables(&g, &int(6)).unwrap();
        for mu in tables[0].entries.keys().filter(|mu| **mu > int(0)) {
            let alt: i64 = (0..=3).map(|k| if k % 2 == 0 { 1 } else { -1 } * tables[k].get(mu) as i64).sum();
            prop_assert_eq!(alt, 0);
        }
    }

    #[test]
    fn orientable_groups_satisfy_poincare_duality(g in any_flat()) {
        prop_assume!(g.point_group().iter().all(|p| p.det() == 1));
        let tables = spectrum::spectrum_tables(&g, &int(6)).unwrap();
        for k in 0..=3 {
            prop_assert_eq!(&tables[k].entries, &tables[3 - k].entries);
        }
    }

    #[test]
    fn stabilizers_are_equivariant(
        (g, gamma) in any_flat().prop_flat_map(|g| { let e = element(&g); (Just(g), e) }),
        x in point(),
    ) {
        let (stab, iso) = isotropy::stabilizer(&g, &x);
        let linear: BTreeSet<&IntMatrix> = stab.iter().map(|s| &s.linear).collect();
        prop_assert_eq!(linear.len(), stab.len());
        let (moved, moved_iso) = isotropy::stabilizer(&g, &gamma.apply(&x));
        let conj: Vec<AffineIsometry> = stab
            .iter()
            .map(|s| gamma.compose(s).unwrap().compose(&gamma.invert()).unwrap())
            .collect();
        prop_assert_eq!(sorted(moved), sorted(conj));
        prop_assert_eq!(iso, moved_iso);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn strata_ignore_the_lattice_basis(g in any_flat(), u in unimodular()) {
        let h = g.change_basis(&u).unwrap();
        prop_assert_eq!(isotropy::singular_strata(&g).unwrap(), isotropy::singular_strata(&h).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn almost_conjugacy_is_reflexive_and_symmetric(i in 0usize..2, j in 0usize..2) {
        let gs = orth_groups();
        prop_assert!(homog::almost_conjugate_orthogonal(&gs[i], &gs[i]).is_some());
        prop_assert_eq!(
            homog::almost_conjugate_orthogonal(&gs[i], &gs[j]).is_some(),
            homog::almost_conjugate_orthogonal(&gs[j], &gs[i]).is_some()
        );
    }

}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn conjugates_are_found_and_almost_conjugate(
        i in 0usize..2,
        perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        signs in prop::collection::vec(prop::bool::ANY, 6),
    ) {
        let g = &orth_groups()[i];
        let p = signed_perm(&perm, &signs);
        let p_inv = p.transpose();
        let h = FiniteOrthGroup::new(g.elements().iter().map(|m| p.mul(m).mul(&p_inv)).collect()).unwrap();
        match homog::conjugate_in_orthogonal(g, &h).unwrap() {
            OrthConjugacy::Conjugate(a) => {
                let a_inv = a.inverse().unwrap();
                let image: BTreeSet<RatMatrix> = g.elements().iter().map(|m| a.mul(m).mul(&a_inv)).collect();
                let target: BTreeSet<RatMatrix> = h.elements().iter().cloned().collect();
                prop_assert_eq!(image, target);
            }
            other => prop_assert!(false, "expected a conjugator, got {:?}", other),
        }
        prop_assert!(homog::almost_conjugate_orthogonal(g, &h).is_some());
    }

    #[test]
    fn fixed_dim_is_antitone(i in 0usize..2, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let subs = &orth_subgroups()[i];
        let (s, t) = (&subs[a.index(subs.len())], &subs[b.index(subs.len())]);
        if s.iter().all(|x| t.contains(x)) {
            prop_assert!(homog::fixed_dim(s, 6) >= homog::fixed_dim(t, 6));
        }
        let union: Vec<RatMatrix> = s.iter().chain(t).cloned().collect();
        prop_assert!(homog::fixed_dim(&union, 6) <= homog::fixed_dim(s, 6).min(homog::fixed_dim(t, 6)));
    }

}

#[test]
fn stabilizer_elements_fix_their_point() {
    for i in 0..2 * FLATS.len() {
        let g = flat_group(i);
        let x = vec![rat(1, 2), rat(0, 1), rat(1, 4)];
        let (stab, iso) = isotropy::stabilizer(&g, &x);
        assert_eq!(stab.len(), iso.order());
        for s in &stab {
            assert_eq!(s.apply(&x), x);
            assert!(g.reps().iter().any(|r| r.linear == s.linear));
        }
        assert!(stab.iter().any(|s| s.is_identity()));
    }
}

#[test]
fn max_order_is_nonincreasing() {
    for g in &orth_groups() {
        let orders: Vec<usize> = (0..=6).map(|d| homog::max_order_with_fixed_dim(g, d).0).collect();
        assert_eq!(orders[0], g.order());
        assert!(orders.windows(2).all(|w| w[0] >= w[1]), "{orders:?}");
    }
}

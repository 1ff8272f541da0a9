use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use orbispec_core::exact::rational::floor_sqrt;
use orbispec_core::exact::{int, rat, IntMatrix, RatMatrix, Rational};
use orbispec_core::lattice::Lattice;
use proptest::prelude::*;

/// `U^T D U` for a positive diagonal `D` and an invertible integer `U`.
fn gram() -> impl Strategy<Value = RatMatrix> {
    let diag = prop::collection::vec((1i64..=4, 1i64..=3), 3);
    let u = prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 3);
    (diag, u).prop_filter_map("singular", |(d, rows)| {
        let u = IntMatrix::from_rows(rows);
        if u.det() == 0 {
            return None;
        }
        let d = RatMatrix::diagonal(&d.iter().map(|&(a, b)| rat(a, b)).collect::<Vec<_>>());
        let ur = u.to_rational();
        Some(ur.transpose().mul(&d).mul(&ur))
    })
}

fn naive_counts(l: &Lattice, cutoff: &Rational) -> BTreeMap<Rational, usize> {
    let inv = l.gram().inverse().unwrap();
    let r: Vec<i64> = (0..3).map(|i| floor_sqrt(&(cutoff * &inv[(i, i)])).to_i64().unwrap()).collect();
    let mut out = BTreeMap::new();
    for a in -r[0]..=r[0] {
        for b in -r[1]..=r[1] {
            for c in -r[2]..=r[2] {
                let n = l.norm(&[a, b, c]);
                if n <= *cutoff {
                    *out.entry(n).or_insert(0) += 1;
                }
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn shells_match_a_naive_box(g in gram(), cutoff in 1i64..=6) {
        let l = Lattice::new(g).unwrap();
        let fast: BTreeMap<Rational, usize> = l.shells_up_to(&int(cutoff)).into_iter().map(|(k, v)| (k, v.len())).collect();
        prop_assert_eq!(fast, naive_counts(&l, &int(cutoff)));
    }

    #[test]
    fn shells_are_symmetric_and_exact(g in gram(), cutoff in 1i64..=6) {
        let l = Lattice::new(g).unwrap();
        for (mu, shell) in l.shells_up_to(&int(cutoff)) {
            for v in &shell {
                prop_assert_eq!(l.norm(v), mu.clone());
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                prop_assert!(shell.binary_search(&neg).is_ok());
            }
        }
    }

    #[test]
    fn dual_of_dual_is_identity(g in gram()) {
        let l = Lattice::new(g).unwrap();
        prop_assert_eq!(l.dual().dual(), l);
    }

    #[test]
    fn ball_is_the_union_of_shells(g in gram(), cutoff in 0i64..=5) {
        let l = Lattice::new(g).unwrap();
        let ball = l.enumerate_ball(&int(cutoff));
        let total: usize = l.norm_values(&int(cutoff)).iter().map(|mu| l.enumerate_shell(mu).len()).sum();
        prop_assert_eq!(ball.len(), total);
    }
}

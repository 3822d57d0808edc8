use proptest::prelude::*;
use proptest::sample::select;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ctrslab_core::harness::{check_sr_wll_iff, random_dctrs, SystemShape};
use ctrslab_core::transform::sr_unchecked;
use ctrslab_core::{
    is_ultra_wll, is_wll_system, linearize, match_term, unravel, Position, Substitution, Term, Var,
};

fn terms(sig: &[(&str, usize)], vars: &[&str]) -> BoxedStrategy<Term> {
    let leaves: Vec<Term> = sig
        .iter()
        .filter(|(_, a)| *a == 0)
        .map(|(n, _)| Term::constant(n))
        .chain(vars.iter().map(|v| Term::var(v)))
        .collect();
    let funs: Vec<(String, usize)> = sig
        .iter()
        .filter(|(_, a)| *a > 0)
        .map(|(n, a)| (n.to_string(), *a))
        .collect();
    select(leaves)
        .prop_recursive(4, 40, 3, move |inner| {
            select(funs.clone()).prop_flat_map(move |(f, n)| {
                prop::collection::vec(inner.clone(), n).prop_map(move |args| Term::app(&f, args))
            })
        })
        .boxed()
}

const SIG: &[(&str, usize)] = &[("a", 0), ("b", 0), ("s", 1), ("p", 2), ("f", 3)];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matching_recovers_instances(
        t in terms(SIG, &["x", "y", "z"]),
        xs in prop::collection::vec(terms(SIG, &[]), 3),
    ) {
        let mut sigma = Substitution::new();
        for (v, u) in ["x", "y", "z"].iter().zip(xs) {
            sigma.insert(Var::new(v), u);
        }
        let instance = t.apply_subst(&sigma);
        let found = match_term(&t, &instance).expect("an instance matches its pattern");
        prop_assert_eq!(t.apply_subst(&found), instance);
        for v in t.vars() {
            prop_assert_eq!(found.get(&v), sigma.get(&v));
        }
    }

    #[test]
    fn replace_then_subterm(t in terms(SIG, &["x"]), u in terms(SIG, &[]), pick in any::<prop::sample::Index>()) {
        let positions = t.positions();
        let p: &Position = pick.get(&positions);
        let replaced = t.replace_at(p, u.clone()).unwrap();
        prop_assert_eq!(replaced.subterm_at(p), Some(&u));
        let original = t.subterm_at(p).unwrap().clone();
        prop_assert_eq!(replaced.replace_at(p, original).unwrap(), t);
    }

    #[test]
    fn sr_wll_iff_ultra_wll_on_random_systems(seed in any::<u64>()) {
        let s = random_dctrs(&mut ChaCha8Rng::seed_from_u64(seed), SystemShape::default());
        prop_assert!(check_sr_wll_iff(&s).unwrap(), "{}", s);
        if let Ok(t) = linearize(&s) {
            prop_assert!(check_sr_wll_iff(&t.target).unwrap());
            prop_assert!(is_ultra_wll(&t.target));
        }
    }

    #[test]
    fn ultra_wll_is_wll_of_unraveling(seed in any::<u64>()) {
        let s = random_dctrs(&mut ChaCha8Rng::seed_from_u64(seed), SystemShape::default());
        prop_assert_eq!(is_ultra_wll(&s), is_wll_system(&unravel(&s).unwrap().target));
    }
}

/// The generator must reach every combination of the two properties, or
/// the iff property above is vacuous on some side.
#[test]
fn random_systems_cover_all_classes() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut seen = [[false; 2]; 2];
    for _ in 0..2000 {
        let s = random_dctrs(&mut rng, SystemShape::default());
        let sr = sr_unchecked(&s).unwrap();
        assert_eq!(is_ultra_wll(&s), is_wll_system(&sr.target));
        seen[is_wll_system(&s) as usize][is_ultra_wll(&s) as usize] = true;
    }
    assert_eq!(seen, [[true; 2]; 2]);
}

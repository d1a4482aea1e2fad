mod common;

use common::*;
use nomkit::atoms::{Atom, FinPerm, GenPerm};
use nomkit::permission::SupportDescriptor;
use nomkit::pnl::{atoms_of_prop, fa_prop, EvalConfig};
use nomkit::semantics::shift_valuation;
use nomkit::syntax::{parse_document, parse_element, parse_fin_perm, parse_prop, parse_term};
use nomkit::terms::{act_term, alpha_eq, fa, Term};
use nomkit::universe::elem_eq;
use proptest::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

fn gen(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn group_laws(seed in any::<u64>()) {
        let mut r = gen(seed);
        let (p, q, s) = (random_perm(&mut r, &pool()), random_perm(&mut r, &pool()), random_perm(&mut r, &pool()));
        prop_assert_eq!(p.compose(&q).compose(&s), p.compose(&q.compose(&s)));
        prop_assert!(p.compose(&p.inverse()).is_identity());
        prop_assert_eq!(p.compose(&FinPerm::identity()), p.clone());
        for a in pool() {
            prop_assert_eq!(p.compose(&q).apply(a), p.apply(q.apply(a)));
        }
    }

    #[test]
    fn action_is_a_group_action(seed in any::<u64>()) {
        let mut r = gen(seed);
        let x = random_element(&mut r, 2);
        let (p, q) = (random_perm(&mut r, &pool()), random_perm(&mut r, &pool()));
        prop_assert!(elem_eq(&x.act_finite(&p.compose(&q)), &x.act_finite(&q).act_finite(&p)));
        prop_assert!(elem_eq(&x.act_finite(&FinPerm::identity()), &x));
    }

    #[test]
    fn perms_round_trip(seed in any::<u64>()) {
        let p = random_perm(&mut gen(seed), &pool());
        prop_assert_eq!(parse_fin_perm(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn elements_round_trip(seed in any::<u64>()) {
        let x = random_element(&mut gen(seed), 2);
        let back = parse_element(&x.to_string()).unwrap();
        prop_assert!(elem_eq(&back, &x), "{} reparsed as {}", x, back);
    }

    #[test]
    fn terms_round_trip(seed in any::<u64>()) {
        let mut r = gen(seed);
        let mut sig = parse_document(&strict_model_source(&mut r)).unwrap().sig;
        let t = random_term(&mut r, 3, true);
        prop_assert_eq!(parse_term(&mut sig, &t.to_string()).unwrap(), t);
    }

    #[test]
    fn props_round_trip(seed in any::<u64>()) {
        let mut r = gen(seed);
        let mut sig = parse_document(&medium_model_source(&mut r)).unwrap().sig;
        let phi = random_prop(&mut r, 3, false);
        prop_assert_eq!(parse_prop(&mut sig, &phi.to_string()).unwrap(), phi);
    }

    #[test]
    fn renaming_a_binder_is_alpha(seed in any::<u64>()) {
        let mut r = gen(seed);
        let sig = parse_document(&strict_model_source(&mut r)).unwrap().sig;
        let body = random_term(&mut r, 3, false);
        let a = Atom::from_letter('a').unwrap();
        let free = fa(&sig, &body).unwrap();
        let b = free.fresh_atom(0, nomkit::atoms::Zone::Up).unwrap();
        let renamed = Term::abs(b, act_term(&GenPerm::from(FinPerm::swap(b, a).unwrap()), &body));
        prop_assert!(alpha_eq(&sig, &renamed, &Term::abs(a, body.clone())).unwrap());
        prop_assert!(alpha_eq(&sig, &body, &body).unwrap());
    }

    #[test]
    fn alpha_equal_terms_denote_alike(seed in any::<u64>()) {
        let mut r = gen(seed);
        let doc = parse_document(&strict_model_source(&mut r)).unwrap();
        let i = doc.interpretation().unwrap();
        let gens = doc.model.carriers["tau"].generators.clone();
        let body = random_term(&mut r, 3, false);
        let a = Atom::from_letter('a').unwrap();
        let b = fa(&doc.sig, &body).unwrap().fresh_atom(0, nomkit::atoms::Zone::Up).unwrap();
        let renamed = Term::abs(b, act_term(&GenPerm::from(FinPerm::swap(b, a).unwrap()), &body));
        let val = strict_valuation(&mut r, &gens);
        let x = i.denote(&val, &renamed).unwrap();
        let y = i.denote(&val, &Term::abs(a, body)).unwrap();
        prop_assert!(elem_eq(&x, &y));
    }

    #[test]
    fn permuting_a_valuation_away_from_the_formula(seed in any::<u64>()) {
        let mut r = gen(seed);
        let h = load(&medium_model_source(&mut r));
        let gens = h.interp.model().unwrap().carriers["tau"].generators.clone();
        let phi = random_prop(&mut r, 3, false);
        let val = medium_valuation(&mut r, &gens);
        let atoms = atoms_of_prop(h.sig(), &phi).unwrap();
        let free: Vec<Atom> = (0..10).map(d).filter(|a| !atoms.contains(a)).collect();
        let p = GenPerm::from(sparse_perm(&mut r, &free));
        let cfg = EvalConfig::default();
        let moved = shift_valuation(&p, &val).unwrap();
        prop_assert_eq!(h.eval(&moved, &phi, &cfg).unwrap(), h.eval(&val, &phi, &cfg).unwrap());
    }

    #[test]
    fn free_atoms_of_a_formula_are_bounded(seed in any::<u64>()) {
        let mut r = gen(seed);
        let h = load(&medium_model_source(&mut r));
        let phi = random_prop(&mut r, 3, false);
        let bound = SupportDescriptor::comb().add(&atoms_of_prop(h.sig(), &phi).unwrap());
        prop_assert!(fa_prop(h.sig(), &phi).unwrap().is_subset(&bound));
    }
}

use hyperverma::abelian::{self, Group};
use hyperverma::analysis;
use hyperverma::field::FieldElem;
use hyperverma::pbw::Uea;
use hyperverma::rep::{verify_centrality, verify_relations, GenKind, ModuleRep};
use hyperverma::verma;
use hyperverma::weights::{ChiForm, ChiKind, Setting};
use proptest::prelude::*;

fn kind() -> impl Strategy<Value = ChiKind> {
    prop_oneof![Just(ChiKind::Zero), Just(ChiKind::Nilpotent), Just(ChiKind::Semisimple)]
}

fn setting(kind: ChiKind, p: u32, r: usize, c: i64) -> Setting {
    Setting::new(p, r, ChiForm::standard(kind, p, Some(c)).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn baby_vermas_satisfy_all_relations(kind in kind(), p in prop_oneof![Just(3u32), Just(5)], r in 0usize..2, c in 1i64..3, pick in any::<prop::sample::Index>()) {
        let s = setting(kind, p, r, c);
        let ws = s.weights().unwrap();
        let z = verma::baby_verma(&s, pick.get(&ws)).unwrap();
        prop_assert!(verify_relations(&z).is_ok());
        prop_assert!(verify_centrality(&z).is_ok());
    }

    #[test]
    fn irreducibles_have_scalar_endomorphisms(kind in kind(), r in 0usize..2, pick in any::<prop::sample::Index>()) {
        let s = setting(kind, 3, r, 1);
        let ws = s.weights().unwrap();
        let l = analysis::irreducible_quotient(&s, pick.get(&ws)).unwrap();
        prop_assert_eq!(analysis::find_intertwiners(&l, &l, 0).unwrap().basis.len(), 1);
    }

    #[test]
    fn quotient_relations_hold(kind in kind(), r in 0usize..3, pick in any::<prop::sample::Index>()) {
        let s = setting(kind, 3, r, 2);
        let ws = s.weights().unwrap();
        let l = analysis::irreducible_quotient(&s, pick.get(&ws)).unwrap();
        prop_assert!(verify_relations(&l).is_ok());
    }

    #[test]
    fn hom_between_irreducibles_is_at_most_one_dimensional(kind in kind(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let s = setting(kind, 3, 1, 1);
        let ws = s.weights().unwrap();
        let (la, lb) = (
            analysis::irreducible_quotient(&s, a.get(&ws)).unwrap(),
            analysis::irreducible_quotient(&s, b.get(&ws)).unwrap(),
        );
        let hom = analysis::find_intertwiners(&la, &lb, 0).unwrap();
        prop_assert!(hom.basis.len() <= 1);
        prop_assert_eq!(hom.basis.len() == 1, hom.isomorphism.is_some());
    }

    #[test]
    fn module_json_round_trips(kind in kind(), r in 0usize..2, pick in any::<prop::sample::Index>()) {
        let s = setting(kind, 3, r, 1);
        let ws = s.weights().unwrap();
        let z = verma::baby_verma(&s, pick.get(&ws)).unwrap();
        prop_assert_eq!(ModuleRep::from_json(&z.to_json()).unwrap(), z);
    }

    #[test]
    fn pbw_elements_act_as_algebra_homomorphism(kind in kind(), i in 0usize..9, k in 0usize..9, j in 0usize..9, pick in any::<prop::sample::Index>()) {
        let s = setting(kind, 3, 1, 1);
        let ws = s.weights().unwrap();
        let z = verma::baby_verma(&s, pick.get(&ws)).unwrap();
        let uea = Uea::new(&s);
        let x = uea.monomial(i, k, j).unwrap();
        let y = uea.generator(GenKind::F, 0).unwrap().add(&uea.generator(GenKind::E, 1).unwrap()).unwrap();
        let lhs = x.mul(&y).unwrap().act_on_module(&z).unwrap();
        let rhs = x.act_on_module(&z).unwrap().mul(&s.field, &y.act_on_module(&z).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn abelian_algebras_are_commutative_and_associative(p in prop_oneof![Just(3u32), Just(5)], r in 0usize..2, c in 0i64..5, seed in any::<u64>()) {
        for group in [Group::Additive, Group::Multiplicative] {
            let fl = abelian::splitting_field(group, p, c).unwrap();
            let chi = fl.from_int(c);
            let a = match group {
                Group::Additive => abelian::build_additive(&fl, r, chi),
                Group::Multiplicative => abelian::build_multiplicative(&fl, r, chi),
            }.unwrap();
            prop_assert!(a.is_commutative());
            prop_assert!(a.is_associative_sampled(32, seed));
        }
    }

    #[test]
    fn additive_top_generator_minus_chi_is_nilpotent(p in prop_oneof![Just(3u32), Just(5), Just(7)], r in 0usize..2, c in 0i64..7) {
        let fl = abelian::splitting_field(Group::Additive, p, c).unwrap();
        let a = abelian::build_additive(&fl, r, fl.from_int(c)).unwrap();
        let x = a.sub(&a.t(r), &a.scale(fl.from_int(c), &a.one()));
        prop_assert_eq!(a.pow(&x, p as u64), a.zero());
        prop_assert!(a.pow(&x, p as u64 - 1) != a.zero());
    }
}

#[test]
fn zero_element_is_absorbing() {
    let s = setting(ChiKind::Nilpotent, 3, 1, 1);
    let uea = Uea::new(&s);
    let z = verma::baby_verma(&s, &s.weights().unwrap()[4]).unwrap();
    let m = uea.zero().act_on_module(&z).unwrap();
    assert!(m.is_zero());
    assert_eq!(uea.one().act_on_module(&z).unwrap().get(3, 3), FieldElem::ONE);
}

use std::collections::BTreeSet;

use holam::bridge::{dfa_to_recognizer, Dfa};
use holam::definability::AutoDefs;
use holam::kernel::{church_numeral, church_word, concat, identity, Alphabet, SimpleType, Term};
use holam::reglang::{contains, product_lang, pullback, quantify_along_projection, to_recognizer, Containment, Language, Quantifier, Recognizer};
use holam::semantics::{ValueSpace, Value};
use holam::syntax::parse_type;
use holam::Limits;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn accepted(l: &Language) -> BTreeSet<Value> {
    to_recognizer(l).unwrap().accepting_values(&Limits::default()).unwrap()
}

fn accepted_at(l: &Language, q: u32) -> BTreeSet<Value> {
    to_recognizer(l).unwrap().raise(q).unwrap().accepting_values(&Limits::default()).unwrap()
}

/// A language given by a random subset of `⟦ty⟧_q`.
fn subset_lang(ty: &'static str, q: u32) -> impl Strategy<Value = Language> {
    let t = parse_type(ty).unwrap();
    let n = ValueSpace::new(&t, q).unwrap().card().unwrap();
    prop::collection::btree_set(0..n, 0..=n as usize).prop_map(move |idx| {
        let idx: Vec<u64> = idx.into_iter().collect();
        Language::leaf(Recognizer::from_indices(t.clone(), q, &idx).unwrap())
    })
}

fn small_lang() -> impl Strategy<Value = Language> {
    prop_oneof![subset_lang("o -> o", 2), subset_lang("o -> o", 3), subset_lang("o * o", 2)]
}

fn triple() -> impl Strategy<Value = (Language, Language, Language)> {
    prop_oneof![
        (subset_lang("o -> o", 3), subset_lang("o -> o", 3), subset_lang("o -> o", 3)),
        (subset_lang("o -> o", 2), subset_lang("o -> o", 3), subset_lang("o -> o", 1)),
        (subset_lang("o * o", 2), subset_lang("o * o", 1), subset_lang("o * o", 2)),
    ]
}

fn nat_lang() -> impl Strategy<Value = Language> {
    subset_lang("(o -> o) -> o -> o", 2)
}

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boolean_algebra((x, y, z) in triple()) {
        let q = x.level().max(y.level()).max(z.level());
        let same = |l: &Language, r: &Language| -> Result<(), TestCaseError> {
            prop_assert_eq!(accepted_at(l, q), accepted_at(r, q));
            Ok(())
        };
        same(&x.not().not(), &x)?;
        same(&x.and(&y).unwrap().not(), &x.not().or(&y.not()).unwrap())?;
        same(&x.or(&y).unwrap().not(), &x.not().and(&y.not()).unwrap())?;
        same(&x.and(&y.or(&z).unwrap()).unwrap(), &x.and(&y).unwrap().or(&x.and(&z).unwrap()).unwrap())?;
        same(&x.or(&y.and(&z).unwrap()).unwrap(), &x.or(&y).unwrap().and(&x.or(&z).unwrap()).unwrap())?;
        same(&x.and(&x.not()).unwrap(), &Language::none(x.ty().clone()))?;
        same(&x.or(&x.not()).unwrap(), &Language::all(x.ty().clone()))?;
        same(&x.and(&x.or(&y).unwrap()).unwrap(), &x)?;
    }

    #[test]
    fn membership_matches_values(x in small_lang(), pick in any::<prop::sample::Index>()) {
        let r = to_recognizer(&x).unwrap();
        let space = ValueSpace::new(x.ty(), r.q()).unwrap();
        let vals: Vec<Value> = space.elements(1 << 10).unwrap().collect();
        let v = pick.get(&vals);
        prop_assert_eq!(r.accepts_value(v, &Limits::default()).unwrap(), accepted(&x).contains(v));
    }

    #[test]
    fn membership_is_beta_eta_invariant(seed in any::<u64>(), w in prop::collection::vec(0..2usize, 0..7)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Dfa::random(&mut rng, ab(), 4);
        let l = Language::leaf(dfa_to_recognizer(&d, &Limits::default()).unwrap());
        let t = church_word(&ab(), &w).unwrap();
        let eps = church_word(&ab(), &[]).unwrap();
        let redex = Term::app(identity(ab().word_type()), Term::apps(concat(&ab()), [eps, t.clone()]));
        let limits = Limits::default();
        prop_assert_eq!(l.member(&t, &limits).unwrap(), d.run(&w));
        prop_assert_eq!(l.member(&redex, &limits).unwrap(), d.run(&w));
    }

    #[test]
    fn pullback_law(l in nat_lang(), k in 0usize..4, n in 0usize..9) {
        // m = λn. k + n
        let nat = SimpleType::nat();
        let body = (0..k).fold(Term::apps(Term::var(2), [Term::var(1), Term::var(0)]), |acc, _| Term::app(Term::var(1), acc));
        let m = Term::lam("n", nat, Term::lam("s", SimpleType::endo(), Term::lam("x", SimpleType::Base, body)));
        let pulled = pullback(&m, &l).unwrap();
        let limits = Limits::default();
        prop_assert_eq!(
            pulled.member(&church_numeral(n), &limits).unwrap(),
            l.member(&church_numeral(n + k), &limits).unwrap()
        );
    }

    #[test]
    fn products_are_conjunctions(a in nat_lang(), b in nat_lang(), n in 0usize..9, m in 0usize..9) {
        let p = product_lang(&a, &b).unwrap();
        let limits = Limits::default();
        let pair = Term::pair(church_numeral(n), church_numeral(m));
        prop_assert_eq!(
            p.member(&pair, &limits).unwrap(),
            a.member(&church_numeral(n), &limits).unwrap() && b.member(&church_numeral(m), &limits).unwrap()
        );
    }
}

fn projection() -> Term {
    let nat = SimpleType::nat();
    Term::lam("p", SimpleType::product(nat.clone(), nat), Term::fst(Term::var(0)))
}

fn holds(c: Containment) -> bool {
    match c {
        Containment::True => true,
        Containment::False(_) => false,
        Containment::Unknown => panic!("exact definable sets give a definite answer"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// ∃ ⊣ weakening ⊣ ∀ along the first projection.
    #[test]
    fn quantifiers_are_adjoint(parts in prop::collection::vec((nat_lang(), nat_lang()), 1..3), m in nat_lang()) {
        let defs = AutoDefs::new(Limits::default());
        let limits = Limits::default();
        let mut l = product_lang(&parts[0].0, &parts[0].1).unwrap();
        for (a, b) in &parts[1..] {
            l = l.or(&product_lang(a, b).unwrap().not()).unwrap();
        }
        let weakened = pullback(&projection(), &m).unwrap();
        let (ex, _) = quantify_along_projection(&l, Quantifier::Exists, &defs).unwrap();
        let (fa, _) = quantify_along_projection(&l, Quantifier::Forall, &defs).unwrap();
        prop_assert_eq!(
            holds(contains(&ex, &m, &defs, &limits).unwrap()),
            holds(contains(&l, &weakened, &defs, &limits).unwrap())
        );
        prop_assert_eq!(
            holds(contains(&m, &fa, &defs, &limits).unwrap()),
            holds(contains(&weakened, &l, &defs, &limits).unwrap())
        );
    }
}

use holam::bridge::{dfa_to_recognizer, recognizer_to_dfa, Dfa, DfaEquiv, Homomorphism};
use holam::brzozowski::Side;
use holam::formats::{dfa_from_json, dfa_to_json, language_from_json, language_to_json};
use holam::kernel::{church_word, Alphabet};
use holam::reglang::{pullback, Language};
use holam::Limits;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn dfa() -> impl Strategy<Value = Dfa> {
    (any::<u64>(), 1usize..6).prop_map(|(seed, n)| Dfa::random(&mut ChaCha8Rng::seed_from_u64(seed), ab(), n))
}

fn word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..2usize, 0..8)
}

proptest! {
    #[test]
    fn minimize_is_idempotent(d in dfa()) {
        let m = d.minimize();
        prop_assert_eq!(m.minimize(), m.clone());
        prop_assert!(m.state_count() <= d.state_count());
        prop_assert_eq!(d.equiv(&m).unwrap(), DfaEquiv::Equivalent);
    }

    #[test]
    fn equivalence_witnesses_separate(d in dfa(), e in dfa()) {
        match d.equiv(&e).unwrap() {
            DfaEquiv::Equivalent => prop_assert_eq!(d.minimize(), e.minimize()),
            DfaEquiv::Differ(w) => prop_assert_ne!(d.run(&w), e.run(&w)),
        }
    }

    #[test]
    fn derivatives_shift_words(d in dfa(), letter in 0..2usize, w in word()) {
        let mut aw = vec![letter];
        aw.extend(&w);
        let mut wa = w.clone();
        wa.push(letter);
        prop_assert_eq!(d.derivative(Side::Left, letter).unwrap().run(&w), d.run(&aw));
        prop_assert_eq!(d.derivative(Side::Right, letter).unwrap().run(&w), d.run(&wa));
    }

    #[test]
    fn dfa_json_round_trips(d in dfa()) {
        prop_assert_eq!(dfa_from_json(&dfa_to_json(&d)).unwrap(), d);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn higher_order_round_trip_is_minimal(d in dfa()) {
        let limits = Limits::default();
        let r = dfa_to_recognizer(&d, &limits).unwrap();
        prop_assert_eq!(recognizer_to_dfa(&r, &ab(), &limits).unwrap().minimize(), d.minimize());
        let l = Language::leaf(r);
        let back = language_from_json(&language_to_json(&l).unwrap()).unwrap();
        for w in ab().words_up_to(5) {
            let t = church_word(&ab(), &w).unwrap();
            prop_assert_eq!(back.member(&t, &limits).unwrap(), d.run(&w));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// Pulling a language back along the λ-term of a homomorphism agrees
    /// with the classical preimage automaton.
    #[test]
    fn homomorphism_preimage_is_pullback(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = Homomorphism::random(&mut rng, ab(), ab(), 3);
        let d = Dfa::random(&mut rng, ab(), 4);
        let limits = Limits::default();
        let pre = h.preimage(&d).unwrap();
        let pulled = pullback(&h.to_term(), &Language::leaf(dfa_to_recognizer(&d, &limits).unwrap())).unwrap();
        for w in ab().words_up_to(5) {
            let expected = d.run(&h.apply(&w));
            prop_assert_eq!(pre.run(&w), expected);
            prop_assert_eq!(pulled.member(&church_word(&ab(), &w).unwrap(), &limits).unwrap(), expected);
        }
    }
}

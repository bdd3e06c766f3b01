use holam::definability::enum_normal_forms;
use holam::kernel::{church_word, concat, identity, normalize, term_eq, typecheck_closed, Alphabet, Context, SimpleType, Term};
use holam::syntax::{parse_term, parse_type, print_term};
use proptest::prelude::*;

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn word(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..2usize, 0..=max)
}

fn simple_type() -> impl Strategy<Value = SimpleType> {
    let leaf = prop_oneof![Just(SimpleType::Base), Just(SimpleType::Unit)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SimpleType::arrow(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| SimpleType::product(a, b)),
        ]
    })
}

/// Closed normal forms of a few small types, wrapped in redexes that
/// normalization must undo.
fn closed_term() -> impl Strategy<Value = Term> {
    let types = ["o -> o", "(o -> o) -> o -> o", "o * o -> o", "(o -> o) * 1", "o -> o -> o * o"];
    let pool: Vec<Term> = types
        .iter()
        .flat_map(|t| enum_normal_forms(&Context::new(), &parse_type(t).unwrap(), 3).into_iter().take(40))
        .collect();
    (prop::sample::select(pool), prop::collection::vec(0..3u8, 0..3)).prop_map(|(t, wraps)| {
        wraps.into_iter().fold(t, |t, w| {
            let ty = typecheck_closed(&t).unwrap();
            match w {
                0 => Term::app(identity(ty), t),
                1 => Term::fst(Term::pair(t, Term::Unit)),
                _ => Term::app(Term::lam("unused", SimpleType::Unit, t.shift(1, 0)), Term::Unit),
            }
        })
    })
}

proptest! {
    #[test]
    fn church_words_are_injective(u in word(6), v in word(6)) {
        let (tu, tv) = (church_word(&ab(), &u).unwrap(), church_word(&ab(), &v).unwrap());
        prop_assert_eq!(term_eq(&tu, &tv, &Context::new()).unwrap(), u == v);
    }

    #[test]
    fn concat_is_associative(u in word(4), v in word(4), w in word(4)) {
        let c = |x: Term, y: Term| Term::apps(concat(&ab()), [x, y]);
        let t = |x: &[usize]| church_word(&ab(), x).unwrap();
        let left = normalize(&c(c(t(&u), t(&v)), t(&w)), &Context::new()).unwrap();
        let right = normalize(&c(t(&u), c(t(&v), t(&w))), &Context::new()).unwrap();
        let uvw: Vec<usize> = u.iter().chain(&v).chain(&w).copied().collect();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left, t(&uvw));
    }

    #[test]
    fn types_round_trip(ty in simple_type()) {
        prop_assert_eq!(parse_type(&ty.to_string()).unwrap(), ty);
    }

    #[test]
    fn terms_round_trip(t in closed_term()) {
        let printed = print_term(&t, &Context::new());
        prop_assert_eq!(parse_term(&printed).unwrap(), t);
    }

    #[test]
    fn normalization_is_idempotent_and_typed(t in closed_term()) {
        let ty = typecheck_closed(&t).unwrap();
        let nf = normalize(&t, &Context::new()).unwrap();
        prop_assert_eq!(typecheck_closed(&nf).unwrap(), ty);
        prop_assert_eq!(normalize(&nf, &Context::new()).unwrap(), nf.clone());
        prop_assert!(term_eq(&t, &nf, &Context::new()).unwrap());
    }
}

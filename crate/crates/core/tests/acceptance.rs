//! End-to-end acceptance checks, one line per criterion.
//!
//! Runs with `cargo test --test acceptance`. Every criterion is checked against
//! an oracle computed independently of the code path under test (classical
//! automata, brute-force grafting, capped arithmetic, normalization).

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use holam::bridge::{
    classical_derivative, dfa_to_recognizer, recognizer_to_dfa, tree_automaton_to_recognizer, Dfa, DfaEquiv,
    TreeAutomaton,
};
use holam::brzozowski::{tree_context_residual, tree_singleton, word_residual, word_singleton, Side};
use holam::definability::{def_set, enum_normal_forms, AutoDefs, DefProvider, Strategy};
use holam::kernel::{
    church_numeral, church_tree, church_word, counter, graft, normalize, successor, Alphabet, Context,
    RankedAlphabet, RankedTree, SimpleType, Term,
};
use holam::reglang::{
    arrow_lang, contains, diagonal_non_openness_witness, lift_to_q, product_lang, pullback,
    quantify_along_projection, Containment, Language, Quantifier, Recognizer,
};
use holam::semantics::{interpret_closed, sem_eq, space_size, Value, ValueSpace};
use holam::{Error, Limits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: holam::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn unary() -> Alphabet {
    Alphabet::new(["s"]).unwrap()
}

/// The seeded corpus of DFAs with at most 4 states over {a, b}.
fn dfa_corpus() -> Vec<Dfa> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50).map(|_| Dfa::random(&mut rng, ab(), 4)).collect()
}

fn random_type(rng: &mut impl Rng, depth: usize) -> SimpleType {
    if depth <= 1 {
        return if rng.gen_bool(0.85) { SimpleType::Base } else { SimpleType::Unit };
    }
    match rng.gen_range(0..4) {
        0 => SimpleType::Base,
        1 => SimpleType::product(random_type(rng, depth - 1), random_type(rng, depth - 1)),
        _ => SimpleType::arrow(random_type(rng, depth - 1), random_type(rng, depth - 1)),
    }
}

/// Cardinality from the size law with every intermediate capped at `cap`, so
/// the result is exact whenever it is below the cap.
fn capped_size(ty: &SimpleType, q: u128, cap: u128) -> u128 {
    match ty {
        SimpleType::Base => q.min(cap),
        SimpleType::Unit => 1,
        SimpleType::Product(a, b) => {
            let (x, y) = (capped_size(a, q, cap), capped_size(b, q, cap));
            if x == 0 || y == 0 {
                0
            } else {
                x.saturating_mul(y).min(cap)
            }
        }
        SimpleType::Arrow(a, b) => {
            let (x, y) = (capped_size(a, q, cap), capped_size(b, q, cap));
            if y <= 1 || x == 0 {
                return if x == 0 { 1 } else { y };
            }
            let mut acc: u128 = 1;
            for _ in 0..x {
                acc = acc.saturating_mul(y);
                if acc >= cap {
                    return cap;
                }
            }
            acc
        }
    }
}

fn c1_size_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let budget: u64 = 1 << 20;
    let (mut within, mut beyond, mut enumerated) = (0, 0, 0);
    for _ in 0..100 {
        let depth = rng.gen_range(1..=4);
        let ty = random_type(&mut rng, depth);
        for q in 1..=3u32 {
            let expected = capped_size(&ty, q as u128, budget as u128 + 1);
            match space_size(&ty, q, budget) {
                Ok(n) => {
                    ensure!(n as u128 == expected, "{ty} at q={q}: {n} vs {expected}");
                    within += 1;
                    if n <= 4096 {
                        let sp = ok(ValueSpace::new(&ty, q))?;
                        let count = ok(sp.elements(budget))?.count() as u64;
                        ensure!(count == n, "{ty} at q={q}: {count} elements listed, size {n}");
                        enumerated += 1;
                    }
                }
                Err(Error::SizeOverflow(_)) => {
                    ensure!(expected > budget as u128, "{ty} at q={q}: spurious overflow");
                    beyond += 1;
                }
                Err(e) => return Err(e.to_string()),
            }
        }
    }
    Ok(format!("{within} sizes exact ({enumerated} also enumerated), {beyond} over budget"))
}

fn c2_beta_eta_invariance() -> Outcome {
    let limits = Limits::default();
    let types = [
        SimpleType::endo(),
        SimpleType::nat(),
        SimpleType::arrow(SimpleType::product(SimpleType::Base, SimpleType::Base), SimpleType::Base),
    ];
    let mut checked = 0;
    for ty in &types {
        let terms: Vec<Term> = enum_normal_forms(&Context::new(), ty, 6)
            .into_iter()
            .filter(|t| t.size() <= 10)
            .collect();
        ensure!(!terms.is_empty(), "no terms of type {ty}");
        let id = Term::lam("y", ty.clone(), Term::var(0));
        for t in &terms {
            // a β-redex and an η-redex around the normal term
            let redex = Term::app(id.clone(), t.clone());
            let (dom, _) = ty.as_arrow().unwrap();
            let eta = Term::lam("z", dom.clone(), Term::app(t.shift(1, 0), Term::var(0)));
            for variant in [t.clone(), redex, eta] {
                let nf = ok(normalize(&variant, &Context::new()))?;
                ensure!(&nf == t, "{variant} normalizes to {nf}, expected {t}");
                for q in 1..=2 {
                    let a = ok(interpret_closed(&variant, q, &limits))?;
                    let b = ok(interpret_closed(&nf, q, &limits))?;
                    ensure!(a == b, "{variant} at q={q}");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} interpretations agree"))
}

fn c3_conservativity() -> Outcome {
    let limits = Limits::default();
    let words = ab().words_up_to(8);
    ensure!(words.len() == 511, "{} words of length at most 8", words.len());
    let encoded: Vec<Term> = words.iter().map(|w| church_word(&ab(), w).unwrap()).collect();
    for (i, d) in dfa_corpus().iter().enumerate() {
        let r = ok(dfa_to_recognizer(d, &limits))?;
        for (w, t) in words.iter().zip(&encoded) {
            ensure!(ok(r.accepts_term(t, &limits))? == d.run(w), "DFA {i} on {}", ab().render_word(w));
        }
        let back = ok(recognizer_to_dfa(&r, &ab(), &limits))?;
        ensure!(
            ok(back.equiv(&d.minimize()))? == DfaEquiv::Equivalent,
            "DFA {i} does not round-trip"
        );
    }
    Ok("50 DFAs x 511 words agree; 50 round trips equivalent".into())
}

fn random_recognizer(rng: &mut impl Rng, ty: &SimpleType, q: u32) -> Recognizer {
    let sp = ValueSpace::new(ty, q).unwrap();
    let card = sp.card().unwrap();
    let p = rng.gen_range(0.05..0.95);
    let vals: Vec<Value> = (0..card).filter(|_| rng.gen_bool(p)).map(Value::Index).collect();
    Recognizer::new(ty.clone(), q, vals).unwrap()
}

fn c4_product() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let nat = SimpleType::nat();
    let values: Vec<Value> = (0..=8).map(|n| interpret_closed(&church_numeral(n), 2, &limits).unwrap()).collect();
    for k in 0..20 {
        let (ra, rb) = (random_recognizer(&mut rng, &nat, 2), random_recognizer(&mut rng, &nat, 2));
        let (fa, fb) = (ra.explicit().unwrap().0.clone(), rb.explicit().unwrap().0.clone());
        let l = ok(product_lang(&Language::leaf(ra), &Language::leaf(rb)))?;
        for n in 0..=8 {
            for m in 0..=8 {
                let t = Term::pair(church_numeral(n), church_numeral(m));
                let expected = fa.contains(&values[n]) && fb.contains(&values[m]);
                ensure!(ok(l.member(&t, &limits))? == expected, "pair {k} at ({n}, {m})");
            }
        }
    }
    Ok("20 pairs x 81 numeral pairs agree".into())
}

fn c5_arrow() -> Outcome {
    let limits = Limits::default();
    let defs = AutoDefs::new(limits.clone());
    let nat = SimpleType::nat();
    let d = ok(defs.def_set(&nat, 2))?;
    ensure!(d.exactness().is_exact(), "DefSet(Nat, 2) is not exact");
    let fun = SimpleType::arrow(nat.clone(), nat.clone());
    let terms = enum_normal_forms(&Context::new(), &fun, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut langs: Vec<(Language, Language)> = Vec::new();
    let even = Language::leaf(ok(dfa_to_recognizer(&Dfa::parity(unary(), 0), &limits))?);
    langs.push((Language::all(nat.clone()), even.clone()));
    langs.push((even.clone(), even.clone()));
    for _ in 0..4 {
        langs.push((
            Language::leaf(random_recognizer(&mut rng, &nat, 2)),
            Language::leaf(random_recognizer(&mut rng, &nat, 2)),
        ));
    }
    let mut checked = 0;
    for (la, lb) in &langs {
        let (arrow, ex) = ok(arrow_lang(la, lb, &defs, &limits))?;
        ensure!(ex.is_exact(), "arrow language not exact");
        let points: Vec<&Term> = d
            .representatives()
            .filter(|p| la.member(p, &limits).unwrap())
            .collect();
        for m in &terms {
            let mut expected = true;
            for p in &points {
                let applied = ok(normalize(&Term::app(m.clone(), (*p).clone()), &Context::new()))?;
                expected &= ok(lb.member(&applied, &limits))?;
            }
            ensure!(ok(arrow.member(m, &limits))? == expected, "{m}");
            checked += 1;
        }
    }
    Ok(format!("{} terms of Nat -> Nat x {} language pairs ({checked} checks)", terms.len(), langs.len()))
}

fn c6_pullback() -> Outcome {
    let limits = Limits::default();
    let parity = Dfa::parity(unary(), 0);
    let even = Language::leaf(ok(dfa_to_recognizer(&parity, &limits))?);
    let odd_oracle = parity.complement();
    let l = ok(pullback(&successor(), &even))?;
    for n in 0..=6 {
        let expected = odd_oracle.run(&vec![0; n]);
        ensure!(ok(l.member(&church_numeral(n), &limits))? == expected, "successor at {n}");
    }
    let even_all = ok(product_lang(&even, &Language::all(SimpleType::nat())))?;
    let l = ok(pullback(&counter(), &even_all))?;
    let oracle = Dfa::parity(ab(), 0);
    for w in ab().words_up_to(6) {
        let t = church_word(&ab(), &w).unwrap();
        ensure!(ok(l.member(&t, &limits))? == oracle.run(&w), "counter at {}", ab().render_word(&w));
    }
    Ok("successor on 7 numerals, counter on 127 words".into())
}

fn c7_boolean_algebra() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let settings: Vec<(SimpleType, u32)> = vec![
        (SimpleType::endo(), 1),
        (SimpleType::endo(), 2),
        (SimpleType::endo(), 3),
        (SimpleType::nat(), 1),
        (SimpleType::nat(), 2),
        (SimpleType::nat(), 3),
        (ab().word_type(), 2),
    ];
    for k in 0..200 {
        let (ty, q) = &settings[k % settings.len()];
        let sp = ok(ValueSpace::new(ty, *q))?;
        // random finite sets of values; the complements are cofinite
        let mut pick = || -> Recognizer {
            let vals: Vec<Value> = match sp.card() {
                Some(c) if c <= 4096 => (0..c).filter(|_| rng.gen_bool(0.5)).map(Value::Index).collect(),
                Some(c) => (0..rng.gen_range(0..20)).map(|_| Value::Index(rng.gen_range(0..c))).collect(),
                None => Vec::new(),
            };
            let r = Recognizer::new(ty.clone(), *q, vals).unwrap();
            if rng.gen_bool(0.3) {
                r.complement()
            } else {
                r
            }
        };
        let (a, b, c) = (pick(), pick(), pick());
        let eq = |x: &Recognizer, y: &Recognizer| x.explicit() == y.explicit();
        let laws = [
            ("de morgan and", eq(&a.intersect(&b).unwrap().complement(), &a.complement().union(&b.complement()).unwrap())),
            ("de morgan or", eq(&a.union(&b).unwrap().complement(), &a.complement().intersect(&b.complement()).unwrap())),
            ("involution", eq(&a.complement().complement(), &a)),
            (
                "distributivity",
                eq(
                    &a.intersect(&b.union(&c).unwrap()).unwrap(),
                    &a.intersect(&b).unwrap().union(&a.intersect(&c).unwrap()).unwrap(),
                ),
            ),
            ("complement meet", a.intersect(&a.complement()).unwrap().accept().is_none()),
            ("complement join", a.union(&a.complement()).unwrap().accept().is_all()),
        ];
        for (name, holds) in laws {
            ensure!(holds, "{name} fails for triple {k} over {ty} at q={q}");
        }
        // F-set level against plain set algebra when the space is small
        if let Some(card) = sp.card().filter(|&c| c <= 4096) {
            let full: BTreeSet<Value> = (0..card).map(Value::Index).collect();
            let set = |r: &Recognizer| -> BTreeSet<Value> {
                let (s, comp) = r.explicit().unwrap();
                if comp {
                    full.difference(s).cloned().collect()
                } else {
                    s.clone()
                }
            };
            let inter: BTreeSet<Value> = set(&a).intersection(&set(&b)).cloned().collect();
            ensure!(ok(a.intersect(&b).unwrap().accepting_values(&limits))? == inter, "intersection {k}");
            let uni: BTreeSet<Value> = set(&a).union(&set(&c)).cloned().collect();
            ensure!(ok(a.union(&c).unwrap().accepting_values(&limits))? == uni, "union {k}");
        }
    }
    Ok("200 triples satisfy De Morgan, involution, distributivity, complement".into())
}

fn c8_transfer() -> Outcome {
    let limits = Limits::default();
    let defs = AutoDefs::new(limits.clone());
    let d3 = ok(defs.def_set(&SimpleType::nat(), 3))?;
    ensure!(d3.exactness().is_exact(), "DefSet(Nat, 3) not exact");
    let mut reps: Vec<Term> = d3.representatives().cloned().collect();
    reps.extend((0..=30).map(church_numeral));
    let mut implied = 0;
    for m in &reps {
        for n in &reps {
            if ok(sem_eq(m, n, 3, &limits))? {
                ensure!(ok(sem_eq(m, n, 2, &limits))?, "{m} and {n} split at q=2");
                implied += 1;
            }
        }
    }
    let even = ok(dfa_to_recognizer(&Dfa::parity(unary(), 0), &limits))?;
    let (lifted, ex) = ok(lift_to_q(&even, 3, &defs, &limits))?;
    ensure!(ex.is_exact() && lifted.q() == 3, "lift not exact at q=3");
    for n in 0..=10 {
        let t = church_numeral(n);
        ensure!(ok(lifted.accepts_term(&t, &limits))? == ok(even.accepts_term(&t, &limits))?, "lift at {n}");
    }
    Ok(format!("{implied} equalities at q=3 persist at q=2; lift agrees on 0..10"))
}

fn lifted_language(r: Recognizer, q: u32, defs: &AutoDefs, limits: &Limits) -> Result<Language, String> {
    let (lifted, ex) = ok(lift_to_q(&r, q, defs, limits))?;
    ensure!(ex.is_exact(), "lift to {q} not exact");
    Ok(Language::leaf(lifted))
}

fn c9_adjunction() -> Outcome {
    let limits = Limits::default();
    let defs = AutoDefs::new(limits.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut both, mut neither) = (0, 0);
    for k in 0..100 {
        let dfas: Vec<Dfa> = (0..3).map(|_| Dfa::random(&mut rng, ab(), 2)).collect();
        let q = dfas.iter().map(|d| d.state_count() as u32).max().unwrap();
        let mut ls = Vec::new();
        for d in &dfas {
            ls.push(lifted_language(ok(dfa_to_recognizer(d, &limits))?, q, &defs, &limits)?);
        }
        let (la, lb, lc) = (&ls[0], &ls[1], &ls[2]);
        let (left, e1) = ok(word_residual(&ab(), Side::Left, la, lc, &defs, &limits))?;
        let (right, e2) = ok(word_residual(&ab(), Side::Right, lb, lc, &defs, &limits))?;
        ensure!(e1.is_exact() && e2.is_exact(), "triple {k}: inexact residual");
        let x = ok(contains(lb, &left, &defs, &limits))?;
        let y = ok(contains(la, &right, &defs, &limits))?;
        ensure!(x != Containment::Unknown && y != Containment::Unknown, "triple {k}: unknown");
        ensure!(
            (x == Containment::True) == (y == Containment::True),
            "triple {k}: {x:?} vs {y:?}"
        );
        for (c, sub, sup) in [(&x, lb, &left), (&y, la, &right)] {
            if let Containment::False(t) = c {
                ensure!(
                    ok(sub.member(t, &limits))? && !ok(sup.member(t, &limits))?,
                    "triple {k}: bad witness {t}"
                );
            }
        }
        if x == Containment::True {
            both += 1;
        } else {
            neither += 1;
        }
    }
    Ok(format!("100 triples agree ({both} contained, {neither} not)"))
}

fn c10_brzozowski_conservativity() -> Outcome {
    let limits = Limits::default();
    let defs = AutoDefs::new(limits.clone());
    let words = ab().words_up_to(6);
    let encoded: Vec<Term> = words.iter().map(|w| church_word(&ab(), w).unwrap()).collect();
    let letters: Vec<Language> = (0..2)
        .map(|a| Language::leaf(word_singleton(&ab(), &[a], &limits).unwrap()))
        .collect();
    for (i, d) in dfa_corpus().iter().enumerate() {
        let l = Language::leaf(ok(dfa_to_recognizer(d, &limits))?);
        for side in [Side::Left, Side::Right] {
            for (a, divisor) in letters.iter().enumerate() {
                let (res, ex) = ok(word_residual(&ab(), side, divisor, &l, &defs, &limits))?;
                ensure!(ex.is_exact(), "inexact residual");
                let oracle = ok(classical_derivative(d, side, ab().letter(a)))?;
                for (w, t) in words.iter().zip(&encoded) {
                    ensure!(
                        ok(res.member(t, &limits))? == oracle.run(w),
                        "DFA {i}, {side:?} by {} on {}",
                        ab().letter(a),
                        ab().render_word(w)
                    );
                }
            }
        }
    }
    Ok("50 DFAs x 2 letters x 2 sides x 127 words agree".into())
}

fn c11_quantifiers() -> Outcome {
    let limits = Limits::default();
    let defs = AutoDefs::new(limits.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let nat = SimpleType::nat();
    let pair_ty = SimpleType::product(nat.clone(), nat.clone());
    let d = ok(def_set(&nat, 2, Strategy::Auto, &limits))?;
    let pair_space = ok(ValueSpace::new(&pair_ty, 2))?;
    let defined: Vec<Value> = d.values().cloned().collect();
    for k in 0..20 {
        // a random set of definable pairs plus some noise elsewhere
        let mut f: BTreeSet<Value> = BTreeSet::new();
        for a in &defined {
            for b in &defined {
                if rng.gen_bool(0.4) {
                    f.insert(ok(pair_space.pair(a.clone(), b.clone()))?);
                }
            }
        }
        for _ in 0..50 {
            f.insert(Value::Index(rng.gen_range(0..pair_space.card().unwrap())));
        }
        let l = Language::leaf(ok(Recognizer::new(pair_ty.clone(), 2, f.clone()))?);
        for mode in [Quantifier::Exists, Quantifier::Forall] {
            let (proj, ex) = ok(quantify_along_projection(&l, mode, &defs))?;
            ensure!(ex.is_exact(), "inexact projection");
            for n in 0..=10 {
                let a = ok(interpret_closed(&church_numeral(n), 2, &limits))?;
                let hits = defined
                    .iter()
                    .filter(|b| f.contains(&pair_space.pair(a.clone(), (*b).clone()).unwrap()))
                    .count();
                let expected = match mode {
                    Quantifier::Exists => hits > 0,
                    Quantifier::Forall => hits == defined.len(),
                };
                ensure!(ok(proj.member(&church_numeral(n), &limits))? == expected, "recognizer {k}, {mode:?}, {n}");
            }
        }
    }
    Ok("20 recognizers x 2 quantifiers x 11 numerals agree".into())
}

fn c12_diagonal() -> Outcome {
    let limits = Limits::default();
    let mut found = Vec::new();
    for q in 1..=3 {
        let (n, m) = ok(diagonal_non_openness_witness(q, 100, &limits))?;
        ensure!(n != m, "q={q}: equal numerals");
        ensure!(
            ok(sem_eq(&church_numeral(n as usize), &church_numeral(m as usize), q, &limits))?,
            "q={q}: ({n}, {m}) differ"
        );
        let diag = |x: u64, y: u64| Term::pair(church_numeral(x as usize), church_numeral(y as usize));
        ensure!(ok(sem_eq(&diag(n, n), &diag(n, m), q, &limits))?, "q={q}: pairs differ");
        found.push((n, m));
    }
    ensure!(found[0] == (0, 1), "q=1 gave {:?}", found[0]);
    Ok(format!("witnesses {found:?}"))
}

fn c13_grafting() -> Outcome {
    let limits = Limits::default();
    let defs = AutoDefs::new(limits.clone());
    let sigma = RankedAlphabet::parse("f:1,c:0").unwrap();
    let (ext, hole) = sigma.with_hole();
    let contexts = ext.trees_up_to_depth(3);
    let trees = sigma.trees_up_to_depth(3);
    let g = graft(&sigma);
    for k in &contexts {
        for t in &trees {
            let grafted = Term::apps(g.clone(), [church_tree(&ext, k).unwrap(), church_tree(&sigma, t).unwrap()]);
            let nf = ok(normalize(&grafted, &Context::new()))?;
            ensure!(nf == church_tree(&sigma, &k.plug(&hole, t)).unwrap(), "graft {k} {t}");
        }
    }
    let root_f = TreeAutomaton::root_is(sigma.clone(), "f").unwrap();
    let l = Language::leaf(ok(tree_automaton_to_recognizer(&root_f, &limits))?);
    let mut checks = 0;
    for k in &contexts {
        let divisor = Language::leaf(ok(tree_singleton(&ext, k, &limits))?);
        let (res, _) = ok(tree_context_residual(&sigma, Side::Left, &divisor, &l, &defs, &limits))?;
        for t in &trees {
            let expected = ok(root_f.accepts(&k.plug(&hole, t)))?;
            ensure!(ok(res.member(&church_tree(&sigma, t).unwrap(), &limits))? == expected, "{k} \\ L at {t}");
            checks += 1;
        }
    }
    for t in &trees {
        let divisor = Language::leaf(ok(tree_singleton(&sigma, t, &limits))?);
        let (res, _) = ok(tree_context_residual(&sigma, Side::Right, &divisor, &l, &defs, &limits))?;
        for k in &contexts {
            let expected = ok(root_f.accepts(&k.plug(&hole, t)))?;
            ensure!(ok(res.member(&church_tree(&ext, k).unwrap(), &limits))? == expected, "L / {t} at {k}");
            checks += 1;
        }
    }
    // the bare hole is a unit for grafting
    let bare = Language::leaf(ok(tree_singleton(&ext, &RankedTree::leaf(&hole), &limits))?);
    let (res, _) = ok(tree_context_residual(&sigma, Side::Left, &bare, &l, &defs, &limits))?;
    for t in &trees {
        let term = church_tree(&sigma, t).unwrap();
        ensure!(ok(res.member(&term, &limits))? == ok(l.member(&term, &limits))?, "hole \\ L at {t}");
    }
    Ok(format!(
        "{} grafts normalize correctly; {checks} residual memberships agree",
        contexts.len() * trees.len()
    ))
}

fn c14_singletons() -> Outcome {
    let limits = Limits::default();
    let universe = ab().words_up_to(6);
    let encoded: Vec<Term> = universe.iter().map(|w| church_word(&ab(), w).unwrap()).collect();
    let mut levels = Vec::new();
    for w in ab().words_up_to(3) {
        let r = ok(word_singleton(&ab(), &w, &limits))?;
        for (u, t) in universe.iter().zip(&encoded) {
            ensure!(
                ok(r.accepts_term(t, &limits))? == (u == &w),
                "singleton {} on {}",
                ab().render_word(&w),
                ab().render_word(u)
            );
        }
        levels.push(format!("{}:{}", ab().render_word(&w), r.q()));
    }
    Ok(format!("15 singletons exact on 127 words (levels {})", levels.join(" ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 14] = [
        ("size laws", c1_size_laws),
        ("βη-invariance of interpretation", c2_beta_eta_invariance),
        ("conservativity of DFAs", c3_conservativity),
        ("product languages", c4_product),
        ("arrow languages", c5_arrow),
        ("pullbacks", c6_pullback),
        ("Boolean algebra", c7_boolean_algebra),
        ("transfer between state counts", c8_transfer),
        ("residual adjunction", c9_adjunction),
        ("residuals versus classical derivatives", c10_brzozowski_conservativity),
        ("projection quantifiers", c11_quantifiers),
        ("diagonal is not open", c12_diagonal),
        ("tree grafting", c13_grafting),
        ("singleton languages", c14_singletons),
    ];
    panic::set_hook(Box::new(|_| {}));
    let filter: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if filter.is_some_and(|f| f != i + 1) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("total {:.2}s, {failed} failed", total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}

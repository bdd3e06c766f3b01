//! Residuals of languages through a binary term `M : A * B -> C`, and the
//! singleton languages used as divisors.
//!
//! `L_A \ L_C` collects the `N : B` with `M (P, N) ∈ L_C` for every `P ∈ L_A`,
//! and `L_C / L_B` the `P : A` with `M (P, N) ∈ L_C` for every `N ∈ L_B`.
//! Through concatenation of words these are the classical left and right
//! quotients; through grafting they relate tree contexts and trees.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::bridge::{tree_automaton_to_recognizer, TreeAutomaton};
use crate::definability::{DefProvider, Exactness};
use crate::error::{Error, Result};
use crate::kernel::{church_tree, church_word, concat, graft, typecheck_closed, uncurry, Alphabet, RankedAlphabet, RankedTree, SimpleType, Term};
use crate::limits::Limits;
use crate::reglang::{arrow_lang, pullback, Accept, Language, Recognizer};
use crate::semantics::{interpret_closed, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

fn split_binary(m: &Term) -> Result<(SimpleType, SimpleType, SimpleType)> {
    let ty = typecheck_closed(m).map_err(|e| Error::ill_typed(e.to_string()))?;
    let err = || Error::ill_typed(format!("expected a term of type A * B -> C, got {ty}"));
    let (dom, c) = ty.as_arrow().ok_or_else(err)?;
    let (a, b) = dom.as_product().ok_or_else(err)?;
    Ok((a.clone(), b.clone(), c.clone()))
}

/// `L_A \ L_C` over `B`, with the exactness of the underlying arrow language.
pub fn left_residual(
    m: &Term,
    la: &Language,
    lc: &Language,
    defs: &dyn DefProvider,
    limits: &Limits,
) -> Result<(Language, Exactness)> {
    let (a, b, c) = split_binary(m)?;
    check_ty(la, &a)?;
    check_ty(lc, &c)?;
    // λxB. λxA. m (xA, xB)
    let curried = Term::lam(
        "xb",
        b,
        Term::lam("xa", a, Term::app(m.clone(), Term::pair(Term::var(0), Term::var(1)))),
    );
    let (arrow, exactness) = arrow_lang(la, lc, defs, limits)?;
    Ok((pullback(&curried, &arrow)?, exactness))
}

/// `L_C / L_B` over `A`, with the exactness of the underlying arrow language.
pub fn right_residual(
    m: &Term,
    lb: &Language,
    lc: &Language,
    defs: &dyn DefProvider,
    limits: &Limits,
) -> Result<(Language, Exactness)> {
    let (a, b, c) = split_binary(m)?;
    check_ty(lb, &b)?;
    check_ty(lc, &c)?;
    // λxA. λxB. m (xA, xB)
    let curried = Term::lam(
        "xa",
        a,
        Term::lam("xb", b, Term::app(m.clone(), Term::pair(Term::var(1), Term::var(0)))),
    );
    let (arrow, exactness) = arrow_lang(lb, lc, defs, limits)?;
    Ok((pullback(&curried, &arrow)?, exactness))
}

fn check_ty(l: &Language, ty: &SimpleType) -> Result<()> {
    if l.ty() != ty {
        return Err(Error::TypeDisagreement {
            left: l.ty().clone(),
            right: ty.clone(),
        });
    }
    Ok(())
}

/// Word quotients through concatenation: `divisor \ l` on the left, `l / divisor`
/// on the right.
pub fn word_residual(
    alphabet: &Alphabet,
    side: Side,
    divisor: &Language,
    l: &Language,
    defs: &dyn DefProvider,
    limits: &Limits,
) -> Result<(Language, Exactness)> {
    let w = alphabet.word_type();
    let m = uncurry(&concat(alphabet), w.clone(), w);
    match side {
        Side::Left => left_residual(&m, divisor, l, defs, limits),
        Side::Right => right_residual(&m, divisor, l, defs, limits),
    }
}

/// Residuals through grafting a tree into the hole of a context.
///
/// On the left the divisor is a language of contexts (trees over the alphabet
/// extended by the hole) and the result a language of trees: `{t | ∀k ∈ K. k[t] ∈ L}`.
/// On the right the divisor is a language of trees and the result a language of
/// contexts: `{k | ∀t ∈ T. k[t] ∈ L}`.
pub fn tree_context_residual(
    ranked: &RankedAlphabet,
    side: Side,
    divisor: &Language,
    l: &Language,
    defs: &dyn DefProvider,
    limits: &Limits,
) -> Result<(Language, Exactness)> {
    let (extended, _) = ranked.with_hole();
    let m = uncurry(&graft(ranked), extended.tree_type(), ranked.tree_type());
    match side {
        Side::Left => left_residual(&m, divisor, l, defs, limits),
        Side::Right => right_residual(&m, divisor, l, defs, limits),
    }
}

/// An argument tuple for a word value: one endofunction table per letter and a
/// start state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Probe {
    tables: Vec<Vec<u64>>,
    start: u64,
}

impl Probe {
    fn run(&self, w: &[usize]) -> u64 {
        w.iter().fold(self.start, |s, &a| self.tables[a][s as usize])
    }

    /// The probe with index `i` in the enumeration of all tuples at `q`.
    fn nth(mut i: u64, q: u64, letters: usize) -> Probe {
        let start = i % q;
        i /= q;
        let per_table = q.pow(q as u32);
        let mut tables = Vec::with_capacity(letters);
        for _ in 0..letters {
            let mut code = i % per_table;
            i /= per_table;
            let mut t = vec![0; q as usize];
            for slot in t.iter_mut().rev() {
                *slot = code % q;
                code /= q;
            }
            tables.push(t);
        }
        Probe { tables, start }
    }
}

/// Number of argument tuples of a word value at `q`, if it fits.
fn tuple_count(q: u64, letters: usize) -> Option<u64> {
    let per = q.checked_pow(q as u32)?;
    per.checked_pow(letters as u32)?.checked_mul(q)
}

/// A word `u ≠ w` agreeing with `w` on every probe, if one exists.
fn colliding_word(w: &[usize], probes: &[Probe], letters: usize, limits: &Limits) -> Result<Option<Vec<usize>>> {
    const DIVERGED: usize = usize::MAX;
    let target: Vec<u64> = probes.iter().map(|p| p.run(w)).collect();
    let start = (probes.iter().map(|p| p.start).collect::<Vec<_>>(), 0usize);
    type Node = (Vec<u64>, usize);
    let mut parent: HashMap<Node, Option<(Node, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(node) = queue.pop_front() {
        limits.check_cancelled()?;
        if node.1 == DIVERGED && node.0 == target {
            let mut u = Vec::new();
            let mut cur = node;
            while let Some((prev, a)) = parent[&cur].clone() {
                u.push(a);
                cur = prev;
            }
            u.reverse();
            return Ok(Some(u));
        }
        for a in 0..letters {
            let vec: Vec<u64> = node.0.iter().zip(probes).map(|(&s, p)| p.tables[a][s as usize]).collect();
            let pos = if node.1 < w.len() && w[node.1] == a { node.1 + 1 } else { DIVERGED };
            let next = (vec, pos);
            if !parent.contains_key(&next) {
                if parent.len() >= limits.class_limit {
                    return Err(Error::overflow("singleton separation search"));
                }
                parent.insert(next.clone(), Some((node.clone(), a)));
                queue.push_back(next);
            }
        }
    }
    Ok(None)
}

/// The probes of the singleton automaton of `w`, which needs `|w| + 2` states.
fn automaton_probe(w: &[usize], letters: usize) -> Probe {
    let k = w.len();
    let sink = (k + 1) as u64;
    let tables = (0..letters)
        .map(|a| {
            (0..=k + 1)
                .map(|s| if s < k && w[s] == a { s as u64 + 1 } else { sink })
                .collect()
        })
        .collect();
    Probe { tables, start: 0 }
}

/// Above this many argument tuples the singleton predicate is kept as probes
/// rather than the full value of the word.
const EXPLICIT_TUPLES: u64 = 4096;

/// The language `{[w]}` as a recognizer at the least `q` for which no other word
/// has the same value as `w` (bounded above by `|w| + 2`, where the singleton
/// automaton fits).
///
/// Collisions are searched against a growing set of separating probes; a
/// candidate `u` is compared with `w` on all argument tuples at `q`. Small
/// cases use the explicit set `{⟦w⟧_q}`, larger ones the conjunction of the
/// probes, which accepts the same words.
pub fn word_singleton(alphabet: &Alphabet, w: &[usize], limits: &Limits) -> Result<Recognizer> {
    let n = alphabet.len();
    if let Some(&bad) = w.iter().find(|&&a| a >= n) {
        return Err(Error::UnknownLetter(format!("#{bad}")));
    }
    let ty = alphabet.word_type();
    let term = church_word(alphabet, w)?;
    let ceiling = w.len() as u32 + 2;
    for q in 1..=ceiling {
        limits.check_cancelled()?;
        let qq = q as u64;
        let probes = if q == ceiling {
            vec![automaton_probe(w, n)]
        } else {
            let Some(total) = tuple_count(qq, n).filter(|&t| t <= limits.space_budget) else {
                continue;
            };
            match separating_probes(w, qq, n, total, limits)? {
                Some(p) => p,
                None => continue,
            }
        };
        let recognizer = if q < ceiling && tuple_count(qq, n).is_some_and(|t| t <= EXPLICIT_TUPLES) {
            Recognizer::new(ty.clone(), q, [interpret_closed(&term, q, limits)?])?
        } else {
            let endo = crate::semantics::ValueSpace::new(&SimpleType::endo(), q)?;
            let mut parts = Vec::new();
            for p in &probes {
                let mut args = p
                    .tables
                    .iter()
                    .map(|t| endo.table(t.iter().map(|&s| Value::Index(s)).collect()))
                    .collect::<Result<Vec<_>>>()?;
                args.push(Value::Index(p.start));
                let then = Arc::new(Accept::set([Value::Index(p.run(w))]));
                parts.push(Arc::new(Accept::Apply { args, then }));
            }
            let accept = if parts.len() == 1 {
                (*parts.pop().unwrap()).clone()
            } else {
                Accept::And(parts)
            };
            Recognizer::with_predicate(ty.clone(), q, accept)?
        };
        return Ok(recognizer.with_support(vec![term]));
    }
    unreachable!("the singleton automaton separates at the ceiling")
}

/// Probes at `q` telling `w` apart from every other word, or `None` when some
/// other word has the same value as `w`.
fn separating_probes(w: &[usize], q: u64, letters: usize, total: u64, limits: &Limits) -> Result<Option<Vec<Probe>>> {
    let mut probes: Vec<Probe> = Vec::new();
    let mut seen: HashSet<Probe> = HashSet::new();
    loop {
        let Some(u) = colliding_word(w, &probes, letters, limits)? else {
            return Ok(Some(probes));
        };
        let mut split = None;
        for i in 0..total {
            if i & 0xfff == 0 {
                limits.check_cancelled()?;
            }
            let p = Probe::nth(i, q, letters);
            if p.run(&u) != p.run(w) {
                split = Some(p);
                break;
            }
        }
        match split {
            Some(p) if seen.insert(p.clone()) => probes.push(p),
            Some(_) => unreachable!("a new probe separates the collision"),
            None => return Ok(None),
        }
    }
}

/// The language `{t}` of a single tree, by its subtree automaton.
pub fn tree_singleton(ranked: &RankedAlphabet, t: &RankedTree, limits: &Limits) -> Result<Recognizer> {
    let a = TreeAutomaton::singleton(ranked.clone(), t)?;
    Ok(tree_automaton_to_recognizer(&a, limits)?.with_support(vec![church_tree(ranked, t)?]))
}

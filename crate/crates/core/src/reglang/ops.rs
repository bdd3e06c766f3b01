use std::collections::HashMap;
use std::sync::Arc;

use super::{Accept, Formula, Language, Recognizer};
use crate::definability::{DefProvider, Exactness};
use crate::error::{Error, Result};
use crate::kernel::{church_numeral, typecheck_closed, SimpleType, Term};
use crate::limits::Limits;
use crate::semantics::Engine;

/// A single recognizer at the language's level for the same language.
///
/// Leaves are raised along the retraction, so no definable-value set is needed
/// and the result is always exact.
pub fn to_recognizer(l: &Language) -> Result<Recognizer> {
    let q = l.level();
    fn go(f: &Formula, ty: &SimpleType, q: u32) -> Result<Recognizer> {
        match f {
            Formula::All => Ok(Recognizer::all(ty.clone(), q)),
            Formula::None => Ok(Recognizer::none(ty.clone(), q)),
            Formula::Leaf(r) => r.raise(q),
            Formula::Not(a) => Ok(go(a, ty, q)?.complement()),
            Formula::And(a, b) => go(a, ty, q)?.intersect(&go(b, ty, q)?),
            Formula::Or(a, b) => go(a, ty, q)?.union(&go(b, ty, q)?),
        }
    }
    go(l.formula(), l.ty(), q)
}

/// `{(M, N) | M ∈ la, N ∈ lb}` over `A * B`.
pub fn product_lang(la: &Language, lb: &Language) -> Result<Language> {
    let ra = to_recognizer(la)?;
    let rb = to_recognizer(lb)?;
    let q = ra.q().max(rb.q());
    let (ra, rb) = (ra.raise(q)?, rb.raise(q)?);
    let accept = Accept::conjoin(
        &Arc::new(Accept::fst((**ra.accept()).clone())),
        &Arc::new(Accept::snd((**rb.accept()).clone())),
    );
    let ty = SimpleType::product(la.ty().clone(), lb.ty().clone());
    let mut r = Recognizer::with_predicate(ty, q, accept)?;
    if let (Some(sa), Some(sb)) = (ra.support(), rb.support()) {
        let pairs = sa
            .iter()
            .flat_map(|a| sb.iter().map(move |b| Term::pair(a.clone(), b.clone())))
            .collect();
        r = r.with_support(pairs);
    }
    Ok(Language::leaf(r))
}

/// Closed terms that cover the members of `l` up to βη, at state count `q`.
///
/// Uses the language's finite support when it has one (always exact), and
/// otherwise the definable values of its type at `q`.
fn members_at(l: &Language, q: u32, defs: &dyn DefProvider, limits: &Limits) -> Result<(Vec<Term>, Exactness)> {
    if let Some(s) = l.support() {
        let mut out = Vec::new();
        for t in s {
            if l.member(&t, limits)? {
                out.push(t);
            }
        }
        return Ok((out, Exactness::Exact));
    }
    let d = defs.def_set(l.ty(), q)?;
    let engine = Engine::new(limits);
    let mut out = Vec::new();
    for t in d.representatives() {
        limits.check_cancelled()?;
        if l.member_sem(&engine, &engine.eval_closed(t)?)? {
            out.push(t.clone());
        }
    }
    Ok((out, d.exactness()))
}

/// `{M : A -> B | ∀P ∈ la. M P ∈ lb}`, with a report on whether the
/// quantification ranged over all of `la`.
pub fn arrow_lang(
    la: &Language,
    lb: &Language,
    defs: &dyn DefProvider,
    limits: &Limits,
) -> Result<(Language, Exactness)> {
    let ty = SimpleType::arrow(la.ty().clone(), lb.ty().clone());
    let rb = to_recognizer(lb)?;
    let q = la.level().max(rb.q());
    if rb.accept().is_all() {
        return Ok((Language::all(ty), Exactness::Exact));
    }
    let (points, exactness) = members_at(la, q, defs, limits)?;
    if points.is_empty() {
        return Ok((Language::all(ty), exactness));
    }
    let then = rb.raise(q)?.accept().clone();
    let r = Recognizer::with_predicate(ty, q, Accept::ForallAt { points, then })?;
    Ok((Language::leaf(r), exactness))
}

/// `m⁻¹(lb) = {P | m P ∈ lb}` for a closed `m : A -> B`. Always exact.
pub fn pullback(m: &Term, lb: &Language) -> Result<Language> {
    let ty = typecheck_closed(m).map_err(|e| Error::ill_typed(e.to_string()))?;
    let (a, b) = match ty.as_arrow() {
        Some((a, b)) => (a.clone(), b.clone()),
        None => return Err(Error::ill_typed(format!("pullback along a term of type {ty}"))),
    };
    if &b != lb.ty() {
        return Err(Error::TypeDisagreement {
            left: b,
            right: lb.ty().clone(),
        });
    }
    fn go(f: &Formula, m: &Term, a: &SimpleType, b: &SimpleType) -> Result<Formula> {
        Ok(match f {
            Formula::All => Formula::All,
            Formula::None => Formula::None,
            Formula::Leaf(r) => {
                let accept = if r.accept().is_all() || r.accept().is_none() {
                    (**r.accept()).clone()
                } else {
                    Accept::Image {
                        map: m.clone(),
                        codomain: b.clone(),
                        then: r.accept().clone(),
                    }
                };
                Formula::Leaf(Arc::new(Recognizer::with_predicate(a.clone(), r.q(), accept)?))
            }
            Formula::Not(x) => Formula::Not(Box::new(go(x, m, a, b)?)),
            Formula::And(x, y) => Formula::And(Box::new(go(x, m, a, b)?), Box::new(go(y, m, a, b)?)),
            Formula::Or(x, y) => Formula::Or(Box::new(go(x, m, a, b)?), Box::new(go(y, m, a, b)?)),
        })
    }
    Language::from_formula(a.clone(), go(lb.formula(), m, &a, &b)?)
}

/// `r` seen at the larger state count `q2`.
///
/// With an exact definable-value set at `q2` the accepting set is listed
/// explicitly: `F' = {v ∈ Def_q2 | ⟦rep(v)⟧_q ∈ F}`. Otherwise the exact
/// retraction-based recognizer of [`Recognizer::raise`] is returned.
pub fn lift_to_q(r: &Recognizer, q2: u32, defs: &dyn DefProvider, limits: &Limits) -> Result<(Recognizer, Exactness)> {
    if q2 < r.q() {
        return Err(Error::StateCountDecrease { from: r.q(), to: q2 });
    }
    if q2 == r.q() {
        return Ok((r.clone(), Exactness::Exact));
    }
    match defs.def_set(r.ty(), q2) {
        Ok(d) if d.exactness().is_exact() => {
            let engine = Engine::new(limits);
            let mut accepted = Vec::new();
            for (v, t) in d.entries() {
                if r.accepts_sem(&engine, &engine.eval_closed(t)?)? {
                    accepted.push(v.clone());
                }
            }
            let mut out = Recognizer::new(r.ty().clone(), q2, accepted)?;
            if let Some(s) = r.support() {
                out = out.with_support(s.to_vec());
            }
            Ok((out, Exactness::Exact))
        }
        Ok(_) | Err(Error::SizeOverflow(_)) | Err(Error::NormalizationNeedsDefs) => Ok((r.raise(q2)?, Exactness::Exact)),
        Err(e) => Err(e),
    }
}

/// The answer of a containment check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Containment {
    True,
    /// A member of the first language outside the second.
    False(Term),
    /// No counterexample among the terms examined, which were not all of them.
    Unknown,
}

/// Decides `l1 ⊆ l2` on definable values at the larger of the two levels.
pub fn contains(l1: &Language, l2: &Language, defs: &dyn DefProvider, limits: &Limits) -> Result<Containment> {
    if l1.ty() != l2.ty() {
        return Err(Error::TypeDisagreement {
            left: l1.ty().clone(),
            right: l2.ty().clone(),
        });
    }
    let r1 = to_recognizer(l1)?;
    let r2 = to_recognizer(l2)?;
    if r1.accept().is_none() || r2.accept().is_all() {
        return Ok(Containment::True);
    }
    let q = r1.q().max(r2.q());
    let (candidates, exactness) = members_at(l1, q, defs, limits)?;
    let engine = Engine::new(limits);
    for t in candidates {
        if !l2.member_sem(&engine, &engine.eval_closed(&t)?)? {
            return Ok(Containment::False(t));
        }
    }
    Ok(if exactness.is_exact() {
        Containment::True
    } else {
        Containment::Unknown
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Projects a language over `A * B` to `A`: `∃`/`∀` over the definable values
/// of `B` at the language's level.
pub fn quantify_along_projection(
    l: &Language,
    mode: Quantifier,
    defs: &dyn DefProvider,
) -> Result<(Language, Exactness)> {
    let (a, b) = match l.ty().as_product() {
        Some((a, b)) => (a.clone(), b.clone()),
        None => return Err(Error::ill_typed(format!("quantifying over a non-product type {}", l.ty()))),
    };
    let r = to_recognizer(l)?;
    if r.accept().is_all() {
        return Ok((Language::all(a), Exactness::Exact));
    }
    if r.accept().is_none() {
        return Ok((Language::none(a), Exactness::Exact));
    }
    let d = defs.def_set(&b, r.q())?;
    let accept = Accept::Quantified {
        exists: mode == Quantifier::Exists,
        witness_ty: b,
        witnesses: d.representatives().cloned().collect(),
        then: r.accept().clone(),
    };
    Ok((Language::leaf(Recognizer::with_predicate(a, r.q(), accept)?), d.exactness()))
}

/// The first pair `n < m` (by `m`, then `n`) of numerals equal at `q`, with
/// `m < search_budget`. Then `(n, n)` and `(n, m)` have the same value at
/// `q` while only the first lies on the diagonal.
pub fn diagonal_non_openness_witness(q: u32, search_budget: u64, limits: &Limits) -> Result<(u64, u64)> {
    let engine = Engine::new(limits);
    let space = engine.space(&SimpleType::nat(), q)?;
    let mut seen = HashMap::new();
    for m in 0..search_budget {
        limits.check_cancelled()?;
        let v = engine.quote(&engine.eval_closed(&church_numeral(m as usize))?, &space)?;
        if let Some(&n) = seen.get(&v) {
            return Ok((n, m));
        }
        seen.insert(v, m);
    }
    Err(Error::BudgetExhausted(search_budget))
}

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::kernel::{SimpleType, Term};
use crate::semantics::{Engine, Sem, Value};

/// An accepting set `F ⊆ ⟦A⟧_q`, given as a predicate on values.
///
/// `Values` is an explicit finite or cofinite set. The other nodes describe
/// sets that are too large to list: each one reads its argument through a
/// λ-definable or tabulated operation and hands the result to a sub-predicate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Accept {
    /// `set`, or its complement in the whole space when `complement` holds.
    Values {
        set: BTreeSet<Value>,
        complement: bool,
    },
    Not(Arc<Accept>),
    And(Vec<Arc<Accept>>),
    Or(Vec<Arc<Accept>>),
    /// `{f | then(f a1 ... ak)}`, the `ai` being values at the same `q`.
    Apply { args: Vec<Value>, then: Arc<Accept> },
    Fst(Arc<Accept>),
    Snd(Arc<Accept>),
    /// `{a | then(⟦map⟧ a)}` for a closed `map : A -> B`, with `then` at `B`.
    Image {
        map: Term,
        codomain: SimpleType,
        then: Arc<Accept>,
    },
    /// `{v | then(π(v))}`, `π` being the retraction onto the smaller count `q`.
    Lower { q: u32, then: Arc<Accept> },
    /// `{f | ∀P ∈ points. then(f ⟦P⟧)}` on an arrow type.
    ForallAt { points: Vec<Term>, then: Arc<Accept> },
    /// `{a | ∃/∀ b ∈ witnesses. then(a, ⟦b⟧)}`.
    Quantified {
        exists: bool,
        witness_ty: SimpleType,
        witnesses: Vec<Term>,
        then: Arc<Accept>,
    },
}

impl Accept {
    pub fn all() -> Accept {
        Accept::Values {
            set: BTreeSet::new(),
            complement: true,
        }
    }

    pub fn none() -> Accept {
        Accept::Values {
            set: BTreeSet::new(),
            complement: false,
        }
    }

    pub fn set(values: impl IntoIterator<Item = Value>) -> Accept {
        Accept::Values {
            set: values.into_iter().collect(),
            complement: false,
        }
    }

    pub fn is_all(&self) -> bool {
        matches!(self, Accept::Values { set, complement: true } if set.is_empty())
    }

    pub fn is_none(&self) -> bool {
        matches!(self, Accept::Values { set, complement: false } if set.is_empty())
    }

    /// Rewrites a `Values` set that covers a space of `card` elements.
    pub(crate) fn normalized(self, card: Option<u64>) -> Accept {
        match self {
            Accept::Values { set, complement } if card == Some(set.len() as u64) => Accept::Values {
                set: BTreeSet::new(),
                complement: !complement,
            },
            other => other,
        }
    }

    pub fn negate(a: &Arc<Accept>) -> Accept {
        match &**a {
            Accept::Values { set, complement } => Accept::Values {
                set: set.clone(),
                complement: !complement,
            },
            Accept::Not(inner) => (**inner).clone(),
            Accept::Lower { q, then } => Accept::Lower {
                q: *q,
                then: Arc::new(Accept::negate(then)),
            },
            _ => Accept::Not(a.clone()),
        }
    }

    pub fn conjoin(a: &Arc<Accept>, b: &Arc<Accept>) -> Accept {
        use Accept::*;
        match (&**a, &**b) {
            (x, _) if x.is_none() => Accept::none(),
            (_, y) if y.is_none() => Accept::none(),
            (x, _) if x.is_all() => (**b).clone(),
            (_, y) if y.is_all() => (**a).clone(),
            (Values { set: s, complement: cs }, Values { set: t, complement: ct }) => match (cs, ct) {
                (false, false) => Accept::set(s.intersection(t).cloned()),
                (false, true) => Accept::set(s.difference(t).cloned()),
                (true, false) => Accept::set(t.difference(s).cloned()),
                (true, true) => Values {
                    set: s.union(t).cloned().collect(),
                    complement: true,
                },
            },
            (Lower { q: p, then: x }, Lower { q: r, then: y }) if p == r => Lower {
                q: *p,
                then: Arc::new(Accept::conjoin(x, y)),
            },
            _ => {
                let mut parts = Vec::new();
                for side in [a, b] {
                    match &**side {
                        And(xs) => parts.extend(xs.iter().cloned()),
                        _ => parts.push(side.clone()),
                    }
                }
                And(parts)
            }
        }
    }

    pub fn disjoin(a: &Arc<Accept>, b: &Arc<Accept>) -> Accept {
        use Accept::*;
        match (&**a, &**b) {
            (x, _) if x.is_all() => Accept::all(),
            (_, y) if y.is_all() => Accept::all(),
            (x, _) if x.is_none() => (**b).clone(),
            (_, y) if y.is_none() => (**a).clone(),
            (Values { .. }, Values { .. }) => {
                let na = Arc::new(Accept::negate(a));
                let nb = Arc::new(Accept::negate(b));
                Accept::negate(&Arc::new(Accept::conjoin(&na, &nb)))
            }
            (Lower { q: p, then: x }, Lower { q: r, then: y }) if p == r => Lower {
                q: *p,
                then: Arc::new(Accept::disjoin(x, y)),
            },
            _ => {
                let mut parts = Vec::new();
                for side in [a, b] {
                    match &**side {
                        Or(xs) => parts.extend(xs.iter().cloned()),
                        _ => parts.push(side.clone()),
                    }
                }
                Or(parts)
            }
        }
    }

    pub fn fst(a: Accept) -> Accept {
        if a.is_all() || a.is_none() {
            a
        } else {
            Accept::Fst(Arc::new(a))
        }
    }

    pub fn snd(a: Accept) -> Accept {
        if a.is_all() || a.is_none() {
            a
        } else {
            Accept::Snd(Arc::new(a))
        }
    }

    /// Whether the value `s` of type `ty` at state count `q` is accepted.
    pub fn holds(&self, engine: &Engine, s: &Arc<Sem>, ty: &SimpleType, q: u32) -> Result<bool> {
        engine.tick()?;
        match self {
            Accept::Values { set, complement } => {
                if set.is_empty() {
                    return Ok(*complement);
                }
                let v = engine.quote(s, &engine.space(ty, q)?)?;
                Ok(set.contains(&v) != *complement)
            }
            Accept::Not(a) => Ok(!a.holds(engine, s, ty, q)?),
            Accept::And(xs) => {
                for x in xs {
                    if !x.holds(engine, s, ty, q)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Accept::Or(xs) => {
                for x in xs {
                    if x.holds(engine, s, ty, q)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Accept::Apply { args, then } => {
                let mut cur = s.clone();
                let mut cur_ty = ty.clone();
                for a in args {
                    let (dom, cod) = cur_ty
                        .as_arrow()
                        .ok_or_else(|| Error::ill_typed("too many arguments in an accepting predicate"))?;
                    let space = engine.space(dom, q)?;
                    cur = engine.apply(&cur, engine.canon(&space, a.clone()))?;
                    cur_ty = cod.clone();
                }
                then.holds(engine, &cur, &cur_ty, q)
            }
            Accept::Fst(a) | Accept::Snd(a) => {
                let (l, r) = ty
                    .as_product()
                    .ok_or_else(|| Error::ill_typed("projection predicate on a non-product"))?;
                if matches!(self, Accept::Fst(_)) {
                    a.holds(engine, &engine.fst(s)?, l, q)
                } else {
                    a.holds(engine, &engine.snd(s)?, r, q)
                }
            }
            Accept::Image { map, codomain, then } => {
                let f = engine.eval_closed(map)?;
                let r = engine.apply(&f, s.clone())?;
                then.holds(engine, &r, codomain, q)
            }
            Accept::Lower { q: lo, then } => {
                let moved = engine.transfer(s.clone(), ty, q, *lo)?;
                then.holds(engine, &moved, ty, *lo)
            }
            Accept::ForallAt { points, then } => {
                let (_, cod) = ty
                    .as_arrow()
                    .ok_or_else(|| Error::ill_typed("arrow predicate on a non-arrow"))?;
                for p in points {
                    let r = engine.apply(s, engine.eval_closed(p)?)?;
                    if !then.holds(engine, &r, cod, q)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Accept::Quantified {
                exists,
                witness_ty,
                witnesses,
                then,
            } => {
                let pair_ty = SimpleType::product(ty.clone(), witness_ty.clone());
                for w in witnesses {
                    let pair = Arc::new(Sem::Pair(s.clone(), engine.eval_closed(w)?));
                    if then.holds(engine, &pair, &pair_ty, q)? == *exists {
                        return Ok(*exists);
                    }
                }
                Ok(!*exists)
            }
        }
    }

    /// Number of nodes, for diagnostics.
    pub fn size(&self) -> usize {
        match self {
            Accept::Values { .. } => 1,
            Accept::Not(a) | Accept::Fst(a) | Accept::Snd(a) => 1 + a.size(),
            Accept::And(xs) | Accept::Or(xs) => 1 + xs.iter().map(|x| x.size()).sum::<usize>(),
            Accept::Apply { then, .. }
            | Accept::Image { then, .. }
            | Accept::Lower { then, .. }
            | Accept::ForallAt { then, .. }
            | Accept::Quantified { then, .. } => 1 + then.size(),
        }
    }
}

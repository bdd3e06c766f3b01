use std::collections::BTreeSet;
use std::sync::Arc;

use super::Accept;
use crate::error::{Error, Result};
use crate::kernel::{typecheck_closed, SimpleType, Term};
use crate::limits::Limits;
use crate::semantics::{Engine, Sem, Value, ValueSpace};

/// A `q`-recognizer: the language `{M : A | ⟦M⟧_q ∈ F}`.
///
/// `support`, when present, lists terms such that every member of the
/// language is βη-equal to one of them. Operations that quantify over a
/// language's members use it instead of a definable-value set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recognizer {
    ty: SimpleType,
    q: u32,
    accept: Arc<Accept>,
    support: Option<Vec<Term>>,
}

impl Recognizer {
    /// A recognizer with an explicit accepting set, checked against the space.
    pub fn new(ty: SimpleType, q: u32, accepting: impl IntoIterator<Item = Value>) -> Result<Self> {
        let space = ValueSpace::new(&ty, q)?;
        let set: BTreeSet<Value> = accepting.into_iter().collect();
        for v in &set {
            space.check(v)?;
        }
        Ok(Recognizer {
            ty,
            q,
            accept: Arc::new(Accept::set(set).normalized(space.card())),
            support: None,
        })
    }

    pub fn from_indices(ty: SimpleType, q: u32, indices: &[u64]) -> Result<Self> {
        Recognizer::new(ty, q, indices.iter().map(|&i| Value::Index(i)))
    }

    /// A recognizer given by an arbitrary predicate. The predicate must make
    /// sense for values of `ty` at `q`.
    pub fn with_predicate(ty: SimpleType, q: u32, accept: Accept) -> Result<Self> {
        let space = ValueSpace::new(&ty, q)?;
        Ok(Recognizer {
            ty,
            q,
            accept: Arc::new(accept.normalized(space.card())),
            support: None,
        })
    }

    pub fn all(ty: SimpleType, q: u32) -> Self {
        Recognizer {
            ty,
            q: q.max(1),
            accept: Arc::new(Accept::all()),
            support: None,
        }
    }

    pub fn none(ty: SimpleType, q: u32) -> Self {
        Recognizer {
            ty,
            q: q.max(1),
            accept: Arc::new(Accept::none()),
            support: Some(Vec::new()),
        }
    }

    /// Attaches a finite support (see the type-level docs). The caller vouches
    /// that every member is βη-equal to one of `terms`.
    pub fn with_support(mut self, terms: Vec<Term>) -> Self {
        self.support = Some(terms);
        self
    }

    pub fn ty(&self) -> &SimpleType {
        &self.ty
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn accept(&self) -> &Arc<Accept> {
        &self.accept
    }

    pub fn support(&self) -> Option<&[Term]> {
        self.support.as_deref()
    }

    /// The explicit accepting set, if this recognizer stores one.
    pub fn explicit(&self) -> Option<(&BTreeSet<Value>, bool)> {
        match &*self.accept {
            Accept::Values { set, complement } => Some((set, *complement)),
            _ => None,
        }
    }

    /// Lists `F` by sweeping the whole space, which must fit `budget`.
    pub fn accepting_values(&self, limits: &Limits) -> Result<BTreeSet<Value>> {
        let engine = Engine::new(limits);
        let space = engine.space(&self.ty, self.q)?;
        if let Some((set, false)) = self.explicit() {
            return Ok(set.clone());
        }
        let mut out = BTreeSet::new();
        for v in space.elements(limits.space_budget)? {
            limits.check_cancelled()?;
            if self.accept.holds(&engine, &engine.canon(&space, v.clone()), &self.ty, self.q)? {
                out.insert(v);
            }
        }
        Ok(out)
    }

    /// The same recognizer with `F` listed explicitly, when the space fits.
    pub fn materialized(&self, limits: &Limits) -> Result<Recognizer> {
        let set = self.accepting_values(limits)?;
        let mut r = Recognizer::new(self.ty.clone(), self.q, set)?;
        r.support = self.support.clone();
        Ok(r)
    }

    pub fn accepts_value(&self, v: &Value, limits: &Limits) -> Result<bool> {
        let engine = Engine::new(limits);
        let space = engine.space(&self.ty, self.q)?;
        space.check(v)?;
        self.accept.holds(&engine, &engine.canon(&space, v.clone()), &self.ty, self.q)
    }

    pub(crate) fn accepts_sem(&self, engine: &Engine, s: &Arc<Sem>) -> Result<bool> {
        self.accept.holds(engine, s, &self.ty, self.q)
    }

    pub fn accepts_term(&self, m: &Term, limits: &Limits) -> Result<bool> {
        let ty = typecheck_closed(m).map_err(|e| Error::ill_typed(e.to_string()))?;
        if ty != self.ty {
            return Err(Error::ill_typed(format!("expected a term of type {}, got {ty}", self.ty)));
        }
        let engine = Engine::new(limits);
        self.accepts_sem(&engine, &engine.eval_closed(m)?)
    }

    /// The same language recognized at the larger count `q2`, through the
    /// retraction `⟦A⟧_q2 → ⟦A⟧_q`. Exact, and needs no definable values.
    pub fn raise(&self, q2: u32) -> Result<Recognizer> {
        if q2 < self.q {
            return Err(Error::StateCountDecrease { from: self.q, to: q2 });
        }
        if q2 == self.q || self.accept.is_all() || self.accept.is_none() {
            return Ok(Recognizer {
                q: q2,
                ..self.clone()
            });
        }
        let accept = match &*self.accept {
            Accept::Lower { q, then } => Accept::Lower { q: *q, then: then.clone() },
            _ => Accept::Lower {
                q: self.q,
                then: self.accept.clone(),
            },
        };
        Ok(Recognizer {
            ty: self.ty.clone(),
            q: q2,
            accept: Arc::new(accept),
            support: self.support.clone(),
        })
    }

    fn same_space(&self, other: &Recognizer) -> Result<()> {
        if self.ty != other.ty {
            return Err(Error::TypeDisagreement {
                left: self.ty.clone(),
                right: other.ty.clone(),
            });
        }
        if self.q != other.q {
            return Err(Error::SpaceMismatch(format!(
                "recognizers at q={} and q={}",
                self.q, other.q
            )));
        }
        Ok(())
    }

    fn card(&self) -> Option<u64> {
        ValueSpace::new(&self.ty, self.q).ok().and_then(|s| s.card())
    }

    /// Complement relative to the whole space.
    pub fn complement(&self) -> Recognizer {
        Recognizer {
            ty: self.ty.clone(),
            q: self.q,
            accept: Arc::new(Accept::negate(&self.accept).normalized(self.card())),
            support: None,
        }
    }

    pub fn intersect(&self, other: &Recognizer) -> Result<Recognizer> {
        self.same_space(other)?;
        let support = match (&self.support, &other.support) {
            (Some(s), _) | (None, Some(s)) => Some(s.clone()),
            _ => None,
        };
        Ok(Recognizer {
            ty: self.ty.clone(),
            q: self.q,
            accept: Arc::new(Accept::conjoin(&self.accept, &other.accept).normalized(self.card())),
            support,
        })
    }

    pub fn union(&self, other: &Recognizer) -> Result<Recognizer> {
        self.same_space(other)?;
        let support = match (&self.support, &other.support) {
            (Some(s), Some(t)) => Some(s.iter().chain(t).cloned().collect()),
            _ => None,
        };
        Ok(Recognizer {
            ty: self.ty.clone(),
            q: self.q,
            accept: Arc::new(Accept::disjoin(&self.accept, &other.accept).normalized(self.card())),
            support,
        })
    }
}

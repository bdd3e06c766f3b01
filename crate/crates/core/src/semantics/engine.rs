use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::space::{Shape, Value, ValueSpace};
use crate::error::{Error, Result};
use crate::kernel::{SimpleType, Term};
use crate::limits::{Limits, Meter};

/// A semantic value during evaluation.
///
/// Evaluation does not fix `q`: abstractions stay closures until they are
/// applied to concrete arguments or tabulated by [`Engine::quote`]. This keeps
/// membership tests cheap on types whose full spaces are astronomically large.
#[derive(Clone)]
pub enum Sem {
    /// An element of a concrete space.
    Canon(Arc<ValueSpace>, Value),
    Unit,
    Pair(Arc<Sem>, Arc<Sem>),
    Closure(Arc<Term>, Env),
    /// A function moved between state counts (see [`Engine::transfer`]).
    Transfer(Arc<Transfer>),
    /// A function whose saturated applications are being recorded.
    Observed(Arc<Observation>, Vec<Arc<Sem>>),
}

pub struct Transfer {
    ty: SimpleType,
    from: u32,
    to: u32,
    inner: Arc<Sem>,
}

/// Records every argument tuple a wrapped function receives once it has all
/// of its `arg_types.len()` arguments.
pub struct Observation {
    q: u32,
    arg_types: Vec<SimpleType>,
    inner: Arc<Sem>,
    log: Mutex<Vec<Vec<Value>>>,
}

impl Observation {
    pub fn take_log(&self) -> Vec<Vec<Value>> {
        std::mem::take(&mut *self.log.lock().unwrap())
    }
}

#[derive(Clone, Default)]
pub struct Env(Option<Arc<(Arc<Sem>, Env)>>);

impl Env {
    pub fn push(&self, v: Arc<Sem>) -> Env {
        Env(Some(Arc::new((v, self.clone()))))
    }

    fn get(&self, mut i: usize) -> Option<Arc<Sem>> {
        let mut cur = self;
        loop {
            let node = cur.0.as_ref()?;
            if i == 0 {
                return Some(node.0.clone());
            }
            i -= 1;
            cur = &node.1;
        }
    }
}

/// Evaluator for terms in the finite models `⟦-⟧_q`.
pub struct Engine<'a> {
    meter: Meter<'a>,
    spaces: RefCell<HashMap<(SimpleType, u32), Arc<ValueSpace>>>,
}

impl<'a> Engine<'a> {
    pub fn new(limits: &'a Limits) -> Self {
        Engine {
            meter: Meter::new(limits),
            spaces: RefCell::new(HashMap::new()),
        }
    }

    pub fn limits(&self) -> &'a Limits {
        self.meter.limits()
    }

    pub(crate) fn tick(&self) -> Result<()> {
        self.meter.tick()
    }

    pub fn space(&self, ty: &SimpleType, q: u32) -> Result<Arc<ValueSpace>> {
        let key = (ty.clone(), q);
        if let Some(s) = self.spaces.borrow().get(&key) {
            return Ok(s.clone());
        }
        let s = ValueSpace::new(ty, q)?;
        self.spaces.borrow_mut().insert(key, s.clone());
        Ok(s)
    }

    pub fn canon(&self, space: &Arc<ValueSpace>, v: Value) -> Arc<Sem> {
        Arc::new(Sem::Canon(space.clone(), v))
    }

    pub fn eval(&self, t: &Term, env: &Env) -> Result<Arc<Sem>> {
        self.tick()?;
        match t {
            Term::Var(i) => env
                .get(*i)
                .ok_or_else(|| Error::ill_typed(format!("unbound variable #{i}"))),
            Term::Lam(_, _, body) => Ok(Arc::new(Sem::Closure(body.clone(), env.clone()))),
            Term::App(f, a) => {
                let f = self.eval(f, env)?;
                let a = self.eval(a, env)?;
                self.apply(&f, a)
            }
            Term::Pair(a, b) => Ok(Arc::new(Sem::Pair(self.eval(a, env)?, self.eval(b, env)?))),
            Term::Fst(p) => self.fst(&self.eval(p, env)?),
            Term::Snd(p) => self.snd(&self.eval(p, env)?),
            Term::Unit => Ok(Arc::new(Sem::Unit)),
        }
    }

    pub fn eval_closed(&self, t: &Term) -> Result<Arc<Sem>> {
        self.eval(t, &Env::default())
    }

    pub fn apply(&self, f: &Arc<Sem>, a: Arc<Sem>) -> Result<Arc<Sem>> {
        self.tick()?;
        match &**f {
            Sem::Closure(body, env) => self.eval(body, &env.push(a)),
            Sem::Canon(space, fv) => {
                let dom = space
                    .domain()
                    .ok_or_else(|| Error::ill_typed("application of a non-function value"))?;
                let av = self.quote(&a, dom)?;
                let r = space.apply(fv, &av)?;
                Ok(self.canon(space.codomain().unwrap(), r))
            }
            Sem::Transfer(tr) => {
                let (dom, cod) = tr.ty.as_arrow().expect("transfers wrap arrows");
                let a = self.transfer(a, dom, tr.to, tr.from)?;
                let r = self.apply(&tr.inner, a)?;
                self.transfer(r, cod, tr.from, tr.to)
            }
            Sem::Observed(obs, args) => {
                let mut args = args.clone();
                args.push(a);
                if args.len() < obs.arg_types.len() {
                    return Ok(Arc::new(Sem::Observed(obs.clone(), args)));
                }
                let mut tuple = Vec::with_capacity(args.len());
                for (arg, ty) in args.iter().zip(&obs.arg_types) {
                    let space = self.space(ty, obs.q)?;
                    tuple.push(self.quote(arg, &space)?);
                }
                obs.log.lock().unwrap().push(tuple);
                let mut r = obs.inner.clone();
                for arg in args {
                    r = self.apply(&r, arg)?;
                }
                Ok(r)
            }
            Sem::Unit | Sem::Pair(..) => Err(Error::ill_typed("application of a non-function value")),
        }
    }

    pub fn apply_all(&self, f: &Arc<Sem>, args: impl IntoIterator<Item = Arc<Sem>>) -> Result<Arc<Sem>> {
        let mut r = f.clone();
        for a in args {
            r = self.apply(&r, a)?;
        }
        Ok(r)
    }

    pub fn fst(&self, p: &Arc<Sem>) -> Result<Arc<Sem>> {
        match &**p {
            Sem::Pair(a, _) => Ok(a.clone()),
            Sem::Canon(space, v) => match space.shape() {
                Shape::Product(x, _) => Ok(self.canon(x, space.split(v)?.0)),
                _ => Err(Error::ill_typed("projection of a non-pair value")),
            },
            _ => Err(Error::ill_typed("projection of a non-pair value")),
        }
    }

    pub fn snd(&self, p: &Arc<Sem>) -> Result<Arc<Sem>> {
        match &**p {
            Sem::Pair(_, b) => Ok(b.clone()),
            Sem::Canon(space, v) => match space.shape() {
                Shape::Product(_, y) => Ok(self.canon(y, space.split(v)?.1)),
                _ => Err(Error::ill_typed("projection of a non-pair value")),
            },
            _ => Err(Error::ill_typed("projection of a non-pair value")),
        }
    }

    /// Reads a semantic value back as an element of `space`, tabulating
    /// functions over their whole domain (which must fit the space budget).
    pub fn quote(&self, s: &Arc<Sem>, space: &Arc<ValueSpace>) -> Result<Value> {
        match (&**s, space.shape()) {
            (Sem::Canon(sp, v), _) => {
                if sp.q() != space.q() || sp.ty() != space.ty() {
                    return Err(Error::SpaceMismatch(format!("a value of {sp} used where {space} was expected")));
                }
                Ok(v.clone())
            }
            (Sem::Unit, Shape::Unit) => Ok(space.unit()),
            (Sem::Pair(a, b), Shape::Product(x, y)) => {
                let (a, b) = (self.quote(a, x)?, self.quote(b, y)?);
                space.pair(a, b)
            }
            (Sem::Closure(..) | Sem::Transfer(_) | Sem::Observed(..), Shape::Arrow(x, y)) => {
                let n = x.card_within(self.limits().space_budget)?;
                let mut entries = Vec::with_capacity(n as usize);
                for i in 0..n {
                    self.tick()?;
                    let r = self.apply(s, self.canon(x, Value::Index(i)))?;
                    entries.push(self.quote(&r, y)?);
                }
                space.table(entries)
            }
            _ => Err(Error::SpaceMismatch(format!("value does not match {space}"))),
        }
    }

    /// Moves a value of type `ty` from `⟦ty⟧_from` to `⟦ty⟧_to`.
    ///
    /// Going down uses the retraction `r(x) = min(x, to - 1)` at `o`, going up the
    /// inclusion; at arrows `f ↦ t_B ∘ f ∘ t_A'` with `t_A'` the transfer in the
    /// opposite direction. Going down sends `⟦M⟧_from` to `⟦M⟧_to` for every
    /// closed term `M`, by a logical-relation argument.
    pub fn transfer(&self, s: Arc<Sem>, ty: &SimpleType, from: u32, to: u32) -> Result<Arc<Sem>> {
        if from == to {
            return Ok(s);
        }
        match ty {
            SimpleType::Base => {
                let x = self.quote(&s, &self.space(ty, from)?)?.as_index().unwrap();
                let y = if to < from { x.min(to as u64 - 1) } else { x };
                Ok(self.canon(&self.space(ty, to)?, Value::Index(y)))
            }
            SimpleType::Unit => Ok(Arc::new(Sem::Unit)),
            SimpleType::Product(a, b) => {
                let l = self.transfer(self.fst(&s)?, a, from, to)?;
                let r = self.transfer(self.snd(&s)?, b, from, to)?;
                Ok(Arc::new(Sem::Pair(l, r)))
            }
            SimpleType::Arrow(..) => Ok(Arc::new(Sem::Transfer(Arc::new(Transfer {
                ty: ty.clone(),
                from,
                to,
                inner: s,
            })))),
        }
    }

    /// Wraps a function so that its saturated applications at `q` are logged.
    pub fn observe(&self, s: Arc<Sem>, q: u32, arg_types: Vec<SimpleType>) -> (Arc<Sem>, Arc<Observation>) {
        let obs = Arc::new(Observation {
            q,
            arg_types,
            inner: s,
            log: Mutex::new(Vec::new()),
        });
        (Arc::new(Sem::Observed(obs.clone(), Vec::new())), obs)
    }
}

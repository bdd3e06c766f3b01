//! βη-long normalization by evaluation.
//!
//! Terms are evaluated into a domain of closures and neutral spines, then read
//! back at their type. Read-back η-expands at arrows, splits pairs at products
//! and answers `()` at the unit type, so βη-equal terms read back to the same
//! normal form.

use std::cell::Cell;
use std::sync::Arc;

use super::{typecheck, Context, Name, SimpleType, Term};
use crate::error::{Error, Result};
use crate::limits::DEFAULT_NODE_BUDGET;

#[derive(Clone)]
enum Val {
    Lam(Name, Arc<Term>, Env),
    Pair(Arc<Val>, Arc<Val>),
    Unit,
    Neutral(Arc<Neutral>),
}

enum Neutral {
    /// de Bruijn level
    Var(usize),
    App(Arc<Neutral>, Arc<Val>),
    Fst(Arc<Neutral>),
    Snd(Arc<Neutral>),
}

#[derive(Clone, Default)]
struct Env(Option<Arc<(Arc<Val>, Env)>>);

impl Env {
    fn push(&self, v: Arc<Val>) -> Env {
        Env(Some(Arc::new((v, self.clone()))))
    }

    fn get(&self, mut i: usize) -> Option<Arc<Val>> {
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

struct Nbe {
    budget: u64,
    used: Cell<u64>,
}

impl Nbe {
    fn tick(&self) -> Result<()> {
        let n = self.used.get() + 1;
        self.used.set(n);
        if n > self.budget {
            Err(Error::ResourceExhausted {
                what: "normalization",
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    fn eval(&self, t: &Term, env: &Env) -> Result<Arc<Val>> {
        self.tick()?;
        Ok(match t {
            Term::Var(i) => env
                .get(*i)
                .ok_or_else(|| Error::ill_typed(format!("unbound variable #{i}")))?,
            Term::Lam(n, _, body) => Arc::new(Val::Lam(n.clone(), body.clone(), env.clone())),
            Term::App(f, a) => {
                let f = self.eval(f, env)?;
                let a = self.eval(a, env)?;
                self.apply(&f, a)?
            }
            Term::Pair(a, b) => Arc::new(Val::Pair(self.eval(a, env)?, self.eval(b, env)?)),
            Term::Fst(p) => self.fst(&self.eval(p, env)?)?,
            Term::Snd(p) => self.snd(&self.eval(p, env)?)?,
            Term::Unit => Arc::new(Val::Unit),
        })
    }

    fn apply(&self, f: &Arc<Val>, a: Arc<Val>) -> Result<Arc<Val>> {
        match &**f {
            Val::Lam(_, body, env) => self.eval(body, &env.push(a)),
            Val::Neutral(n) => Ok(Arc::new(Val::Neutral(Arc::new(Neutral::App(n.clone(), a))))),
            _ => Err(Error::ill_typed("application of a non-function")),
        }
    }

    fn fst(&self, p: &Arc<Val>) -> Result<Arc<Val>> {
        match &**p {
            Val::Pair(a, _) => Ok(a.clone()),
            Val::Neutral(n) => Ok(Arc::new(Val::Neutral(Arc::new(Neutral::Fst(n.clone()))))),
            _ => Err(Error::ill_typed("projection of a non-pair")),
        }
    }

    fn snd(&self, p: &Arc<Val>) -> Result<Arc<Val>> {
        match &**p {
            Val::Pair(_, b) => Ok(b.clone()),
            Val::Neutral(n) => Ok(Arc::new(Val::Neutral(Arc::new(Neutral::Snd(n.clone()))))),
            _ => Err(Error::ill_typed("projection of a non-pair")),
        }
    }

    /// `levels[l]` is the type of the variable at de Bruijn level `l`.
    fn reify(&self, ty: &SimpleType, v: &Arc<Val>, levels: &mut Vec<SimpleType>) -> Result<Term> {
        self.tick()?;
        match ty {
            SimpleType::Arrow(dom, cod) => {
                let name = match &**v {
                    Val::Lam(n, ..) => n.clone(),
                    _ => Name::new("x"),
                };
                let fresh = Arc::new(Val::Neutral(Arc::new(Neutral::Var(levels.len()))));
                let body_val = self.apply(v, fresh)?;
                levels.push((**dom).clone());
                let body = self.reify(cod, &body_val, levels);
                levels.pop();
                Ok(Term::Lam(name, (**dom).clone(), Arc::new(body?)))
            }
            SimpleType::Product(l, r) => {
                let a = self.reify(l, &self.fst(v)?, levels)?;
                let b = self.reify(r, &self.snd(v)?, levels)?;
                Ok(Term::pair(a, b))
            }
            SimpleType::Unit => Ok(Term::Unit),
            SimpleType::Base => match &**v {
                Val::Neutral(n) => {
                    let (t, nty) = self.reify_neutral(n, levels)?;
                    if nty != SimpleType::Base {
                        return Err(Error::ill_typed("neutral term of the wrong type"));
                    }
                    Ok(t)
                }
                _ => Err(Error::ill_typed("non-neutral value at the base type")),
            },
        }
    }

    fn reify_neutral(&self, n: &Neutral, levels: &mut Vec<SimpleType>) -> Result<(Term, SimpleType)> {
        self.tick()?;
        match n {
            Neutral::Var(l) => {
                let ty = levels
                    .get(*l)
                    .cloned()
                    .ok_or_else(|| Error::ill_typed("dangling level"))?;
                Ok((Term::Var(levels.len() - 1 - l), ty))
            }
            Neutral::App(f, a) => {
                let (ft, fty) = self.reify_neutral(f, levels)?;
                let (dom, cod) = match &fty {
                    SimpleType::Arrow(d, c) => (d.clone(), c.clone()),
                    _ => return Err(Error::ill_typed("application of a non-function")),
                };
                let at = self.reify(&dom, a, levels)?;
                Ok((Term::app(ft, at), (*cod).clone()))
            }
            Neutral::Fst(p) | Neutral::Snd(p) => {
                let (pt, pty) = self.reify_neutral(p, levels)?;
                let (l, r) = match &pty {
                    SimpleType::Product(l, r) => (l.clone(), r.clone()),
                    _ => return Err(Error::ill_typed("projection of a non-pair")),
                };
                Ok(match n {
                    Neutral::Fst(_) => (Term::fst(pt), (*l).clone()),
                    _ => (Term::snd(pt), (*r).clone()),
                })
            }
        }
    }
}

/// βη-long normal form of `t` in `ctx`, within the default node budget.
pub fn normalize(t: &Term, ctx: &Context) -> Result<Term> {
    normalize_with(t, ctx, DEFAULT_NODE_BUDGET)
}

/// Like [`normalize`] with an explicit budget on visited nodes.
pub fn normalize_with(t: &Term, ctx: &Context, node_budget: u64) -> Result<Term> {
    let ty = typecheck(ctx, t).map_err(|e| Error::ill_typed(e.to_string()))?;
    let nbe = Nbe {
        budget: node_budget,
        used: Cell::new(0),
    };
    let mut levels: Vec<SimpleType> = ctx.entries().iter().map(|(_, ty)| ty.clone()).collect();
    let mut env = Env::default();
    for l in 0..levels.len() {
        env = env.push(Arc::new(Val::Neutral(Arc::new(Neutral::Var(l)))));
    }
    let v = nbe.eval(t, &env)?;
    nbe.reify(&ty, &v, &mut levels)
}

/// βη-equality, decided by comparing normal forms.
pub fn term_eq(t1: &Term, t2: &Term, ctx: &Context) -> Result<bool> {
    let ty1 = typecheck(ctx, t1).map_err(|e| Error::ill_typed(e.to_string()))?;
    let ty2 = typecheck(ctx, t2).map_err(|e| Error::ill_typed(e.to_string()))?;
    if ty1 != ty2 {
        return Err(Error::TypeDisagreement {
            left: ty1,
            right: ty2,
        });
    }
    Ok(normalize(t1, ctx)? == normalize(t2, ctx)?)
}

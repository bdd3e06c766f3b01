//! Finite-set semantics: the spaces `⟦A⟧_q`, their canonical indexing, and
//! the interpretation `⟦M⟧_q` of terms.

mod engine;
mod space;

pub use engine::{Engine, Env, Observation, Sem};
pub use space::{space_size, space_size_big, Shape, Value, ValueSpace};

use crate::error::{Error, Result};
use crate::kernel::{typecheck, Context, SimpleType, Term};
use crate::limits::Limits;

/// `⟦t⟧_q` under `env`, which gives one value per context entry (outermost
/// entry first).
pub fn interpret(t: &Term, ctx: &Context, env: &[Value], q: u32, limits: &Limits) -> Result<Value> {
    let ty = typecheck(ctx, t).map_err(|e| Error::ill_typed(e.to_string()))?;
    if env.len() != ctx.len() {
        return Err(Error::BadParameters(format!(
            "expected {} environment values, got {}",
            ctx.len(),
            env.len()
        )));
    }
    let engine = Engine::new(limits);
    let mut senv = Env::default();
    for ((_, ety), v) in ctx.entries().iter().zip(env) {
        let space = engine.space(ety, q)?;
        space.check(v)?;
        senv = senv.push(engine.canon(&space, v.clone()));
    }
    let s = engine.eval(t, &senv)?;
    engine.quote(&s, &engine.space(&ty, q)?)
}

/// `⟦t⟧_q` for a closed term.
pub fn interpret_closed(t: &Term, q: u32, limits: &Limits) -> Result<Value> {
    interpret(t, &Context::new(), &[], q, limits)
}

/// Table lookup `f(a)` in `⟦A -> B⟧_q`.
pub fn apply_value(space: &ValueSpace, f: &Value, a: &Value) -> Result<Value> {
    space.apply(f, a)
}

/// `⟦m⟧_q = ⟦n⟧_q` for closed terms of the same type.
pub fn sem_eq(m: &Term, n: &Term, q: u32, limits: &Limits) -> Result<bool> {
    let tm = typecheck(&Context::new(), m).map_err(|e| Error::ill_typed(e.to_string()))?;
    let tn = typecheck(&Context::new(), n).map_err(|e| Error::ill_typed(e.to_string()))?;
    if tm != tn {
        return Err(Error::TypeDisagreement { left: tm, right: tn });
    }
    let engine = Engine::new(limits);
    let space = engine.space(&tm, q)?;
    let a = engine.quote(&engine.eval_closed(m)?, &space)?;
    let b = engine.quote(&engine.eval_closed(n)?, &space)?;
    Ok(a == b)
}

/// Moves `v ∈ ⟦ty⟧_from` to `⟦ty⟧_to` along the canonical retraction pair.
pub fn transfer_value(v: &Value, ty: &SimpleType, from: u32, to: u32, limits: &Limits) -> Result<Value> {
    let engine = Engine::new(limits);
    let src = engine.space(ty, from)?;
    src.check(v)?;
    let moved = engine.transfer(engine.canon(&src, v.clone()), ty, from, to)?;
    engine.quote(&moved, &engine.space(ty, to)?)
}

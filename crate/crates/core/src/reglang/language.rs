use std::sync::Arc;

use super::Recognizer;
use crate::error::{Error, Result};
use crate::kernel::{typecheck_closed, SimpleType, Term};
use crate::limits::Limits;
use crate::semantics::{Engine, Sem};

/// A Boolean combination of recognizers, possibly at different state counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    All,
    None,
    Leaf(Arc<Recognizer>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

/// A regular language of closed terms of type `ty`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    ty: SimpleType,
    formula: Formula,
}

impl Language {
    pub fn all(ty: SimpleType) -> Self {
        Language { ty, formula: Formula::All }
    }

    pub fn none(ty: SimpleType) -> Self {
        Language {
            ty,
            formula: Formula::None,
        }
    }

    pub fn leaf(r: Recognizer) -> Self {
        Language {
            ty: r.ty().clone(),
            formula: Formula::Leaf(Arc::new(r)),
        }
    }

    /// Builds a language from a formula, checking that every leaf has type `ty`.
    pub fn from_formula(ty: SimpleType, formula: Formula) -> Result<Self> {
        fn check(ty: &SimpleType, f: &Formula) -> Result<()> {
            match f {
                Formula::All | Formula::None => Ok(()),
                Formula::Leaf(r) if r.ty() == ty => Ok(()),
                Formula::Leaf(r) => Err(Error::TypeDisagreement {
                    left: ty.clone(),
                    right: r.ty().clone(),
                }),
                Formula::Not(a) => check(ty, a),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    check(ty, a)?;
                    check(ty, b)
                }
            }
        }
        check(&ty, &formula)?;
        Ok(Language { ty, formula })
    }

    pub fn ty(&self) -> &SimpleType {
        &self.ty
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    fn agree(&self, other: &Language) -> Result<()> {
        if self.ty != other.ty {
            Err(Error::TypeDisagreement {
                left: self.ty.clone(),
                right: other.ty.clone(),
            })
        } else {
            Ok(())
        }
    }

    pub fn not(&self) -> Language {
        let formula = match &self.formula {
            Formula::All => Formula::None,
            Formula::None => Formula::All,
            Formula::Not(inner) => (**inner).clone(),
            f => Formula::Not(Box::new(f.clone())),
        };
        Language {
            ty: self.ty.clone(),
            formula,
        }
    }

    pub fn and(&self, other: &Language) -> Result<Language> {
        self.agree(other)?;
        let formula = match (&self.formula, &other.formula) {
            (Formula::None, _) | (_, Formula::None) => Formula::None,
            (Formula::All, f) | (f, Formula::All) => f.clone(),
            (a, b) => Formula::And(Box::new(a.clone()), Box::new(b.clone())),
        };
        Ok(Language {
            ty: self.ty.clone(),
            formula,
        })
    }

    pub fn or(&self, other: &Language) -> Result<Language> {
        self.agree(other)?;
        let formula = match (&self.formula, &other.formula) {
            (Formula::All, _) | (_, Formula::All) => Formula::All,
            (Formula::None, f) | (f, Formula::None) => f.clone(),
            (a, b) => Formula::Or(Box::new(a.clone()), Box::new(b.clone())),
        };
        Ok(Language {
            ty: self.ty.clone(),
            formula,
        })
    }

    /// The largest state count among the leaves (1 without leaves).
    pub fn level(&self) -> u32 {
        fn go(f: &Formula) -> u32 {
            match f {
                Formula::All | Formula::None => 1,
                Formula::Leaf(r) => r.q(),
                Formula::Not(a) => go(a),
                Formula::And(a, b) | Formula::Or(a, b) => go(a).max(go(b)),
            }
        }
        go(&self.formula)
    }

    pub fn leaves(&self) -> Vec<Arc<Recognizer>> {
        fn go(f: &Formula, out: &mut Vec<Arc<Recognizer>>) {
            match f {
                Formula::Leaf(r) => out.push(r.clone()),
                Formula::Not(a) => go(a, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, out);
                    go(b, out)
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        go(&self.formula, &mut out);
        out
    }

    /// Terms covering every member up to βη, when known to be finitely many.
    pub fn support(&self) -> Option<Vec<Term>> {
        fn go(f: &Formula) -> Option<Vec<Term>> {
            match f {
                Formula::None => Some(Vec::new()),
                Formula::All | Formula::Not(_) => None,
                Formula::Leaf(r) => r.support().map(|s| s.to_vec()),
                Formula::And(a, b) => go(a).or_else(|| go(b)),
                Formula::Or(a, b) => {
                    let mut s = go(a)?;
                    s.extend(go(b)?);
                    Some(s)
                }
            }
        }
        go(&self.formula)
    }

    pub(crate) fn member_sem(&self, engine: &Engine, s: &Arc<Sem>) -> Result<bool> {
        fn go(f: &Formula, engine: &Engine, s: &Arc<Sem>) -> Result<bool> {
            match f {
                Formula::All => Ok(true),
                Formula::None => Ok(false),
                Formula::Leaf(r) => r.accepts_sem(engine, s),
                Formula::Not(a) => Ok(!go(a, engine, s)?),
                Formula::And(a, b) => Ok(go(a, engine, s)? && go(b, engine, s)?),
                Formula::Or(a, b) => Ok(go(a, engine, s)? || go(b, engine, s)?),
            }
        }
        go(&self.formula, engine, s)
    }

    /// Whether the closed term `m` belongs to the language.
    pub fn member(&self, m: &Term, limits: &Limits) -> Result<bool> {
        let ty = typecheck_closed(m).map_err(|e| Error::ill_typed(e.to_string()))?;
        if ty != self.ty {
            return Err(Error::ill_typed(format!(
                "expected a term of type {}, got {ty}",
                self.ty
            )));
        }
        let engine = Engine::new(limits);
        let s = engine.eval_closed(m)?;
        self.member_sem(&engine, &s)
    }
}

impl From<Recognizer> for Language {
    fn from(r: Recognizer) -> Self {
        Language::leaf(r)
    }
}

use super::{Context, SimpleType, Term};
use crate::error::{Error, Result};

/// The unique type of `t` in `ctx`.
pub fn typecheck(ctx: &Context, t: &Term) -> Result<SimpleType> {
    let mut stack: Vec<SimpleType> = ctx.entries().iter().map(|(_, ty)| ty.clone()).collect();
    let mut path = Vec::new();
    infer(&mut stack, t, &mut path)
}

pub fn typecheck_closed(t: &Term) -> Result<SimpleType> {
    typecheck(&Context::new(), t)
}

fn render(path: &[&'static str]) -> String {
    if path.is_empty() {
        "<root>".to_string()
    } else {
        path.join(".")
    }
}

fn infer(stack: &mut Vec<SimpleType>, t: &Term, path: &mut Vec<&'static str>) -> Result<SimpleType> {
    match t {
        Term::Var(i) => {
            let n = stack.len();
            if *i < n {
                Ok(stack[n - 1 - i].clone())
            } else {
                Err(Error::UnboundVariable {
                    index: *i,
                    path: render(path),
                })
            }
        }
        Term::Unit => Ok(SimpleType::Unit),
        Term::Lam(_, ty, body) => {
            stack.push(ty.clone());
            path.push("body");
            let res = infer(stack, body, path);
            path.pop();
            stack.pop();
            Ok(SimpleType::arrow(ty.clone(), res?))
        }
        Term::App(f, a) => {
            path.push("fun");
            let fty = infer(stack, f, path)?;
            path.pop();
            path.push("arg");
            let aty = infer(stack, a, path)?;
            path.pop();
            match fty {
                SimpleType::Arrow(dom, cod) if *dom == aty => Ok((*cod).clone()),
                SimpleType::Arrow(dom, _) => Err(Error::TypeMismatch {
                    expected: dom.to_string(),
                    found: aty.to_string(),
                    path: render(&[path.as_slice(), &["arg"]].concat()),
                }),
                other => Err(Error::TypeMismatch {
                    expected: format!("{aty} -> ?"),
                    found: other.to_string(),
                    path: render(&[path.as_slice(), &["fun"]].concat()),
                }),
            }
        }
        Term::Pair(a, b) => {
            path.push("fst");
            let l = infer(stack, a, path)?;
            path.pop();
            path.push("snd");
            let r = infer(stack, b, path)?;
            path.pop();
            Ok(SimpleType::product(l, r))
        }
        Term::Fst(p) | Term::Snd(p) => {
            path.push("proj");
            let pty = infer(stack, p, path)?;
            path.pop();
            match (t, pty) {
                (Term::Fst(_), SimpleType::Product(l, _)) => Ok((*l).clone()),
                (Term::Snd(_), SimpleType::Product(_, r)) => Ok((*r).clone()),
                (_, other) => Err(Error::TypeMismatch {
                    expected: "? * ?".to_string(),
                    found: other.to_string(),
                    path: render(&[path.as_slice(), &["proj"]].concat()),
                }),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{church_word, Alphabet};

    #[test]
    fn identity_has_endo_type() {
        let id = Term::lam("x", SimpleType::Base, Term::var(0));
        assert_eq!(typecheck_closed(&id).unwrap(), SimpleType::endo());
    }

    #[test]
    fn church_word_has_word_type() {
        let ab = Alphabet::new(["a", "b"]).unwrap();
        let w = church_word(&ab, &ab.parse_word("ab").unwrap()).unwrap();
        assert_eq!(typecheck_closed(&w).unwrap(), SimpleType::word(2));
    }

    #[test]
    fn self_application_is_rejected() {
        let t = Term::lam("x", SimpleType::Base, Term::app(Term::var(0), Term::var(0)));
        assert!(matches!(typecheck_closed(&t), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn unbound_variable_reports_path() {
        let t = Term::lam("x", SimpleType::Base, Term::pair(Term::var(0), Term::var(1)));
        match typecheck_closed(&t) {
            Err(Error::UnboundVariable { index: 1, path }) => assert_eq!(path, "body.snd"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn projections_need_products() {
        let t = Term::lam("x", SimpleType::Base, Term::fst(Term::var(0)));
        assert!(matches!(typecheck_closed(&t), Err(Error::TypeMismatch { .. })));
    }
}

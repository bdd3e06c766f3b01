use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::SimpleType;

/// A binder's display name. It takes no part in equality, ordering or hashing,
/// so terms compare up to α-conversion.
#[derive(Clone)]
pub struct Name(pub Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for Name {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for Name {}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

impl Hash for Name {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

/// λ-terms with de Bruijn indices: `Var(0)` is the innermost binder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Lam(Name, SimpleType, Arc<Term>),
    App(Arc<Term>, Arc<Term>),
    Pair(Arc<Term>, Arc<Term>),
    Fst(Arc<Term>),
    Snd(Arc<Term>),
    Unit,
}

impl Term {
    pub fn var(index: usize) -> Self {
        Term::Var(index)
    }

    pub fn lam(name: &str, ty: SimpleType, body: Term) -> Self {
        Term::Lam(Name::new(name), ty, Arc::new(body))
    }

    pub fn app(fun: Term, arg: Term) -> Self {
        Term::App(Arc::new(fun), Arc::new(arg))
    }

    pub fn apps<I: IntoIterator<Item = Term>>(fun: Term, args: I) -> Self {
        args.into_iter().fold(fun, Term::app)
    }

    pub fn pair(first: Term, second: Term) -> Self {
        Term::Pair(Arc::new(first), Arc::new(second))
    }

    pub fn fst(t: Term) -> Self {
        Term::Fst(Arc::new(t))
    }

    pub fn snd(t: Term) -> Self {
        Term::Snd(Arc::new(t))
    }

    /// Right-nested tuple; `()` when empty.
    pub fn tuple(mut items: Vec<Term>) -> Self {
        match items.len() {
            0 => Term::Unit,
            1 => items.pop().unwrap(),
            _ => {
                let last = items.pop().unwrap();
                items.into_iter().rev().fold(last, |acc, t| Term::pair(t, acc))
            }
        }
    }

    /// Projection `i` out of a right-nested tuple of `len` components.
    pub fn tuple_proj(t: Term, i: usize, len: usize) -> Self {
        assert!(i < len);
        let mut cur = t;
        for _ in 0..i {
            cur = Term::snd(cur);
        }
        if i + 1 < len {
            Term::fst(cur)
        } else {
            cur
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Unit => 1,
            Term::Lam(_, _, b) | Term::Fst(b) | Term::Snd(b) => 1 + b.size(),
            Term::App(a, b) | Term::Pair(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Adds `by` to every variable index `>= cutoff`.
    pub fn shift(&self, by: usize, cutoff: usize) -> Term {
        match self {
            Term::Var(i) if *i >= cutoff => Term::Var(i + by),
            Term::Var(_) | Term::Unit => self.clone(),
            Term::Lam(n, ty, b) => Term::Lam(n.clone(), ty.clone(), Arc::new(b.shift(by, cutoff + 1))),
            Term::App(a, b) => Term::App(Arc::new(a.shift(by, cutoff)), Arc::new(b.shift(by, cutoff))),
            Term::Pair(a, b) => Term::Pair(Arc::new(a.shift(by, cutoff)), Arc::new(b.shift(by, cutoff))),
            Term::Fst(a) => Term::Fst(Arc::new(a.shift(by, cutoff))),
            Term::Snd(a) => Term::Snd(Arc::new(a.shift(by, cutoff))),
        }
    }

    /// True when no variable escapes the term's own binders.
    pub fn is_closed(&self) -> bool {
        fn go(t: &Term, depth: usize) -> bool {
            match t {
                Term::Var(i) => *i < depth,
                Term::Unit => true,
                Term::Lam(_, _, b) => go(b, depth + 1),
                Term::Fst(a) | Term::Snd(a) => go(a, depth),
                Term::App(a, b) | Term::Pair(a, b) => go(a, depth) && go(b, depth),
            }
        }
        go(self, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::syntax::print_term(self, &Context::new()))
    }
}

/// Typing context; the last entry is the most recent binding, `Var(0)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Context {
    entries: Vec<(String, SimpleType)>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    /// Fails when the name is already bound, keeping names distinct.
    pub fn push(&mut self, name: &str, ty: SimpleType) -> crate::Result<()> {
        if self.entries.iter().any(|(n, _)| n == name) {
            return Err(crate::Error::BadParameters(format!(
                "context already binds `{name}`"
            )));
        }
        self.entries.push((name.to_string(), ty));
        Ok(())
    }

    pub fn with(mut self, name: &str, ty: SimpleType) -> crate::Result<Self> {
        self.push(name, ty)?;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Type of `Var(index)`.
    pub fn lookup(&self, index: usize) -> Option<&SimpleType> {
        let n = self.entries.len();
        (index < n).then(|| &self.entries[n - 1 - index].1)
    }

    /// Index of the most recent binding named `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries
            .iter()
            .rev()
            .position(|(n, _)| n == name)
    }

    /// Entries from oldest to most recent.
    pub fn entries(&self) -> &[(String, SimpleType)] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_equivalence_is_structural() {
        let a = Term::lam("x", SimpleType::Base, Term::var(0));
        let b = Term::lam("y", SimpleType::Base, Term::var(0));
        assert_eq!(a, b);
    }

    #[test]
    fn tuples_and_projections() {
        let t = Term::tuple(vec![Term::Unit, Term::var(0), Term::var(1)]);
        assert_eq!(t.size(), 5);
        assert_eq!(Term::tuple_proj(Term::var(0), 2, 3), Term::snd(Term::snd(Term::var(0))));
        assert_eq!(Term::tuple_proj(Term::var(0), 0, 1), Term::var(0));
    }

    #[test]
    fn context_lookup() {
        let ctx = Context::new()
            .with("a", SimpleType::Base)
            .unwrap()
            .with("b", SimpleType::endo())
            .unwrap();
        assert_eq!(ctx.lookup(0), Some(&SimpleType::endo()));
        assert_eq!(ctx.lookup(1), Some(&SimpleType::Base));
        assert_eq!(ctx.lookup(2), None);
        assert_eq!(ctx.index_of("a"), Some(1));
        assert!(ctx.clone().with("a", SimpleType::Unit).is_err());
    }
}

//! Definable values: the image of the closed terms of a type in `⟦A⟧_q`.
//!
//! Word, numeral and tree types (and finite products of them) get exact
//! closure algorithms. Any other type falls back to enumerating βη-long normal
//! forms up to a depth fuel, and the result says so.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::kernel::{church_tree, church_word, Alphabet, Context, RankedAlphabet, RankedTree, SimpleType, Term};
use crate::limits::Limits;
use crate::semantics::{Engine, Value, ValueSpace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Exactness {
    Exact,
    /// Only normal forms up to this depth fuel were considered.
    FuelBounded(u32),
}

impl Exactness {
    pub fn is_exact(self) -> bool {
        self == Exactness::Exact
    }

    /// The weaker of two reports.
    pub fn meet(self, other: Exactness) -> Exactness {
        match (self, other) {
            (Exactness::Exact, x) | (x, Exactness::Exact) => x,
            (Exactness::FuelBounded(a), Exactness::FuelBounded(b)) => Exactness::FuelBounded(a.min(b)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    ForceGeneric(u32),
}

/// Definable values of `⟦ty⟧_q`, each with one closed representative term.
#[derive(Debug, Clone)]
pub struct DefSet {
    ty: SimpleType,
    q: u32,
    exactness: Exactness,
    entries: Vec<(Value, Term)>,
    index: HashMap<Value, usize>,
}

impl DefSet {
    pub(crate) fn from_entries(ty: SimpleType, q: u32, exactness: Exactness, entries: Vec<(Value, Term)>) -> Self {
        let index = entries.iter().enumerate().map(|(i, (v, _))| (v.clone(), i)).collect();
        DefSet {
            ty,
            q,
            exactness,
            entries,
            index,
        }
    }

    pub fn ty(&self) -> &SimpleType {
        &self.ty
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(value, representative)` pairs in discovery order.
    pub fn entries(&self) -> &[(Value, Term)] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = &Value> {
        self.entries.iter().map(|(v, _)| v)
    }

    pub fn representatives(&self) -> impl Iterator<Item = &Term> {
        self.entries.iter().map(|(_, t)| t)
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.index.contains_key(v)
    }

    pub fn representative(&self, v: &Value) -> Option<&Term> {
        self.index.get(v).map(|&i| &self.entries[i].1)
    }
}

fn binder_name(ty: &SimpleType) -> &'static str {
    match ty {
        SimpleType::Base => "x",
        SimpleType::Unit => "u",
        SimpleType::Product(..) => "p",
        SimpleType::Arrow(..) => "f",
    }
}

enum Elim {
    App(SimpleType),
    Fst,
    Snd,
}

fn paths_to_base(ty: &SimpleType) -> Vec<Vec<Elim>> {
    match ty {
        SimpleType::Base => vec![Vec::new()],
        SimpleType::Unit => Vec::new(),
        SimpleType::Arrow(a, b) => paths_to_base(b)
            .into_iter()
            .map(|mut p| {
                p.insert(0, Elim::App((**a).clone()));
                p
            })
            .collect(),
        SimpleType::Product(a, b) => {
            let mut out: Vec<Vec<Elim>> = paths_to_base(a)
                .into_iter()
                .map(|mut p| {
                    p.insert(0, Elim::Fst);
                    p
                })
                .collect();
            out.extend(paths_to_base(b).into_iter().map(|mut p| {
                p.insert(0, Elim::Snd);
                p
            }));
            out
        }
    }
}

struct Enumerator {
    memo: HashMap<(Vec<SimpleType>, SimpleType, u32), Arc<Vec<Term>>>,
    cap: usize,
}

impl Enumerator {
    // `scope` lists binder types, most recent last.
    fn intro(&mut self, scope: &mut Vec<SimpleType>, ty: &SimpleType, fuel: u32) -> Result<Arc<Vec<Term>>> {
        let key = (scope.clone(), ty.clone(), fuel);
        if let Some(r) = self.memo.get(&key) {
            return Ok(r.clone());
        }
        let out: Vec<Term> = match ty {
            SimpleType::Unit => vec![Term::Unit],
            SimpleType::Arrow(a, b) => {
                scope.push((**a).clone());
                let bodies = self.intro(scope, b, fuel);
                scope.pop();
                bodies?
                    .iter()
                    .map(|body| Term::lam(binder_name(a), (**a).clone(), body.clone()))
                    .collect()
            }
            SimpleType::Product(a, b) => {
                let left = self.intro(scope, a, fuel)?;
                let right = self.intro(scope, b, fuel)?;
                self.guard(left.len().saturating_mul(right.len()))?;
                let mut out = Vec::with_capacity(left.len() * right.len());
                for l in left.iter() {
                    for r in right.iter() {
                        out.push(Term::pair(l.clone(), r.clone()));
                    }
                }
                out
            }
            SimpleType::Base => {
                let mut out = Vec::new();
                if fuel > 0 {
                    for index in 0..scope.len() {
                        let head_ty = scope[scope.len() - 1 - index].clone();
                        for path in paths_to_base(&head_ty) {
                            let mut spines = vec![Term::var(index)];
                            for e in &path {
                                match e {
                                    Elim::Fst => spines = spines.into_iter().map(Term::fst).collect(),
                                    Elim::Snd => spines = spines.into_iter().map(Term::snd).collect(),
                                    Elim::App(arg_ty) => {
                                        let args = self.intro(scope, arg_ty, fuel - 1)?;
                                        self.guard(spines.len().saturating_mul(args.len()))?;
                                        let mut next = Vec::with_capacity(spines.len() * args.len());
                                        for s in &spines {
                                            for a in args.iter() {
                                                next.push(Term::app(s.clone(), a.clone()));
                                            }
                                        }
                                        spines = next;
                                    }
                                }
                            }
                            out.extend(spines);
                            self.guard(out.len())?;
                        }
                    }
                }
                out
            }
        };
        let out = Arc::new(out);
        self.memo.insert(key, out.clone());
        Ok(out)
    }

    fn guard(&self, n: usize) -> Result<()> {
        if n > self.cap {
            Err(Error::ResourceExhausted {
                what: "normal-form enumeration",
                budget: self.cap as u64,
            })
        } else {
            Ok(())
        }
    }
}

/// All βη-long normal forms of type `ty` in `ctx` whose application spines
/// nest at most `fuel` deep (a variable of type `o` needs fuel 1), in a fixed
/// order and without repetition.
pub fn enum_normal_forms(ctx: &Context, ty: &SimpleType, fuel: u32) -> Vec<Term> {
    enum_normal_forms_capped(ctx, ty, fuel, usize::MAX).expect("uncapped")
}

/// Like [`enum_normal_forms`], failing once any intermediate list exceeds `cap`.
pub fn enum_normal_forms_capped(ctx: &Context, ty: &SimpleType, fuel: u32, cap: usize) -> Result<Vec<Term>> {
    let mut e = Enumerator {
        memo: HashMap::new(),
        cap,
    };
    let mut scope: Vec<SimpleType> = ctx.entries().iter().map(|(_, t)| t.clone()).collect();
    let r = e.intro(&mut scope, ty, fuel)?;
    Ok(r.as_ref().clone())
}

/// Whether `ty` gets an exact definable-value set under [`Strategy::Auto`].
pub fn has_exact_closure(ty: &SimpleType) -> bool {
    match ty {
        SimpleType::Base | SimpleType::Unit => true,
        SimpleType::Product(a, b) => has_exact_closure(a) && has_exact_closure(b),
        _ => matches!(ty.word_letters(), Some(n) if n > 0) || ty.tree_arities().is_some(),
    }
}

pub fn def_set(ty: &SimpleType, q: u32, strategy: Strategy, limits: &Limits) -> Result<DefSet> {
    let engine = Engine::new(limits);
    let space = engine.space(ty, q)?;
    match strategy {
        Strategy::ForceGeneric(fuel) => generic(&engine, &space, fuel),
        Strategy::Auto if has_exact_closure(ty) => exact(&engine, &space),
        Strategy::Auto => generic(&engine, &space, limits.fuel),
    }
}

fn class_overflow(ty: &SimpleType, q: u32, limit: usize) -> Error {
    Error::overflow(format!("more than {limit} definable values in ⟦{ty}⟧ at q={q}"))
}

fn exact(engine: &Engine, space: &Arc<ValueSpace>) -> Result<DefSet> {
    let (ty, q) = (space.ty().clone(), space.q());
    let limit = engine.limits().class_limit;
    let entries = match &ty {
        SimpleType::Base => Vec::new(),
        SimpleType::Unit => vec![(space.unit(), Term::Unit)],
        SimpleType::Product(a, b) => {
            let da = exact(engine, &engine.space(a, q)?)?;
            let db = exact(engine, &engine.space(b, q)?)?;
            if da.len().saturating_mul(db.len()) > limit {
                return Err(class_overflow(&ty, q, limit));
            }
            let mut out = Vec::new();
            for (va, ta) in da.entries() {
                for (vb, tb) in db.entries() {
                    engine.tick()?;
                    out.push((space.pair(va.clone(), vb.clone())?, Term::pair(ta.clone(), tb.clone())));
                }
            }
            out
        }
        _ => match ty.word_letters() {
            Some(n) if n > 0 => word_closure(engine, space, n)?,
            _ => tree_closure(engine, space, &ty.tree_arities().expect("checked by has_exact_closure"))?,
        },
    };
    Ok(DefSet::from_entries(ty, q, Exactness::Exact, entries))
}

/// `λw.λa1...λan.λx. a_c (w a1 ... an x)`
fn append_letter(n: usize, c: usize) -> Term {
    let w = SimpleType::word(n);
    let letters = (0..n).map(|j| Term::var(n - j));
    let inner = Term::app(Term::apps(Term::var(n + 1), letters), Term::var(0));
    let mut t = Term::lam("x", SimpleType::Base, Term::app(Term::var(n - c), inner));
    for j in (0..n).rev() {
        t = Term::lam(&format!("a{j}"), SimpleType::endo(), t);
    }
    Term::lam("w", w, t)
}

/// The alphabet used for representatives of `Word` types with `n` letters:
/// `s` for numerals, `a, b, ...` otherwise.
pub fn default_alphabet(n: usize) -> Alphabet {
    if n == 1 {
        Alphabet::new(["s"]).unwrap()
    } else {
        Alphabet::standard(n).expect("at most 26 letters")
    }
}

/// Breadth-first closure of `⟦ε⟧` under appending letters. Returns values with
/// their shortest (then lexicographically least) words.
pub(crate) fn word_values(engine: &Engine, space: &Arc<ValueSpace>, n: usize) -> Result<Vec<(Value, Vec<usize>)>> {
    let limit = engine.limits().class_limit;
    let alphabet = default_alphabet(n);
    let appenders = (0..n)
        .map(|c| engine.eval_closed(&append_letter(n, c)))
        .collect::<Result<Vec<_>>>()?;
    let eps = engine.quote(&engine.eval_closed(&church_word(&alphabet, &[])?)?, space)?;
    let mut seen: HashMap<Value, ()> = HashMap::new();
    seen.insert(eps.clone(), ());
    let mut out = vec![(eps, Vec::new())];
    let mut head = 0;
    while head < out.len() {
        let (v, w) = out[head].clone();
        head += 1;
        for (c, app) in appenders.iter().enumerate() {
            engine.limits().check_cancelled()?;
            let r = engine.apply(app, engine.canon(space, v.clone()))?;
            let nv = engine.quote(&r, space)?;
            if seen.insert(nv.clone(), ()).is_none() {
                if out.len() >= limit {
                    return Err(class_overflow(space.ty(), space.q(), limit));
                }
                let mut nw = w.clone();
                nw.push(c);
                out.push((nv, nw));
            }
        }
    }
    Ok(out)
}

fn word_closure(engine: &Engine, space: &Arc<ValueSpace>, n: usize) -> Result<Vec<(Value, Term)>> {
    let alphabet = default_alphabet(n);
    word_values(engine, space, n)?
        .into_iter()
        .map(|(v, w)| Ok((v, church_word(&alphabet, &w)?)))
        .collect()
}

/// A ranked alphabet with placeholder names for the given arities.
pub fn placeholder_ranked(arities: &[usize]) -> RankedAlphabet {
    RankedAlphabet::new(arities.iter().enumerate().map(|(i, &k)| (format!("l{i}"), k))).unwrap()
}

/// `λt1...λtk.λcs. π_i(cs) (t1 cs) ... (tk cs)`
fn constructor_term(ranked: &RankedAlphabet, i: usize) -> Term {
    let k = ranked.letters()[i].1;
    let tree = ranked.tree_type();
    let head = Term::tuple_proj(Term::var(0), i, ranked.len());
    let body = Term::apps(head, (0..k).map(|j| Term::app(Term::var(k - j), Term::var(0))));
    let mut t = Term::lam("cs", ranked.bundle_type(), body);
    for j in (0..k).rev() {
        t = Term::lam(&format!("t{j}"), tree.clone(), t);
    }
    t
}

/// Bottom-up closure from the constants under every constructor. Returns
/// values with their first-found (smallest-depth) trees.
pub(crate) fn tree_values(
    engine: &Engine,
    space: &Arc<ValueSpace>,
    ranked: &RankedAlphabet,
) -> Result<Vec<(Value, RankedTree)>> {
    let limit = engine.limits().class_limit;
    let ctors = (0..ranked.len())
        .map(|i| engine.eval_closed(&constructor_term(ranked, i)))
        .collect::<Result<Vec<_>>>()?;
    let mut seen: HashMap<Value, ()> = HashMap::new();
    let mut out: Vec<(Value, RankedTree)> = Vec::new();
    // `fresh_from`: entries at or beyond this position were found in the last round
    let mut fresh_from = 0;
    let mut first = true;
    loop {
        let known = out.len();
        let mut found = Vec::new();
        for (i, (name, k)) in ranked.letters().iter().enumerate() {
            if *k == 0 && !first {
                continue;
            }
            if *k > 0 && known == 0 {
                continue;
            }
            // all k-tuples over the known values using at least one fresh one
            let mut tuple = vec![0usize; *k];
            loop {
                if *k == 0 || tuple.iter().any(|&j| j >= fresh_from) {
                    engine.tick()?;
                    let args = tuple.iter().map(|&j| engine.canon(space, out[j].0.clone()));
                    let r = engine.apply_all(&ctors[i], args)?;
                    let v = engine.quote(&r, space)?;
                    if seen.insert(v.clone(), ()).is_none() {
                        let children = tuple.iter().map(|&j| out[j].1.clone()).collect();
                        found.push((v, RankedTree::node(name, children)));
                        if known + found.len() > limit {
                            return Err(class_overflow(space.ty(), space.q(), limit));
                        }
                    }
                }
                let mut done = true;
                for pos in (0..*k).rev() {
                    tuple[pos] += 1;
                    if tuple[pos] < known {
                        done = false;
                        break;
                    }
                    tuple[pos] = 0;
                }
                if done {
                    break;
                }
            }
        }
        first = false;
        if found.is_empty() {
            return Ok(out);
        }
        fresh_from = known;
        out.extend(found);
    }
}

fn tree_closure(engine: &Engine, space: &Arc<ValueSpace>, arities: &[usize]) -> Result<Vec<(Value, Term)>> {
    let ranked = placeholder_ranked(arities);
    tree_values(engine, space, &ranked)?
        .into_iter()
        .map(|(v, t)| Ok((v, church_tree(&ranked, &t)?)))
        .collect()
}

fn generic(engine: &Engine, space: &Arc<ValueSpace>, fuel: u32) -> Result<DefSet> {
    let limits = engine.limits();
    let terms = enum_normal_forms_capped(&Context::new(), space.ty(), fuel, limits.node_budget as usize)?;
    let mut seen = HashMap::new();
    let mut entries = Vec::new();
    for t in terms {
        limits.check_cancelled()?;
        let v = engine.quote(&engine.eval_closed(&t)?, space)?;
        if seen.insert(v.clone(), ()).is_none() {
            if entries.len() >= limits.class_limit {
                return Err(class_overflow(space.ty(), space.q(), limits.class_limit));
            }
            entries.push((v, t));
        }
    }
    Ok(DefSet::from_entries(
        space.ty().clone(),
        space.q(),
        Exactness::FuelBounded(fuel),
        entries,
    ))
}

/// Source of definable-value sets for the operations that quantify over terms.
pub trait DefProvider: Send + Sync {
    fn def_set(&self, ty: &SimpleType, q: u32) -> Result<Arc<DefSet>>;
}

/// Computes sets with [`Strategy::Auto`] and caches them.
pub struct AutoDefs {
    limits: Limits,
    cache: Mutex<HashMap<(SimpleType, u32), Arc<DefSet>>>,
}

impl AutoDefs {
    pub fn new(limits: Limits) -> Self {
        AutoDefs {
            limits,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl Default for AutoDefs {
    fn default() -> Self {
        AutoDefs::new(Limits::default())
    }
}

impl DefProvider for AutoDefs {
    fn def_set(&self, ty: &SimpleType, q: u32) -> Result<Arc<DefSet>> {
        let key = (ty.clone(), q);
        if let Some(d) = self.cache.lock().unwrap().get(&key) {
            return Ok(d.clone());
        }
        let d = Arc::new(def_set(ty, q, Strategy::Auto, &self.limits)?);
        self.cache.lock().unwrap().insert(key, d.clone());
        Ok(d)
    }
}

/// Refuses every request with [`Error::NormalizationNeedsDefs`].
pub struct NoDefs;

impl DefProvider for NoDefs {
    fn def_set(&self, _: &SimpleType, _: u32) -> Result<Arc<DefSet>> {
        Err(Error::NormalizationNeedsDefs)
    }
}

//! Church encodings of words, numerals and ranked trees, and the named
//! λ-terms that act on them.

use std::fmt;

use super::{SimpleType, Term};
use crate::error::{Error, Result};

/// An ordered alphabet of distinct letter names. The order fixes the argument
/// order of `Word_Σ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    letters: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(Error::BadParameters("an alphabet needs at least one letter".into()));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.is_empty() || letters[..i].contains(l) {
                return Err(Error::BadParameters(format!("bad or repeated letter `{l}`")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// `"ab"` is the alphabet `{a, b}`; `"x1,x2"` uses commas for longer names.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.contains(',') {
            Alphabet::new(spec.split(',').map(|s| s.trim().to_string()))
        } else {
            Alphabet::new(spec.chars().map(|c| c.to_string()))
        }
    }

    /// The first `n` lowercase letters `a, b, c, ...`.
    pub fn standard(n: usize) -> Result<Self> {
        if n > 26 {
            return Err(Error::BadParameters("at most 26 standard letters".into()));
        }
        Alphabet::new((0..n).map(|i| ((b'a' + i as u8) as char).to_string()))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn letter(&self, i: usize) -> &str {
        &self.letters[i]
    }

    pub fn index_of(&self, letter: &str) -> Result<usize> {
        self.letters
            .iter()
            .position(|l| l == letter)
            .ok_or_else(|| Error::UnknownLetter(letter.to_string()))
    }

    /// Splits `w` into letters: by character when every letter is a single
    /// character, otherwise by whitespace.
    pub fn parse_word(&self, w: &str) -> Result<Vec<usize>> {
        if self.letters.iter().all(|l| l.chars().count() == 1) {
            w.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| self.index_of(&c.to_string()))
                .collect()
        } else {
            w.split_whitespace().map(|l| self.index_of(l)).collect()
        }
    }

    pub fn render_word(&self, w: &[usize]) -> String {
        let sep = if self.letters.iter().all(|l| l.chars().count() == 1) {
            ""
        } else {
            " "
        };
        w.iter()
            .map(|&i| self.letters[i].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Every word of length at most `max_len`, shortest first, then in
    /// lexicographic order of letter indices.
    pub fn words_up_to(&self, max_len: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for c in 0..self.len() {
                    let mut v = w.clone();
                    v.push(c);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    pub fn word_type(&self) -> SimpleType {
        SimpleType::word(self.len())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.letters.join(","))
    }
}

/// A ranked alphabet `{a1:n1, ..., al:nl}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankedAlphabet {
    letters: Vec<(String, usize)>,
}

impl RankedAlphabet {
    pub fn new<I, S>(letters: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let letters: Vec<(String, usize)> = letters.into_iter().map(|(s, n)| (s.into(), n)).collect();
        for (i, (l, _)) in letters.iter().enumerate() {
            if l.is_empty() || letters[..i].iter().any(|(m, _)| m == l) {
                return Err(Error::BadParameters(format!("bad or repeated letter `{l}`")));
            }
        }
        Ok(RankedAlphabet { letters })
    }

    /// Parses `f:2,c:0`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, arity) = item
                .split_once(':')
                .ok_or_else(|| Error::BadParameters(format!("expected `letter:arity`, got `{item}`")))?;
            let arity: usize = arity
                .trim()
                .parse()
                .map_err(|_| Error::BadParameters(format!("bad arity in `{item}`")))?;
            letters.push((name.trim().to_string(), arity));
        }
        RankedAlphabet::new(letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[(String, usize)] {
        &self.letters
    }

    pub fn arities(&self) -> Vec<usize> {
        self.letters.iter().map(|(_, n)| *n).collect()
    }

    pub fn index_of(&self, letter: &str) -> Result<usize> {
        self.letters
            .iter()
            .position(|(l, _)| l == letter)
            .ok_or_else(|| Error::UnknownLetter(letter.to_string()))
    }

    /// `(o^n1 -> o) * ... * (o^nl -> o)`, curried and right-nested.
    pub fn bundle_type(&self) -> SimpleType {
        SimpleType::tuple(self.letters.iter().map(|(_, n)| SimpleType::first_order(*n)).collect())
    }

    /// `Tree_Σ = bundle -> o`.
    pub fn tree_type(&self) -> SimpleType {
        SimpleType::arrow(self.bundle_type(), SimpleType::Base)
    }

    /// `Σ + 1`: the alphabet extended by a fresh constant, appended last. The
    /// constant is named `b` unless that name is taken.
    pub fn with_hole(&self) -> (RankedAlphabet, String) {
        let mut name = "b".to_string();
        let mut k = 1;
        while self.letters.iter().any(|(l, _)| *l == name) {
            name = format!("b{k}");
            k += 1;
        }
        let mut letters = self.letters.clone();
        letters.push((name.clone(), 0));
        (RankedAlphabet { letters }, name)
    }

    /// Every tree of depth at most `max_depth` (a leaf has depth 1), in
    /// increasing depth, then in construction order.
    pub fn trees_up_to_depth(&self, max_depth: usize) -> Vec<RankedTree> {
        // by_depth[d] = trees of depth exactly d + 1
        let mut by_depth: Vec<Vec<RankedTree>> = Vec::new();
        for d in 0..max_depth {
            let mut layer = Vec::new();
            let smaller: Vec<&RankedTree> = by_depth.iter().flatten().collect();
            for (name, arity) in &self.letters {
                if *arity == 0 {
                    if d == 0 {
                        layer.push(RankedTree::leaf(name));
                    }
                    continue;
                }
                if d == 0 {
                    continue;
                }
                // tuples over trees of depth <= d with at least one of depth exactly d
                let mut tuples: Vec<Vec<&RankedTree>> = vec![Vec::new()];
                for _ in 0..*arity {
                    let mut next = Vec::new();
                    for t in &tuples {
                        for c in &smaller {
                            let mut v = t.clone();
                            v.push(*c);
                            next.push(v);
                        }
                    }
                    tuples = next;
                }
                for t in tuples {
                    if t.iter().any(|c| c.depth() == d) {
                        layer.push(RankedTree::node(name, t.into_iter().cloned().collect()));
                    }
                }
            }
            by_depth.push(layer);
        }
        by_depth.into_iter().flatten().collect()
    }
}

impl fmt::Display for RankedAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.letters.iter().map(|(l, n)| format!("{l}:{n}")).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

/// A finite ranked tree, written `f(c, g(c))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RankedTree {
    pub label: String,
    pub children: Vec<RankedTree>,
}

impl RankedTree {
    pub fn leaf(label: &str) -> Self {
        RankedTree {
            label: label.to_string(),
            children: Vec::new(),
        }
    }

    pub fn node(label: &str, children: Vec<RankedTree>) -> Self {
        RankedTree {
            label: label.to_string(),
            children,
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(RankedTree::depth).max().unwrap_or(0)
    }

    /// Replaces every leaf labelled `hole` by `t`.
    pub fn plug(&self, hole: &str, t: &RankedTree) -> RankedTree {
        if self.children.is_empty() && self.label == hole {
            return t.clone();
        }
        RankedTree {
            label: self.label.clone(),
            children: self.children.iter().map(|c| c.plug(hole, t)).collect(),
        }
    }

    pub fn check(&self, ranked: &RankedAlphabet) -> Result<()> {
        let i = ranked.index_of(&self.label)?;
        let expected = ranked.letters()[i].1;
        if expected != self.children.len() {
            return Err(Error::ArityMismatch {
                letter: self.label.clone(),
                expected,
                found: self.children.len(),
            });
        }
        self.children.iter().try_for_each(|c| c.check(ranked))
    }

    /// Parses `f(c, g(c))`; labels are alphanumeric.
    pub fn parse(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = Self::parse_at(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::BadParameters(format!("trailing input in tree `{s}`")));
        }
        Ok(t)
    }

    fn parse_at(chars: &[char], pos: &mut usize) -> Result<Self> {
        let start = *pos;
        while *pos < chars.len() && (chars[*pos].is_alphanumeric() || chars[*pos] == '_') {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::BadParameters("expected a tree label".into()));
        }
        let label: String = chars[start..*pos].iter().collect();
        let mut children = Vec::new();
        if *pos < chars.len() && chars[*pos] == '(' {
            *pos += 1;
            loop {
                children.push(Self::parse_at(chars, pos)?);
                match chars.get(*pos) {
                    Some(',') => *pos += 1,
                    Some(')') => {
                        *pos += 1;
                        break;
                    }
                    _ => return Err(Error::BadParameters("unbalanced tree".into())),
                }
            }
        }
        Ok(RankedTree { label, children })
    }
}

impl fmt::Display for RankedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label)?;
        if !self.children.is_empty() {
            write!(f, "(")?;
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{c}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// `λa1...λan.λx. a_{w_k} (... (a_{w_1} x))`.
pub fn church_word(alphabet: &Alphabet, w: &[usize]) -> Result<Term> {
    let n = alphabet.len();
    if let Some(&bad) = w.iter().find(|&&c| c >= n) {
        return Err(Error::UnknownLetter(format!("#{bad}")));
    }
    let body = w
        .iter()
        .fold(Term::var(0), |acc, &c| Term::app(Term::var(n - c), acc));
    let mut t = Term::lam("x", SimpleType::Base, body);
    for c in (0..n).rev() {
        t = Term::lam(alphabet.letter(c), SimpleType::endo(), t);
    }
    Ok(t)
}

/// `λs.λx. s^n x`.
pub fn church_numeral(n: usize) -> Term {
    let body = (0..n).fold(Term::var(0), |acc, _| Term::app(Term::var(1), acc));
    Term::lam("s", SimpleType::endo(), Term::lam("x", SimpleType::Base, body))
}

/// `λcs. t` where each node `f(t1..tn)` becomes `π_f(cs) t1 ... tn`.
pub fn church_tree(ranked: &RankedAlphabet, tree: &RankedTree) -> Result<Term> {
    tree.check(ranked)?;
    fn enc(ranked: &RankedAlphabet, t: &RankedTree) -> Term {
        let i = ranked.index_of(&t.label).expect("checked");
        let head = Term::tuple_proj(Term::var(0), i, ranked.len());
        Term::apps(head, t.children.iter().map(|c| enc(ranked, c)))
    }
    Ok(Term::lam("cs", ranked.bundle_type(), enc(ranked, tree)))
}

pub fn identity(ty: SimpleType) -> Term {
    Term::lam("x", ty, Term::var(0))
}

/// Concatenation `Word_Σ -> Word_Σ -> Word_Σ`, with `concat [u] [v] = [uv]`:
/// `λu.λv.λā.λx. v ā (u ā x)`.
pub fn concat(alphabet: &Alphabet) -> Term {
    let n = alphabet.len();
    let w = alphabet.word_type();
    // under λu.λv.λa1..an.λx: x = 0, a_j = n - j, v = n + 1, u = n + 2
    let letters = |shift: usize| (0..n).map(move |j| Term::var(n - j + shift));
    let inner = Term::app(Term::apps(Term::var(n + 2), letters(0)), Term::var(0));
    let body = Term::app(Term::apps(Term::var(n + 1), letters(0)), inner);
    let mut t = Term::lam("x", SimpleType::Base, body);
    for c in (0..n).rev() {
        t = Term::lam(alphabet.letter(c), SimpleType::endo(), t);
    }
    Term::lam("u", w.clone(), Term::lam("v", w, t))
}

/// `λn.λs.λx. s (n s x)`.
pub fn successor() -> Term {
    let body = Term::app(Term::var(1), Term::apps(Term::var(2), [Term::var(1), Term::var(0)]));
    Term::lam(
        "n",
        SimpleType::nat(),
        Term::lam("s", SimpleType::endo(), Term::lam("x", SimpleType::Base, body)),
    )
}

/// `Word_{a,b} -> Nat * Nat`, counting the letters of each kind:
/// `λw. (λs. w s (λx.x), λs. w (λx.x) s)`.
pub fn counter() -> Term {
    let id = identity(SimpleType::Base);
    let count_a = Term::lam("s", SimpleType::endo(), Term::apps(Term::var(1), [Term::var(0), id.clone()]));
    let count_b = Term::lam("s", SimpleType::endo(), Term::apps(Term::var(1), [id, Term::var(0)]));
    Term::lam("w", SimpleType::word(2), Term::pair(count_a, count_b))
}

/// `λx. (x, x) : A -> A * A`.
pub fn diagonal(ty: SimpleType) -> Term {
    Term::lam("x", ty, Term::pair(Term::var(0), Term::var(0)))
}

/// `λp. (fst p) (snd p) : (A -> B) * A -> B`.
pub fn evaluation(a: SimpleType, b: SimpleType) -> Term {
    let p = SimpleType::product(SimpleType::arrow(a.clone(), b), a);
    Term::lam("p", p, Term::app(Term::fst(Term::var(0)), Term::snd(Term::var(0))))
}

/// `λp. m (fst p) (snd p) : A * B -> C` for a closed `m : A -> B -> C`.
pub fn uncurry(m: &Term, a: SimpleType, b: SimpleType) -> Term {
    debug_assert!(m.is_closed());
    Term::lam(
        "p",
        SimpleType::product(a, b),
        Term::apps(m.clone(), [Term::fst(Term::var(0)), Term::snd(Term::var(0))]),
    )
}

/// Grafting `Tree_{Σ+1} -> Tree_Σ -> Tree_Σ`: `λk.λt.λā. k (ā, t ā)`, with the
/// constructor bundle for `Σ+1` re-associated to the right-nested layout.
pub fn graft(ranked: &RankedAlphabet) -> Term {
    let (extended, _) = ranked.with_hole();
    let l = ranked.len();
    // under λk.λt.λcs: cs = 0, t = 1, k = 2
    let mut parts: Vec<Term> = if l == 0 {
        Vec::new()
    } else {
        (0..l).map(|i| Term::tuple_proj(Term::var(0), i, l)).collect()
    };
    parts.push(Term::app(Term::var(1), Term::var(0)));
    let body = Term::app(Term::var(2), Term::tuple(parts));
    Term::lam(
        "k",
        extended.tree_type(),
        Term::lam("t", ranked.tree_type(), Term::lam("cs", ranked.bundle_type(), body)),
    )
}

/// `λw.λc1...λcm.λx. w [h(a1)] ... [h(an)] x` where `[u] = λy. c_{u_k}(...(c_{u_1} y))`.
pub fn homomorphism_term(source: &Alphabet, target: &Alphabet, images: &[Vec<usize>]) -> Result<Term> {
    if images.len() != source.len() {
        return Err(Error::BadParameters(format!(
            "expected {} images, got {}",
            source.len(),
            images.len()
        )));
    }
    let m = target.len();
    // under λw.λc1..cm.λx: x = 0, c_j = m - j, w = m + 1; one more inside λy
    let mut letter_images = Vec::new();
    for img in images {
        if let Some(&bad) = img.iter().find(|&&c| c >= m) {
            return Err(Error::UnknownLetter(format!("#{bad}")));
        }
        let body = img
            .iter()
            .fold(Term::var(0), |acc, &c| Term::app(Term::var(m - c + 1), acc));
        letter_images.push(Term::lam("y", SimpleType::Base, body));
    }
    let body = Term::app(Term::apps(Term::var(m + 1), letter_images), Term::var(0));
    let mut t = Term::lam("x", SimpleType::Base, body);
    for c in (0..m).rev() {
        t = Term::lam(target.letter(c), SimpleType::endo(), t);
    }
    Ok(Term::lam("w", source.word_type(), t))
}

/// Named λ-terms reachable from the surface syntax as `@name{params}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Concat(Alphabet),
    Graft(RankedAlphabet),
    Diagonal(SimpleType),
    Evaluation(SimpleType, SimpleType),
    Identity(SimpleType),
    Counter,
    Successor,
    Homomorphism {
        source: Alphabet,
        target: Alphabet,
        images: Vec<Vec<usize>>,
    },
}

impl Builtin {
    /// Parses a builtin name and its textual parameters:
    /// `concat{ab}`, `graft{f:1,c:0}`, `diag{o -> o}`, `id{o}`, `eval{o -> o; o}`,
    /// `counter`, `succ`, `hom{a=cc,b=;c}` (source letters with their images,
    /// then the target alphabet).
    pub fn parse(name: &str, params: Option<&str>) -> Result<Self> {
        let need = |what: &str| {
            params.ok_or_else(|| Error::BadParameters(format!("`{name}` needs {what}")))
        };
        let none = || -> Result<()> {
            match params {
                Some(p) if !p.trim().is_empty() => {
                    Err(Error::BadParameters(format!("`{name}` takes no parameters")))
                }
                _ => Ok(()),
            }
        };
        Ok(match name {
            "concat" => Builtin::Concat(Alphabet::parse(need("an alphabet")?)?),
            "graft" => Builtin::Graft(RankedAlphabet::parse(need("a ranked alphabet")?)?),
            "diag" | "diagonal" => Builtin::Diagonal(crate::syntax::parse_type(need("a type")?)?),
            "id" | "identity" => Builtin::Identity(crate::syntax::parse_type(need("a type")?)?),
            "eval" | "evaluation" => {
                let p = need("two types")?;
                let (a, b) = p
                    .split_once(';')
                    .ok_or_else(|| Error::BadParameters("expected `A; B`".into()))?;
                Builtin::Evaluation(crate::syntax::parse_type(a)?, crate::syntax::parse_type(b)?)
            }
            "counter" => {
                none()?;
                Builtin::Counter
            }
            "succ" | "successor" => {
                none()?;
                Builtin::Successor
            }
            "hom" | "homomorphism" => {
                let p = need("letter images")?;
                let (maps, target) = match p.split_once(';') {
                    Some((m, t)) => (m, Some(t.trim())),
                    None => (p, None),
                };
                let mut src = Vec::new();
                let mut imgs = Vec::new();
                for item in maps.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (l, img) = item
                        .split_once('=')
                        .ok_or_else(|| Error::BadParameters(format!("expected `letter=image`, got `{item}`")))?;
                    src.push(l.trim().to_string());
                    imgs.push(img.trim().to_string());
                }
                let target = match target {
                    Some(t) if !t.is_empty() => Alphabet::parse(t)?,
                    _ => {
                        let mut letters: Vec<char> = imgs.iter().flat_map(|s| s.chars()).collect();
                        letters.sort_unstable();
                        letters.dedup();
                        Alphabet::new(letters.into_iter().map(String::from))?
                    }
                };
                let images = imgs
                    .iter()
                    .map(|s| target.parse_word(s))
                    .collect::<Result<Vec<_>>>()?;
                Builtin::Homomorphism {
                    source: Alphabet::new(src)?,
                    target,
                    images,
                }
            }
            other => return Err(Error::UnknownBuiltin(other.to_string())),
        })
    }

    pub fn term(&self) -> Result<Term> {
        Ok(match self {
            Builtin::Concat(a) => concat(a),
            Builtin::Graft(r) => graft(r),
            Builtin::Diagonal(ty) => diagonal(ty.clone()),
            Builtin::Evaluation(a, b) => evaluation(a.clone(), b.clone()),
            Builtin::Identity(ty) => identity(ty.clone()),
            Builtin::Counter => counter(),
            Builtin::Successor => successor(),
            Builtin::Homomorphism {
                source,
                target,
                images,
            } => homomorphism_term(source, target, images)?,
        })
    }
}

/// Looks up a named λ-term by name and textual parameters.
pub fn builtin_term(name: &str, params: Option<&str>) -> Result<Term> {
    Builtin::parse(name, params)?.term()
}

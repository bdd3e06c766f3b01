//! Surface syntax for types and terms.
//!
//! Types: `o`, `1`, `A -> B` (right-associative, loosest), `A * B`
//! (right-associative, binds tighter than `->`), parentheses.
//!
//! Terms: `\x:A. M` (or `λx:A. M`), application by juxtaposition, `(M, N)`,
//! `(M, N, P)` for right-nested tuples, `fst M`, `snd M`, `()`, and the sugar
//! `word aab`, `word{ab} ba`, `word{ab} ε`, `nat 3`, `tree{f:1,c:0} f(c)` and
//! `@name` / `@name{params}` for builtins.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::kernel::{
    builtin_term, church_numeral, church_tree, church_word, Alphabet, Context, RankedAlphabet,
    RankedTree, SimpleType, Term,
};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    Str(String),
    Braced(String),
    Builtin(String),
    Lambda,
    Colon,
    Dot,
    Comma,
    LParen,
    RParen,
    Arrow,
    Star,
    Eps,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && c != 'λ' && c != 'ε' || c == '_'
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ' && c != 'ε') || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| Error::Syntax {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        let push = |tok, out: &mut Vec<Spanned>| {
            out.push(Spanned {
                tok,
                line: l0,
                column: c0,
            })
        };
        match c {
            '\\' | 'λ' => {
                push(Tok::Lambda, &mut out);
                advance(1, &mut i, &mut col);
            }
            'ε' => {
                push(Tok::Eps, &mut out);
                advance(1, &mut i, &mut col);
            }
            ':' => {
                push(Tok::Colon, &mut out);
                advance(1, &mut i, &mut col);
            }
            '.' => {
                push(Tok::Dot, &mut out);
                advance(1, &mut i, &mut col);
            }
            ',' => {
                push(Tok::Comma, &mut out);
                advance(1, &mut i, &mut col);
            }
            '(' => {
                push(Tok::LParen, &mut out);
                advance(1, &mut i, &mut col);
            }
            ')' => {
                push(Tok::RParen, &mut out);
                advance(1, &mut i, &mut col);
            }
            '*' | '×' => {
                push(Tok::Star, &mut out);
                advance(1, &mut i, &mut col);
            }
            '→' | '⇒' => {
                push(Tok::Arrow, &mut out);
                advance(1, &mut i, &mut col);
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                push(Tok::Arrow, &mut out);
                advance(2, &mut i, &mut col);
            }
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' && chars[j] != '\n' {
                    j += 1;
                }
                if j >= chars.len() || chars[j] != '"' {
                    return Err(err(l0, c0, "unterminated string".into()));
                }
                push(Tok::Str(chars[start..j].iter().collect()), &mut out);
                advance(j + 1 - i, &mut i, &mut col);
            }
            '{' => {
                let start = i + 1;
                let mut j = start;
                let mut depth = 1;
                while j < chars.len() {
                    match chars[j] {
                        '{' => depth += 1,
                        '}' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        '\n' => return Err(err(l0, c0, "unterminated `{`".into())),
                        _ => {}
                    }
                    j += 1;
                }
                if j >= chars.len() {
                    return Err(err(l0, c0, "unterminated `{`".into()));
                }
                push(Tok::Braced(chars[start..j].iter().collect()), &mut out);
                advance(j + 1 - i, &mut i, &mut col);
            }
            '@' => {
                let mut j = i + 1;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                if j == i + 1 {
                    return Err(err(l0, c0, "expected a builtin name after `@`".into()));
                }
                push(Tok::Builtin(chars[i + 1..j].iter().collect()), &mut out);
                advance(j - i, &mut i, &mut col);
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| err(l0, c0, format!("number `{s}` is too large")))?;
                push(Tok::Num(n), &mut out);
                advance(j - i, &mut i, &mut col);
            }
            c if is_ident_start(c) => {
                let mut j = i;
                while j < chars.len() && is_ident_char(chars[j]) {
                    j += 1;
                }
                push(Tok::Ident(chars[i..j].iter().collect()), &mut out);
                advance(j - i, &mut i, &mut col);
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 5] = ["fst", "snd", "word", "nat", "tree"];

/// Knobs for term parsing.
#[derive(Debug, Clone, Default)]
pub struct ParseOptions {
    /// Free variables the term may mention.
    pub context: Context,
    /// Alphabet size for `word` literals without an explicit alphabet. When
    /// unset, the letters `a..` up to the largest one used are assumed.
    pub word_letters: Option<usize>,
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    opts: &'a ParseOptions,
    scope: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.column))
            .unwrap_or(self.end)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(format!("expected {what}"))
        }
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            self.fail("unexpected trailing input")
        } else {
            Ok(())
        }
    }

    fn ty(&mut self) -> Result<SimpleType> {
        let left = self.ty_product()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let right = self.ty()?;
            return Ok(SimpleType::arrow(left, right));
        }
        Ok(left)
    }

    fn ty_product(&mut self) -> Result<SimpleType> {
        let left = self.ty_atom()?;
        if self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let right = self.ty_product()?;
            return Ok(SimpleType::product(left, right));
        }
        Ok(left)
    }

    fn ty_atom(&mut self) -> Result<SimpleType> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "o" => {
                self.pos += 1;
                Ok(SimpleType::Base)
            }
            Some(Tok::Num(1)) => {
                self.pos += 1;
                Ok(SimpleType::Unit)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            _ => self.fail("expected a type (`o`, `1` or `(`)"),
        }
    }

    fn term(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Lambda) {
            return self.lambda();
        }
        let mut head = self.element()?;
        loop {
            match self.peek() {
                Some(Tok::Lambda) => {
                    let arg = self.lambda()?;
                    return Ok(Term::app(head, arg));
                }
                Some(t) if starts_element(t) => {
                    let arg = self.element()?;
                    head = Term::app(head, arg);
                }
                _ => return Ok(head),
            }
        }
    }

    fn lambda(&mut self) -> Result<Term> {
        self.expect(Tok::Lambda, "`\\`")?;
        let name = match self.peek() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return self.fail("expected a variable name"),
        };
        self.pos += 1;
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.ty()?;
        self.expect(Tok::Dot, "`.`")?;
        self.scope.push(name.clone());
        let body = self.term();
        self.scope.pop();
        Ok(Term::lam(&name, ty, body?))
    }

    fn element(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == "fst" || s == "snd" => {
                let fst = s == "fst";
                self.pos += 1;
                let inner = self.element()?;
                Ok(if fst { Term::fst(inner) } else { Term::snd(inner) })
            }
            _ => self.atom(),
        }
    }

    fn braced(&mut self) -> Option<String> {
        if let Some(Tok::Braced(s)) = self.peek() {
            let s = s.clone();
            self.pos += 1;
            Some(s)
        } else {
            None
        }
    }

    fn wrap<T>(&self, at: (usize, usize), r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            e @ Error::Syntax { .. } => e,
            other => Error::Syntax {
                line: at.0,
                column: at.1,
                message: other.to_string(),
            },
        })
    }

    fn atom(&mut self) -> Result<Term> {
        let at = self.here();
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.fail("expected a term"),
        };
        match tok {
            Tok::Ident(s) if s == "word" => {
                self.pos += 1;
                let alphabet = self.braced();
                let spelled = match self.peek() {
                    Some(Tok::Ident(w)) => w.clone(),
                    Some(Tok::Str(w)) => w.clone(),
                    Some(Tok::Eps) => String::new(),
                    _ => return self.fail("expected a word after `word`"),
                };
                self.pos += 1;
                let r = word_literal(alphabet.as_deref(), &spelled, self.opts.word_letters);
                self.wrap(at, r)
            }
            Tok::Ident(s) if s == "nat" => {
                self.pos += 1;
                match self.peek() {
                    Some(Tok::Num(n)) => {
                        let n = *n as usize;
                        self.pos += 1;
                        Ok(church_numeral(n))
                    }
                    _ => self.fail("expected a number after `nat`"),
                }
            }
            Tok::Ident(s) if s == "tree" => {
                self.pos += 1;
                let ranked = match self.braced() {
                    Some(r) => r,
                    None => return self.fail("expected `{letter:arity,...}` after `tree`"),
                };
                let ranked = self.wrap(at, RankedAlphabet::parse(&ranked))?;
                let t = self.tree()?;
                let r = church_tree(&ranked, &t);
                self.wrap(at, r)
            }
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => self.fail(format!("unexpected `{s}`")),
            Tok::Ident(s) => {
                self.pos += 1;
                if let Some(i) = self.scope.iter().rev().position(|n| *n == s) {
                    return Ok(Term::var(i));
                }
                match self.opts.context.index_of(&s) {
                    Some(i) => Ok(Term::var(i + self.scope.len())),
                    None => {
                        self.pos -= 1;
                        self.fail(format!("unbound variable `{s}`"))
                    }
                }
            }
            Tok::Builtin(name) => {
                self.pos += 1;
                let params = self.braced();
                let r = builtin_term(&name, params.as_deref());
                self.wrap(at, r)
            }
            Tok::LParen => {
                self.pos += 1;
                if self.peek() == Some(&Tok::RParen) {
                    self.pos += 1;
                    return Ok(Term::Unit);
                }
                let mut items = vec![self.term()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                self.expect(Tok::RParen, "`)` or `,`")?;
                Ok(Term::tuple(items))
            }
            _ => self.fail("expected a term"),
        }
    }

    fn tree(&mut self) -> Result<RankedTree> {
        let label = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return self.fail("expected a tree label"),
        };
        self.pos += 1;
        let mut children = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                children.push(self.tree()?);
                match self.peek() {
                    Some(Tok::Comma) => self.pos += 1,
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.fail("expected `,` or `)` in tree"),
                }
            }
        }
        Ok(RankedTree { label, children })
    }
}

fn starts_element(t: &Tok) -> bool {
    matches!(t, Tok::Ident(_) | Tok::LParen | Tok::Builtin(_))
}

fn word_literal(alphabet: Option<&str>, spelled: &str, default_letters: Option<usize>) -> Result<Term> {
    let alphabet = match (alphabet, default_letters) {
        (Some(a), _) => Alphabet::parse(a)?,
        (None, Some(n)) => Alphabet::standard(n)?,
        (None, None) => {
            let max = spelled.chars().map(|c| c as u32).max().unwrap_or('a' as u32);
            if !spelled.chars().all(|c| c.is_ascii_lowercase()) {
                return Err(Error::BadParameters(
                    "give an alphabet (`word{..} w`) for letters outside a..z".into(),
                ));
            }
            Alphabet::standard((max - 'a' as u32 + 1) as usize)?
        }
    };
    let w = alphabet.parse_word(spelled)?;
    church_word(&alphabet, &w)
}

fn parser<'a>(src: &str, opts: &'a ParseOptions) -> Result<Parser<'a>> {
    let toks = lex(src)?;
    let lines: Vec<&str> = src.split('\n').collect();
    let end = (lines.len(), lines.last().map_or(0, |l| l.chars().count()) + 1);
    Ok(Parser {
        toks,
        pos: 0,
        end,
        opts,
        scope: Vec::new(),
    })
}

pub fn parse_type(src: &str) -> Result<SimpleType> {
    let opts = ParseOptions::default();
    let mut p = parser(src, &opts)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// Parses a closed term.
pub fn parse_term(src: &str) -> Result<Term> {
    parse_term_with(src, &ParseOptions::default())
}

pub fn parse_term_with(src: &str, opts: &ParseOptions) -> Result<Term> {
    let mut p = parser(src, opts)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

fn valid_ident(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if is_ident_start(c))
        && cs.all(is_ident_char)
        && !KEYWORDS.contains(&s)
        && s != "o"
}

/// Prints a term so that [`parse_term_with`] reads it back to the same term
/// under the same context. Binder names are renamed when they would clash
/// with a name already in scope.
pub fn print_term(t: &Term, ctx: &Context) -> String {
    let mut scope: Vec<String> = ctx.entries().iter().rev().map(|(n, _)| n.clone()).collect();
    let mut out = String::new();
    go(t, 0, &mut scope, &mut out);
    out
}

// levels: 0 = anything, 1 = head of an application, 2 = argument
fn go(t: &Term, level: u8, scope: &mut Vec<String>, out: &mut String) {
    match t {
        Term::Var(i) => {
            if *i < scope.len() {
                out.push_str(&scope[scope.len() - 1 - i]);
            } else {
                out.push_str(&format!("#{i}"));
            }
        }
        Term::Unit => out.push_str("()"),
        Term::Lam(name, ty, body) => {
            if level > 0 {
                out.push('(');
            }
            let base = if valid_ident(name.as_str()) { name.as_str() } else { "x" };
            let taken: HashSet<&str> = scope.iter().map(String::as_str).collect();
            let mut fresh = base.to_string();
            let mut k = 1;
            while taken.contains(fresh.as_str()) {
                fresh = format!("{base}{k}");
                k += 1;
            }
            out.push_str(&format!("\\{fresh}:{ty}. "));
            scope.push(fresh);
            go(body, 0, scope, out);
            scope.pop();
            if level > 0 {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            if level > 1 {
                out.push('(');
            }
            go(f, 1, scope, out);
            out.push(' ');
            go(a, 2, scope, out);
            if level > 1 {
                out.push(')');
            }
        }
        Term::Fst(a) | Term::Snd(a) => {
            if level > 1 {
                out.push('(');
            }
            out.push_str(if matches!(t, Term::Fst(_)) { "fst " } else { "snd " });
            go(a, 2, scope, out);
            if level > 1 {
                out.push(')');
            }
        }
        Term::Pair(a, b) => {
            out.push('(');
            go(a, 0, scope, out);
            let mut rest: &Term = b;
            while let Term::Pair(x, y) = rest {
                out.push_str(", ");
                go(x, 0, scope, out);
                rest = y;
            }
            out.push_str(", ");
            go(rest, 0, scope, out);
            out.push(')');
        }
    }
}

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::SimpleType;

/// An element of a finite space `⟦A⟧_q`.
///
/// Whenever the space's cardinality fits in a `u64` the value is its index
/// (`Index`). Larger spaces keep their structure: pairs split into components
/// and functions into a table indexed by the domain. Every value has exactly
/// one representation, so structural equality is semantic equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Index(u64),
    Pair(Box<Value>, Box<Value>),
    Table(Arc<[Value]>),
}

impl Value {
    pub fn as_index(&self) -> Option<u64> {
        match self {
            Value::Index(i) => Some(*i),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Shape {
    Base,
    Unit,
    Product(Arc<ValueSpace>, Arc<ValueSpace>),
    Arrow(Arc<ValueSpace>, Arc<ValueSpace>),
}

/// The finite set `⟦A⟧_q` with its canonical indexing.
///
/// Base values are the states `0..q`. Pairs use the mixed radix
/// `index(a, b) = index(a) * |B| + index(b)`. A function is its table of
/// codomain indices listed by domain index; the table read as a base-`|B|`
/// numeral with entry 0 as the most significant digit is the function's index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ValueSpace {
    ty: SimpleType,
    q: u32,
    card: Option<u64>,
    shape: Shape,
}

fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    let exp: u32 = exp.try_into().ok()?;
    base.checked_pow(exp)
}

impl ValueSpace {
    pub fn new(ty: &SimpleType, q: u32) -> Result<Arc<Self>> {
        if q == 0 {
            return Err(Error::BadParameters("the state count must be positive".into()));
        }
        Ok(Self::build(ty, q))
    }

    fn build(ty: &SimpleType, q: u32) -> Arc<Self> {
        let (card, shape) = match ty {
            SimpleType::Base => (Some(q as u64), Shape::Base),
            SimpleType::Unit => (Some(1), Shape::Unit),
            SimpleType::Product(a, b) => {
                let (a, b) = (Self::build(a, q), Self::build(b, q));
                let card = a.card.zip(b.card).and_then(|(x, y)| x.checked_mul(y));
                (card, Shape::Product(a, b))
            }
            SimpleType::Arrow(a, b) => {
                let (a, b) = (Self::build(a, q), Self::build(b, q));
                let card = match (a.card, b.card) {
                    (_, Some(1)) => Some(1),
                    (Some(x), Some(y)) => checked_pow(y, x),
                    _ => None,
                };
                (card, Shape::Arrow(a, b))
            }
        };
        Arc::new(ValueSpace {
            ty: ty.clone(),
            q,
            card,
            shape,
        })
    }

    pub fn ty(&self) -> &SimpleType {
        &self.ty
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// The cardinality when it fits in a `u64`.
    pub fn card(&self) -> Option<u64> {
        self.card
    }

    pub fn card_big(&self) -> BigUint {
        match (&self.shape, self.card) {
            (_, Some(c)) => BigUint::from(c),
            (Shape::Product(a, b), None) => a.card_big() * b.card_big(),
            (Shape::Arrow(a, b), None) => {
                // a huge codomain raised to a domain that may itself be huge
                match a.card {
                    Some(n) => num_traits::pow::pow(b.card_big(), n as usize),
                    None => panic!("cardinality of {} at q={} is beyond representation", self.ty, self.q),
                }
            }
            _ => unreachable!(),
        }
    }

    /// Cardinality, provided it is at most `budget`.
    pub fn card_within(&self, budget: u64) -> Result<u64> {
        match self.card {
            Some(c) if c <= budget => Ok(c),
            Some(c) => Err(Error::overflow(format!(
                "⟦{}⟧ at q={} has {c} elements, above the budget of {budget}",
                self.ty, self.q
            ))),
            None => Err(Error::overflow(format!(
                "⟦{}⟧ at q={} has more than 2^64 elements",
                self.ty, self.q
            ))),
        }
    }

    pub fn domain(&self) -> Option<&Arc<ValueSpace>> {
        match &self.shape {
            Shape::Arrow(a, _) => Some(a),
            _ => None,
        }
    }

    pub fn codomain(&self) -> Option<&Arc<ValueSpace>> {
        match &self.shape {
            Shape::Arrow(_, b) => Some(b),
            _ => None,
        }
    }

    fn mismatch(&self, v: &Value) -> Error {
        Error::SpaceMismatch(format!("{v:?} is not an element of ⟦{}⟧ at q={}", self.ty, self.q))
    }

    /// Checks that `v` is a canonical element of this space.
    pub fn contains(&self, v: &Value) -> bool {
        match (self.card, v) {
            (Some(c), Value::Index(i)) => *i < c,
            (Some(_), _) => false,
            (None, Value::Pair(a, b)) => match &self.shape {
                Shape::Product(x, y) => x.contains(a) && y.contains(b),
                _ => false,
            },
            (None, Value::Table(es)) => match &self.shape {
                Shape::Arrow(x, y) => x.card == Some(es.len() as u64) && es.iter().all(|e| y.contains(e)),
                _ => false,
            },
            (None, Value::Index(_)) => false,
        }
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(self.mismatch(v))
        }
    }

    pub fn state(&self, i: u32) -> Result<Value> {
        match self.shape {
            Shape::Base if i < self.q => Ok(Value::Index(i as u64)),
            _ => Err(Error::SpaceMismatch(format!("no state {i} in ⟦{}⟧ at q={}", self.ty, self.q))),
        }
    }

    pub fn unit(&self) -> Value {
        Value::Index(0)
    }

    pub fn pair(&self, a: Value, b: Value) -> Result<Value> {
        let Shape::Product(x, y) = &self.shape else {
            return Err(Error::SpaceMismatch(format!("{} is not a product", self.ty)));
        };
        x.check(&a)?;
        y.check(&b)?;
        Ok(match (self.card, &a, &b) {
            (Some(_), Value::Index(i), Value::Index(j)) => Value::Index(i * y.card.unwrap() + j),
            _ => Value::Pair(Box::new(a), Box::new(b)),
        })
    }

    pub fn split(&self, v: &Value) -> Result<(Value, Value)> {
        let Shape::Product(x, y) = &self.shape else {
            return Err(Error::SpaceMismatch(format!("{} is not a product", self.ty)));
        };
        match (v, y.card) {
            (Value::Index(i), Some(c)) if self.card.is_some() => Ok((Value::Index(i / c), Value::Index(i % c))),
            (Value::Pair(a, b), _) if self.card.is_none() => {
                let _ = x;
                Ok(((**a).clone(), (**b).clone()))
            }
            _ => Err(self.mismatch(v)),
        }
    }

    /// Applies a function value to an argument given by its domain index.
    pub fn apply_at(&self, f: &Value, arg: u64) -> Result<Value> {
        let Shape::Arrow(x, y) = &self.shape else {
            return Err(Error::SpaceMismatch(format!("{} is not an arrow", self.ty)));
        };
        let n = x.card.ok_or_else(|| self.mismatch(f))?;
        if arg >= n {
            return Err(Error::SpaceMismatch(format!("argument index {arg} out of range")));
        }
        match f {
            Value::Index(i) if self.card.is_some_and(|c| *i < c) => {
                let c = y.card.unwrap();
                if c == 1 {
                    return Ok(Value::Index(0));
                }
                let weight = checked_pow(c, n - 1 - arg).expect("fits: below the cardinality");
                Ok(Value::Index((i / weight) % c))
            }
            Value::Table(es) if self.card.is_none() => es.get(arg as usize).cloned().ok_or_else(|| self.mismatch(f)),
            _ => Err(self.mismatch(f)),
        }
    }

    pub fn apply(&self, f: &Value, a: &Value) -> Result<Value> {
        let dom = self.domain().ok_or_else(|| Error::SpaceMismatch(format!("{} is not an arrow", self.ty)))?;
        match a {
            Value::Index(i) if dom.contains(a) => self.apply_at(f, *i),
            _ => Err(dom.mismatch(a)),
        }
    }

    /// Builds a function value from its table, listed by domain index.
    pub fn table(&self, entries: Vec<Value>) -> Result<Value> {
        let Shape::Arrow(x, y) = &self.shape else {
            return Err(Error::SpaceMismatch(format!("{} is not an arrow", self.ty)));
        };
        if x.card != Some(entries.len() as u64) {
            return Err(Error::SpaceMismatch(format!(
                "a table for {} needs one entry per domain element",
                self.ty
            )));
        }
        for e in &entries {
            y.check(e)?;
        }
        if self.card.is_some() {
            let c = y.card.unwrap();
            let mut acc: u64 = 0;
            for e in &entries {
                acc = acc * c + e.as_index().unwrap();
            }
            Ok(Value::Index(acc))
        } else {
            Ok(Value::Table(entries.into()))
        }
    }

    /// The table of a function value.
    pub fn entries(&self, f: &Value) -> Result<Vec<Value>> {
        let dom = self.domain().ok_or_else(|| Error::SpaceMismatch(format!("{} is not an arrow", self.ty)))?;
        let n = dom.card.ok_or_else(|| self.mismatch(f))?;
        if let Value::Table(es) = f {
            self.check(f)?;
            return Ok(es.to_vec());
        }
        self.check(f)?;
        let c = self.codomain().unwrap().card.unwrap();
        let mut i = f.as_index().unwrap();
        let mut out = vec![Value::Index(0); n as usize];
        if c > 1 {
            for slot in out.iter_mut().rev() {
                *slot = Value::Index(i % c);
                i /= c;
            }
        }
        Ok(out)
    }

    /// Every element in index order, if there are at most `budget` of them.
    pub fn elements(&self, budget: u64) -> Result<impl Iterator<Item = Value>> {
        let n = self.card_within(budget)?;
        Ok((0..n).map(Value::Index))
    }

    /// The element at a position in the canonical order.
    pub fn value_at(&self, index: &BigUint) -> Result<Value> {
        if let Some(c) = self.card {
            return match index.to_u64() {
                Some(i) if i < c => Ok(Value::Index(i)),
                _ => Err(Error::SpaceMismatch(format!("index {index} out of range for ⟦{}⟧", self.ty))),
            };
        }
        match &self.shape {
            Shape::Product(x, y) => {
                let cy = y.card_big();
                let (a, b) = (index / &cy, index % &cy);
                Ok(Value::Pair(Box::new(x.value_at(&a)?), Box::new(y.value_at(&b)?)))
            }
            Shape::Arrow(x, y) => {
                let n = x
                    .card
                    .ok_or_else(|| Error::overflow(format!("domain of {} is too large to tabulate", self.ty)))?;
                let cy = y.card_big();
                let mut rest = index.clone();
                let mut out = Vec::with_capacity(n as usize);
                for _ in 0..n {
                    out.push(y.value_at(&(&rest % &cy))?);
                    rest /= &cy;
                }
                if !rest.is_zero() {
                    return Err(Error::SpaceMismatch(format!("index out of range for ⟦{}⟧", self.ty)));
                }
                out.reverse();
                Ok(Value::Table(out.into()))
            }
            _ => unreachable!(),
        }
    }

    /// Position of `v` in the canonical order.
    pub fn index_of(&self, v: &Value) -> Result<BigUint> {
        self.check(v)?;
        Ok(self.index_unchecked(v))
    }

    fn index_unchecked(&self, v: &Value) -> BigUint {
        match v {
            Value::Index(i) => BigUint::from(*i),
            Value::Pair(a, b) => match &self.shape {
                Shape::Product(x, y) => x.index_unchecked(a) * y.card_big() + y.index_unchecked(b),
                _ => unreachable!(),
            },
            Value::Table(es) => match &self.shape {
                Shape::Arrow(_, y) => {
                    let c = y.card_big();
                    es.iter()
                        .fold(BigUint::zero(), |acc, e| acc * &c + y.index_unchecked(e))
                }
                _ => unreachable!(),
            },
        }
    }

    /// The identity function, for an endofunction space `A -> A`.
    pub fn identity(&self) -> Result<Value> {
        match &self.shape {
            Shape::Arrow(x, y) if x.ty == y.ty => {
                let n = x.card.ok_or_else(|| Error::overflow("domain too large"))?;
                self.table((0..n).map(Value::Index).collect())
            }
            _ => Err(Error::SpaceMismatch(format!("{} is not an endofunction type", self.ty))),
        }
    }
}

impl fmt::Display for ValueSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟦{}⟧_{}", self.ty, self.q)
    }
}

/// `|⟦A⟧_q|`, failing when it exceeds `budget`.
pub fn space_size(ty: &SimpleType, q: u32, budget: u64) -> Result<u64> {
    ValueSpace::new(ty, q)?.card_within(budget)
}

/// `|⟦A⟧_q|` as an unbounded natural.
pub fn space_size_big(ty: &SimpleType, q: u32) -> Result<BigUint> {
    fn go(ty: &SimpleType, q: &BigUint) -> BigUint {
        match ty {
            SimpleType::Base => q.clone(),
            SimpleType::Unit => BigUint::one(),
            SimpleType::Product(a, b) => go(a, q) * go(b, q),
            SimpleType::Arrow(a, b) => {
                let (x, y) = (go(a, q), go(b, q));
                if y.is_one() {
                    return y;
                }
                let e = x.to_u32().expect("exponent beyond representation");
                num_traits::pow::pow(y, e as usize)
            }
        }
    }
    if q == 0 {
        return Err(Error::BadParameters("the state count must be positive".into()));
    }
    Ok(go(ty, &BigUint::from(q)))
}

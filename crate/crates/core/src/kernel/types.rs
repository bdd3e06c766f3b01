use std::fmt;
use std::sync::Arc;

/// Simple types over the single base type `o`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SimpleType {
    Base,
    Unit,
    Product(Arc<SimpleType>, Arc<SimpleType>),
    Arrow(Arc<SimpleType>, Arc<SimpleType>),
}

impl SimpleType {
    pub fn arrow(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Arrow(Arc::new(dom), Arc::new(cod))
    }

    pub fn product(left: SimpleType, right: SimpleType) -> Self {
        SimpleType::Product(Arc::new(left), Arc::new(right))
    }

    /// `A1 -> ... -> An -> result`.
    pub fn arrows<I>(args: I, result: SimpleType) -> Self
    where
        I: IntoIterator<Item = SimpleType>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter()
            .rev()
            .fold(result, |acc, a| SimpleType::arrow(a, acc))
    }

    /// Right-nested product of the given components; `1` when empty.
    pub fn tuple(mut components: Vec<SimpleType>) -> Self {
        match components.len() {
            0 => SimpleType::Unit,
            1 => components.pop().unwrap(),
            _ => {
                let last = components.pop().unwrap();
                components
                    .into_iter()
                    .rev()
                    .fold(last, |acc, c| SimpleType::product(c, acc))
            }
        }
    }

    /// `o -> o`.
    pub fn endo() -> Self {
        SimpleType::arrow(SimpleType::Base, SimpleType::Base)
    }

    /// `Nat = (o -> o) -> o -> o`.
    pub fn nat() -> Self {
        SimpleType::word(1)
    }

    /// `Word_Σ` for an alphabet of `letters` letters: one `o -> o` argument per
    /// letter, then `o -> o`.
    pub fn word(letters: usize) -> Self {
        SimpleType::arrows(std::iter::repeat_n(SimpleType::endo(), letters), SimpleType::endo())
    }

    /// `o -> ... -> o -> o` with `arity` arguments.
    pub fn first_order(arity: usize) -> Self {
        SimpleType::arrows(std::iter::repeat_n(SimpleType::Base, arity), SimpleType::Base)
    }

    pub fn is_arrow(&self) -> bool {
        matches!(self, SimpleType::Arrow(..))
    }

    pub fn as_arrow(&self) -> Option<(&SimpleType, &SimpleType)> {
        match self {
            SimpleType::Arrow(a, b) => Some((a, b)),
            _ => None,
        }
    }

    pub fn as_product(&self) -> Option<(&SimpleType, &SimpleType)> {
        match self {
            SimpleType::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Number of letters if this is `Word_Σ` for some alphabet (`o -> o` is the
    /// word type of the empty alphabet).
    pub fn word_letters(&self) -> Option<usize> {
        let mut letters = 0;
        let mut ty = self;
        loop {
            let (dom, cod) = ty.as_arrow()?;
            if *dom == SimpleType::Base {
                return (*cod == SimpleType::Base).then_some(letters);
            }
            if *dom != SimpleType::endo() {
                return None;
            }
            letters += 1;
            ty = cod;
        }
    }

    /// Constructor arities if this is `Tree_Σ`, i.e. `C1 * (C2 * ...) -> o` where
    /// every `Ci` is first order. A bundle of one constructor is the constructor
    /// type itself; the empty bundle is `1`.
    pub fn tree_arities(&self) -> Option<Vec<usize>> {
        let (bundle, cod) = self.as_arrow()?;
        if *cod != SimpleType::Base {
            return None;
        }
        if *bundle == SimpleType::Unit {
            return Some(Vec::new());
        }
        let mut arities = Vec::new();
        let mut rest = bundle;
        loop {
            match rest {
                SimpleType::Product(c, tail) => {
                    arities.push(c.first_order_arity()?);
                    rest = tail;
                }
                other => {
                    arities.push(other.first_order_arity()?);
                    return Some(arities);
                }
            }
        }
    }

    /// `n` if this type is `o -> ... -> o` with `n` arguments.
    pub fn first_order_arity(&self) -> Option<usize> {
        let mut n = 0;
        let mut ty = self;
        loop {
            match ty {
                SimpleType::Base => return Some(n),
                SimpleType::Arrow(a, b) if **a == SimpleType::Base => {
                    n += 1;
                    ty = b;
                }
                _ => return None,
            }
        }
    }

    /// Number of nodes in the type tree.
    pub fn size(&self) -> usize {
        match self {
            SimpleType::Base | SimpleType::Unit => 1,
            SimpleType::Product(a, b) | SimpleType::Arrow(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SimpleType::Base | SimpleType::Unit => 1,
            SimpleType::Product(a, b) | SimpleType::Arrow(a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // precedence: 0 = arrow level, 1 = product level, 2 = atom
        fn go(ty: &SimpleType, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match ty {
                SimpleType::Base => write!(f, "o"),
                SimpleType::Unit => write!(f, "1"),
                SimpleType::Arrow(a, b) => {
                    if prec > 0 {
                        write!(f, "(")?;
                    }
                    go(a, 1, f)?;
                    write!(f, " -> ")?;
                    go(b, 0, f)?;
                    if prec > 0 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
                SimpleType::Product(a, b) => {
                    if prec > 1 {
                        write!(f, "(")?;
                    }
                    go(a, 2, f)?;
                    write!(f, " * ")?;
                    go(b, 1, f)?;
                    if prec > 1 {
                        write!(f, ")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, 0, f)
    }
}

impl From<SimpleType> for String {
    fn from(ty: SimpleType) -> String {
        ty.to_string()
    }
}

impl TryFrom<String> for SimpleType {
    type Error = crate::Error;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        crate::syntax::parse_type(&s)
    }
}

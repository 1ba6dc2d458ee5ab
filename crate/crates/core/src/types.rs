//! Simple types over the single base type `B`.

use std::fmt;
use std::sync::Arc;

/// A simple type: either the base type of truth values or a function type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base,
    Arrow(Arc<Type>, Arc<Type>),
}

impl Type {
    pub fn base() -> Type {
        Type::Base
    }

    pub fn arrow(dom: Type, cod: Type) -> Type {
        Type::Arrow(Arc::new(dom), Arc::new(cod))
    }

    /// `σ1 -> ... -> σn -> B` with the given argument types.
    pub fn curried(args: &[Type]) -> Type {
        args.iter()
            .rev()
            .fold(Type::Base, |acc, a| Type::arrow(a.clone(), acc))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Base)
    }

    pub fn split(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Base => None,
            Type::Arrow(d, c) => Some((d, c)),
        }
    }

    pub fn domain(&self) -> Option<&Type> {
        self.split().map(|(d, _)| d)
    }

    pub fn codomain(&self) -> Option<&Type> {
        self.split().map(|(_, c)| c)
    }

    /// Argument types of the uncurried view `σ1 ... σn B`.
    pub fn arguments(&self) -> Vec<Type> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Type::Arrow(d, c) = cur {
            out.push((**d).clone());
            cur = c;
        }
        out
    }

    /// Prefix code used to tag generated variable names: `b` for the base
    /// type, `a` followed by the codes of domain and codomain for arrows.
    pub fn code(&self) -> String {
        let mut s = String::new();
        self.write_code(&mut s);
        s
    }

    fn write_code(&self, out: &mut String) {
        match self {
            Type::Base => out.push('b'),
            Type::Arrow(d, c) => {
                out.push('a');
                d.write_code(out);
                c.write_code(out);
            }
        }
    }

    pub(crate) fn fingerprint(&self) -> u64 {
        match self {
            Type::Base => 0x9e37_79b9_7f4a_7c15,
            Type::Arrow(d, c) => crate::term::mix(
                crate::term::mix(0x51_7cc1_b727_220a, d.fingerprint()),
                c.fingerprint(),
            ),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base => write!(f, "B"),
            Type::Arrow(d, c) => {
                if d.is_base() {
                    write!(f, "B->{}", c)
                } else {
                    write!(f, "({})->{}", d, c)
                }
            }
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

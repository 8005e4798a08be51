//! Interned symbols and polynomial variables.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Mutex, OnceLock};

/// An interned, immortal string. Equality is pointer equality; ordering is by content.
#[derive(Clone, Copy)]
pub struct Sym(&'static str);

fn interner() -> &'static Mutex<HashSet<&'static str>> {
    static TABLE: OnceLock<Mutex<HashSet<&'static str>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(HashSet::new()))
}

impl Sym {
    pub fn new(name: &str) -> Sym {
        let mut table = interner().lock().expect("symbol table poisoned");
        if let Some(s) = table.get(name) {
            return Sym(s);
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        table.insert(leaked);
        Sym(leaked)
    }

    pub fn as_str(&self) -> &'static str {
        self.0
    }
}

impl PartialEq for Sym {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.0.as_ptr(), other.0.as_ptr()) && self.0.len() == other.0.len()
    }
}

impl Eq for Sym {}

impl Hash for Sym {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialOrd for Sym {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Sym {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.0.cmp(other.0)
        }
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

/// Parameters that sort ahead of all others, in this order.
const PARAM_RANK: [&str; 7] = ["alpha", "beta", "a", "b", "c", "gamma", "gamma1"];

fn param_rank(s: Sym) -> usize {
    PARAM_RANK
        .iter()
        .position(|p| *p == s.as_str())
        .unwrap_or(PARAM_RANK.len())
}

/// A polynomial variable: one of the reserved indeterminates or a named parameter.
///
/// The derived order is the fixed variable order used for graded-lex term ordering:
/// `∂ < λ < μ < ν <` parameters.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    /// ∂, the translation operator.
    D,
    /// λ, the first bracket slot.
    Lambda,
    /// μ, the second bracket slot.
    Mu,
    /// ν, the scratch slot used for nested brackets.
    Nu,
    Param(Sym),
}

impl Var {
    pub fn param(name: &str) -> Var {
        Var::Param(Sym::new(name))
    }

    pub fn is_indeterminate(&self) -> bool {
        !matches!(self, Var::Param(_))
    }

    /// Name in the ASCII expression grammar.
    pub fn ascii(&self) -> &'static str {
        match self {
            Var::D => "d",
            Var::Lambda => "l",
            Var::Mu => "m",
            Var::Nu => "n",
            Var::Param(s) => s.as_str(),
        }
    }

    fn key(&self) -> (u8, usize) {
        match self {
            Var::D => (0, 0),
            Var::Lambda => (1, 0),
            Var::Mu => (2, 0),
            Var::Nu => (3, 0),
            Var::Param(s) => (4, param_rank(*s)),
        }
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key()).then_with(|| match (self, other) {
            (Var::Param(a), Var::Param(b)) => a.cmp(b),
            _ => Ordering::Equal,
        })
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ascii())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.ascii())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_stable() {
        let a = Sym::new("alpha");
        let b = Sym::new(&String::from("alpha"));
        assert_eq!(a, b);
        assert_eq!(a.as_str().as_ptr(), b.as_str().as_ptr());
    }

    #[test]
    fn variable_order() {
        let order = [
            Var::D,
            Var::Lambda,
            Var::Mu,
            Var::Nu,
            Var::param("alpha"),
            Var::param("beta"),
            Var::param("a"),
            Var::param("b"),
            Var::param("c"),
            Var::param("gamma1"),
            Var::param("u0"),
            Var::param("u1"),
        ];
        for w in order.windows(2) {
            assert!(w[0] < w[1], "{:?} < {:?}", w[0], w[1]);
        }
    }
}

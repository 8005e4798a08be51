//! Lie conformal algebras given by generators and a λ-bracket table.
//!
//! Elements are finitely supported maps from generators to polynomials. A coefficient is a
//! polynomial in ∂ (acting on the generator) and possibly in bracket slots λ, μ, ν and
//! parameters, so the same [`Element`] type represents members of A and of ℂ[λ]⊗A.

pub mod algebras;
pub mod checks;
pub mod spec_file;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::sym::{Sym, Var};

pub use algebras::{
    CurrentAlgebra, GcN, HeisenbergVirasoro, HvAb, LieAlgebra, ParamValue, SemidirectVirCur, Virasoro,
};
pub use spec_file::{emit_spec, AlgebraSpec, SpecAlgebra};

/// Generator pairs whose bracket is defined, and the rest.
pub type PairSplit = (Vec<(GenId, GenId)>, Vec<(GenId, GenId)>);

/// A generator: a family tag, optionally indexed (`H_3`, `J12_2`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GenId {
    pub family: Sym,
    pub index: Option<i64>,
}

impl GenId {
    pub fn plain(family: &str) -> Self {
        GenId { family: Sym::new(family), index: None }
    }

    pub fn indexed(family: &str, index: i64) -> Self {
        GenId { family: Sym::new(family), index: Some(index) }
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            None => write!(f, "{}", self.family),
            Some(i) => write!(f, "{}_{}", self.family, i),
        }
    }
}

impl fmt::Debug for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GenId {
    type Err = Error;

    /// `L`, `H_2`, `H_-1`, `J12_3`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("malformed generator name `{s}`"));
        let (family, index) = match s.rsplit_once('_') {
            Some((fam, idx)) if idx.parse::<i64>().is_ok() => (fam, Some(idx.parse::<i64>().unwrap())),
            _ => (s, None),
        };
        if family.is_empty() || !family.chars().all(|c| c.is_alphanumeric()) {
            return Err(bad());
        }
        Ok(GenId { family: Sym::new(family), index })
    }
}

/// Finitely supported ℚ[∂, slots, parameters]-combination of generators.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<GenId, Poly>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn gen(g: GenId) -> Self {
        Self::term(g, Poly::one())
    }

    pub fn term(g: GenId, p: Poly) -> Self {
        let mut e = Element::zero();
        e.add_term(g, p);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (GenId, Poly)>) -> Self {
        let mut e = Element::zero();
        for (g, p) in terms {
            e.add_term(g, p);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GenId, &Poly)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = GenId> + '_ {
        self.terms.keys().copied()
    }

    pub fn coeff(&self, g: GenId) -> Poly {
        self.terms.get(&g).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: GenId, p: Poly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(g) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += p;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &Element) {
        for (g, p) in &other.terms {
            self.add_term(*g, p.clone());
        }
    }

    pub fn sub(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (g, p) in &other.terms {
            out.add_term(*g, -p);
        }
        out
    }

    pub fn neg(&self) -> Element {
        self.map(|p| -p)
    }

    /// Multiplies every coefficient by `p`.
    pub fn scale(&self, p: &Poly) -> Element {
        self.map(|c| c * p)
    }

    /// ∂·x.
    pub fn partial(&self) -> Element {
        self.scale(&Poly::d())
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> Element {
        let mut out = Element::zero();
        for (g, p) in &self.terms {
            out.add_term(*g, f(p));
        }
        out
    }

    pub fn substitute(&self, v: Var, expr: &Poly) -> Element {
        self.map(|p| p.substitute(v, expr))
    }

    pub fn substitute_many(&self, subs: &[(Var, Poly)]) -> Element {
        self.map(|p| p.substitute_many(subs))
    }

    /// Restriction to the generators satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(GenId) -> bool) -> Element {
        Element {
            terms: self.terms.iter().filter(|(g, _)| keep(**g)).map(|(g, p)| (*g, p.clone())).collect(),
        }
    }

    /// Every nonzero coefficient together with its generator, in order.
    pub fn into_terms(self) -> BTreeMap<GenId, Poly> {
        self.terms
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (g, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if p.is_one() {
                write!(f, "{g}")?;
            } else if p.len() == 1 && !p.to_string().starts_with('-') {
                write!(f, "{p}*{g}")?;
            } else {
                write!(f, "({p})*{g}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rank {
    Finite,
    Infinite,
}

/// One generator family, for emitting spec files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    /// Inclusive index range for indexed families; `None` for a single generator.
    pub range: Option<(i64, Option<i64>)>,
}

/// A graded Lie conformal algebra presented by generators and the table `[g_λ h]`.
pub trait ConformalAlgebra: Send + Sync {
    fn name(&self) -> String;

    fn parameters(&self) -> Vec<Sym> {
        Vec::new()
    }

    fn families(&self) -> Vec<Family>;

    fn rank(&self) -> Rank;

    /// Rejects generators outside the declared ranges.
    fn validate(&self, g: GenId) -> Result<()>;

    fn grade(&self, g: GenId) -> i64;

    /// Generators with grade in `[lo, hi]`, in a fixed order.
    fn window(&self, lo: i64, hi: i64) -> Vec<GenId>;

    /// `[g_λ h]` with coefficients in ∂, λ and parameters.
    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element>;
}

fn check_gen(a: &dyn ConformalAlgebra, g: GenId) -> Result<()> {
    a.validate(g)
}

/// `[x_s y]` for an arbitrary slot expression `s`, by sesquilinear extension:
/// `[f(∂)g _s p(∂)h] = f(−s)·p(∂+s)·[g_λ h]|_{λ=s}`.
pub fn bracket(a: &dyn ConformalAlgebra, x: &Element, y: &Element, slot: &Poly) -> Result<Element> {
    let minus_slot = -slot;
    let shifted = &Poly::d() + slot;
    let slot_is_lambda = *slot == Poly::lambda();
    let mut out = Element::zero();
    for (g, f) in x.iter() {
        check_gen(a, *g)?;
        let left = if f.contains_var(Var::D) { f.substitute(Var::D, &minus_slot) } else { f.clone() };
        for (h, p) in y.iter() {
            check_gen(a, *h)?;
            let table = a.bracket_generators(*g, *h)?;
            if table.is_zero() {
                continue;
            }
            let right = if p.contains_var(Var::D) { p.substitute(Var::D, &shifted) } else { p.clone() };
            let factor = &left * &right;
            for (k, t) in table.iter() {
                let t = if slot_is_lambda { t.clone() } else { t.substitute(Var::Lambda, slot) };
                out.add_term(*k, &factor * &t);
            }
        }
    }
    Ok(out)
}

/// `[x_v y]` in the slot variable `v`.
pub fn bracket_in(a: &dyn ConformalAlgebra, x: &Element, y: &Element, v: Var) -> Result<Element> {
    bracket(a, x, y, &Poly::var(v))
}

/// `[g_λ h]` for generators.
pub fn bracket_gens(a: &dyn ConformalAlgebra, g: GenId, h: GenId) -> Result<Element> {
    bracket_in(a, &Element::gen(g), &Element::gen(h), Var::Lambda)
}

/// `(ad x)_λ^n (y)`, the same λ at every step.
pub fn iterated_ad(a: &dyn ConformalAlgebra, x: &Element, y: &Element, n: usize) -> Result<Element> {
    let mut cur = y.clone();
    for _ in 0..n {
        if cur.is_zero() {
            break;
        }
        cur = bracket_in(a, x, &cur, Var::Lambda)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_names_round_trip() {
        for s in ["L", "H_2", "H_-1", "J12_3", "e"] {
            assert_eq!(s.parse::<GenId>().unwrap().to_string(), s);
        }
        assert!("H_".parse::<GenId>().is_err());
        assert!("".parse::<GenId>().is_err());
    }

    #[test]
    fn element_arithmetic() {
        let l = GenId::plain("L");
        let x = Element::term(l, Poly::d());
        assert!(x.sub(&x).is_zero());
        assert_eq!(Element::gen(l).partial(), x);
        assert_eq!(x.to_string(), "d*L");
    }
}

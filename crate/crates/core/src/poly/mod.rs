//! Exact sparse multivariate polynomials over ℚ.
//!
//! Variables are the reserved indeterminates ∂, λ, μ, ν and any number of named
//! parameters. Terms are kept in a `BTreeMap` keyed by graded-lex monomials, so two
//! polynomials are equal exactly when their term maps are equal. Parameters may carry
//! negative exponents (Laurent monomials), which lets closed forms like `a/b` be
//! written without leaving the ring; indeterminates never do.

mod parse;

pub use parse::{parse, parse_with, ParseContext};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::sym::{Sym, Var};

/// Arbitrary-precision rational.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// A power product with exponents sorted by variable order; no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[(Var, i32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, e: i32) -> Self {
        if e == 0 {
            return Self::one();
        }
        assert!(
            e > 0 || !v.is_indeterminate(),
            "negative exponent on indeterminate {v}"
        );
        let mut s = SmallVec::new();
        s.push((v, e));
        Monomial(s)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0.iter().copied()
    }

    /// Splits off the exponent of `v`, returning it with the remaining monomial.
    pub fn split(&self, v: Var) -> (i32, Monomial) {
        let mut rest = SmallVec::new();
        let mut e = 0;
        for &(w, k) in &self.0 {
            if w == v {
                e = k;
            } else {
                rest.push((w, k));
            }
        }
        (e, Monomial(rest))
    }

    /// Product of monomials. Panics on exponent overflow.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.checked_mul(other).expect("monomial exponent overflow")
    }

    pub fn checked_mul(&self, other: &Monomial) -> Result<Monomial> {
        let (a, b) = (&self.0, &other.0);
        let mut out: SmallVec<[(Var, i32); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    let e = a[i].1.checked_add(b[j].1).ok_or(Error::ExponentOverflow)?;
                    if e != 0 {
                        out.push((a[i].0, e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Ok(Monomial(out))
    }

    /// True if every variable of the monomial satisfies `pred`.
    pub fn all_vars(&self, mut pred: impl FnMut(Var) -> bool) -> bool {
        self.0.iter().all(|(v, _)| pred(*v))
    }

    /// Keeps only the variables for which `keep` holds.
    pub fn restrict(&self, mut keep: impl FnMut(Var) -> bool) -> Monomial {
        Monomial(self.0.iter().copied().filter(|(v, _)| keep(*v)).collect())
    }

    /// Exact monomial quotient if `other` divides `self` (exponent-wise, no negatives created
    /// on indeterminates).
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.clone();
        for &(v, e) in &other.0 {
            let have = out.exponent(v);
            let left = have - e;
            if v.is_indeterminate() && left < 0 {
                return None;
            }
            out = out.with_exponent(v, left);
        }
        Some(out)
    }

    fn with_exponent(&self, v: Var, e: i32) -> Monomial {
        let mut s: SmallVec<[(Var, i32); 4]> = self.0.iter().copied().filter(|(w, _)| *w != v).collect();
        if e != 0 {
            let pos = s.iter().position(|(w, _)| *w > v).unwrap_or(s.len());
            s.insert(pos, (v, e));
        }
        Monomial(s)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree, then exponents in variable order.
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.total_degree().cmp(&other.total_degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(&(_, ea)), None) => return ea.cmp(&0),
                (None, Some(&(_, eb))) => return 0.cmp(&eb),
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(&eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return ea.cmp(&0),
                    Ordering::Greater => return 0.cmp(&eb),
                },
            }
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial with rational coefficients in canonical form (no zero coefficients).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Self::term(Q::one(), Monomial::var(v, 1))
    }

    pub fn param(name: &str) -> Self {
        Self::var(Var::param(name))
    }

    /// ∂
    pub fn d() -> Self {
        Self::var(Var::D)
    }

    /// λ
    pub fn lambda() -> Self {
        Self::var(Var::Lambda)
    }

    /// μ
    pub fn mu() -> Self {
        Self::var(Var::Mu)
    }

    /// ν
    pub fn nu() -> Self {
        Self::var(Var::Nu)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_zero() {
            return Some(Q::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Monomial::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Largest exponent of `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<i32> {
        self.terms.keys().map(|m| m.exponent(v)).max()
    }

    /// Degree in the given set of variables.
    pub fn degree_in_vars(&self, vars: &BTreeSet<Var>) -> Option<i64> {
        self.terms
            .keys()
            .map(|m| m.iter().filter(|(v, _)| vars.contains(v)).map(|(_, e)| e as i64).sum())
            .max()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.iter().map(|(v, _)| v)).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exponent(v) != 0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_term(&self, c: &Q, m: &Monomial) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(n, k)| (n.mul(m), k * c)).collect(),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &Poly, c: &Q, m: &Monomial) {
        for (n, k) in &other.terms {
            self.add_term(n.mul(m), k * c);
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Replaces every occurrence of `v` by `expr`.
    ///
    /// Negative exponents of `v` (parameters only) require `expr` to be a single nonzero term.
    pub fn substitute(&self, v: Var, expr: &Poly) -> Poly {
        if !self.contains_var(v) {
            return self.clone();
        }
        let mut powers = PowerCache::new(expr.clone());
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e == 0 {
                out.add_term(rest, c.clone());
            } else {
                out.add_scaled(powers.get(e), c, &rest);
            }
        }
        out
    }

    /// Simultaneous substitution of several variables.
    pub fn substitute_many(&self, subs: &[(Var, Poly)]) -> Poly {
        if subs.is_empty() {
            return self.clone();
        }
        let mut caches: Vec<PowerCache> = subs.iter().map(|(_, p)| PowerCache::new(p.clone())).collect();
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut rest = m.clone();
            let mut factor: Option<Poly> = None;
            for (k, (v, _)) in subs.iter().enumerate() {
                let (e, r) = rest.split(*v);
                if e != 0 {
                    rest = r;
                    let p = caches[k].get(e);
                    factor = Some(match factor {
                        None => p.clone(),
                        Some(f) => &f * p,
                    });
                }
            }
            match factor {
                None => out.add_term(rest, c.clone()),
                Some(f) => out.add_scaled(&f, c, &rest),
            }
        }
        out
    }

    /// Renames variable `from` to `to` (which must not already occur).
    pub fn rename(&self, from: Var, to: Var) -> Poly {
        if from == to {
            return self.clone();
        }
        self.substitute(from, &Poly::var(to))
    }

    /// Coefficient of `v^k`, a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: Var, k: i32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e == k {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Decomposes as Σ_k coeff_k · v^k.
    pub fn coefficients_in(&self, v: Var) -> BTreeMap<i32, Poly> {
        let mut out: BTreeMap<i32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Groups terms by their restriction to the variables in `outer`, giving
    /// `self = Σ outer_monomial · inner_poly`.
    pub fn collect_by(&self, outer: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Poly> {
        let mut out: BTreeMap<Monomial, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let o = m.restrict(&outer);
            let i = m.restrict(|v| !outer(v));
            out.entry(o).or_default().add_term(i, c.clone());
        }
        out
    }

    /// Specializes parameters to rational values. Every parameter present must be assigned.
    pub fn eval_params(&self, assignment: &BTreeMap<Sym, Q>) -> Result<Poly> {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.iter() {
                match v {
                    Var::Param(s) => {
                        let val = assignment
                            .get(&s)
                            .ok_or_else(|| Error::MissingParameter(s.to_string()))?;
                        if e < 0 && val.is_zero() {
                            return Err(Error::DivisionByZero(format!("{s} = 0 in a denominator")));
                        }
                        coef *= num::pow::Pow::pow(val, e);
                    }
                    _ => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            out.add_term(rest, coef);
        }
        Ok(out)
    }

    /// Specializes only the parameters present in `assignment`, leaving others symbolic.
    pub fn eval_partial(&self, assignment: &BTreeMap<Sym, Q>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Monomial::one();
            for (v, e) in m.iter() {
                match v {
                    Var::Param(s) if assignment.contains_key(&s) => {
                        let val = &assignment[&s];
                        assert!(e >= 0 || !val.is_zero(), "division by zero specializing {s}");
                        coef *= num::pow::Pow::pow(val, e);
                    }
                    _ => rest = rest.mul(&Monomial::var(v, e)),
                }
            }
            out.add_term(rest, coef);
        }
        out
    }

    /// Divides by the leading coefficient so the leading term is monic.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            None => Poly::zero(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    /// Division with remainder by `divisor` viewed as a polynomial in `v`, whose leading
    /// coefficient in `v` must be a nonzero constant.
    pub fn div_rem_in(&self, divisor: &Poly, v: Var) -> Result<(Poly, Poly)> {
        let dd = divisor
            .degree_in(v)
            .ok_or_else(|| Error::DivisionByZero("zero divisor".into()))?;
        let lc = divisor
            .coeff_of(v, dd)
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Invalid(format!("divisor is not monic in {v}")))?;
        let inv = lc.recip();
        let mut quot = Poly::zero();
        let mut rem = self.clone();
        while let Some(dr) = rem.degree_in(v) {
            if dr < dd {
                break;
            }
            let lead = rem.coeff_of(v, dr);
            let t = &lead.scale(&inv) * &Poly::term(Q::one(), Monomial::var(v, dr - dd));
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Ok((quot, rem))
    }

    /// Formal partial derivative with respect to `v`.
    pub fn derivative(&self, v: Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split(v);
            if e != 0 {
                out.add_term(rest.mul(&Monomial::var(v, e - 1)), c * q(e as i64));
            }
        }
        out
    }

    /// True if all coefficients are integers.
    pub fn map_coefficients(&self, f: impl Fn(&Q) -> Q) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }
}

struct PowerCache {
    base: Poly,
    pos: Vec<Poly>,
}

impl PowerCache {
    fn new(base: Poly) -> Self {
        PowerCache { base, pos: vec![Poly::one()] }
    }

    fn get(&mut self, e: i32) -> &Poly {
        if e < 0 {
            // Laurent parameter: only monomial images can be inverted.
            let (m, c) = match (self.base.terms.len(), self.base.leading_term()) {
                (1, Some((m, c))) => (m.clone(), c.clone()),
                _ => panic!("cannot substitute a non-monomial into a negative power"),
            };
            let inv = Monomial(m.0.iter().map(|(v, k)| (*v, -k)).collect());
            let p = Poly::term(c.recip(), inv).pow((-e) as u32);
            self.pos.push(p);
            return self.pos.last().unwrap();
        }
        let e = e as usize;
        while self.pos.len() <= e {
            let next = &self.pos[self.pos.len() - 1] * &self.base;
            self.pos.push(next);
        }
        &self.pos[e]
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Self {
        Poly::int(n)
    }
}

impl From<Q> for Poly {
    fn from(c: Q) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += rhs;
        self
    }
}

impl AddAssign<Poly> for Poly {
    fn add_assign(&mut self, rhs: Poly) {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            for (n, k) in &rhs.terms {
                out.add_term(m.mul(n), c * k);
            }
        }
        out
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &Q) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Prints in the ASCII expression grammar, highest term first; re-parseable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write_rational(f, &a)?;
                continue;
            }
            if !a.is_one() {
                write_rational(f, &a)?;
                f.write_str("*")?;
            }
            write!(f, "{m:?}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Poly {
        parse(s).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p("d + l") + &p("d - l"), p("2*d"));
        let x = p("d^2 + 3*l");
        assert_eq!(&x + &Poly::zero(), x);
        assert!((&p("d + 2*l") + &p("-d - 2*l")).is_zero());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p("d + l") * &p("d - l"), p("d^2 - l^2"));
        let x = p("d*l + 1/2");
        assert_eq!(&x * &Poly::one(), x);
        assert!((&x * &Poly::zero()).is_zero());
    }

    #[test]
    fn degree_is_additive_under_mul() {
        let x = p("d^2*l + 3");
        let y = p("l^3 - d");
        assert_eq!((&x * &y).total_degree(), Some(6));
    }

    #[test]
    fn substitute_examples() {
        let minus_l_d = p("-d - l");
        assert_eq!(p("d + 2*l").substitute(Var::Lambda, &minus_l_d), p("-d - 2*l"));
        assert!(p("l^2").substitute(Var::Lambda, &Poly::zero()).is_zero());
        let x = parse_with("d + (2 - alpha)*l - beta", &ParseContext::with_params(&["alpha", "beta"])).unwrap();
        let expect = parse_with(
            "(alpha - 1)*d + (alpha - 2)*l - beta",
            &ParseContext::with_params(&["alpha", "beta"]),
        )
        .unwrap();
        assert_eq!(x.substitute(Var::Lambda, &minus_l_d), expect);
    }

    #[test]
    fn coeff_of_examples() {
        assert_eq!(p("d + 2*l").coeff_of(Var::Lambda, 1), Poly::int(2));
        assert_eq!(p("d + 2*l").coeff_of(Var::Lambda, 0), p("d"));
        assert_eq!(p("d^2*l + 3*l^2").coeff_of(Var::Lambda, 2), Poly::int(3));
    }

    #[test]
    fn eval_params_examples() {
        let ctx = ParseContext::with_params(&["alpha", "beta"]);
        let mut asg = BTreeMap::new();
        asg.insert(Sym::new("alpha"), q(1));
        assert!(parse_with("(alpha - 1)*d", &ctx).unwrap().eval_params(&asg).unwrap().is_zero());
        asg.insert(Sym::new("alpha"), q(2));
        asg.insert(Sym::new("beta"), q(1));
        let x = parse_with("d + (2 - alpha)*l - beta", &ctx).unwrap();
        assert_eq!(x.eval_params(&asg).unwrap(), p("d - 1"));
        assert_eq!(p("l").eval_params(&BTreeMap::new()).unwrap(), p("l"));
        let missing = parse_with("alpha*d", &ctx).unwrap().eval_params(&BTreeMap::new());
        assert_eq!(missing, Err(Error::MissingParameter("alpha".into())));
    }

    #[test]
    fn laurent_parameters() {
        let ctx = ParseContext::with_params(&["a"]);
        let x = parse_with("a^-1", &ctx).unwrap();
        assert_eq!(&x * &Poly::param("a"), Poly::one());
        assert_eq!(parse_with(&x.to_string(), &ctx).unwrap(), x);
        let mut asg = BTreeMap::new();
        asg.insert(Sym::new("a"), q(4));
        assert_eq!(x.eval_params(&asg).unwrap(), Poly::constant(q_frac(1, 4)));
        asg.insert(Sym::new("a"), q(0));
        assert!(matches!(x.eval_params(&asg), Err(Error::DivisionByZero(_))));
    }

    #[test]
    fn division_by_monic() {
        let num = p("d^2 + 3*d*l + 2*l^2");
        let (quot, rem) = num.div_rem_in(&p("d + l"), Var::D).unwrap();
        assert_eq!(quot, p("d + 2*l"));
        assert!(rem.is_zero());
        let (_, rem) = p("d^2 + 1").div_rem_in(&p("d + 1"), Var::D).unwrap();
        assert_eq!(rem, p("2"));
    }

    #[test]
    fn exponent_overflow_is_reported() {
        let big = Monomial::var(Var::D, i32::MAX);
        assert_eq!(big.checked_mul(&Monomial::var(Var::D, 1)), Err(Error::ExponentOverflow));
    }

    #[test]
    fn printing_is_canonical() {
        assert_eq!(p("2*l + d").to_string(), "d + 2*l");
        assert_eq!(p("-(l - 3/2)*d").to_string(), "-d*l + 3/2*d");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}

//! Builtin presentations: Vir, Cur 𝔤, Vir ⋉ Cur 𝔤, HV, HV(α,β) and gc_N.

use std::collections::BTreeMap;

use num::Zero;

use super::{ConformalAlgebra, Element, Family, GenId, Rank};
use crate::error::{Error, Result};
use crate::poly::{q, Poly, Q};
use crate::sym::{Sym, Var};

fn d_plus(k: i64) -> Poly {
    // ∂ + kλ
    &Poly::d() + &Poly::lambda().scale(&q(k))
}

fn reject(g: GenId) -> Error {
    Error::InvalidGenerator(g.to_string())
}

/// The Virasoro conformal algebra: `[L_λ L] = (∂+2λ)L`.
#[derive(Clone, Debug, Default)]
pub struct Virasoro;

impl ConformalAlgebra for Virasoro {
    fn name(&self) -> String {
        "vir".into()
    }

    fn families(&self) -> Vec<Family> {
        vec![Family { name: "L".into(), range: None }]
    }

    fn rank(&self) -> Rank {
        Rank::Finite
    }

    fn validate(&self, g: GenId) -> Result<()> {
        if g == GenId::plain("L") {
            Ok(())
        } else {
            Err(reject(g))
        }
    }

    fn grade(&self, _g: GenId) -> i64 {
        0
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<GenId> {
        if lo <= 0 && 0 <= hi {
            vec![GenId::plain("L")]
        } else {
            vec![]
        }
    }

    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(Element::term(g, d_plus(2)))
    }
}

/// `[x, y] = Σ c_z z` as `(x, y, [(z, c_z)])`.
pub type StructureEntry<'a> = (&'a str, &'a str, Vec<(&'a str, Q)>);

/// A finite-dimensional Lie algebra given by structure constants on a named basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    basis: Vec<Sym>,
    table: BTreeMap<(usize, usize), Vec<(usize, Q)>>,
}

impl LieAlgebra {
    /// `brackets` lists `[x, y] = Σ c·z` for some pairs; the rest follow by antisymmetry or
    /// vanish. Fails unless the result is antisymmetric and satisfies Jacobi.
    pub fn new(basis: &[&str], brackets: &[StructureEntry]) -> Result<Self> {
        let idx = |s: &str| {
            basis
                .iter()
                .position(|b| *b == s)
                .ok_or_else(|| Error::NotLie(format!("unknown basis element `{s}`")))
        };
        let mut table: BTreeMap<(usize, usize), Vec<(usize, Q)>> = BTreeMap::new();
        for (x, y, val) in brackets {
            let mut v = Vec::new();
            for (z, c) in val {
                if !c.is_zero() {
                    v.push((idx(z)?, c.clone()));
                }
            }
            table.insert((idx(x)?, idx(y)?), v);
        }
        let lie = LieAlgebra { basis: basis.iter().map(|s| Sym::new(s)).collect(), table };
        lie.check()?;
        Ok(lie)
    }

    pub fn sl2() -> Self {
        LieAlgebra::new(
            &["e", "f", "h"],
            &[
                ("e", "f", vec![("h", q(1))]),
                ("f", "e", vec![("h", q(-1))]),
                ("h", "e", vec![("e", q(2))]),
                ("e", "h", vec![("e", q(-2))]),
                ("h", "f", vec![("f", q(-2))]),
                ("f", "h", vec![("f", q(2))]),
            ],
        )
        .expect("sl2 is a Lie algebra")
    }

    pub fn basis(&self) -> &[Sym] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `[b_i, b_j]` as a dense coefficient vector.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        if let Some(v) = self.table.get(&(i, j)) {
            for (k, c) in v {
                out[*k] += c;
            }
        }
        out
    }

    fn bracket_vec(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (i, a) in x.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in y.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                for (k, c) in self.bracket(i, j).into_iter().enumerate() {
                    out[k] += a * b * c;
                }
            }
        }
        out
    }

    fn check(&self) -> Result<()> {
        let n = self.dim();
        let unit = |i: usize| {
            let mut v = vec![Q::zero(); n];
            v[i] = q(1);
            v
        };
        for i in 0..n {
            for j in 0..n {
                let s: Vec<Q> = self.bracket(i, j).iter().zip(self.bracket(j, i)).map(|(a, b)| a + b).collect();
                if s.iter().any(|c| !c.is_zero()) {
                    return Err(Error::NotLie(format!(
                        "[{0},{1}] + [{1},{0}] != 0",
                        self.basis[i], self.basis[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (unit(i), unit(j), unit(k));
                    let a = self.bracket_vec(&x, &self.bracket_vec(&y, &z));
                    let b = self.bracket_vec(&y, &self.bracket_vec(&z, &x));
                    let c = self.bracket_vec(&z, &self.bracket_vec(&x, &y));
                    if a.iter().zip(&b).zip(&c).any(|((a, b), c)| !(a + b + c).is_zero()) {
                        return Err(Error::NotLie(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.basis[i], self.basis[j], self.basis[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn gens(&self) -> Vec<GenId> {
        self.basis.iter().map(|s| GenId { family: *s, index: None }).collect()
    }

    fn position(&self, g: GenId) -> Option<usize> {
        if g.index.is_some() {
            return None;
        }
        self.basis.iter().position(|s| *s == g.family)
    }

    fn bracket_element(&self, i: usize, j: usize) -> Element {
        Element::from_terms(
            self.bracket(i, j)
                .into_iter()
                .enumerate()
                .map(|(k, c)| (GenId { family: self.basis[k], index: None }, Poly::constant(c))),
        )
    }
}

/// The current conformal algebra: `[a_λ b] = [a, b]`.
#[derive(Clone, Debug)]
pub struct CurrentAlgebra {
    pub lie: LieAlgebra,
    pub label: String,
}

impl CurrentAlgebra {
    pub fn new(lie: LieAlgebra, label: &str) -> Self {
        CurrentAlgebra { lie, label: label.into() }
    }

    pub fn sl2() -> Self {
        Self::new(LieAlgebra::sl2(), "sl2")
    }
}

impl ConformalAlgebra for CurrentAlgebra {
    fn name(&self) -> String {
        format!("cur_{}", self.label)
    }

    fn families(&self) -> Vec<Family> {
        self.lie.basis.iter().map(|s| Family { name: s.to_string(), range: None }).collect()
    }

    fn rank(&self) -> Rank {
        Rank::Finite
    }

    fn validate(&self, g: GenId) -> Result<()> {
        self.lie.position(g).map(|_| ()).ok_or_else(|| reject(g))
    }

    fn grade(&self, _g: GenId) -> i64 {
        0
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<GenId> {
        if lo <= 0 && 0 <= hi {
            self.lie.gens()
        } else {
            vec![]
        }
    }

    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element> {
        let i = self.lie.position(g).ok_or_else(|| reject(g))?;
        let j = self.lie.position(h).ok_or_else(|| reject(h))?;
        Ok(self.lie.bracket_element(i, j))
    }
}

/// Vir ⋉ Cur 𝔤: `[L_λ a] = (∂+λ)a`, `[a_λ L] = λa`.
#[derive(Clone, Debug)]
pub struct SemidirectVirCur {
    pub cur: CurrentAlgebra,
}

impl SemidirectVirCur {
    pub fn new(cur: CurrentAlgebra) -> Result<Self> {
        if cur.lie.basis.iter().any(|s| s.as_str() == "L") {
            return Err(Error::Invalid("current basis may not contain `L`".into()));
        }
        Ok(SemidirectVirCur { cur })
    }

    pub fn sl2() -> Self {
        Self::new(CurrentAlgebra::sl2()).expect("sl2 basis avoids L")
    }
}

impl ConformalAlgebra for SemidirectVirCur {
    fn name(&self) -> String {
        format!("vir_cur_{}", self.cur.label)
    }

    fn families(&self) -> Vec<Family> {
        let mut f = vec![Family { name: "L".into(), range: None }];
        f.extend(self.cur.families());
        f
    }

    fn rank(&self) -> Rank {
        Rank::Finite
    }

    fn validate(&self, g: GenId) -> Result<()> {
        if g == GenId::plain("L") {
            Ok(())
        } else {
            self.cur.validate(g)
        }
    }

    fn grade(&self, _g: GenId) -> i64 {
        0
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<GenId> {
        if lo <= 0 && 0 <= hi {
            let mut v = vec![GenId::plain("L")];
            v.extend(self.cur.lie.gens());
            v
        } else {
            vec![]
        }
    }

    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element> {
        let l = GenId::plain("L");
        self.validate(g)?;
        self.validate(h)?;
        Ok(match (g == l, h == l) {
            (true, true) => Element::term(l, d_plus(2)),
            (true, false) => Element::term(h, d_plus(1)),
            (false, true) => Element::term(g, Poly::lambda()),
            (false, false) => self.cur.bracket_generators(g, h)?,
        })
    }
}

/// The Heisenberg–Virasoro conformal algebra on `L, H`.
#[derive(Clone, Debug, Default)]
pub struct HeisenbergVirasoro;

impl ConformalAlgebra for HeisenbergVirasoro {
    fn name(&self) -> String {
        "hv".into()
    }

    fn families(&self) -> Vec<Family> {
        vec![Family { name: "L".into(), range: None }, Family { name: "H".into(), range: None }]
    }

    fn rank(&self) -> Rank {
        Rank::Finite
    }

    fn validate(&self, g: GenId) -> Result<()> {
        if g == GenId::plain("L") || g == GenId::plain("H") {
            Ok(())
        } else {
            Err(reject(g))
        }
    }

    fn grade(&self, _g: GenId) -> i64 {
        0
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<GenId> {
        if lo <= 0 && 0 <= hi {
            vec![GenId::plain("L"), GenId::plain("H")]
        } else {
            vec![]
        }
    }

    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element> {
        self.validate(g)?;
        self.validate(h)?;
        let (l, hh) = (GenId::plain("L"), GenId::plain("H"));
        Ok(match (g == l, h == l) {
            (true, true) => Element::term(l, d_plus(2)),
            (true, false) => Element::term(hh, d_plus(1)),
            (false, true) => Element::term(hh, Poly::lambda()),
            (false, false) => Element::zero(),
        })
    }
}

/// A parameter that is either kept symbolic or fixed to a rational value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamValue {
    Symbolic,
    Value(Q),
}

/// HV(α,β): generators `L` and `H_i`, `i ≥ −1`, with
/// `[L_λ H_i] = (∂ + (iα−i+1)λ + iβ)H_i` and `[H_i λ H_j] = (j−i)H_{i+j}`.
#[derive(Clone, Debug)]
pub struct HvAb {
    alpha: Poly,
    beta: Poly,
    symbolic: Vec<Sym>,
}

impl HvAb {
    pub fn new(alpha: ParamValue, beta: ParamValue) -> Self {
        let mut symbolic = Vec::new();
        let mut resolve = |name: &str, v: ParamValue| match v {
            ParamValue::Symbolic => {
                symbolic.push(Sym::new(name));
                Poly::param(name)
            }
            ParamValue::Value(c) => Poly::constant(c),
        };
        let alpha = resolve("alpha", alpha);
        let beta = resolve("beta", beta);
        HvAb { alpha, beta, symbolic }
    }

    pub fn symbolic() -> Self {
        Self::new(ParamValue::Symbolic, ParamValue::Symbolic)
    }

    pub fn specialized(alpha: Q, beta: Q) -> Self {
        Self::new(ParamValue::Value(alpha), ParamValue::Value(beta))
    }

    pub fn alpha(&self) -> &Poly {
        &self.alpha
    }

    pub fn beta(&self) -> &Poly {
        &self.beta
    }

    pub fn l() -> GenId {
        GenId::plain("L")
    }

    pub fn h(i: i64) -> GenId {
        GenId::indexed("H", i)
    }

    /// `iα − i + 1`.
    pub fn weight(&self, i: i64) -> Poly {
        &self.alpha.scale(&q(i)) + &Poly::int(1 - i)
    }

    /// `[L_λ H_i]` coefficient `∂ + (iα−i+1)λ + iβ`.
    pub fn l_h(&self, i: i64) -> Poly {
        &(&Poly::d() + &(&self.weight(i) * &Poly::lambda())) + &self.beta.scale(&q(i))
    }

    fn h_index(&self, g: GenId) -> Option<i64> {
        if g.family.as_str() == "H" {
            g.index.filter(|i| *i >= -1)
        } else {
            None
        }
    }
}

impl ConformalAlgebra for HvAb {
    fn name(&self) -> String {
        "hv_ab".into()
    }

    fn parameters(&self) -> Vec<Sym> {
        self.symbolic.clone()
    }

    fn families(&self) -> Vec<Family> {
        vec![
            Family { name: "L".into(), range: None },
            Family { name: "H".into(), range: Some((-1, None)) },
        ]
    }

    fn rank(&self) -> Rank {
        Rank::Infinite
    }

    fn validate(&self, g: GenId) -> Result<()> {
        if g == Self::l() || self.h_index(g).is_some() {
            Ok(())
        } else {
            Err(reject(g))
        }
    }

    fn grade(&self, g: GenId) -> i64 {
        g.index.unwrap_or(0)
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<GenId> {
        let mut v = Vec::new();
        if lo <= 0 && 0 <= hi {
            v.push(Self::l());
        }
        v.extend((lo.max(-1)..=hi).map(Self::h));
        v
    }

    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element> {
        let l = Self::l();
        self.validate(g)?;
        self.validate(h)?;
        Ok(match (self.h_index(g), self.h_index(h)) {
            (None, None) => Element::term(l, d_plus(2)),
            (None, Some(i)) => Element::term(h, self.l_h(i)),
            (Some(i), None) => {
                // skew partner: ((iα−i)∂ + (iα−i+1)λ − iβ)H_i
                let c = &self.alpha.scale(&q(i)) - &Poly::int(i);
                let p = &(&(&c * &Poly::d()) + &(&self.weight(i) * &Poly::lambda())) - &self.beta.scale(&q(i));
                Element::term(g, p)
            }
            (Some(i), Some(j)) => {
                if i == j {
                    Element::zero()
                } else {
                    Element::term(Self::h(i + j), Poly::int(j - i))
                }
            }
        })
    }
}

/// The general conformal algebra gc_N on `J^n_{pq} = x^n E_{pq}`, generator name `Jpq_n`.
#[derive(Clone, Debug)]
pub struct GcN {
    n: usize,
}

impl GcN {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=9).contains(&n) {
            return Err(Error::Invalid(format!("gc_N needs 1 <= N <= 9, got {n}")));
        }
        Ok(GcN { n })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn j(p: usize, r: usize, deg: i64) -> GenId {
        GenId::indexed(&format!("J{p}{r}"), deg)
    }

    fn unit(&self, g: GenId) -> Option<(usize, usize, i64)> {
        let name = g.family.as_str();
        let deg = g.index.filter(|d| *d >= 0)?;
        let digits: Vec<usize> = name.strip_prefix('J')?.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>()?;
        match digits[..] {
            [p, r] if (1..=self.n).contains(&p) && (1..=self.n).contains(&r) => Some((p, r, deg)),
            _ => None,
        }
    }
}

fn binomial(n: i64, k: i64) -> Q {
    let mut c = q(1);
    for t in 0..k {
        c = c * q(n - t) / q(t + 1);
    }
    c
}

impl ConformalAlgebra for GcN {
    fn name(&self) -> String {
        format!("gc{}", self.n)
    }

    fn families(&self) -> Vec<Family> {
        let mut out = Vec::new();
        for p in 1..=self.n {
            for r in 1..=self.n {
                out.push(Family { name: format!("J{p}{r}"), range: Some((0, None)) });
            }
        }
        out
    }

    fn rank(&self) -> Rank {
        Rank::Infinite
    }

    fn validate(&self, g: GenId) -> Result<()> {
        self.unit(g).map(|_| ()).ok_or_else(|| reject(g))
    }

    fn grade(&self, g: GenId) -> i64 {
        g.index.unwrap_or(0)
    }

    fn window(&self, lo: i64, hi: i64) -> Vec<GenId> {
        let mut out = Vec::new();
        for deg in lo.max(0)..=hi {
            for p in 1..=self.n {
                for r in 1..=self.n {
                    out.push(Self::j(p, r, deg));
                }
            }
        }
        out
    }

    /// `Σ_s C(m,s)(λ+∂)^s J^{m+n−s}_{AB} − Σ_s C(n,s)(−λ)^s J^{m+n−s}_{BA}` on matrix units.
    fn bracket_generators(&self, g: GenId, h: GenId) -> Result<Element> {
        let (p, r, m) = self.unit(g).ok_or_else(|| reject(g))?;
        let (s, t, n) = self.unit(h).ok_or_else(|| reject(h))?;
        let mut out = Element::zero();
        let lam_d = &Poly::lambda() + &Poly::d();
        let neg_lam = -Poly::lambda();
        if r == s {
            for k in 0..=m {
                out.add_term(Self::j(p, t, m + n - k), lam_d.pow(k as u32).scale(&binomial(m, k)));
            }
        }
        if t == p {
            for k in 0..=n {
                out.add_term(Self::j(s, r, m + n - k), -neg_lam.pow(k as u32).scale(&binomial(n, k)));
            }
        }
        Ok(out)
    }
}

/// Variables that may appear in a table entry.
pub fn table_vars_ok(e: &Element) -> bool {
    e.iter().all(|(_, p)| p.vars().iter().all(|v| matches!(v, Var::D | Var::Lambda | Var::Param(_))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::{bracket, bracket_gens};
    use crate::poly::{parse, parse_with, ParseContext};

    fn ab(s: &str) -> Poly {
        parse_with(s, &ParseContext::with_params(&["alpha", "beta"])).unwrap()
    }

    #[test]
    fn virasoro_table() {
        let l = GenId::plain("L");
        assert_eq!(bracket_gens(&Virasoro, l, l).unwrap(), Element::term(l, parse("d + 2*l").unwrap()));
    }

    #[test]
    fn hv_ab_table_entries() {
        let a = HvAb::symbolic();
        assert_eq!(
            bracket_gens(&a, HvAb::h(1), HvAb::h(3)).unwrap(),
            Element::term(HvAb::h(4), Poly::int(2))
        );
        assert_eq!(
            bracket_gens(&a, HvAb::l(), HvAb::h(2)).unwrap(),
            Element::term(HvAb::h(2), ab("d + (2*alpha - 1)*l + 2*beta"))
        );
        assert_eq!(
            bracket_gens(&a, HvAb::h(-1), HvAb::l()).unwrap(),
            Element::term(HvAb::h(-1), ab("(1 - alpha)*d + (2 - alpha)*l + beta"))
        );
    }

    #[test]
    fn sesquilinearity_examples() {
        let l = GenId::plain("L");
        let dl = Element::term(l, Poly::d());
        assert_eq!(
            bracket(&Virasoro, &dl, &Element::gen(l), &Poly::lambda()).unwrap(),
            Element::term(l, parse("-l*(d + 2*l)").unwrap())
        );
        let h = GenId::plain("H");
        assert_eq!(
            bracket(&HeisenbergVirasoro, &Element::gen(l), &Element::term(h, Poly::d()), &Poly::lambda()).unwrap(),
            Element::term(h, parse("(d + l)^2").unwrap())
        );
    }

    #[test]
    fn non_lie_constants_rejected() {
        let bad = LieAlgebra::new(&["x", "y"], &[("x", "y", vec![("x", q(1))])]);
        assert!(matches!(bad, Err(Error::NotLie(_))));
    }

    #[test]
    fn out_of_range_generators_rejected() {
        let a = HvAb::symbolic();
        assert!(bracket_gens(&a, HvAb::h(-2), HvAb::l()).is_err());
        assert!(bracket_gens(&Virasoro, GenId::plain("H"), GenId::plain("L")).is_err());
        assert!(GcN::new(2).unwrap().validate(GcN::j(3, 1, 0)).is_err());
    }
}

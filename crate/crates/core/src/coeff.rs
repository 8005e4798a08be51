//! Coefficient algebra Lie(A), its annihilation subalgebra and the extended annihilation
//! algebra, built from j-th products.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde_json::json;

use crate::error::Result;
use crate::lca::{bracket_gens, ConformalAlgebra, Element, GenId, HvAb};
use crate::par::Exec;
use crate::poly::{q, Poly, Q};
use crate::report::{Check, Status};
use crate::sym::Var;

/// A finite combination of modes `g_(n)` with coefficients in ℚ[parameters].
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ModeElement {
    terms: BTreeMap<(GenId, i64), Poly>,
}

impl ModeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn mode(g: GenId, n: i64) -> Self {
        Self::term(g, n, Poly::one())
    }

    pub fn term(g: GenId, n: i64, c: Poly) -> Self {
        let mut e = Self::zero();
        e.add_term(g, n, c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(GenId, i64), &Poly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, g: GenId, n: i64) -> Poly {
        self.terms.get(&(g, n)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, g: GenId, n: i64, c: Poly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((g, n)) {
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

    pub fn add_assign(&mut self, other: &ModeElement) {
        for ((g, n), c) in &other.terms {
            self.add_term(*g, *n, c.clone());
        }
    }

    pub fn add(&self, other: &ModeElement) -> ModeElement {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &ModeElement) -> ModeElement {
        self.add(&other.scale(&Poly::int(-1)))
    }

    pub fn scale(&self, c: &Poly) -> ModeElement {
        let mut out = Self::zero();
        for ((g, n), k) in &self.terms {
            out.add_term(*g, *n, k * c);
        }
        out
    }

    pub fn min_mode(&self) -> Option<i64> {
        self.terms.keys().map(|(_, n)| *n).min()
    }

    /// Relabels every mode through `f`.
    pub fn map_modes(&self, f: impl Fn(GenId, i64) -> i64) -> ModeElement {
        let mut out = Self::zero();
        for ((g, n), c) in &self.terms {
            out.add_term(*g, f(*g, *n), c.clone());
        }
        out
    }
}

impl fmt::Display for ModeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, ((g, n), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if c.is_one() {
                write!(f, "{g}({n})")?;
            } else {
                write!(f, "({c})*{g}({n})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ModeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Falling factorial `n(n−1)…(n−k+1)`.
fn falling(n: i64, k: u32) -> Q {
    (0..k as i64).fold(Q::one(), |acc, t| acc * q(n - t))
}

/// Generalized binomial `C(m, j)` for any integer `m`.
pub fn binom(m: i64, j: u32) -> Q {
    let fact = (1..=j as i64).fold(Q::one(), |acc, t| acc * q(t));
    falling(m, j) / fact
}

/// `x_(n)` for a conformal element `x`, eliminating ∂ through `(∂a)_(n) = −n a_(n−1)`.
pub fn modes_of(x: &Element, n: i64) -> ModeElement {
    let mut out = ModeElement::zero();
    for (g, p) in x.iter() {
        for (k, c) in p.coefficients_in(Var::D) {
            // (∂^k g)_(n) = (−1)^k n(n−1)…(n−k+1) g_(n−k)
            let sign = if k % 2 == 0 { q(1) } else { q(-1) };
            let f = sign * falling(n, k as u32);
            if !f.is_zero() {
                out.add_term(*g, n - k as i64, c.scale(&f));
            }
        }
    }
    out
}

/// The nonzero j-th products `x_(j) y = j!·[λ^j][x_λ y]`.
pub fn jth_products(a: &dyn ConformalAlgebra, x: GenId, y: GenId) -> Result<Vec<(u32, Element)>> {
    let br = bracket_gens(a, x, y)?;
    let mut by_j: BTreeMap<i32, Element> = BTreeMap::new();
    for (g, p) in br.iter() {
        for (j, c) in p.coefficients_in(Var::Lambda) {
            let fact = (1..=j as i64).fold(Q::one(), |acc, t| acc * q(t));
            by_j.entry(j).or_default().add_term(*g, c.scale(&fact));
        }
    }
    Ok(by_j.into_iter().filter(|(_, e)| !e.is_zero()).map(|(j, e)| (j as u32, e)).collect())
}

/// `[x, y]` in Lie(A): `[a_(m), b_(n)] = Σ_j C(m,j) (a_(j)b)_(m+n−j)`.
pub fn mode_bracket(a: &dyn ConformalAlgebra, x: &ModeElement, y: &ModeElement) -> Result<ModeElement> {
    let mut out = ModeElement::zero();
    for ((g, m), c) in x.iter() {
        for ((h, n), k) in y.iter() {
            let ck = c * k;
            for (j, prod) in jth_products(a, *g, *h)? {
                let b = binom(*m, j);
                if b.is_zero() {
                    continue;
                }
                let term = modes_of(&prod, m + n - j as i64);
                out.add_assign(&term.scale(&ck.scale(&b)));
            }
        }
    }
    Ok(out)
}

/// `∂(a_(n)) = −n a_(n−1)`, extended linearly.
pub fn extended_partial(x: &ModeElement) -> ModeElement {
    let mut out = ModeElement::zero();
    for ((g, n), c) in x.iter() {
        out.add_term(*g, n - 1, c.scale(&q(-n)));
    }
    out
}

/// Per-family offsets between the closed-form labels and modes:
/// label `L_m` is `L_(m + l)`, label `H_{i,m}` is `H_i,(m + h)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relabel {
    pub l: i64,
    pub h: i64,
}

/// The relabeling matching the closed-form annihilation table, fixed by [`derive_relabeling`].
pub const RELABEL: Relabel = Relabel { l: 1, h: 0 };

impl Relabel {
    fn shift(&self, g: GenId) -> i64 {
        if g == HvAb::l() {
            self.l
        } else {
            self.h
        }
    }

    pub fn to_modes(&self, x: &ModeElement) -> ModeElement {
        x.map_modes(|g, n| n + self.shift(g))
    }

    pub fn to_labels(&self, x: &ModeElement) -> ModeElement {
        x.map_modes(|g, n| n - self.shift(g))
    }
}

/// Closed-form bracket of labelled basis elements of Lie(HV(α,β))⁺ (labels stored as
/// [`ModeElement`] indices): `[L_m, L_n] = (m−n)L_{m+n}`,
/// `[H_{i,m}, H_{j,n}] = (j−i)H_{i+j,m+n}`,
/// `[L_m, H_{i,n}] = ((m+1)(iα−i) − n)H_{i,m+n} + iβ H_{i,m+n+1}`.
pub fn hv_ab_annihilation_bracket(hv: &HvAb, x: (GenId, i64), y: (GenId, i64)) -> ModeElement {
    let l = HvAb::l();
    let ((g, m), (h, n)) = (x, y);
    let h_index = |g: GenId| g.index.expect("H generators are indexed");
    match (g == l, h == l) {
        (true, true) => ModeElement::term(l, m + n, Poly::int(m - n)),
        (false, false) => {
            let (i, j) = (h_index(g), h_index(h));
            ModeElement::term(HvAb::h(i + j), m + n, Poly::int(j - i))
        }
        (true, false) => {
            let i = h_index(h);
            let c = &(&hv.alpha().scale(&q(i)) - &Poly::int(i)).scale(&q(m + 1)) - &Poly::int(n);
            let mut out = ModeElement::term(h, m + n, c);
            out.add_term(h, m + n + 1, hv.beta().scale(&q(i)));
            out
        }
        (false, true) => hv_ab_annihilation_bracket(hv, y, x).scale(&Poly::int(-1)),
    }
}

/// Bilinear extension of [`hv_ab_annihilation_bracket`] to labelled combinations.
pub fn hv_ab_annihilation_bracket_of(hv: &HvAb, x: &ModeElement, y: &ModeElement) -> ModeElement {
    let mut out = ModeElement::zero();
    for ((g, m), c) in x.iter() {
        for ((h, n), d) in y.iter() {
            out.add_assign(&hv_ab_annihilation_bracket(hv, (*g, *m), (*h, *n)).scale(&(c * d)));
        }
    }
    out
}

/// Labelled basis of the annihilation window: `L_m` (`m ≥ −1`) and `H_{i,m}` (`m ≥ 0`),
/// restricted to label modes `≤ modes` and grades `i ∈ [−1, grades]`.
pub fn label_basis(modes: i64, grades: i64) -> Vec<(GenId, i64)> {
    let mut out: Vec<(GenId, i64)> = (-1..=modes).map(|m| (HvAb::l(), m)).collect();
    for i in -1..=grades {
        out.extend((0..=modes).map(|m| (HvAb::h(i), m)));
    }
    out
}

/// One disagreement between the mode bracket and the closed-form table.
#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub x: (GenId, i64),
    pub y: (GenId, i64),
    pub from_modes: ModeElement,
    pub closed_form: ModeElement,
}

/// Compares the mode bracket with the closed-form table on every labelled pair.
pub fn crosscheck_annihilation(hv: &HvAb, relabel: Relabel, modes: i64, grades: i64, exec: Exec) -> Result<Vec<Mismatch>> {
    let basis = label_basis(modes, grades);
    let pairs: Vec<((GenId, i64), (GenId, i64))> =
        basis.iter().flat_map(|x| basis.iter().map(move |y| (*x, *y))).collect();
    let results = exec.map(&pairs, |&(x, y)| -> Result<Option<Mismatch>> {
        let mx = relabel.to_modes(&ModeElement::mode(x.0, x.1));
        let my = relabel.to_modes(&ModeElement::mode(y.0, y.1));
        let from_modes = relabel.to_labels(&mode_bracket(hv, &mx, &my)?);
        let closed_form = hv_ab_annihilation_bracket(hv, x, y);
        Ok((from_modes != closed_form).then_some(Mismatch { x, y, from_modes, closed_form }))
    });
    let mut out = Vec::new();
    for r in results {
        if let Some(m) = r? {
            out.push(m);
        }
    }
    Ok(out)
}

/// All per-family shifts in `[-range, range]²` under which the crosscheck has no mismatch.
pub fn derive_relabeling(hv: &HvAb, range: i64, modes: i64, grades: i64, exec: Exec) -> Result<Vec<Relabel>> {
    let mut found = Vec::new();
    for l in -range..=range {
        for h in -range..=range {
            let r = Relabel { l, h };
            if crosscheck_annihilation(hv, r, modes, grades, exec)?.is_empty() {
                found.push(r);
            }
        }
    }
    Ok(found)
}

/// Mode basis `g_(n)` for the given generators and modes `0..=modes`.
pub fn mode_basis(gens: &[GenId], modes: i64) -> Vec<(GenId, i64)> {
    gens.iter().flat_map(|g| (0..=modes).map(move |n| (*g, n))).collect()
}

/// Failed tuples of the Lie axioms (antisymmetry on pairs, Jacobi on triples) for a
/// bracket on a finite basis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LieAxiomResult {
    pub pairs: usize,
    pub triples: usize,
    pub antisymmetry_failures: Vec<String>,
    pub jacobi_failures: Vec<String>,
}

impl LieAxiomResult {
    pub fn passed(&self) -> bool {
        self.antisymmetry_failures.is_empty() && self.jacobi_failures.is_empty()
    }

    pub fn to_checks(&self, prefix: &str) -> Vec<Check> {
        vec![
            Check::new(
                format!("{prefix}.antisymmetry"),
                Status::from_bool(self.antisymmetry_failures.is_empty()),
                json!({"pairs": self.pairs, "failures": self.antisymmetry_failures.iter().take(5).collect::<Vec<_>>()}),
            ),
            Check::new(
                format!("{prefix}.jacobi"),
                Status::from_bool(self.jacobi_failures.is_empty()),
                json!({"triples": self.triples, "failures": self.jacobi_failures.iter().take(5).collect::<Vec<_>>()}),
            ),
        ]
    }
}

/// Checks antisymmetry and the Jacobi identity of `br` on `basis` (triples `i < j < k`).
pub fn lie_axioms<F>(basis: &[(GenId, i64)], br: F, exec: Exec) -> Result<LieAxiomResult>
where
    F: Fn(&ModeElement, &ModeElement) -> Result<ModeElement> + Sync + Send,
{
    let elems: Vec<ModeElement> = basis.iter().map(|(g, n)| ModeElement::mode(*g, *n)).collect();
    let name = |i: usize| format!("{}({})", basis[i].0, basis[i].1);
    let pairs: Vec<(usize, usize)> = (0..elems.len()).flat_map(|i| (i..elems.len()).map(move |j| (i, j))).collect();
    let anti = exec.map(&pairs, |&(i, j)| -> Result<Option<String>> {
        let s = br(&elems[i], &elems[j])?.add(&br(&elems[j], &elems[i])?);
        Ok((!s.is_zero()).then(|| format!("[{}, {}] + [{}, {}] = {s}", name(i), name(j), name(j), name(i))))
    });
    let n = elems.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
        .collect();
    let jac = exec.map(&triples, |&(i, j, k)| -> Result<Option<String>> {
        let (x, y, z) = (&elems[i], &elems[j], &elems[k]);
        let r = br(x, &br(y, z)?)?.add(&br(y, &br(z, x)?)?).add(&br(z, &br(x, y)?)?);
        Ok((!r.is_zero()).then(|| format!("({}, {}, {}) -> {r}", name(i), name(j), name(k))))
    });
    let mut out = LieAxiomResult { pairs: pairs.len(), triples: triples.len(), ..Default::default() };
    for r in anti {
        out.antisymmetry_failures.extend(r?);
    }
    for r in jac {
        out.jacobi_failures.extend(r?);
    }
    Ok(out)
}

/// Pairs where `∂[x,y] ≠ [∂x,y] + [x,∂y]`.
pub fn partial_derivation_failures(a: &dyn ConformalAlgebra, basis: &[(GenId, i64)], exec: Exec) -> Result<Vec<String>> {
    let pairs: Vec<((GenId, i64), (GenId, i64))> =
        basis.iter().flat_map(|x| basis.iter().map(move |y| (*x, *y))).collect();
    let res = exec.map(&pairs, |&(x, y)| -> Result<Option<String>> {
        let (ex, ey) = (ModeElement::mode(x.0, x.1), ModeElement::mode(y.0, y.1));
        let lhs = extended_partial(&mode_bracket(a, &ex, &ey)?);
        let rhs = mode_bracket(a, &extended_partial(&ex), &ey)?.add(&mode_bracket(a, &ex, &extended_partial(&ey))?);
        Ok((lhs != rhs).then(|| format!("{}({}), {}({})", x.0, x.1, y.0, y.1)))
    });
    let mut out = Vec::new();
    for r in res {
        out.extend(r?);
    }
    Ok(out)
}

/// Pairs of nonnegative modes whose bracket leaves the annihilation subalgebra.
pub fn annihilation_closure_failures(a: &dyn ConformalAlgebra, basis: &[(GenId, i64)], exec: Exec) -> Result<Vec<String>> {
    let pairs: Vec<((GenId, i64), (GenId, i64))> =
        basis.iter().flat_map(|x| basis.iter().map(move |y| (*x, *y))).collect();
    let res = exec.map(&pairs, |&(x, y)| -> Result<Option<String>> {
        let b = mode_bracket(a, &ModeElement::mode(x.0, x.1), &ModeElement::mode(y.0, y.1))?;
        Ok(b.min_mode().is_some_and(|m| m < 0).then(|| format!("{}({}), {}({})", x.0, x.1, y.0, y.1)))
    });
    let mut out = Vec::new();
    for r in res {
        out.extend(r?);
    }
    Ok(out)
}

/// Full structure-constant table of the labelled window as JSON rows.
pub fn structure_table(hv: &HvAb, modes: i64, grades: i64) -> serde_json::Value {
    let basis = label_basis(modes, grades);
    let label = |(g, n): (GenId, i64)| {
        if g == HvAb::l() {
            format!("L_{n}")
        } else {
            format!("H_{},{n}", g.index.unwrap())
        }
    };
    let mut rows = Vec::new();
    for x in &basis {
        for y in &basis {
            let v = hv_ab_annihilation_bracket(hv, *x, *y);
            if v.is_zero() {
                continue;
            }
            let terms: Vec<_> = v.iter().map(|((g, n), c)| json!({"basis": label((*g, *n)), "coeff": c.to_string()})).collect();
            rows.push(json!({"lhs": label(*x), "rhs": label(*y), "value": terms}));
        }
    }
    serde_json::Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::{HeisenbergVirasoro, Virasoro};
    use crate::poly::parse_with;
    use crate::poly::ParseContext;

    fn p(s: &str) -> Poly {
        parse_with(s, &ParseContext::with_params(&["alpha", "beta"])).unwrap()
    }

    #[test]
    fn jth_products_examples() {
        let l = GenId::plain("L");
        let v = jth_products(&Virasoro, l, l).unwrap();
        assert_eq!(v, vec![(0, Element::term(l, Poly::d())), (1, Element::term(l, Poly::int(2)))]);
        let hv = HvAb::symbolic();
        let v = jth_products(&hv, HvAb::l(), HvAb::h(2)).unwrap();
        assert_eq!(v[0], (0, Element::term(HvAb::h(2), p("d + 2*beta"))));
        assert_eq!(v[1], (1, Element::term(HvAb::h(2), p("2*alpha - 1"))));
        let h = GenId::plain("H");
        assert!(jth_products(&HeisenbergVirasoro, h, h).unwrap().is_empty());
    }

    #[test]
    fn mode_bracket_examples() {
        let l = GenId::plain("L");
        let b = mode_bracket(&Virasoro, &ModeElement::mode(l, 1), &ModeElement::mode(l, 2)).unwrap();
        assert_eq!(b, ModeElement::term(l, 2, Poly::int(-1)));
        for (m, n) in [(0, 3), (2, 5), (-2, 4), (3, 3)] {
            let b = mode_bracket(&Virasoro, &ModeElement::mode(l, m), &ModeElement::mode(l, n)).unwrap();
            assert_eq!(b, ModeElement::term(l, m + n - 1, Poly::int(m - n)));
        }
        let h = GenId::plain("H");
        assert!(mode_bracket(&HeisenbergVirasoro, &ModeElement::mode(h, 2), &ModeElement::mode(h, 3)).unwrap().is_zero());
        let hv = HvAb::symbolic();
        let b = mode_bracket(&hv, &ModeElement::mode(HvAb::h(-1), 0), &ModeElement::mode(HvAb::h(1), 0)).unwrap();
        assert_eq!(b, ModeElement::term(HvAb::h(0), 0, Poly::int(2)));
    }

    #[test]
    fn extended_partial_examples() {
        let l = GenId::plain("L");
        assert_eq!(extended_partial(&ModeElement::mode(l, 3)), ModeElement::term(l, 2, Poly::int(-3)));
        assert!(extended_partial(&ModeElement::mode(l, 0)).is_zero());
        let mut x = ModeElement::term(HvAb::h(1), 2, Poly::int(2));
        x.add_term(HvAb::h(2), 1, Poly::one());
        let mut want = ModeElement::term(HvAb::h(1), 1, Poly::int(-4));
        want.add_term(HvAb::h(2), 0, Poly::int(-1));
        assert_eq!(extended_partial(&x), want);
    }

    #[test]
    fn closed_form_examples() {
        let hv = HvAb::symbolic();
        let b = hv_ab_annihilation_bracket(&hv, (HvAb::l(), 1), (HvAb::h(2), 0));
        let mut want = ModeElement::term(HvAb::h(2), 1, p("4*alpha - 4"));
        want.add_term(HvAb::h(2), 2, p("2*beta"));
        assert_eq!(b, want);
        let b = hv_ab_annihilation_bracket(&hv, (HvAb::h(1), 2), (HvAb::h(3), 0));
        assert_eq!(b, ModeElement::term(HvAb::h(4), 2, Poly::int(2)));
        assert!(hv_ab_annihilation_bracket(&hv, (HvAb::l(), 0), (HvAb::l(), 0)).is_zero());
    }

    #[test]
    fn relabeling_is_derived_and_unique() {
        let hv = HvAb::symbolic();
        let found = derive_relabeling(&hv, 2, 3, 3, Exec::Sequential).unwrap();
        assert_eq!(found, vec![RELABEL]);
        let off = Relabel { l: RELABEL.l + 1, h: RELABEL.h };
        assert!(!crosscheck_annihilation(&hv, off, 3, 3, Exec::Sequential).unwrap().is_empty());
    }

    #[test]
    fn modes_eliminate_partial() {
        let l = GenId::plain("L");
        // (∂²L)_(3) = 3·2 L_(1)
        let e = Element::term(l, Poly::d().pow(2));
        assert_eq!(modes_of(&e, 3), ModeElement::term(l, 1, Poly::int(6)));
        assert!(modes_of(&Element::term(l, Poly::d()), 0).is_zero());
    }
}

//! Axiom residuals, windowed sweeps, ideal tests and local nilpotency.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{bracket_in, ConformalAlgebra, Element, GenId, HvAb, Rank};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::poly::Poly;
use crate::report::{Check, Status};
use crate::sym::Var;

/// `[x_λ y] + [y_μ x]|_{μ → −λ−∂}`; zero iff skew-symmetry holds on the pair.
pub fn skew_residual(a: &dyn ConformalAlgebra, x: &Element, y: &Element) -> Result<Element> {
    let xy = bracket_in(a, x, y, Var::Lambda)?;
    let yx = bracket_in(a, y, x, Var::Mu)?;
    let flip = -(&Poly::lambda() + &Poly::d());
    Ok(xy.add(&yx.substitute(Var::Mu, &flip)))
}

/// `[x_λ[y_μ z]] − [[x_λ y]_{λ+μ} z] − [y_μ[x_λ z]]`.
///
/// The middle term is bracketed in the scratch slot ν, then ν → λ+μ.
pub fn jacobi_residual(a: &dyn ConformalAlgebra, x: &Element, y: &Element, z: &Element) -> Result<Element> {
    let yz = bracket_in(a, y, z, Var::Mu)?;
    let lhs = bracket_in(a, x, &yz, Var::Lambda)?;
    let xy = bracket_in(a, x, y, Var::Lambda)?;
    let mid = bracket_in(a, &xy, z, Var::Nu)?.substitute(Var::Nu, &(&Poly::lambda() + &Poly::mu()));
    let xz = bracket_in(a, x, z, Var::Lambda)?;
    let last = bracket_in(a, y, &xz, Var::Mu)?;
    Ok(lhs.sub(&mid).sub(&last))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    Skew,
    Jacobi,
}

impl Axiom {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axiom::Skew => "skew-symmetry",
            Axiom::Jacobi => "jacobi",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TupleResult {
    pub axiom: Axiom,
    pub tuple: Vec<GenId>,
    pub status: Status,
    pub residual: Option<Element>,
    pub note: Option<String>,
}

/// Outcomes of a windowed axiom sweep, in tuple order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Sweep {
    pub results: Vec<TupleResult>,
}

impl Sweep {
    pub fn count(&self, axiom: Axiom, status: Status) -> usize {
        self.results.iter().filter(|r| r.axiom == axiom && r.status == status).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &TupleResult> {
        self.results.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    /// One aggregated check per axiom, with up to `samples` failing residuals.
    pub fn to_checks(&self, prefix: &str, samples: usize) -> Vec<Check> {
        [Axiom::Skew, Axiom::Jacobi]
            .into_iter()
            .map(|ax| {
                let rows: Vec<&TupleResult> = self.results.iter().filter(|r| r.axiom == ax).collect();
                let fail = rows.iter().filter(|r| r.status == Status::Fail).count();
                let skipped = rows.iter().filter(|r| r.status == Status::Skipped).count();
                let status = if fail > 0 {
                    Status::Fail
                } else if !rows.is_empty() && skipped == rows.len() {
                    Status::Skipped
                } else {
                    Status::Pass
                };
                let sample: Vec<Value> = rows
                    .iter()
                    .filter(|r| r.status == Status::Fail)
                    .take(samples)
                    .map(|r| {
                        json!({
                            "tuple": r.tuple.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                            "residual": r.residual.as_ref().map(|e| e.to_string()),
                            "note": r.note,
                        })
                    })
                    .collect();
                Check::new(
                    format!("{prefix}{}", ax.as_str()),
                    status,
                    json!({
                        "tuples": rows.len(),
                        "pass": rows.len() - fail - skipped,
                        "fail": fail,
                        "skipped": skipped,
                        "residual_samples": sample,
                    }),
                )
            })
            .collect()
    }
}

fn classify(axiom: Axiom, tuple: Vec<GenId>, r: Result<Element>) -> TupleResult {
    match r {
        Ok(e) if e.is_zero() => TupleResult { axiom, tuple, status: Status::Pass, residual: None, note: None },
        Ok(e) => TupleResult { axiom, tuple, status: Status::Fail, residual: Some(e), note: None },
        Err(Error::OutOfWindow(g)) => TupleResult {
            axiom,
            tuple,
            status: Status::Skipped,
            residual: None,
            note: Some(format!("bracket needs {g}, outside the presented window")),
        },
        Err(e) => TupleResult { axiom, tuple, status: Status::Fail, residual: None, note: Some(e.to_string()) },
    }
}

/// Skew-symmetry on all ordered pairs and Jacobi on all ordered triples of `gens`.
pub fn axiom_sweep(a: &dyn ConformalAlgebra, gens: &[GenId], exec: Exec) -> Sweep {
    let pairs: Vec<(GenId, GenId)> = gens.iter().flat_map(|x| gens.iter().map(move |y| (*x, *y))).collect();
    let triples: Vec<(GenId, GenId, GenId)> = gens
        .iter()
        .flat_map(|x| gens.iter().flat_map(move |y| gens.iter().map(move |z| (*x, *y, *z))))
        .collect();
    let mut results = exec.map(&pairs, |(x, y)| {
        classify(Axiom::Skew, vec![*x, *y], skew_residual(a, &Element::gen(*x), &Element::gen(*y)))
    });
    results.extend(exec.map(&triples, |(x, y, z)| {
        classify(
            Axiom::Jacobi,
            vec![*x, *y, *z],
            jacobi_residual(a, &Element::gen(*x), &Element::gen(*y), &Element::gen(*z)),
        )
    }));
    Sweep { results }
}

/// Pairs in `gens` whose bracket has support outside grade `grade(x) + grade(y)`.
pub fn grade_additivity_violations(a: &dyn ConformalAlgebra, gens: &[GenId], exec: Exec) -> Result<Vec<(GenId, GenId)>> {
    let pairs: Vec<(GenId, GenId)> = gens.iter().flat_map(|x| gens.iter().map(move |y| (*x, *y))).collect();
    let found = exec.map(&pairs, |(x, y)| -> Result<Option<(GenId, GenId)>> {
        let b = bracket_in(a, &Element::gen(*x), &Element::gen(*y), Var::Lambda)?;
        let target = a.grade(*x) + a.grade(*y);
        let off = b.support().any(|g| a.grade(g) != target);
        Ok(off.then_some((*x, *y)))
    });
    found.into_iter().filter_map(|r| r.transpose()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealVerdict {
    pub holds: bool,
    pub counterexample: Option<(GenId, GenId, Element)>,
}

/// Whether brackets of family generators with all generators of grade ≤ `level` stay in the family.
pub fn is_ideal_window(a: &dyn ConformalAlgebra, in_family: impl Fn(GenId) -> bool, level: i64) -> Result<IdealVerdict> {
    let all = a.window(i64::MIN / 4, level);
    for g in all.iter().copied().filter(|g| in_family(*g)) {
        for h in &all {
            for (x, y) in [(g, *h), (*h, g)] {
                let b = bracket_in(a, &Element::gen(x), &Element::gen(y), Var::Lambda)?;
                if b.support().any(|k| !in_family(k)) {
                    return Ok(IdealVerdict { holds: false, counterexample: Some((x, y, b)) });
                }
            }
        }
    }
    Ok(IdealVerdict { holds: true, counterexample: None })
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanVerdict {
    pub is_ideal: bool,
    pub is_abelian: bool,
    pub reason: Option<String>,
}

impl SpanVerdict {
    /// A nonzero abelian ideal certifies the algebra is neither simple nor semisimple.
    pub fn holds(&self) -> bool {
        self.is_ideal && self.is_abelian
    }
}

/// Checks that `ℂ[∂]·candidate` is an ideal with all internal j-th products zero.
pub fn derived_products_span_check(a: &dyn ConformalAlgebra, candidate: &[GenId]) -> Result<SpanVerdict> {
    if a.rank() != Rank::Finite {
        return Err(Error::InfiniteRank(a.name()));
    }
    let set: BTreeSet<GenId> = candidate.iter().copied().collect();
    for g in &set {
        a.validate(*g)?;
    }
    let all = a.window(i64::MIN / 4, i64::MAX / 4);
    let mut verdict = SpanVerdict { is_ideal: true, is_abelian: true, reason: None };
    for g in &set {
        for h in &all {
            for (x, y) in [(*g, *h), (*h, *g)] {
                let b = bracket_in(a, &Element::gen(x), &Element::gen(y), Var::Lambda)?;
                if verdict.is_ideal && b.support().any(|k| !set.contains(&k)) {
                    verdict.is_ideal = false;
                    verdict.reason = Some(format!("[{x}_l {y}] = {b} leaves the span"));
                }
                if verdict.is_abelian && set.contains(h) && !b.is_zero() {
                    verdict.is_abelian = false;
                    verdict.reason.get_or_insert_with(|| format!("[{x}_l {y}] = {b} is nonzero"));
                }
            }
        }
    }
    Ok(verdict)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    /// Every test generator is killed within `steps` applications.
    Nilpotent { steps: usize },
    /// `(ad x)^k(witness)` was shown nonzero for every `k ≤ steps`, with a component that
    /// cannot cancel.
    NotNilpotent { witness: GenId, steps: usize, reason: String },
    Inconclusive { reason: String },
}

impl Nilpotency {
    pub fn label(&self) -> &'static str {
        match self {
            Nilpotency::Nilpotent { .. } => "NILPOTENT",
            Nilpotency::NotNilpotent { .. } => "NOT-NILPOTENT",
            Nilpotency::Inconclusive { .. } => "INCONCLUSIVE",
        }
    }
}

/// Three-valued local nilpotency verdict for `x ∈ HV(α,β)` against `L, H_{−1}, …, H_level`.
///
/// Only elements of ℂ[∂]H₋₁ can be certified nilpotent. Growth witnesses: an `L`-component
/// of `x` makes the `L`-component of `(ad x)^k L` gain one ∂-degree per step; otherwise a top
/// component `g(∂)H_n`, `n ≥ 0`, gives `(ad x)^k H_{n+1}` a nonzero component in grade
/// `n+1+kn` that no other term reaches.
pub fn locally_nilpotent_window(a: &HvAb, x: &Element, level: i64, bound: usize) -> Result<Nilpotency> {
    for g in x.support() {
        a.validate(g)?;
    }
    let l = HvAb::l();
    if x.support().all(|g| g == HvAb::h(-1)) {
        let mut tests = vec![l];
        tests.extend((-1..=level).map(HvAb::h));
        let mut worst = 0;
        for t in tests {
            let mut cur = Element::gen(t);
            let mut k = 0;
            while !cur.is_zero() && k < bound {
                cur = bracket_in(a, x, &cur, Var::Lambda)?;
                k += 1;
            }
            if !cur.is_zero() {
                return Ok(Nilpotency::Inconclusive { reason: format!("{t} survives {bound} steps") });
            }
            worst = worst.max(k);
        }
        return Ok(Nilpotency::Nilpotent { steps: worst });
    }
    let f = x.coeff(l);
    if !f.is_zero() {
        let head = Element::term(l, f);
        let mut cur = Element::gen(l);
        for k in 1..=bound {
            cur = bracket_in(a, &head, &cur, Var::Lambda)?.restrict(|g| g == l);
            let deg = cur.coeff(l).degree_in(Var::D);
            if deg != Some(k as i32) {
                return Ok(Nilpotency::Inconclusive { reason: format!("L-component degree stalled at step {k}") });
            }
        }
        return Ok(Nilpotency::NotNilpotent {
            witness: l,
            steps: bound,
            reason: "L-component of (ad x)^k L has d-degree k".into(),
        });
    }
    let (top, g) = match x.iter().filter(|(g, _)| g.family.as_str() == "H").max_by_key(|(g, _)| g.index) {
        Some((t, g)) => (t.index.unwrap_or(0), g.clone()),
        None => return Ok(Nilpotency::Inconclusive { reason: "no H component".into() }),
    };
    if top < 0 {
        return Ok(Nilpotency::Inconclusive { reason: "top component is not of grade >= 0".into() });
    }
    let witness = HvAb::h(top + 1);
    if top + 1 > level {
        return Ok(Nilpotency::Inconclusive { reason: format!("witness {witness} lies outside window {level}") });
    }
    let head = Element::term(HvAb::h(top), g);
    let mut cur = Element::gen(witness);
    for k in 1..=bound {
        cur = bracket_in(a, &head, &cur, Var::Lambda)?;
        let expect = HvAb::h(top + 1 + k as i64 * top);
        if cur.len() != 1 || cur.coeff(expect).is_zero() {
            return Ok(Nilpotency::Inconclusive { reason: format!("top-grade component vanished at step {k}") });
        }
    }
    Ok(Nilpotency::NotNilpotent {
        witness,
        steps: bound,
        reason: format!("top component in grade {top}+1+k*{top} is nonzero for every k"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::{CurrentAlgebra, HeisenbergVirasoro, Virasoro};
    use crate::poly::parse;

    #[test]
    fn skew_examples() {
        let l = GenId::plain("L");
        assert!(skew_residual(&Virasoro, &Element::gen(l), &Element::gen(l)).unwrap().is_zero());
        let h = GenId::plain("H");
        assert!(skew_residual(&HeisenbergVirasoro, &Element::gen(h), &Element::gen(h)).unwrap().is_zero());
        let a = HvAb::symbolic();
        assert!(skew_residual(&a, &Element::gen(HvAb::l()), &Element::gen(HvAb::h(2))).unwrap().is_zero());
    }

    #[test]
    fn jacobi_examples() {
        let a = HvAb::symbolic();
        let (l, h1, h2) = (Element::gen(HvAb::l()), Element::gen(HvAb::h(1)), Element::gen(HvAb::h(2)));
        assert!(jacobi_residual(&a, &l, &h1, &h2).unwrap().is_zero());
        for i in -1..=8 {
            assert!(jacobi_residual(&a, &l, &l, &Element::gen(HvAb::h(i))).unwrap().is_zero());
        }
    }

    #[test]
    fn iterated_ad_examples() {
        let a = HvAb::symbolic();
        let hm1 = Element::gen(HvAb::h(-1));
        let once = crate::lca::iterated_ad(&a, &hm1, &Element::gen(HvAb::h(0)), 1).unwrap();
        assert_eq!(once, hm1);
        assert!(crate::lca::iterated_ad(&a, &hm1, &Element::gen(HvAb::h(0)), 2).unwrap().is_zero());
        assert!(crate::lca::iterated_ad(&a, &hm1, &Element::gen(HvAb::l()), 2).unwrap().is_zero());
        let h1 = Element::gen(HvAb::h(1));
        let three = crate::lca::iterated_ad(&a, &h1, &Element::gen(HvAb::h(2)), 3).unwrap();
        assert_eq!(three, Element::term(HvAb::h(5), Poly::int(6)));
    }

    #[test]
    fn nilpotency_examples() {
        let a = HvAb::symbolic();
        let x = Element::term(HvAb::h(-1), parse("3*d^2 + 1").unwrap());
        assert!(matches!(locally_nilpotent_window(&a, &x, 6, 10).unwrap(), Nilpotency::Nilpotent { .. }));
        match locally_nilpotent_window(&a, &Element::gen(HvAb::h(1)), 6, 10).unwrap() {
            Nilpotency::NotNilpotent { witness, .. } => assert_eq!(witness, HvAb::h(2)),
            other => panic!("{other:?}"),
        }
        match locally_nilpotent_window(&a, &Element::gen(HvAb::l()), 6, 10).unwrap() {
            Nilpotency::NotNilpotent { witness, .. } => assert_eq!(witness, HvAb::l()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ideal_and_span_examples() {
        let a = HvAb::symbolic();
        assert!(is_ideal_window(&a, |g| g.family.as_str() == "H", 8).unwrap().holds);
        assert!(!is_ideal_window(&a, |g| g == HvAb::h(0), 8).unwrap().holds);
        let hv = HeisenbergVirasoro;
        assert!(is_ideal_window(&hv, |g| g == GenId::plain("H"), 0).unwrap().holds);
        assert!(derived_products_span_check(&hv, &[GenId::plain("H")]).unwrap().holds());
        assert!(!derived_products_span_check(&Virasoro, &[GenId::plain("L")]).unwrap().holds());
        let cur = CurrentAlgebra::sl2();
        let v = derived_products_span_check(&cur, &[GenId::plain("e")]).unwrap();
        assert!(!v.is_ideal);
        assert!(matches!(derived_products_span_check(&a, &[HvAb::h(0)]), Err(Error::InfiniteRank(_))));
    }
}

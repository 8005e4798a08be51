//! Rank-one conformal modules `ℂ[∂]v` with `g_λ v = f_g(∂,λ)v`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::lca::{bracket_gens, ConformalAlgebra, GenId, HvAb, PairSplit};
use crate::par::Exec;
use crate::poly::{q, Poly};
use crate::solve::{ansatz, coefficient_equations, merge_branches, solve, Branch, Problem, Undecided};
use crate::sym::{Sym, Var};

/// A free rank-one module; generators missing from the table act by zero.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneModule {
    pub name: String,
    pub action: BTreeMap<GenId, Poly>,
}

impl RankOneModule {
    pub fn new(name: impl Into<String>, action: impl IntoIterator<Item = (GenId, Poly)>) -> Self {
        RankOneModule { name: name.into(), action: action.into_iter().filter(|(_, p)| !p.is_zero()).collect() }
    }

    pub fn action_of(&self, g: GenId) -> Poly {
        self.action.get(&g).cloned().unwrap_or_default()
    }

    pub fn is_trivial(&self) -> bool {
        self.action.is_empty()
    }

    /// Specializes parameters occurring in the action.
    pub fn eval_partial(&self, values: &BTreeMap<Sym, crate::poly::Q>) -> RankOneModule {
        RankOneModule::new(self.name.clone(), self.action.iter().map(|(g, p)| (*g, p.eval_partial(values))))
    }
}

/// `L_λ v = (∂ + aλ + b)v` over Vir.
pub fn vir_module(a: Poly, b: Poly) -> RankOneModule {
    let f = &(&Poly::d() + &(&a * &Poly::lambda())) + &b;
    RankOneModule::new("V_ab(vir)", [(GenId::plain("L"), f)])
}

/// `L_λ v = (∂ + aλ + b)v`, `H_λ v = c v` over HV.
pub fn hv_module(a: Poly, b: Poly, c: Poly) -> RankOneModule {
    let f = &(&Poly::d() + &(&a * &Poly::lambda())) + &b;
    RankOneModule::new("V_abc(hv)", [(GenId::plain("L"), f), (GenId::plain("H"), c)])
}

/// `L_λ v = (∂ + aλ + b)v`, `H_i λ v = 0` over HV(α,β).
pub fn hv_ab_module(a: Poly, b: Poly) -> RankOneModule {
    let f = &(&Poly::d() + &(&a * &Poly::lambda())) + &b;
    RankOneModule::new("V_ab(hv_ab)", [(HvAb::l(), f)])
}

fn shifted(f: &Poly, d: &Poly, slot: &Poly) -> Poly {
    f.substitute_many(&[(Var::D, d.clone()), (Var::Lambda, slot.clone())])
}

/// `x_λ(y_μ v) − y_μ(x_λ v) − [x_λ y]_{λ+μ} v` as a polynomial in ∂, λ, μ.
pub fn module_residual(
    a: &dyn ConformalAlgebra,
    action: &dyn Fn(GenId) -> Poly,
    x: GenId,
    y: GenId,
) -> Result<Poly> {
    let (d, l, m) = (Poly::d(), Poly::lambda(), Poly::mu());
    let lm = &l + &m;
    let fx = action(x);
    let fy = action(y);
    let t1 = &shifted(&fy, &(&d + &l), &m) * &fx;
    let t2 = &shifted(&fx, &(&d + &m), &l) * &shifted(&fy, &d, &m);
    let mut out = &t1 - &t2;
    let minus_lm = -&lm;
    for (g, p) in bracket_gens(a, x, y)?.iter() {
        let fg = action(*g);
        if fg.is_zero() {
            continue;
        }
        let coeff = p.substitute(Var::D, &minus_lm);
        out -= &(&coeff * &shifted(&fg, &d, &lm));
    }
    Ok(out)
}

/// Module-axiom residual of `M` on the pair `(x, y)`.
pub fn check_module(a: &dyn ConformalAlgebra, m: &RankOneModule, x: GenId, y: GenId) -> Result<Poly> {
    module_residual(a, &|g| m.action_of(g), x, y)
}

/// Generator pairs of the window whose bracket stays inside it, and the skipped ones.
pub fn window_pairs(a: &dyn ConformalAlgebra, gens: &[GenId]) -> Result<PairSplit> {
    let inside: std::collections::BTreeSet<GenId> = gens.iter().copied().collect();
    let mut kept = Vec::new();
    let mut skipped = Vec::new();
    for &x in gens {
        for &y in gens {
            let br = bracket_gens(a, x, y)?;
            if br.support().all(|g| inside.contains(&g)) {
                kept.push((x, y));
            } else {
                skipped.push((x, y));
            }
        }
    }
    Ok((kept, skipped))
}

/// Failing pairs of `M` on the generators `gens` (pairs leaving the window are skipped).
pub fn module_failures(a: &dyn ConformalAlgebra, m: &RankOneModule, gens: &[GenId], exec: Exec) -> Result<Vec<(GenId, GenId, Poly)>> {
    let (pairs, _) = window_pairs(a, gens)?;
    let res = exec.map(&pairs, |&(x, y)| check_module(a, m, x, y).map(|r| (x, y, r)));
    let mut out = Vec::new();
    for r in res {
        let (x, y, p) = r?;
        if !p.is_zero() {
            out.push((x, y, p));
        }
    }
    Ok(out)
}

/// One solution family: an action table in the free scalars, valid where `nonzero` are.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleFamily {
    pub module: RankOneModule,
    pub scalars: Vec<Sym>,
    pub nonzero: Vec<Sym>,
}

#[derive(Clone, Debug)]
pub struct ModuleSolution {
    pub generators: Vec<GenId>,
    pub unknowns: usize,
    pub pairs: usize,
    pub skipped: Vec<(GenId, GenId)>,
    /// Nontrivial families after merging branches contained in one another.
    pub families: Vec<ModuleFamily>,
    /// Whether the zero action appears as a solution.
    pub trivial: bool,
    pub undecided: Vec<Undecided>,
    pub dead_branches: usize,
}

impl ModuleSolution {
    pub fn is_decided(&self) -> bool {
        self.undecided.is_empty()
    }
}

const SCALAR_NAMES: [&str; 9] = ["a", "b", "c", "e", "g", "h", "k", "p", "r"];

fn scalar_name(i: usize) -> String {
    SCALAR_NAMES.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("s{i}"))
}

/// Stage of a pair in the elimination schedule: the grade-zero subalgebra first, then
/// pairs with a grade-zero non-`L` generator, then pairs with `L`, then the rest.
fn stage_of(a: &dyn ConformalAlgebra, x: GenId, y: GenId) -> usize {
    let zero = |g: GenId| a.grade(g) == 0;
    let is_l = |g: GenId| g.family.as_str() == "L";
    match (zero(x), zero(y)) {
        (true, true) => 0,
        (true, false) | (false, true) => {
            let z = if zero(x) { x } else { y };
            if is_l(z) {
                2
            } else {
                1
            }
        }
        _ => 3,
    }
}

/// All rank-one actions with per-generator total degree `≤ degree` in (∂, λ) satisfying the
/// module axioms on every pair of generators with grades in `[−1, window]`.
pub fn rank_one_solver(a: &dyn ConformalAlgebra, degree: u32, window: i64, exec: Exec) -> Result<ModuleSolution> {
    if !a.parameters().is_empty() {
        return Err(Error::Invalid("rank-one solving needs specialized algebra parameters".into()));
    }
    let gens = a.window(-1, window);
    let mut tables: BTreeMap<GenId, Poly> = BTreeMap::new();
    let mut per_gen: BTreeMap<GenId, Vec<Sym>> = BTreeMap::new();
    for &g in &gens {
        let mut u = Vec::new();
        let p = ansatz(&format!("u[{g}]"), &[Var::D, Var::Lambda], degree, &mut u);
        tables.insert(g, p);
        per_gen.insert(g, u);
    }
    // eliminate non-L unknowns first so L's scalars stay free
    let mut unknowns: Vec<Sym> = Vec::new();
    for g in gens.iter().filter(|g| g.family.as_str() != "L") {
        unknowns.extend(&per_gen[g]);
    }
    for g in gens.iter().filter(|g| g.family.as_str() == "L") {
        unknowns.extend(&per_gen[g]);
    }
    let (pairs, skipped) = window_pairs(a, &gens)?;
    let residuals = exec.map(&pairs, |&(x, y)| {
        module_residual(a, &|g| tables.get(&g).cloned().unwrap_or_default(), x, y).map(|r| (stage_of(a, x, y), r))
    });
    let mut stages: BTreeMap<usize, Vec<Poly>> = BTreeMap::new();
    for r in residuals {
        let (s, p) = r?;
        stages.entry(s).or_default().extend(coefficient_equations(&p));
    }
    let mut problem = Problem::new(unknowns.clone());
    for (s, eqs) in stages {
        problem = problem.stage(format!("stage {s}"), eqs);
    }
    let sol = solve(&problem);
    let merged = merge_branches(sol.branches, &unknowns);

    let mut families = Vec::new();
    let mut trivial = false;
    for b in merged {
        let module = RankOneModule::new("solution", tables.iter().map(|(g, p)| (*g, b.apply(p))));
        if module.is_trivial() {
            trivial = true;
            continue;
        }
        families.push(name_family(module, &b, &gens, &per_gen));
    }
    Ok(ModuleSolution {
        generators: gens,
        unknowns: unknowns.len(),
        pairs: pairs.len(),
        skipped,
        families,
        trivial,
        undecided: sol.undecided,
        dead_branches: sol.dead,
    })
}

fn name_family(module: RankOneModule, b: &Branch, gens: &[GenId], per_gen: &BTreeMap<GenId, Vec<Sym>>) -> ModuleFamily {
    // free unknowns in window order, L first
    let mut ordered: Vec<Sym> = Vec::new();
    for g in gens.iter().filter(|g| g.family.as_str() == "L").chain(gens.iter().filter(|g| g.family.as_str() != "L")) {
        for u in &per_gen[g] {
            let used = module.action.values().any(|p| p.contains_var(Var::Param(*u)));
            if !b.subst.contains_key(u) && used && !ordered.contains(u) {
                ordered.push(*u);
            }
        }
    }
    let rename: Vec<(Var, Poly)> =
        ordered.iter().enumerate().map(|(i, u)| (Var::Param(*u), Poly::param(&scalar_name(i)))).collect();
    let names: BTreeMap<Sym, Sym> = ordered.iter().enumerate().map(|(i, u)| (*u, Sym::new(&scalar_name(i)))).collect();
    let action = module.action.iter().map(|(g, p)| (*g, p.substitute_many(&rename)));
    ModuleFamily {
        module: RankOneModule::new("solution", action),
        scalars: ordered.iter().map(|u| names[u]).collect(),
        nonzero: b.nonzero.iter().map(|u| names.get(u).copied().unwrap_or(*u)).collect(),
    }
}

/// Whether `p(∂)·ℂ[∂]v` is stable under every generator action.
pub fn submodule_test(m: &RankOneModule, gens: &[GenId], p: &Poly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::DivisionByZero("submodule generator p must be nonzero".into()));
    }
    let shifted_p = p.substitute(Var::D, &(&Poly::d() + &Poly::lambda()));
    for &g in gens {
        // g_λ(p(∂)v) = p(∂+λ) f_g(∂,λ) v
        let image = &shifted_p * &m.action_of(g);
        let (_, rem) = image.div_rem_in(p, Var::D)?;
        if !rem.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Residual of `(H₋₁, H_{i+1})` on a rank-one module where `H_{i+1}` acts by zero and `H_i`
/// acts by a generic `f(∂,λ)`; returns the residual and `f`. The residual is
/// `−(i+2)·f(∂, λ+μ)`.
pub fn top_h_action_obstruction(hv: &HvAb, i: i64, degree: u32) -> Result<(Poly, Poly)> {
    if i < -1 {
        return Err(Error::InvalidGenerator(format!("H_{i}")));
    }
    let mut u = Vec::new();
    let f = ansatz("f", &[Var::D, Var::Lambda], degree, &mut u);
    let mut g = Vec::new();
    let f_minus = ansatz("g", &[Var::D, Var::Lambda], degree, &mut g);
    let top = HvAb::h(i);
    let action = |h: GenId| {
        if h == top {
            f.clone()
        } else if h == HvAb::h(-1) && i != -1 {
            f_minus.clone()
        } else {
            Poly::zero()
        }
    };
    let r = module_residual(hv, &action, HvAb::h(-1), HvAb::h(i + 1))?;
    Ok((r, f))
}

/// One machine-checked step of the c-contradiction argument.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub label: String,
    pub detail: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CTrace {
    pub steps: Vec<TraceStep>,
    /// True once the chain reaches `2c = 0` under `c ≠ 0`.
    pub contradiction: bool,
}

impl CTrace {
    pub fn all_hold(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }
}

/// Replays the argument that `H₀` cannot act by a nonzero scalar `c` on a rank-one module:
/// `(H₀, H_i)` and `(L, H_i)` force `H_i` (`i ≠ 0`) to act by zero, then `(H₋₁, H₁)` leaves
/// the residual `−2c`.
pub fn replay_c_contradiction(hv: &HvAb, window: i64, degree: u32) -> Result<CTrace> {
    let (pa, pb, pc) = (Poly::param("a"), Poly::param("b"), Poly::param("c"));
    let f_l = &(&Poly::d() + &(&pa * &Poly::lambda())) + &pb;
    let mut steps = Vec::new();

    // the grade-zero part is an HV-module
    let base = RankOneModule::new("base", [(HvAb::l(), f_l.clone()), (HvAb::h(0), pc.clone())]);
    let zero_pairs = [(HvAb::l(), HvAb::l()), (HvAb::l(), HvAb::h(0)), (HvAb::h(0), HvAb::l()), (HvAb::h(0), HvAb::h(0))];
    let mut ok = true;
    for (x, y) in zero_pairs {
        ok &= check_module(hv, &base, x, y)?.is_zero();
    }
    steps.push(TraceStep {
        label: "grade-zero actions".into(),
        detail: format!("L acts by {f_l}, H_0 acts by {pc}: residuals on L, H_0 vanish"),
        holds: ok,
    });

    for i in (-1..=window).filter(|i| *i != 0) {
        let mut u = Vec::new();
        let f = ansatz(&format!("f{i}"), &[Var::D, Var::Lambda], degree, &mut u);
        let act = |g: GenId| {
            if g == HvAb::l() {
                f_l.clone()
            } else if g == HvAb::h(0) {
                pc.clone()
            } else if g == HvAb::h(i) {
                f.clone()
            } else {
                Poly::zero()
            }
        };
        let r0 = module_residual(hv, &act, HvAb::h(0), HvAb::h(i))?;
        let rl = module_residual(hv, &act, HvAb::l(), HvAb::h(i))?;
        let lm = &Poly::lambda() + &Poly::mu();
        let f_lm = f.substitute(Var::Lambda, &lm);

        // c = 0: the (H_0, H_i) residual is −i·f_i(∂, λ+μ)
        let r0_c0 = r0.substitute(Var::param("c"), &Poly::zero());
        let expect = f_lm.scale(&q(-i));
        steps.push(TraceStep {
            label: format!("c = 0, pair (H_0, H_{i})"),
            detail: format!("residual equals {}*f_{i}(d, l+m), so f_{i} = 0", -i),
            holds: r0_c0 == expect,
        });

        // c ≠ 0: combining both pairs gives
        // c((iα−i)λ − μ + iβ)f(∂,λ+μ) − i(∂+aλ+b)f(∂,λ+μ) + cμ f(∂,μ)
        let mu = Poly::mu();
        let f_mu = f.substitute(Var::Lambda, &mu);
        let w = &(&(&hv.alpha().scale(&q(i)) - &Poly::int(i)) * &Poly::lambda()) - &mu;
        let w = &w + &hv.beta().scale(&q(i));
        let combined = &(&(&(&pc * &w) * &f_lm) - &(&f_l * &f_lm).scale(&q(i))) + &(&(&pc * &mu) * &f_mu);
        let via = &(&pc * &rl).scale(&q(-1)) + &(&f_l * &r0);
        let combination_ok = combined == via || combined == -&via;
        // leading ∂-coefficient: degree k+1 term is −i·ℓ_k(λ+μ)
        let k = f.degree_in(Var::D).unwrap_or(0);
        let lead = f.coeff_of(Var::D, k).substitute(Var::Lambda, &lm);
        let top = combined.coeff_of(Var::D, k + 1);
        let degree_ok = top == lead.scale(&q(-i));
        steps.push(TraceStep {
            label: format!("c != 0, pairs (H_0, H_{i}) and (L, H_{i})"),
            detail: format!(
                "eliminating f_{i}(d+l, m) leaves an identity whose d^{} coefficient is {}*lead(f_{i})(l+m); descending on the d-degree forces f_{i} = 0",
                k + 1,
                -i
            ),
            holds: combination_ok && degree_ok,
        });
    }

    // with every H_i (i ≠ 0) acting by zero
    let fin = RankOneModule::new("reduced", [(HvAb::l(), f_l.clone()), (HvAb::h(0), pc.clone())]);
    let r = check_module(hv, &fin, HvAb::h(-1), HvAb::h(1))?;
    let flag = r == pc.scale(&q(-2));
    let mut detail = String::new();
    let _ = write!(detail, "residual of (H_-1, H_1) is {r}; 2c = 0 contradicts c != 0");
    steps.push(TraceStep { label: "pair (H_-1, H_1)".into(), detail, holds: flag });
    Ok(CTrace { contradiction: flag, steps })
}

/// With `H₀` acting by zero, solves the `(H₀, H_i)` constraints for generic `f_i` of the given
/// degree; returns the unknowns left nonzero in any branch (expected none).
pub fn c_zero_forces_vanishing(hv: &HvAb, window: i64, degree: u32) -> Result<bool> {
    let mut all_zero = true;
    for i in (-1..=window).filter(|i| *i != 0) {
        let mut u = Vec::new();
        let f = ansatz(&format!("f{i}"), &[Var::D, Var::Lambda], degree, &mut u);
        let act = |g: GenId| if g == HvAb::h(i) { f.clone() } else { Poly::zero() };
        let r = module_residual(hv, &act, HvAb::h(0), HvAb::h(i))?;
        let sol = solve(&Problem::new(u.clone()).stage("pair", coefficient_equations(&r)));
        all_zero &= sol.is_decided()
            && sol.branches.len() == 1
            && u.iter().all(|x| sol.branches[0].value(*x).is_zero());
    }
    Ok(all_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::{HeisenbergVirasoro, Virasoro};
    use crate::poly::Q;

    fn hv21() -> HvAb {
        HvAb::specialized(q(2), q(1))
    }

    #[test]
    fn families_satisfy_axioms_symbolically() {
        let (a, b, c) = (Poly::param("a"), Poly::param("b"), Poly::param("c"));
        let vir = vir_module(Poly::param("alpha"), Poly::param("beta"));
        assert!(module_failures(&Virasoro, &vir, &Virasoro.window(0, 0), Exec::Sequential).unwrap().is_empty());
        let hvm = hv_module(a.clone(), b.clone(), c);
        let gens = HeisenbergVirasoro.window(0, 0);
        assert!(module_failures(&HeisenbergVirasoro, &hvm, &gens, Exec::Sequential).unwrap().is_empty());
        let hv = HvAb::symbolic();
        let m = hv_ab_module(a, b);
        assert!(module_failures(&hv, &m, &hv.window(-1, 5), Exec::Sequential).unwrap().is_empty());
        assert!(check_module(&hv, &m, HvAb::l(), HvAb::h(3)).unwrap().is_zero());
    }

    #[test]
    fn perturbed_h_action_breaks_axiom() {
        let m = hv_module(Poly::param("a"), Poly::param("b"), &Poly::param("c") + &Poly::lambda());
        let r = check_module(&HeisenbergVirasoro, &m, GenId::plain("H"), GenId::plain("L")).unwrap();
        assert!(!r.is_zero());
    }

    #[test]
    fn vir_degree_one_solver() {
        let s = rank_one_solver(&Virasoro, 1, 0, Exec::Sequential).unwrap();
        assert!(s.is_decided());
        assert!(s.trivial);
        assert_eq!(s.families.len(), 1);
        let f = &s.families[0];
        assert_eq!(f.module.action_of(GenId::plain("L")), vir_module(Poly::param("a"), Poly::param("b")).action_of(GenId::plain("L")));
        assert!(f.nonzero.is_empty());
    }

    #[test]
    fn hv_degree_one_solver() {
        let s = rank_one_solver(&HeisenbergVirasoro, 1, 0, Exec::Sequential).unwrap();
        assert!(s.is_decided());
        assert_eq!(s.families.len(), 1);
        let want = hv_module(Poly::param("a"), Poly::param("b"), Poly::param("c"));
        assert_eq!(s.families[0].module.action, want.action);
    }

    #[test]
    fn hv_ab_small_solver() {
        let s = rank_one_solver(&hv21(), 1, 2, Exec::Sequential).unwrap();
        assert!(s.is_decided(), "{:?}", s.undecided);
        assert_eq!(s.families.len(), 1);
        assert_eq!(s.families[0].module.action, hv_ab_module(Poly::param("a"), Poly::param("b")).action);
    }

    #[test]
    fn submodules() {
        let beta = Poly::param("beta");
        let v0 = vir_module(Poly::zero(), beta.clone());
        let gens = [GenId::plain("L")];
        assert!(submodule_test(&v0, &gens, &(&Poly::d() + &beta)).unwrap());
        assert!(submodule_test(&v0, &gens, &Poly::one()).unwrap());
        let b = Poly::param("b");
        let v1 = hv_ab_module(Poly::one(), b.clone());
        assert!(!submodule_test(&v1, &[HvAb::l()], &(&Poly::d() + &b)).unwrap());
    }

    #[test]
    fn top_h_obstruction_coefficients() {
        let hv = HvAb::symbolic();
        for (i, k) in [(0, 2), (-1, 1), (3, 5)] {
            let (r, f) = top_h_action_obstruction(&hv, i, 2).unwrap();
            let lm = &Poly::lambda() + &Poly::mu();
            assert_eq!(r, f.substitute(Var::Lambda, &lm).scale(&q(-k)));
        }
    }

    #[test]
    fn c_contradiction_trace() {
        let t = replay_c_contradiction(&HvAb::symbolic(), 3, 2).unwrap();
        assert!(t.all_hold(), "{:#?}", t.steps);
        assert!(t.contradiction);
        assert!(c_zero_forces_vanishing(&hv21(), 3, 2).unwrap());
    }

    #[test]
    fn specialization_of_family() {
        let m = hv_ab_module(Poly::param("a"), Poly::param("b"));
        let mut vals = BTreeMap::new();
        vals.insert(Sym::new("a"), Q::new(3.into(), 2.into()));
        vals.insert(Sym::new("b"), q(-1));
        let m = m.eval_partial(&vals);
        assert!(module_failures(&hv21(), &m, &hv21().window(-1, 4), Exec::Sequential).unwrap().is_empty());
    }
}

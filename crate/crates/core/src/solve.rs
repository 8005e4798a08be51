//! Exact case-splitting solver for small polynomial systems over ℚ.
//!
//! Equations are [`Poly`]s whose parameters are the unknowns. A branch repeatedly
//! normalizes its equations under the current substitution and then applies the first
//! rule that fits:
//!
//! 1. all linear equations at once, by exact row reduction;
//! 2. a single-term equation or a common factor `v·q = 0`: split `v = 0 | v ≠ 0`;
//! 3. a univariate equation: one branch per rational root;
//! 4. an equation linear in `u` with constant coefficient: substitute for `u`;
//! 5. an equation linear in `u` whose coefficient is a monomial `c·v^k`:
//!    split `v = 0 | v ≠ 0`, dividing by `v` (Laurent exponents) in the second branch.
//!
//! A branch where no rule applies is reported as undecided. Equations can be grouped in
//! stages that are fed in order, so callers control the elimination schedule.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

use crate::linalg::{Rref, SparseRow};
use crate::poly::{Monomial, Poly, Q};
use crate::sym::{Sym, Var};

#[derive(Clone, Debug)]
pub struct Stage {
    pub label: String,
    pub equations: Vec<Poly>,
}

impl Stage {
    pub fn new(label: impl Into<String>, equations: Vec<Poly>) -> Self {
        Stage { label: label.into(), equations }
    }
}

#[derive(Clone, Debug)]
pub struct Problem {
    /// Unknowns in elimination order: earlier ones are solved for first, later ones tend
    /// to remain free.
    pub unknowns: Vec<Sym>,
    pub stages: Vec<Stage>,
    /// Unknowns assumed nonzero from the start.
    pub nonzero: Vec<Sym>,
    pub max_branches: usize,
}

impl Problem {
    pub fn new(unknowns: Vec<Sym>) -> Self {
        Problem { unknowns, stages: Vec::new(), nonzero: Vec::new(), max_branches: 20_000 }
    }

    pub fn stage(mut self, label: impl Into<String>, equations: Vec<Poly>) -> Self {
        self.stages.push(Stage::new(label, equations));
        self
    }
}

/// A consistent branch: every unknown in `subst` is a polynomial in the free unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub subst: BTreeMap<Sym, Poly>,
    pub nonzero: BTreeSet<Sym>,
    /// Nonzero assumptions this branch divided by.
    pub divided_by: BTreeSet<Sym>,
    pub trace: Vec<String>,
}

impl Branch {
    pub fn value(&self, u: Sym) -> Poly {
        self.subst.get(&u).cloned().unwrap_or_else(|| Poly::var(Var::Param(u)))
    }

    pub fn free(&self, unknowns: &[Sym]) -> Vec<Sym> {
        unknowns.iter().copied().filter(|u| !self.subst.contains_key(u)).collect()
    }

    /// Substitution applying this branch to a polynomial in the unknowns.
    pub fn apply(&self, p: &Poly) -> Poly {
        apply_subst(p, &self.subst)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Undecided {
    pub reason: String,
    pub equations: Vec<Poly>,
    pub trace: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Solution {
    pub branches: Vec<Branch>,
    pub undecided: Vec<Undecided>,
    /// Branches closed by a contradiction.
    pub dead: usize,
}

impl Solution {
    pub fn is_decided(&self) -> bool {
        self.undecided.is_empty()
    }
}

fn apply_subst(p: &Poly, subst: &BTreeMap<Sym, Poly>) -> Poly {
    let subs: Vec<(Var, Poly)> = p
        .vars()
        .into_iter()
        .filter_map(|v| match v {
            Var::Param(s) => subst.get(&s).map(|e| (v, e.clone())),
            _ => None,
        })
        .collect();
    if subs.is_empty() {
        p.clone()
    } else {
        p.substitute_many(&subs)
    }
}

fn unknown_of(v: Var) -> Option<Sym> {
    match v {
        Var::Param(s) => Some(s),
        _ => None,
    }
}

#[derive(Clone, Debug)]
struct State {
    eqs: Vec<Poly>,
    stage: usize,
    subst: BTreeMap<Sym, Poly>,
    nonzero: BTreeSet<Sym>,
    divided_by: BTreeSet<Sym>,
    trace: Vec<String>,
}

enum Step {
    Continue(State),
    Split(Vec<State>),
    Dead,
    Done(Branch),
    Stuck(Undecided),
}

pub fn solve(problem: &Problem) -> Solution {
    let order: BTreeMap<Sym, usize> = problem.unknowns.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut stack = vec![State {
        eqs: Vec::new(),
        stage: 0,
        subst: BTreeMap::new(),
        nonzero: problem.nonzero.iter().copied().collect(),
        divided_by: BTreeSet::new(),
        trace: Vec::new(),
    }];
    let mut out = Solution::default();
    let mut visited = 0usize;
    while let Some(state) = stack.pop() {
        visited += 1;
        if visited > problem.max_branches {
            out.undecided.push(Undecided {
                reason: format!("branch budget of {} exhausted", problem.max_branches),
                equations: state.eqs,
                trace: state.trace,
            });
            continue;
        }
        let mut cur = state;
        loop {
            match step(cur, problem, &order) {
                Step::Continue(s) => cur = s,
                Step::Split(mut kids) => {
                    kids.reverse();
                    stack.extend(kids);
                    break;
                }
                Step::Dead => {
                    out.dead += 1;
                    break;
                }
                Step::Done(b) => {
                    out.branches.push(b);
                    break;
                }
                Step::Stuck(u) => {
                    out.undecided.push(u);
                    break;
                }
            }
        }
    }
    out
}

/// Clears negative exponents and nonzero monomial content; `None` on contradiction.
/// Symbols whose positive content was divided out are added to `used`.
fn normalize(p: &Poly, nonzero: &BTreeSet<Sym>, used: &mut BTreeSet<Sym>) -> Option<Poly> {
    if p.is_zero() {
        return Some(Poly::zero());
    }
    // smallest exponent per nonzero unknown across terms (may be negative)
    let mut shift: BTreeMap<Sym, i32> = BTreeMap::new();
    let mut first = true;
    for (m, _) in p.terms() {
        let mut here: BTreeMap<Sym, i32> = BTreeMap::new();
        for (v, e) in m.iter() {
            if let Some(s) = unknown_of(v).filter(|s| nonzero.contains(s)) {
                here.insert(s, e);
            }
        }
        if first {
            shift = here;
            first = false;
        } else {
            let keys: Vec<Sym> = shift.keys().copied().collect();
            for s in keys {
                let e = here.get(&s).copied().unwrap_or(0);
                let cur = shift[&s];
                shift.insert(s, cur.min(e));
            }
            for (s, e) in here {
                if e < 0 {
                    let cur = shift.get(&s).copied().unwrap_or(0);
                    shift.insert(s, cur.min(e));
                }
            }
        }
    }
    let mut divisor = Monomial::one();
    for (s, e) in shift {
        if e > 0 {
            used.insert(s);
        }
        if e != 0 {
            divisor = divisor.mul(&Monomial::var(Var::Param(s), -e));
        }
    }
    let q = if divisor.is_one() { p.clone() } else { p.mul_term(&Q::one(), &divisor) };
    // every exponent must now be nonnegative
    debug_assert!(q.terms().all(|(m, _)| m.iter().all(|(_, e)| e >= 0)));
    if q.len() == 1 {
        let (m, _) = q.leading_term().unwrap();
        if m.iter().all(|(v, _)| unknown_of(v).is_some_and(|s| nonzero.contains(&s))) {
            return None;
        }
    }
    Some(q.monic())
}

fn step(mut st: State, problem: &Problem, order: &BTreeMap<Sym, usize>) -> Step {
    // normalize pending equations
    let mut seen: HashSet<Poly> = HashSet::new();
    let mut eqs = Vec::with_capacity(st.eqs.len());
    for e in std::mem::take(&mut st.eqs) {
        let e = apply_subst(&e, &st.subst);
        match normalize(&e, &st.nonzero, &mut st.divided_by) {
            None => return Step::Dead,
            Some(e) if e.is_zero() => {}
            Some(e) => {
                if seen.insert(e.clone()) {
                    eqs.push(e);
                }
            }
        }
    }
    st.eqs = eqs;
    if st.eqs.is_empty() {
        if st.stage < problem.stages.len() {
            let stage = &problem.stages[st.stage];
            st.eqs = stage.equations.clone();
            st.stage += 1;
            return Step::Continue(st);
        }
        return Step::Done(Branch { subst: st.subst, nonzero: st.nonzero, divided_by: st.divided_by, trace: st.trace });
    }

    // 1. linear batch
    let linear: Vec<&Poly> = st
        .eqs
        .iter()
        .filter(|e| e.total_degree().unwrap_or(0) <= 1 && e.terms().all(|(m, _)| m.iter().all(|(_, k)| k >= 0)))
        .collect();
    if !linear.is_empty() {
        let mut cols: Vec<Sym> = linear.iter().flat_map(|e| e.vars()).filter_map(unknown_of).collect();
        cols.sort_by_key(|s| order.get(s).copied().unwrap_or(usize::MAX));
        cols.dedup();
        let index: BTreeMap<Sym, usize> = cols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let n = cols.len();
        let mut rref = Rref::new(n + 1);
        for e in &linear {
            let mut row = SparseRow::new();
            for (m, k) in e.terms() {
                let col = match m.iter().next() {
                    None => n,
                    Some((v, _)) => index[&unknown_of(v).expect("unknowns are parameters")],
                };
                row.insert(col, k.clone());
            }
            rref.insert(row);
        }
        if rref.pivot_row(n).is_some() {
            return Step::Dead;
        }
        // pivot row: u_p + Σ c_f u_f + c = 0 over free columns f
        let mut fixed = BTreeMap::new();
        for (p, row) in rref.rows() {
            let mut val = Poly::zero();
            for (c, k) in row.iter().filter(|(c, _)| **c != p) {
                let term = if *c == n { Poly::constant(k.clone()) } else { Poly::var(Var::Param(cols[*c])).scale(k) };
                val -= &term;
            }
            fixed.insert(cols[p], val);
        }
        st.trace.push(format!("linear elimination fixed {} unknowns", fixed.len()));
        return Step::Continue(bind_all(st, fixed));
    }

    // 2. monomial factor
    let mut by_size: Vec<usize> = (0..st.eqs.len()).collect();
    by_size.sort_by_key(|&i| (st.eqs[i].len(), st.eqs[i].total_degree()));
    for &i in &by_size {
        if let Some(v) = common_factor(&st.eqs[i], order) {
            return Step::Split(split_on(st, v, i));
        }
    }

    // 3. univariate
    for &i in &by_size {
        let e = &st.eqs[i];
        let vars: Vec<Sym> = e.vars().into_iter().filter_map(unknown_of).collect();
        if vars.len() == 1 {
            let u = vars[0];
            let (roots, leftover) = rational_roots(e, u);
            let mut kids = Vec::new();
            for r in &roots {
                let mut s = st.clone();
                s.trace.push(format!("root {u} = {r}"));
                let mut m = BTreeMap::new();
                m.insert(u, Poly::constant(r.clone()));
                kids.push(bind_all(s, m));
            }
            if let Some(rest) = leftover {
                let mut s = st.clone();
                s.trace.push(format!("{u} is a root of {rest} with no rational roots"));
                if kids.is_empty() {
                    return Step::Stuck(Undecided {
                        reason: format!("irrational roots of {rest}"),
                        equations: s.eqs,
                        trace: s.trace,
                    });
                }
                // record the unexplored algebraic branch alongside the rational ones
                kids.push(State { eqs: vec![rest], ..s });
            }
            if kids.is_empty() {
                return Step::Dead;
            }
            return Step::Split(kids);
        }
    }

    // 4. linear with constant coefficient
    for &i in &by_size {
        let e = &st.eqs[i];
        let mut cands: Vec<Sym> = e.vars().into_iter().filter_map(unknown_of).collect();
        cands.sort_by_key(|s| order.get(s).copied().unwrap_or(usize::MAX));
        for u in cands {
            let v = Var::Param(u);
            if e.degree_in(v) != Some(1) || e.terms().any(|(m, _)| m.exponent(v) < 0) {
                continue;
            }
            let c = e.coeff_of(v, 1);
            if let Some(k) = c.constant_value().filter(|k| !k.is_zero()) {
                let rest = e.coeff_of(v, 0);
                let val = rest.scale(&(-k.recip()));
                let mut m = BTreeMap::new();
                m.insert(u, val);
                st.trace.push(format!("solved for {u}"));
                return Step::Continue(bind_all(st, m));
            }
        }
    }

    // 5. linear with monomial coefficient: divide when invertible, else split on a factor
    let mut split: Option<(Sym, usize)> = None;
    for &i in &by_size {
        let e = &st.eqs[i];
        let mut cands: Vec<Sym> = e.vars().into_iter().filter_map(unknown_of).collect();
        cands.sort_by_key(|s| order.get(s).copied().unwrap_or(usize::MAX));
        for u in cands {
            let v = Var::Param(u);
            if e.degree_in(v) != Some(1) || e.terms().any(|(m, _)| m.exponent(v) < 0) {
                continue;
            }
            let c = e.coeff_of(v, 1);
            if c.len() != 1 {
                continue;
            }
            let (m, k) = c.leading_term().map(|(m, k)| (m.clone(), k.clone())).unwrap();
            let pending = m.iter().filter_map(|(w, _)| unknown_of(w)).find(|s| !st.nonzero.contains(s));
            if let Some(w) = pending {
                split.get_or_insert((w, i));
                continue;
            }
            let val = e.coeff_of(v, 0).mul_term(&(-k.recip()), &invert(&m));
            let mut map = BTreeMap::new();
            map.insert(u, val);
            st.divided_by.extend(m.iter().filter_map(|(w, _)| unknown_of(w)));
            st.trace.push(format!("solved for {u} dividing by a nonzero monomial"));
            return Step::Continue(bind_all(st, map));
        }
    }
    if let Some((w, i)) = split {
        return Step::Split(split_on(st, w, i));
    }

    Step::Stuck(Undecided {
        reason: "no elimination rule applies".into(),
        equations: st.eqs.clone(),
        trace: st.trace,
    })
}

fn invert(m: &Monomial) -> Monomial {
    m.iter().fold(Monomial::one(), |acc, (v, e)| acc.mul(&Monomial::var(v, -e)))
}

fn bind_all(mut st: State, fixed: BTreeMap<Sym, Poly>) -> State {
    // compose: existing values may mention newly fixed unknowns
    let fixed: BTreeMap<Sym, Poly> = fixed.into_iter().map(|(k, v)| (k, apply_subst(&v, &st.subst))).collect();
    for v in st.subst.values_mut() {
        *v = apply_subst(v, &fixed);
    }
    st.subst.extend(fixed);
    st
}

/// An unknown dividing every term (not yet assumed nonzero), earliest in order.
fn common_factor(e: &Poly, order: &BTreeMap<Sym, usize>) -> Option<Sym> {
    let mut common: Option<BTreeSet<Sym>> = None;
    for (m, _) in e.terms() {
        let here: BTreeSet<Sym> = m.iter().filter(|(_, k)| *k > 0).filter_map(|(v, _)| unknown_of(v)).collect();
        common = Some(match common {
            None => here,
            Some(c) => c.intersection(&here).copied().collect(),
        });
    }
    common?.into_iter().min_by_key(|s| order.get(s).copied().unwrap_or(usize::MAX))
}

fn split_on(st: State, v: Sym, _eq: usize) -> Vec<State> {
    let mut zero = st.clone();
    zero.trace.push(format!("case {v} = 0"));
    let mut m = BTreeMap::new();
    m.insert(v, Poly::zero());
    let zero = bind_all(zero, m);
    let mut nz = st;
    nz.trace.push(format!("case {v} != 0"));
    nz.nonzero.insert(v);
    vec![zero, nz]
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    let small = n.to_u64().filter(|x| *x <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            if d * d != small {
                out.push(BigInt::from(small / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots of a univariate polynomial and the cofactor left after removing them
/// (`None` if nothing of positive degree remains).
pub fn rational_roots(p: &Poly, u: Sym) -> (Vec<Q>, Option<Poly>) {
    let v = Var::Param(u);
    let mut rest = p.clone();
    let mut roots = Vec::new();
    loop {
        let deg = match rest.degree_in(v) {
            Some(d) if d > 0 => d,
            _ => return (roots, None),
        };
        let coeffs: Vec<Q> = (0..=deg).map(|k| rest.coeff_of(v, k).constant_value().unwrap_or_default()).collect();
        if coeffs[0].is_zero() {
            if !roots.contains(&Q::zero()) {
                roots.push(Q::zero());
            }
            rest = rest.div_rem_in(&Poly::var(v), v).expect("monic divisor").0;
            continue;
        }
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
        let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(&ints[deg as usize])) else {
            return (roots, Some(rest));
        };
        let mut found = None;
        'search: for pn in &ps {
            for qd in &qs {
                for sign in [1, -1] {
                    let r = Q::new(pn * sign, qd.clone());
                    let val = coeffs.iter().rev().fold(Q::zero(), |acc, c| acc * &r + c);
                    if val.is_zero() {
                        found = Some(r);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                let lin = &Poly::var(v) - &Poly::constant(r.clone());
                rest = rest.div_rem_in(&lin, v).expect("monic divisor").0;
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            None => return (roots, Some(rest)),
        }
    }
}

/// Whether every point of `inner` lies in the closure of `outer`'s parametrization: each
/// unknown fixed by `outer` evaluates, at `inner`'s generic point, to `inner`'s value.
pub fn branch_contained(inner: &Branch, outer: &Branch, unknowns: &[Sym]) -> bool {
    let point: BTreeMap<Sym, Poly> = unknowns.iter().map(|u| (*u, inner.value(*u))).collect();
    for u in unknowns {
        let Some(expr) = outer.subst.get(u) else {
            continue;
        };
        if expr.terms().any(|(m, _)| m.iter().any(|(_, e)| e < 0)) {
            return false;
        }
        if apply_subst(expr, &point) != point[u] {
            return false;
        }
    }
    true
}

/// Removes branches contained in another branch's family. When the removed branch also
/// covers the slice `v = 0` of a branch that assumed `v ≠ 0`, that assumption is dropped.
pub fn merge_branches(mut branches: Vec<Branch>, unknowns: &[Sym]) -> Vec<Branch> {
    let mut changed = true;
    while changed {
        changed = false;
        'outer: for i in 0..branches.len() {
            for j in 0..branches.len() {
                if i == j || !branch_contained(&branches[i], &branches[j], unknowns) {
                    continue;
                }
                let inner = branches[i].clone();
                let mut outer = branches[j].clone();
                let drops: Vec<Sym> = outer
                    .nonzero
                    .iter()
                    .copied()
                    .filter(|v| inner.value(*v).is_zero() && slice_contained(&outer, *v, &inner, unknowns))
                    .collect();
                for v in drops {
                    outer.nonzero.remove(&v);
                }
                branches[j] = outer;
                branches.remove(i);
                changed = true;
                break 'outer;
            }
        }
    }
    branches
}

fn slice_contained(outer: &Branch, v: Sym, inner: &Branch, unknowns: &[Sym]) -> bool {
    if outer.subst.values().any(|e| e.terms().any(|(m, _)| m.exponent(Var::Param(v)) < 0)) {
        return false;
    }
    let mut sliced = outer.clone();
    let mut m = BTreeMap::new();
    m.insert(v, Poly::zero());
    for e in sliced.subst.values_mut() {
        *e = apply_subst(e, &m);
    }
    sliced.subst.insert(v, Poly::zero());
    branch_contained(&sliced, inner, unknowns)
}

/// The coefficients of `p` with respect to ∂, λ, μ, ν: one equation per monomial.
pub fn coefficient_equations(p: &Poly) -> Vec<Poly> {
    p.collect_by(|v| v.is_indeterminate()).into_values().filter(|e| !e.is_zero()).collect()
}

/// Exponent vectors of total degree `≤ degree` in `k` variables, highest degree first and,
/// within a degree, earlier variables heavier.
pub fn exponent_vectors(k: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == k {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(k, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for total in (0..=degree).rev() {
        if k == 0 {
            if total == 0 {
                out.push(vec![]);
            }
            continue;
        }
        rec(k, total, &mut Vec::new(), &mut out);
    }
    out
}

/// `Σ u_e · vars^e` over all exponent vectors of total degree `≤ degree`, with fresh unknowns
/// `{prefix}_{e1}_{e2}…` appended to `unknowns` in the same order.
pub fn ansatz(prefix: &str, vars: &[Var], degree: u32, unknowns: &mut Vec<Sym>) -> Poly {
    let mut p = Poly::zero();
    for e in exponent_vectors(vars.len(), degree) {
        let name = std::iter::once(prefix.to_string()).chain(e.iter().map(|x| x.to_string())).collect::<Vec<_>>().join("_");
        let u = Sym::new(&name);
        unknowns.push(u);
        let m = vars.iter().zip(&e).fold(Monomial::var(Var::Param(u), 1), |acc, (v, k)| acc.mul(&Monomial::var(*v, *k as i32)));
        p += Poly::term(Q::one(), m);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_with, q, ParseContext};

    fn sys(unknowns: &[&str], eqs: &[&str]) -> (Problem, Vec<Sym>) {
        let ctx = ParseContext::with_params(unknowns);
        let u: Vec<Sym> = unknowns.iter().map(|s| Sym::new(s)).collect();
        let p = Problem::new(u.clone()).stage("all", eqs.iter().map(|e| parse_with(e, &ctx).unwrap()).collect());
        (p, u)
    }

    #[test]
    fn ansatz_shape() {
        let mut u = Vec::new();
        let p = ansatz("f", &[Var::D, Var::Lambda], 1, &mut u);
        assert_eq!(u.len(), 3);
        assert_eq!(u[0].as_str(), "f_1_0");
        assert_eq!(u[2].as_str(), "f_0_0");
        assert_eq!(p.len(), 3);
        assert_eq!(exponent_vectors(2, 2).len(), 6);
        assert_eq!(coefficient_equations(&p).len(), 3);
    }

    #[test]
    fn linear_system() {
        let (p, _) = sys(&["x", "y"], &["x + y - 3", "x - y - 1"]);
        let s = solve(&p);
        assert_eq!(s.branches.len(), 1);
        assert_eq!(s.branches[0].value(Sym::new("x")), Poly::int(2));
    }

    #[test]
    fn factor_split() {
        // x(y - 1) = 0, y^2 = y
        let (p, u) = sys(&["x", "y"], &["x*y - x", "y^2 - y"]);
        let s = solve(&p);
        assert!(s.is_decided());
        let merged = merge_branches(s.branches, &u);
        // {y = 0, x = 0} and {y = 1, x free}
        assert_eq!(merged.len(), 2);
    }

    #[test]
    fn rational_root_branches() {
        let (p, _) = sys(&["x"], &["x^2 - 5*x + 6"]);
        let s = solve(&p);
        let mut vals: Vec<Q> = s.branches.iter().map(|b| b.value(Sym::new("x")).constant_value().unwrap()).collect();
        vals.sort();
        assert_eq!(vals, vec![q(2), q(3)]);
        let (p, _) = sys(&["x"], &["x^2 - 2"]);
        assert!(!solve(&p).is_decided());
    }

    #[test]
    fn inconsistent_system_dies() {
        let (p, _) = sys(&["x"], &["x - 1", "x - 2"]);
        let s = solve(&p);
        assert!(s.branches.is_empty());
        assert_eq!(s.dead, 1);
    }

    #[test]
    fn division_by_assumed_nonzero() {
        let (mut p, _) = sys(&["x", "y"], &["x*y - 1"]);
        p.nonzero.push(Sym::new("x"));
        let s = solve(&p);
        assert_eq!(s.branches.len(), 1);
        let y = s.branches[0].value(Sym::new("y"));
        assert_eq!(&y * &Poly::param("x"), Poly::one());
    }
}

use std::collections::{BTreeMap, BTreeSet};

use conforma::cmodules::{module_failures, rank_one_solver, RankOneModule};
use conforma::lca::HvAb;
use conforma::poly::q;
use conforma::{ConformalAlgebra, Exec, GenId, Poly, Q};

fn key(m: &RankOneModule) -> String {
    format!("{:?}", m.action.iter().map(|(g, p)| (g.to_string(), p.to_string())).collect::<Vec<_>>())
}

/// Every action on `L, H_-1, H_0, H_1` with `L ↦ x0 + x1∂ + x2λ` and `H_i ↦` one of a few
/// small polynomials, filtered by the module axioms directly; compared with the instances
/// of the solver's families on the same grid.
#[test]
fn brute_force_agrees_with_solver() {
    let hv = HvAb::specialized(q(2), q(1));
    let window = 1;
    let gens = hv.window(-1, window);
    let grid: Vec<Q> = [-1, 0, 1, 2].into_iter().map(q).collect();
    let h_choices = [Poly::zero(), Poly::one(), Poly::d(), Poly::lambda()];
    let mut found = BTreeSet::new();
    for x0 in &grid {
        for x1 in &grid {
            for x2 in &grid {
                let fl = &(&Poly::constant(x0.clone()) + &Poly::d().scale(x1)) + &Poly::lambda().scale(x2);
                for code in 0..h_choices.len().pow(3) {
                    let mut action = vec![(HvAb::l(), fl.clone())];
                    let mut c = code;
                    for i in -1..=window {
                        action.push((HvAb::h(i), h_choices[c % h_choices.len()].clone()));
                        c /= h_choices.len();
                    }
                    let m = RankOneModule::new("candidate", action);
                    if module_failures(&hv, &m, &gens, Exec::Sequential).unwrap().is_empty() {
                        found.insert(key(&m));
                    }
                }
            }
        }
    }
    let sol = rank_one_solver(&hv, 1, window, Exec::Sequential).unwrap();
    assert!(sol.is_decided());
    let mut predicted = BTreeSet::new();
    if sol.trivial {
        predicted.insert(key(&RankOneModule::new("zero", Vec::<(GenId, Poly)>::new())));
    }
    for fam in &sol.families {
        let n = fam.scalars.len();
        for code in 0..grid.len().pow(n as u32) {
            let mut c = code;
            let mut vals = BTreeMap::new();
            for s in &fam.scalars {
                vals.insert(*s, grid[c % grid.len()].clone());
                c /= grid.len();
            }
            if fam.nonzero.iter().any(|s| vals[s] == q(0)) {
                continue;
            }
            let inst = fam.module.eval_partial(&vals);
            // keep instances whose L-action lies on the brute-force grid
            let fl = inst.action_of(HvAb::l());
            let on_grid = fl.terms().all(|(_, c)| grid.contains(c)) && inst.action.len() == 1;
            if on_grid {
                predicted.insert(key(&inst));
            }
        }
    }
    assert!(found.len() > 1, "{found:?}");
    assert_eq!(found, predicted);
}

use conforma::cderiv::{derivation_failures, inner, solve_derivations, DerivationProblem};
use conforma::lca::HvAb;
use conforma::poly::q;
use conforma::{ConformalAlgebra, Element, Exec, Poly, Q};
use proptest::prelude::*;

fn space(shift: i64) -> conforma::cderiv::DerivationSpace {
    solve_derivations(&HvAb::specialized(q(2), q(1)), &DerivationProblem { shift, window: 3, degree: 2 }, Exec::Sequential).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Random combinations of the solution basis satisfy the derivation law pair by pair.
    #[test]
    fn solution_space_is_linear(shift in -1i64..=2, coeffs in prop::collection::vec(-3i64..=3, 8)) {
        let s = space(shift);
        let hv = HvAb::specialized(q(2), q(1));
        let mut v = vec![Q::from_integer(0.into()); s.coords.len()];
        for (b, c) in s.basis.iter().zip(coeffs.iter()) {
            for (vi, bi) in v.iter_mut().zip(b.iter()) {
                *vi += bi * q(*c);
            }
        }
        prop_assert!(s.satisfies(&v));
        let phi = s.map_of(&v);
        let (bad, _) = derivation_failures(&hv, &phi, &hv.window(-1, 3), Exec::Sequential).unwrap();
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    /// `ad x` is a derivation for random `x`, with symbolic α, β.
    #[test]
    fn inner_maps_are_derivations(terms in prop::collection::vec((0i64..5, -2i64..=2, 0u32..3), 1..4)) {
        let hv = HvAb::symbolic();
        let mut x = Element::zero();
        for (g, c, k) in terms {
            let gen = if g == 0 { HvAb::l() } else { HvAb::h(g - 2) };
            x.add_term(gen, Poly::d().pow(k).scale(&q(c)));
        }
        let gens = hv.window(-1, 3);
        let phi = inner(&hv, &x, &gens).unwrap();
        let (bad, _) = derivation_failures(&hv, &phi, &gens, Exec::Sequential).unwrap();
        prop_assert!(bad.is_empty());
    }
}

#[test]
fn a_non_solution_fails_the_law() {
    let s = space(1);
    let hv = HvAb::specialized(q(2), q(1));
    let unit = |k: usize| (0..s.coords.len()).map(|i| q((i == k) as i64)).collect::<Vec<Q>>();
    let v = (0..s.coords.len()).map(unit).find(|v| !s.satisfies(v)).expect("some coordinate is constrained");
    let (bad, _) = derivation_failures(&hv, &s.map_of(&v), &hv.window(-1, 3), Exec::Sequential).unwrap();
    assert!(!bad.is_empty());
}

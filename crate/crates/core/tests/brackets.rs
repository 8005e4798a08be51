use conforma::coeff::{mode_bracket, ModeElement};
use conforma::lca::checks::{jacobi_residual, skew_residual};
use conforma::lca::{bracket_in, HvAb, Virasoro};
use conforma::poly::q;
use conforma::{ConformalAlgebra, Element, GenId, Poly, Var};
use proptest::prelude::*;

fn d_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(-3i64..=3, 1..3).prop_map(|cs| {
        cs.iter().enumerate().fold(Poly::zero(), |acc, (k, c)| &acc + &Poly::d().pow(k as u32).scale(&q(*c)))
    })
}

fn element(top: i64) -> impl Strategy<Value = Element> {
    prop::collection::vec((0..=top + 2, d_poly()), 1..3).prop_map(move |terms| {
        let mut e = Element::zero();
        for (k, p) in terms {
            let g = if k == 0 { HvAb::l() } else { HvAb::h(k - 2) };
            e.add_term(g, p);
        }
        e
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sesquilinearity(x in element(2), y in element(2)) {
        let hv = HvAb::symbolic();
        let br = bracket_in(&hv, &x, &y, Var::Lambda).unwrap();
        // [∂x_λ y] = −λ[x_λ y]
        let lhs = bracket_in(&hv, &x.partial(), &y, Var::Lambda).unwrap();
        prop_assert_eq!(lhs, br.scale(&-Poly::lambda()));
        // [x_λ ∂y] = (∂+λ)[x_λ y]
        let rhs = bracket_in(&hv, &x, &y.partial(), Var::Lambda).unwrap();
        prop_assert_eq!(rhs, br.partial().add(&br.scale(&Poly::lambda())));
    }

    #[test]
    fn axioms_on_random_elements(x in element(1), y in element(1), z in element(1)) {
        let hv = HvAb::symbolic();
        prop_assert!(skew_residual(&hv, &x, &y).unwrap().is_zero());
        prop_assert!(jacobi_residual(&hv, &x, &y, &z).unwrap().is_zero());
    }
}

#[test]
fn virasoro_modes_form_witt_algebra() {
    // [L_(m), L_(n)] = (m − n) L_(m+n−1)
    let l = GenId::plain("L");
    for m in 0..5 {
        for n in 0..5 {
            let b = mode_bracket(&Virasoro, &ModeElement::mode(l, m), &ModeElement::mode(l, n)).unwrap();
            assert_eq!(b, ModeElement::term(l, m + n - 1, Poly::int(m - n)), "m={m} n={n}");
        }
    }
}

#[test]
fn hv_ab_table_entries() {
    let hv = HvAb::symbolic();
    let (a, b) = (Poly::param("alpha"), Poly::param("beta"));
    let (d, l) = (Poly::d(), Poly::lambda());
    for i in -1..4 {
        let qi = q(i);
        let want = &(&d + &(&(&a.scale(&qi) - &Poly::int(i - 1)) * &l)) + &b.scale(&qi);
        assert_eq!(hv.bracket_generators(HvAb::l(), HvAb::h(i)).unwrap(), Element::term(HvAb::h(i), want));
        for j in -1..4 {
            let got = hv.bracket_generators(HvAb::h(i), HvAb::h(j)).unwrap();
            assert_eq!(got, Element::term(HvAb::h(i + j), Poly::int(j - i)));
        }
    }
}

use conforma::classify::{forward_verify, normalize_basis, skew_partner, ClosedForm, XAlgebra};
use conforma::poly::q;
use conforma::{Exec, Poly, Q, Var};
use proptest::prelude::*;

fn nonzero() -> impl Strategy<Value = Q> {
    (prop_oneof![-4i64..=-1, 1i64..=4], 1i64..=3).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn closed_form(count: usize) -> impl Strategy<Value = ClosedForm> {
    (nonzero(), nonzero(), nonzero(), prop::collection::vec(nonzero(), count))
        .prop_map(|(a, b, g, xs)| ClosedForm::specialized(a, b, g, xs))
}

/// `f_{j,i}(∂,λ) = −f_{i,j}(∂,−∂−λ)`, checked by direct substitution.
fn partner_identity(t: &XAlgebra, i: i64, j: i64) -> bool {
    let fij = t.f(i, j).unwrap();
    let fji = t.f(j, i).unwrap();
    let flipped = fij.substitute(Var::Lambda, &-(&Poly::d() + &Poly::lambda()));
    fji == -&flipped
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn rational_closed_forms_satisfy_axioms(cf in closed_form(9)) {
        prop_assert!(forward_verify(&cf, 3, Exec::Sequential).unwrap().all_pass());
    }

    #[test]
    fn rescaling_lands_on_hv(cf in closed_form(6)) {
        let n = normalize_basis(&cf.table(6).unwrap(), 3).unwrap();
        prop_assert!(n.matches(), "{:?}", n.mismatches);
    }

    #[test]
    fn skew_partner_is_structural(cf in closed_form(6), i in 1i64..=3, j in 1i64..=3) {
        let t = cf.table(6).unwrap();
        prop_assert!(partner_identity(&t, i, j));
        prop_assert!(partner_identity(&t, -1, j));
        let e = t.pair(i, j).unwrap();
        prop_assert_eq!(skew_partner(&skew_partner(&e)), e);
    }
}

#[test]
fn all_ones_rescale_verbatim() {
    let cf = ClosedForm::specialized(q(3), q(-2), q(1), vec![q(1); 6]);
    let n = normalize_basis(&cf.table(6).unwrap(), 4).unwrap();
    assert!(n.matches());
    assert!(n.scales.iter().any(|(g, s)| g.to_string() == "X_3" && *s == Poly::int(24)));
}

use std::collections::BTreeMap;

use conforma::poly::{q, Monomial};
use conforma::{parse_with, ParseContext, Poly, Q, Var};
use num::{One, Zero};
use proptest::prelude::*;

fn vars() -> [Var; 3] {
    [Var::D, Var::Lambda, Var::param("a")]
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((-5i64..=5, 0i32..3, 0i32..3, 0i32..2), 0..5).prop_map(|terms| {
        let mut p = Poly::zero();
        for (c, ed, el, ea) in terms {
            let [d, l, a] = vars();
            let m = Monomial::var(d, ed).mul(&Monomial::var(l, el)).mul(&Monomial::var(a, ea));
            p += &Poly::term(q(c), m);
        }
        p
    })
}

fn point() -> impl Strategy<Value = [Q; 3]> {
    [(-4i64..=4, 1i64..=3), (-4i64..=4, 1i64..=3), (-4i64..=4, 1i64..=3)]
        .prop_map(|v| v.map(|(n, d)| Q::new(n.into(), d.into())))
}

/// Evaluates term by term, independently of the library's substitution code.
fn eval(p: &Poly, at: &[Q; 3]) -> Q {
    let vals: BTreeMap<Var, Q> = vars().into_iter().zip(at.iter().cloned()).collect();
    let mut out = Q::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (v, e) in m.iter() {
            for _ in 0..e {
                t *= &vals[&v];
            }
        }
        out += t;
    }
    out
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Poly::one(), a.clone());
    }

    #[test]
    fn arithmetic_agrees_with_evaluation(a in poly(), b in poly(), at in point()) {
        prop_assert_eq!(eval(&(&a * &b), &at), eval(&a, &at) * eval(&b, &at));
        prop_assert_eq!(eval(&(&a + &b), &at), eval(&a, &at) + eval(&b, &at));
        prop_assert_eq!(eval(&a.pow(2), &at), eval(&a, &at) * eval(&a, &at));
    }

    #[test]
    fn substitution_is_composition(a in poly(), s in poly(), at in point()) {
        // a(∂ := s) evaluated at x equals a evaluated at (s(x), λ, a)
        let composed = a.substitute(Var::D, &s);
        let mut inner = at.clone();
        inner[0] = eval(&s, &at);
        prop_assert_eq!(eval(&composed, &at), eval(&a, &inner));
    }

    #[test]
    fn display_reparses(a in poly()) {
        let back = parse_with(&a.to_string(), &ParseContext::with_params(&["a"])).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn division_with_remainder(a in poly(), low in poly(), k in 1u32..3) {
        // monic divisor ∂^k + (terms of lower ∂-degree)
        let mut b = Poly::d().pow(k);
        for (e, c) in low.coefficients_in(Var::D) {
            if e < k as i32 {
                b += &(&c * &Poly::d().pow(e as u32));
            }
        }
        let (quo, rem) = a.div_rem_in(&b, Var::D).unwrap();
        prop_assert_eq!(&(&quo * &b) + &rem, a);
        prop_assert!(rem.degree_in(Var::D).unwrap_or(-1) < k as i32);
    }
}

#[test]
fn one_is_multiplicative_identity() {
    assert!(Q::one() == eval(&Poly::one(), &[q(3), q(-2), q(5)]));
}

use std::sync::Arc;

use proptest::prelude::*;

use dualsteenrod::groebner::{buchberger, GroebnerConfig};
use dualsteenrod::milnor::{q1, xi_table, zeta, TruncationSpec};
use dualsteenrod::polycore::json::{poly_from_json, poly_to_json};
use dualsteenrod::polycore::{Monomial, Poly, VariableTable};
use dualsteenrod::quotient::{build_quotient, QuotientLimits, QuotientRing};

fn table3() -> Arc<VariableTable> {
    xi_table(3)
}

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(prop::collection::vec(0u32..6, 3), 0..6).prop_map(|terms| {
        let t = table3();
        let monos = terms.into_iter().map(|e| Monomial::new(&t, e).unwrap()).collect();
        Poly::from_terms(t, monos)
    })
}

/// Homogeneous polynomial of degree `d` in ξ₁, ξ₂, ξ₃, chosen by a bitmask over monomials.
fn homogeneous(d: i64, mask: u64) -> Poly {
    let t = table3();
    let mut monos = Vec::new();
    for c in 0..=d / 7 {
        for b in 0..=(d - 7 * c) / 3 {
            let a = d - 7 * c - 3 * b;
            monos.push(Monomial::new(&t, vec![a as u32, b as u32, c as u32]).unwrap());
        }
    }
    let chosen = monos
        .into_iter()
        .enumerate()
        .filter(|(i, _)| mask >> (i % 64) & 1 == 1)
        .map(|(_, m)| m)
        .collect();
    Poly::from_terms(t, chosen)
}

fn quotient22() -> &'static QuotientRing {
    static Q: std::sync::OnceLock<QuotientRing> = std::sync::OnceLock::new();
    Q.get_or_init(|| build_quotient(2, 2, &QuotientLimits::default()).unwrap())
}

fn arb_poly2() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..20, 0u32..8), 0..5).prop_map(|terms| {
        let t = xi_table(2);
        let monos = terms.into_iter().map(|(a, b)| Monomial::new(&t, vec![a, b]).unwrap()).collect();
        Poly::from_terms(t, monos)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert!(a.add(&a).unwrap().is_zero());
    }

    #[test]
    fn squaring_is_additive(a in arb_poly(), b in arb_poly()) {
        prop_assert_eq!(a.add(&b).unwrap().square().unwrap(), a.square().unwrap().add(&b.square().unwrap()).unwrap());
        prop_assert_eq!(a.square().unwrap(), a.mul(&a).unwrap());
        prop_assert_eq!(a.pow(4).unwrap(), a.frobenius(2).unwrap());
    }

    #[test]
    fn json_round_trip(a in arb_poly()) {
        let text = poly_to_json(&a);
        let back = poly_from_json(&text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(poly_to_json(&back), text);
    }

    #[test]
    fn text_round_trip(a in arb_poly()) {
        let back = Poly::parse(table3(), &a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn q1_obeys_cartan(d1 in 1i64..12, d2 in 1i64..12, m1 in any::<u64>(), m2 in any::<u64>()) {
        // Q₁(xy) = Q₁(x)y² + x²Q₁(y), checked in ξ₁..ξ₄.
        let t4 = xi_table(4);
        let x = homogeneous(d1, m1).transport(&t4).unwrap();
        let y = homogeneous(d2, m2).transport(&t4).unwrap();
        let lhs = q1(&x.mul(&y).unwrap()).unwrap();
        let rhs = q1(&x).unwrap().mul(&y.square().unwrap()).unwrap()
            .add(&x.square().unwrap().mul(&q1(&y).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn normal_form_is_a_ring_map(a in arb_poly2(), b in arb_poly2()) {
        let q = quotient22();
        let na = q.normal_form(&a).unwrap();
        prop_assert_eq!(q.normal_form(&na).unwrap(), na.clone());
        prop_assert_eq!(q.normal_form(&a.add(&b).unwrap()).unwrap(), na.add(&q.normal_form(&b).unwrap()).unwrap());
        let prod = q.normal_form(&a.mul(&b).unwrap()).unwrap();
        prop_assert_eq!(prod, q.mul(&na, &q.normal_form(&b).unwrap()).unwrap());
    }

    #[test]
    fn groebner_basis_independent_of_generator_order(seed in any::<u64>()) {
        let spec = TruncationSpec::Trunc(2);
        let mut gens = vec![zeta(3, spec).unwrap(), zeta(4, spec).unwrap(), zeta(5, spec).unwrap()];
        let k = (seed % 3) as usize;
        gens.rotate_left(k);
        if seed & 4 != 0 {
            gens.reverse();
        }
        let gb = buchberger(&gens, &GroebnerConfig::default()).unwrap();
        let reference = buchberger(&[zeta(3, spec).unwrap(), zeta(4, spec).unwrap()], &GroebnerConfig::default()).unwrap();
        prop_assert_eq!(gb.basis(), reference.basis());
    }
}

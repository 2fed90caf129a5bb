use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::rat::{int, Rat};

fn m4() -> std::sync::Arc<VarTable> {
    VarTable::grassmann(4)
}

fn p(t: &std::sync::Arc<VarTable>, s: &str) -> SuperPoly {
    SuperPoly::parse(t, s).unwrap()
}

#[test]
fn mul_examples() {
    let t = VarTable::grassmann(2);
    let xi = p(&t, "1*xi1");
    let eta = p(&t, "1*eta1");
    assert_eq!(eta.mul(&xi).unwrap(), p(&t, "-1*xi1*eta1"));
    assert!(p(&t, "1*xi1*eta1").mul(&xi).unwrap().is_zero());
    let a = p(&t, "1 + 1*xi1");
    assert_eq!(a.mul(&a).unwrap(), p(&t, "1 + 2*xi1"));
}

#[test]
fn mul_rejects_mismatched_tables() {
    let a = SuperPoly::one(&VarTable::grassmann(2));
    let b = SuperPoly::one(&VarTable::grassmann(3));
    assert!(matches!(a.mul(&b), Err(crate::Error::Incompatible(_))));
}

#[test]
fn left_deriv_examples() {
    let t = VarTable::grassmann(2);
    let f = p(&t, "1*xi1*eta1");
    assert_eq!(f.left_deriv("xi1").unwrap(), p(&t, "1*eta1"));
    assert_eq!(f.left_deriv("eta1").unwrap(), p(&t, "-1*xi1"));
    let t4 = m4();
    assert!(p(&t4, "1*xi1*eta1").left_deriv("xi2").unwrap().is_zero());
    assert!(matches!(f.left_deriv("zeta"), Err(crate::Error::UnknownVariable(_))));
}

#[test]
fn right_deriv_sign() {
    let t = VarTable::grassmann(2);
    let f = p(&t, "1*xi1*eta1");
    assert_eq!(f.right_deriv("eta1").unwrap(), p(&t, "1*xi1"));
    assert_eq!(f.right_deriv("xi1").unwrap(), p(&t, "-1*eta1"));
}

#[test]
fn substitute_examples() {
    let t = m4();
    let f = p(&t, "1*xi1*eta1 + 1*xi2*eta2");
    let mut a = BTreeMap::new();
    a.insert("xi1".to_string(), SuperPoly::zero(&t));
    assert_eq!(f.substitute(&a, &t).unwrap(), p(&t, "1*xi2*eta2"));
    assert_eq!(f.substitute(&BTreeMap::new(), &t).unwrap(), f);
    let g = p(&t, "1*xi1*eta1");
    let mut r = BTreeMap::new();
    r.insert("xi1".to_string(), p(&t, "1*xi2"));
    r.insert("eta1".to_string(), p(&t, "1*eta2"));
    assert_eq!(g.substitute(&r, &t).unwrap(), p(&t, "1*xi2*eta2"));
    let mut bad = BTreeMap::new();
    bad.insert("xi1".to_string(), p(&t, "1*xi1*eta1"));
    assert!(matches!(g.substitute(&bad, &t), Err(crate::Error::ParityMismatch(_))));
}

#[test]
fn berezin_examples() {
    let t = m4();
    // xi1 eta1 xi2 eta2 -> xi1 xi2 eta1 eta2 takes one swap
    assert_eq!(p(&t, "1*xi1*eta1*xi2*eta2").berezin().unwrap(), int(-1));
    assert_eq!(p(&t, "1*xi1").berezin().unwrap(), int(0));
    assert_eq!(p(&t, "5*xi1*xi2*eta1*eta2").berezin().unwrap(), int(5));
    let mixed = VarTable::new(["x"], ["th1"]).unwrap();
    assert!(SuperPoly::one(&mixed).berezin().is_err());
}

#[test]
fn berezin_over_keeps_coefficients_on_the_left() {
    let t = VarTable::new(["a"], ["c", "th1", "th2"]).unwrap();
    let target = VarTable::new(["a"], ["c"]).unwrap();
    let f = p(&t, "2*a*c*th1*th2 + 3*th1 + 1*th2*th1");
    let names = vec!["th1".to_string(), "th2".to_string()];
    let r = f.berezin_over(&names, &target).unwrap();
    assert_eq!(r, p(&target, "2*a*c + -1"));
}

#[test]
fn random_homogeneous_examples() {
    let t = m4();
    let c = random_homogeneous(&t, 0, 0, 7).unwrap();
    assert_eq!(c.degree(), Some(0));
    assert!(random_homogeneous(&t, 1, 0, 7).is_err());
    assert_eq!(
        random_homogeneous(&t, 3, 1, 99).unwrap(),
        random_homogeneous(&t, 3, 1, 99).unwrap()
    );
    let mixed = VarTable::new(["x", "y"], ["th1", "th2"]).unwrap();
    let f = random_homogeneous(&mixed, 3, 0, 4).unwrap();
    assert_eq!(f.degree(), Some(3));
    assert_eq!(f.parity(), Some(0));
}

#[test]
fn text_round_trip_and_order() {
    let t = VarTable::new(["x", "y"], ["th1", "th2"]).unwrap();
    let f = p(&t, "1*th2*th1 + 3/2*x^2 + -1*x*y + 4");
    assert_eq!(f.to_text(), "4/1 + 3/2*x^2 + -1/1*x*y + -1/1*th1*th2");
    assert_eq!(SuperPoly::parse(&t, &f.to_text()).unwrap(), f);
    assert_eq!(SuperPoly::zero(&t).to_text(), "0");
}

#[test]
fn embed_reorders_odd_variables() {
    let a = VarTable::odd_only(["p", "q"]).unwrap();
    let b = VarTable::odd_only(["q", "r", "p"]).unwrap();
    let f = p(&a, "1*p*q");
    assert_eq!(f.embed(&b).unwrap(), p(&b, "-1*q*p"));
    assert_eq!(f.embed(&b).unwrap(), p(&b, "1*p*q"));
}

fn arb_elem(m: usize) -> impl Strategy<Value = SuperPoly> {
    (0u32..=m as u32, any::<u64>()).prop_filter_map("parity", move |(d, seed)| {
        random_homogeneous(&VarTable::grassmann(m), d, (d % 2) as u8, seed).ok()
    })
}

fn arb_mixed() -> impl Strategy<Value = SuperPoly> {
    (0u32..4, 0u8..2, any::<u64>()).prop_filter_map("impossible", |(d, par, seed)| {
        let t = VarTable::new(["x", "y"], ["a", "b", "c"]).unwrap();
        random_homogeneous(&t, d, par, seed).ok()
    })
}

proptest! {
    #[test]
    fn supercommutativity(f in arb_mixed(), g in arb_mixed()) {
        let g = g.embed(f.table()).unwrap();
        let pf = f.parity().unwrap() as u32;
        let pg = g.parity().unwrap() as u32;
        let sign = if pf * pg % 2 == 1 { -Rat::from_integer(1.into()) } else { Rat::from_integer(1.into()) };
        prop_assert_eq!(f.mul(&g).unwrap(), g.mul(&f).unwrap().scale(&sign));
    }

    #[test]
    fn associativity(f in arb_elem(5), g in arb_elem(5), h in arb_elem(5)) {
        prop_assert_eq!(f.mul(&g).unwrap().mul(&h).unwrap(), f.mul(&g.mul(&h).unwrap()).unwrap());
    }

    #[test]
    fn odd_derivative_squares_to_zero(f in arb_elem(4), v in 0usize..4) {
        let name = grassmann_names(4)[v].clone();
        prop_assert!(f.left_deriv(&name).unwrap().left_deriv(&name).unwrap().is_zero());
    }

    #[test]
    fn odd_leibniz(f in arb_elem(4), g in arb_elem(4), v in 0usize..4) {
        let name = grassmann_names(4)[v].clone();
        let lhs = f.mul(&g).unwrap().left_deriv(&name).unwrap();
        let a = f.left_deriv(&name).unwrap().mul(&g).unwrap();
        let b = f.mul(&g.left_deriv(&name).unwrap()).unwrap();
        let b = if f.parity() == Some(1) { b.neg() } else { b };
        prop_assert_eq!(lhs, a.add(&b).unwrap());
    }

    #[test]
    fn berezin_supertrace_property(f in arb_elem(4), g in arb_elem(4)) {
        let s = if f.parity().unwrap() * g.parity().unwrap() == 1 { -1 } else { 1 };
        prop_assert_eq!(
            f.mul(&g).unwrap().berezin().unwrap(),
            g.mul(&f).unwrap().berezin().unwrap() * int(s)
        );
    }

    #[test]
    fn text_round_trip(f in arb_mixed()) {
        prop_assert_eq!(SuperPoly::parse(f.table(), &f.to_text()).unwrap(), f);
    }
}

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::poisson::PoissonAlgebra;
use crate::rat::{self, Rat};
use crate::supercore::{SuperPoly, Var, VarTable};

fn all_words(n: usize) -> Vec<CliffordElement> {
    (0..(1usize << (2 * n)))
        .map(|i| CliffordElement::scalar_word(n, CliffordWord::from_index(i, n), Rat::one()))
        .collect()
}

fn random_element(n: usize, rng: &mut ChaCha8Rng) -> CliffordElement {
    let t = VarTable::empty();
    let mut x = CliffordElement::zero(n, &t);
    for i in 0..(1usize << (2 * n)) {
        if rng.gen_bool(0.4) {
            let p = rng.gen_range(0..3);
            let c = rat::frac(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            x.add_term(CliffordWord::from_index(i, n), &HPoly::constant(&t, p, c)).unwrap();
        }
    }
    x
}

fn h(power: u32, c: i64) -> HPoly {
    HPoly::constant(&VarTable::empty(), power, rat::int(c))
}

fn scalar(n: usize, c: HPoly) -> CliffordElement {
    CliffordElement::word(n, &VarTable::empty(), CliffordWord::ONE, c)
}

#[test]
fn product_examples() {
    let (x, y) = (CliffordElement::xi(1, 1), CliffordElement::eta(1, 1));
    let xy = x.mul(&y).unwrap();
    let expected = xy.scale(&rat::int(-1)).add(&scalar(1, h(1, 1))).unwrap();
    assert_eq!(y.mul(&x).unwrap(), expected);
    assert!(x.mul(&x).unwrap().is_zero());
    assert_eq!(xy.mul(&xy).unwrap(), xy.scale_h(&h(1, 1)).unwrap());
    assert_eq!(x.supercommutator(&y).unwrap(), scalar(1, h(1, 1)));
    let x2 = CliffordElement::xi(2, 2);
    assert!(CliffordElement::xi(2, 1).supercommutator(&x2).unwrap().is_zero());
}

#[test]
fn quantize_examples() {
    let t = VarTable::grassmann(2);
    let xi_eta = SuperPoly::parse(&t, "xi1*eta1").unwrap();
    let q = quantize(&xi_eta).unwrap();
    assert_eq!(q, CliffordElement::xi(1, 1).mul(&CliffordElement::eta(1, 1)).unwrap());
    assert_eq!(quantize(&SuperPoly::one(&t)).unwrap(), scalar(1, h(0, 1)));
    let eta_xi = SuperPoly::parse(&t, "eta1*xi1").unwrap();
    assert_eq!(quantize(&eta_xi).unwrap(), q.scale(&rat::int(-1)));
}

#[test]
fn associativity_exhaustive_small() {
    for n in 1..=2 {
        let w = all_words(n);
        for a in &w {
            for b in &w {
                let ab = a.mul(b).unwrap();
                for c in &w {
                    assert_eq!(ab.mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap());
                }
            }
        }
    }
}

#[test]
fn associativity_random_n3() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let (a, b, c) = (
            random_element(3, &mut rng),
            random_element(3, &mut rng),
            random_element(3, &mut rng),
        );
        assert_eq!(
            a.mul(&b).unwrap().mul(&c).unwrap(),
            a.mul(&b.mul(&c).unwrap()).unwrap()
        );
    }
}

#[test]
fn symbol_at_zero_is_grassmann_product() {
    for n in 1..=2 {
        let po = PoissonAlgebra::new(2 * n);
        let basis = po.basis();
        for f in &basis {
            for g in &basis {
                let prod = quantize(f).unwrap().mul(&quantize(g).unwrap()).unwrap();
                assert_eq!(prod.symbol_at_zero().unwrap(), f.mul(g).unwrap());
            }
        }
    }
}

#[test]
fn fock_examples() {
    let rep = FockRep::new(1);
    let x = rep.matrix(&CliffordElement::xi(1, 1)).unwrap();
    assert_eq!(x.get(1, 0), &h(0, 1));
    assert!(x.get(0, 1).is_zero() && x.get(0, 0).is_zero() && x.get(1, 1).is_zero());
    let y = rep.matrix(&CliffordElement::eta(1, 1)).unwrap();
    assert_eq!(y.get(0, 1), &h(1, 1));
    assert!(y.get(1, 0).is_zero());
    let id = rep.matrix(&scalar(1, h(0, 1))).unwrap();
    let t = VarTable::empty();
    assert_eq!(id, SuperMatrix::identity(rep.parities(), &t));
    assert!(id.str().is_zero());
    let xy = CliffordElement::xi(1, 1).mul(&CliffordElement::eta(1, 1)).unwrap();
    assert_eq!(rep.matrix(&xy).unwrap().str(), h(1, -1));
}

#[test]
fn fock_homomorphism_words() {
    for n in 1..=2 {
        let rep = FockRep::new(n);
        let w = all_words(n);
        for a in &w {
            let ma = rep.matrix(a).unwrap();
            for b in &w {
                let lhs = rep.matrix(&a.mul(b).unwrap()).unwrap();
                assert_eq!(lhs, ma.mul(&rep.matrix(b).unwrap()).unwrap());
            }
        }
    }
}

#[test]
fn str_vanishes_on_supercommutators() {
    for n in 1..=2 {
        let rep = FockRep::new(n);
        let w = all_words(n);
        for a in &w {
            for b in &w {
                let c = a.supercommutator(b).unwrap();
                assert!(rep.matrix(&c).unwrap().str().is_zero());
                assert!(supertrace(&c).unwrap().is_zero());
            }
        }
    }
}

/// Fock module realised directly as `Λ(ξ)` with `ξ̂` = multiplication and
/// `η̂ = h ∂/∂ξ` from the left, traced over the monomial basis.
fn oracle_word_supertrace(n: usize, w: CliffordWord) -> HPoly {
    let names: Vec<String> = (1..=n).map(|i| format!("xi{i}")).collect();
    let t = VarTable::odd_only(names.clone()).unwrap();
    let mut out = HPoly::zero(&VarTable::empty());
    for s in 0..(1u64 << n) {
        let mut v = SuperPoly::odd_monomial(&t, s);
        for k in (0..n).rev() {
            if w.eta & (1 << k) != 0 {
                v = v.deriv_var(Var::Odd(k), crate::supercore::Side::Left);
            }
        }
        for k in (0..n).rev() {
            if w.xi & (1 << k) != 0 {
                v = SuperPoly::odd_monomial(&t, 1 << k).mul(&v).unwrap();
            }
        }
        let diag = v.coeff(&crate::supercore::SuperMonomial::odd_only(0, s));
        let sign = if s.count_ones() % 2 == 0 { 1 } else { -1 };
        let power = w.eta.count_ones();
        out.add_assign(&HPoly::constant(&VarTable::empty(), power, diag * rat::int(sign)))
            .unwrap();
    }
    out
}

#[test]
fn word_supertrace_matches_oracle() {
    for n in 1..=3 {
        let rep = FockRep::new(n);
        let full = (1u32 << n) - 1;
        for i in 0..(1usize << (2 * n)) {
            let w = CliffordWord::from_index(i, n);
            let tau = word_supertrace(&rep, w);
            assert_eq!(tau, oracle_word_supertrace(n, w), "word {}", w.label(n));
            if w != CliffordWord::new(full, full) {
                assert!(tau.is_zero());
            }
        }
    }
}

#[test]
fn clifford_relations_in_fock() {
    for n in 1..=3 {
        let rep = FockRep::new(n);
        for i in 1..=n {
            for j in 1..=n {
                let (xi_i, eta_i) = (CliffordElement::xi(n, i), CliffordElement::eta(n, i));
                let (xi_j, eta_j) = (CliffordElement::xi(n, j), CliffordElement::eta(n, j));
                let m = |x: &CliffordElement| rep.matrix(x).unwrap();
                let anti = |a: &SuperMatrix, b: &SuperMatrix| a.mul(b).unwrap().add(&b.mul(a).unwrap()).unwrap();
                let delta = if i == j { h(1, 1) } else { HPoly::zero(&VarTable::empty()) };
                assert_eq!(anti(&m(&xi_i), &m(&eta_j)), m(&scalar(n, delta)));
                assert_eq!(anti(&m(&xi_i), &m(&xi_j)), m(&CliffordElement::zero(n, &VarTable::empty())));
                assert_eq!(anti(&m(&eta_i), &m(&eta_j)), m(&CliffordElement::zero(n, &VarTable::empty())));
            }
        }
    }
}

#[test]
fn odd_generator_examples() {
    let t1 = theta_hat(1, 1);
    assert_eq!(t1.mul(&t1).unwrap(), scalar(1, h(1, 1)));
    for n in 1..=3 {
        let gens = odd_generators(n);
        assert_eq!(gens.len(), 2 * n - 1);
        let j = odd_structure(n);
        for (a, ga) in gens.iter().enumerate() {
            assert!(j.supercommutator(ga).unwrap().is_zero());
            for (b, gb) in gens.iter().enumerate() {
                let anti = ga.supercommutator(gb).unwrap();
                let expect = if a == b {
                    scalar(n, h(1, 2 * signature(a + 1)))
                } else {
                    CliffordElement::zero(n, &VarTable::empty())
                };
                assert_eq!(anti, expect);
            }
        }
    }
}

#[test]
fn theta_product_matches_expansion() {
    for n in 1..=2 {
        let gens = 2 * n - 1;
        let t = VarTable::empty();
        for a in 0..(1u64 << gens) {
            for b in 0..(1u64 << gens) {
                let mut x = ThetaElement::zero(n, &t);
                x.add_term(a, &h(0, 1)).unwrap();
                let mut y = ThetaElement::zero(n, &t);
                y.add_term(b, &h(0, 1)).unwrap();
                let direct = x.mul(&y).unwrap().to_clifford().unwrap();
                let expanded = theta_blade(n, a).mul(&theta_blade(n, b)).unwrap();
                assert_eq!(direct, expanded);
                assert_eq!(odd_decompose(&expanded).unwrap(), x.mul(&y).unwrap());
            }
        }
    }
}

#[test]
fn qtr_properties() {
    for n in 1..=2 {
        let gens = 2 * n - 1;
        let top = (1u64 << gens) - 1;
        let kappa = matrix_qtr_constant(n);
        assert!(!kappa.is_zero());
        assert_eq!(qtr(&theta_blade(n, top)).unwrap(), h(0, 1));
        assert!(qtr(&scalar(n, h(0, 1))).unwrap().is_zero());
        for a in 0..(1u64 << gens) {
            let blade = theta_blade(n, a);
            let q = qtr(&blade).unwrap();
            if a.count_ones() % 2 == 0 {
                assert!(q.is_zero());
            }
            assert_eq!(matrix_qtr(&blade).unwrap(), kappa.mul(&q).unwrap());
            for b in 0..(1u64 << gens) {
                let c = blade.supercommutator(&theta_blade(n, b)).unwrap();
                assert!(qtr(&c).unwrap().is_zero());
                assert!(matrix_qtr(&c).unwrap().is_zero());
            }
        }
    }
    assert!(matches!(
        qtr(&CliffordElement::xi(1, 1)),
        Err(crate::Error::NotInSubalgebra)
    ));
}

#[test]
fn lemma4_examples() {
    let po = PoissonAlgebra::new(2);
    let t = po.table().clone();
    let xi = SuperPoly::var(&t, "xi1").unwrap();
    let eta = SuperPoly::var(&t, "eta1").unwrap();
    assert!(lemma4_defect(&po, &xi, &eta).unwrap().is_zero());
    for g in po.basis() {
        assert!(lemma4_defect(&po, &SuperPoly::one(&t), &g).unwrap().is_zero());
    }
    let po4 = PoissonAlgebra::new(4);
    let t4 = po4.table().clone();
    let top = SuperPoly::parse(&t4, "xi1*eta1*xi2*eta2").unwrap();
    let h1 = SuperPoly::parse(&t4, "xi1*eta1").unwrap();
    let d = lemma4_defect(&po4, &top, &h1).unwrap();
    assert!(d.valuation().is_none_or(|v| v >= 2));
}

#[test]
fn lemma4_all_pairs_small() {
    for m in 1..=4 {
        let (v, pairs) = lemma4_scan(&PoissonAlgebra::new(m)).unwrap();
        assert_eq!(pairs, 1 << (2 * m));
        assert!(v.is_none_or(|v| v >= 2), "m = {m}");
    }
}

#[test]
fn moment_examples() {
    let (s1, symbols) = moment(2, 1).unwrap();
    let c3 = SuperPoly::var(&symbols, "c_xi1eta1").unwrap();
    assert_eq!(s1.lowest_component().unwrap(), (1, c3.neg()));
    let r = moment_report(2, 2).unwrap();
    assert!(r.proportional);
    assert_eq!(r.valuation, Some(1));
    assert_eq!(moment_report(4, 1).unwrap().valuation, Some(2));
}

#[test]
fn moment_matches_fock_matrix_power() {
    let (q, _) = quantize_generic(2).unwrap();
    let Quantized::Even(x) = q else { panic!("even route") };
    let rep = FockRep::new(1);
    for k in 1..=3 {
        let direct = rep.matrix(&x).unwrap().pow(k).unwrap().str();
        assert_eq!(direct, moment(2, k).unwrap().0);
    }
}

#[test]
fn generic_element_is_even() {
    for m in 0..=4 {
        let (f, symbols) = crate::poisson::generic_element(m).unwrap();
        assert_eq!(f.parity(), Some(0));
        assert_eq!(f.len(), 1 << m);
        assert_eq!(symbols.n_even() + symbols.n_odd(), 1 << m);
    }
}

#[test]
fn lowest_component_of_product() {
    let t = VarTable::empty();
    let a = HPoly::constant(&t, 1, rat::int(2)).add(&h(3, 1)).unwrap();
    let b = HPoly::constant(&t, 2, rat::int(5)).add(&h(4, 7)).unwrap();
    let (va, la) = a.lowest_component().unwrap();
    let (vb, lb) = b.lowest_component().unwrap();
    assert_eq!(a.mul(&b).unwrap().lowest_component().unwrap(), (va + vb, la.mul(&lb).unwrap()));
    assert!(HPoly::zero(&t).lowest_component().is_err());
    let _ = Rat::zero();
}

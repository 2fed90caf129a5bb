use std::sync::Arc;

use num_traits::{One, Zero};

use super::*;
use crate::clifford::{FockRep, SuperMatrix};
use crate::lie::{ModuleAction, SparseVec};
use crate::supercore::VarTable;

fn one(i: usize) -> SparseVec {
    vec![(i, Rat::one())]
}

fn index(g: &LieSuperAlgebra, label: &str) -> usize {
    g.labels.iter().position(|l| l == label).unwrap_or_else(|| panic!("no {label} in {}", g.name))
}

fn full_checks(g: &LieSuperAlgebra) {
    g.validate().unwrap();
    g.check_form_invariance().unwrap();
    assert_eq!(g.realized_torus_forms(&g.torus_forms), g.torus_forms, "{}", g.name);
    let g = Arc::new(g.clone());
    ModuleAction::adjoint(&g).check_representation().unwrap();
    ModuleAction::coadjoint(&g).check_representation().unwrap();
}

#[test]
fn po_examples() {
    for m in 1..=4 {
        let g = po_algebra(m);
        assert_eq!(g.dim(), 1 << m);
        full_checks(&g);
    }
    let g = po_algebra(2);
    // [xi1, eta1] = 1, [xi1eta1, xi1] = xi1, [xi1eta1, eta1] = -eta1
    assert_eq!(g.bracket_basis(1, 2), &one(0)[..]);
    assert_eq!(g.bracket_basis(3, 1), &one(1)[..]);
    assert_eq!(g.bracket_basis(3, 2), &[(2, -Rat::one())][..]);
    assert!(g.bracket_basis(1, 1).is_empty());
    assert!(g.bracket_basis(0, 3).is_empty());
    let w = |l: &str| g.grading[index(&g, l)][0];
    assert_eq!(w("xi1"), -w("eta1"));
    assert_ne!(w("xi1"), 0);
}

#[test]
fn h_and_center() {
    for m in 2..=4 {
        let po = po_algebra(m);
        assert_eq!(center(&po).unwrap(), vec![one(0)]);
        let h = h_algebra(m).unwrap();
        assert_eq!(h.dim(), (1 << m) - 1);
        full_checks(&h);
    }
    let sh = sh_algebra(4).unwrap();
    assert_eq!(sh.dim(), h_algebra(4).unwrap().dim() - 1);
    full_checks(&sh);
    let again = derived_subalgebra(&sh, "d").unwrap();
    assert_eq!(again.dim(), sh.dim());
}

#[test]
fn derived_of_abelian_is_zero() {
    let ab = LieSuperAlgebra::new("ab", vec!["x".into(), "y".into()], vec![0, 1], Default::default());
    assert_eq!(derived_subalgebra(&ab, "d").unwrap().dim(), 0);
    let g = Arc::new(ab);
    let ad = ModuleAction::adjoint(&g);
    assert!(ad.actions.iter().flatten().all(Vec::is_empty));
}

#[test]
fn spo_readings_coincide_at_small_m() {
    for m in 2..=4 {
        let (derived, int0) = spo_candidates(m).unwrap();
        let int0 = int0.unwrap();
        assert_eq!(derived.dim(), (1 << m) - 1);
        assert_eq!(derived.labels, int0.labels);
    }
}

#[test]
fn vect_examples() {
    let g = vect_algebra(3).unwrap();
    assert_eq!(g.dim(), 24);
    full_checks(&g);
    let (d1, d2, t1d2) = (index(&g, "D1"), index(&g, "D2"), index(&g, "th1D2"));
    assert_eq!(g.bracket_basis(d1, t1d2), &one(d2)[..]);
    assert!(g.bracket_basis(d1, d2).is_empty());
    assert_eq!(g.torus_forms.len(), 3);
}

#[test]
fn svect_examples() {
    let m = 3;
    let basis = vect_basis(m);
    let at = |s: u64, j: usize| basis.iter().position(|&b| b == (s, j)).unwrap();
    assert!(divergence(m, basis[at(0b001, 1)]).is_empty());
    assert!(!divergence(m, basis[at(0b001, 0)]).is_empty());
    for m in 2..=4 {
        let g = svect_algebra(m).unwrap();
        assert_eq!(g.dim(), m * (1 << m) - ((1 << m) - 1));
        full_checks(&g);
        assert_eq!(g.torus_forms.len(), m - 1);
    }
}

#[test]
fn svect_tilde_examples() {
    assert_eq!(density_sign(), DensitySign::ParityMinus);
    for m in [2, 4] {
        let sv = svect_algebra(m).unwrap();
        let top = svect_tilde(m, DeformTerm::Top).unwrap();
        assert_eq!(top.dim(), sv.dim());
        full_checks(&top);
        assert!((0..m).any(|j| !top.labels.contains(&format!("D{}", j + 1))));
        let off = svect_tilde(m, DeformTerm::Off).unwrap();
        assert_eq!(off.labels, sv.labels);
    }
    for m in 2..=4 {
        let pair = svect_tilde(m, DeformTerm::Pair).unwrap();
        assert_eq!(pair.dim(), svect_algebra(m).unwrap().dim());
        full_checks(&pair);
    }
    assert!(svect_tilde(3, DeformTerm::Top).is_err());
}

#[test]
fn gl_examples() {
    let (g, natural) = gl_from_fock(1).unwrap();
    assert_eq!(g.dim(), 4);
    full_checks(&g);
    natural.check_representation().unwrap();
    let (g2, natural2) = gl_from_fock(2).unwrap();
    assert_eq!(g2.dim(), 16);
    full_checks(&g2);
    natural2.check_representation().unwrap();
    // brackets agree with supercommutators of elementary supermatrices
    let rep = FockRep::new(2);
    let n = rep.dim();
    let t = VarTable::empty();
    for a in 0..g2.dim() {
        for b in 0..g2.dim() {
            let ea = SuperMatrix::elementary(rep.parities(), a / n, a % n);
            let eb = SuperMatrix::elementary(rep.parities(), b / n, b % n);
            let mut expect = SuperMatrix::zero(rep.parities(), &t);
            for (c, r) in g2.bracket_basis(a, b) {
                expect = expect
                    .add(&SuperMatrix::elementary(rep.parities(), c / n, c % n).scale(r))
                    .unwrap();
            }
            assert_eq!(ea.supercommutator(&eb).unwrap(), expect);
        }
    }
}

#[test]
fn fock_words_span_gl() {
    for n in 1..=2 {
        let rep = FockRep::new(n);
        let d = rep.dim();
        // specialise h = 1
        let rows: Vec<Vec<Rat>> = (0..(1usize << (2 * n)))
            .map(|i| {
                let m = rep.word_matrix(crate::clifford::CliffordWord::from_index(i, n));
                (0..d * d)
                    .map(|k| {
                        m.get(k / d, k % d)
                            .coeffs()
                            .values()
                            .fold(Rat::zero(), |acc, p| acc + p.constant_term())
                    })
                    .collect()
            })
            .collect();
        assert_eq!(crate::linalg::dense::rank(&rows), d * d);
    }
}

#[test]
fn queer_examples() {
    for n in 1..=3 {
        let q = q_algebra(n).unwrap();
        assert_eq!(q.dim(), 2 * n * n);
        full_checks(&q);
        let qtr: std::collections::BTreeMap<usize, Rat> = qtr_functional(n).into_iter().collect();
        for v in q.constants().values() {
            let s: Rat = v.iter().filter_map(|(i, r)| qtr.get(i).map(|c| c * r)).sum();
            assert!(s.is_zero());
        }
        let sq = sq_algebra(n).unwrap();
        assert_eq!(sq.dim(), 2 * n * n - 1);
        full_checks(&sq);
        let psq = psq_algebra(n).unwrap();
        assert_eq!(psq.dim(), 2 * n * n - 2);
        full_checks(&psq);
    }
    assert_eq!(psq_algebra(1).unwrap().dim(), 0);
}

#[test]
fn coadjoint_matches_adjoint_through_the_form() {
    // Φ(e_a) = sum_b B(e_a, e_b) c_b intertwines ad with the coadjoint action
    // precomposed with the parity automorphism x -> (-1)^{p(x)} x. For odd m
    // the form is odd, Φ is an odd map and its Koszul sign cancels the twist.
    for m in 2..=4 {
        let g = Arc::new(po_algebra(m));
        let ad = ModuleAction::adjoint(&g);
        let co = ModuleAction::coadjoint(&g);
        let d = g.dim();
        for x in 0..d {
            for a in 0..d {
                // Φ(ad(x) e_a)
                let mut lhs = vec![Rat::zero(); d];
                for (c, r) in &ad.actions[x][a] {
                    for b in 0..d {
                        lhs[b] += r * g.form_value(*c, b);
                    }
                }
                // ρ*(x) Φ(e_a)
                let mut rhs = vec![Rat::zero(); d];
                for b in 0..d {
                    let f = g.form_value(a, b);
                    if f.is_zero() {
                        continue;
                    }
                    for (c, r) in &co.actions[x][b] {
                        rhs[*c] += &f * r;
                    }
                }
                if g.parities[x] == 1 && m % 2 == 0 {
                    rhs.iter_mut().for_each(|r| *r = -r.clone());
                }
                assert_eq!(lhs, rhs, "m = {m}, x = {}, a = {}", g.labels[x], g.labels[a]);
            }
        }
    }
}

#[test]
fn json_round_trip() {
    for g in [po_algebra(3), q_algebra(2).unwrap(), svect_algebra(3).unwrap()] {
        let j = serde_json::to_string(&g.to_json()).unwrap();
        let back = LieSuperAlgebra::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}

#[test]
fn build_by_name() {
    for name in AlgebraName::ALL {
        assert_eq!(AlgebraName::parse(name.as_str()).unwrap(), name);
        let size = if name.uses_m() { 2 } else { 1 };
        build(name, size, DeformTerm::Top).unwrap().validate().unwrap();
    }
    assert!(AlgebraName::parse("spe").is_err());
}

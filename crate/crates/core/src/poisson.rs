//! The Poisson superalgebra `po(0|m)` on the Grassmann algebra of `m` odd
//! generators: bracket, the form `B(f, g) = ∫ f g`, and the invariants
//! `r_k(f) = ∫ f^k`.

use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::clifford;
use crate::error::{Error, Result};
use crate::lie::{sparse_from_map, LieSuperAlgebra};
use crate::rat::{self, Rat};
use crate::supercore::{grassmann_names, same_table, Side, SuperMonomial, SuperPoly, Var, VarTable};

/// Derivative side for each slot and a global sign in
/// `{f, g} = sign (-1)^{p(f)} sum (∂f/∂ξ ∂g/∂η + ∂f/∂η ∂g/∂ξ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketConvention {
    pub first: Side,
    pub second: Side,
    pub sign: i64,
}

impl BracketConvention {
    /// The bracket exactly as printed, with left derivatives.
    pub const LITERAL: BracketConvention = BracketConvention {
        first: Side::Left,
        second: Side::Left,
        sign: 1,
    };

    pub fn candidates() -> Vec<BracketConvention> {
        let mut out = Vec::new();
        for sign in [1, -1] {
            for first in [Side::Left, Side::Right] {
                for second in [Side::Left, Side::Right] {
                    out.push(BracketConvention { first, second, sign });
                }
            }
        }
        out
    }

    pub fn describe(&self) -> String {
        let side = |s: Side| match s {
            Side::Left => "left",
            Side::Right => "right",
        };
        format!(
            "{{f,g}} = {}(-1)^p(f) sum(d_{}f/dxi d_{}g/deta + d_{}f/deta d_{}g/dxi); odd m: 2 sum_a eps_a d f/dth_a d g/dth_a, eps = (+,-,+,...)",
            if self.sign < 0 { "-" } else { "" },
            side(self.first),
            side(self.second),
            side(self.first),
            side(self.second),
        )
    }
}

/// Outcome of testing every candidate convention against the quantization.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Calibration {
    pub chosen: BracketConvention,
    pub passing: Vec<BracketConvention>,
    pub tested_m: Vec<usize>,
}

/// Lemma-4-compatible convention, computed once: each candidate must make
/// `[Q f, Q g] - h Q{f,g}` vanish to order `h^2` on all basis pairs for
/// `m = 2, 3, 4` and satisfy super Jacobi on all basis triples for `m = 2, 3`.
pub fn calibration() -> &'static Calibration {
    static CAL: OnceLock<Calibration> = OnceLock::new();
    CAL.get_or_init(|| {
        let tested_m = vec![2, 3, 4];
        let passing: Vec<BracketConvention> = BracketConvention::candidates()
            .into_iter()
            .filter(|c| {
                tested_m.iter().all(|&m| {
                    let po = PoissonAlgebra::with_convention(m, *c);
                    let basis = po.basis();
                    let lemma4 = basis.iter().all(|f| {
                        basis.iter().all(|g| {
                            clifford::lemma4_defect(&po, f, g)
                                .map(|d| d.valuation().is_none_or(|v| v >= 2))
                                .unwrap_or(false)
                        })
                    });
                    lemma4 && (m == 4 || po.structure_constants().check_jacobi(None).is_ok())
                })
            })
            .collect();
        let chosen = *passing
            .first()
            .expect("some bracket convention must be compatible with the quantization");
        Calibration {
            chosen,
            passing,
            tested_m,
        }
    })
}

#[derive(Clone, Debug)]
pub struct PoissonAlgebra {
    m: usize,
    table: Arc<VarTable>,
    convention: BracketConvention,
}

impl PoissonAlgebra {
    /// `po(0|m)` with the calibrated bracket convention.
    pub fn new(m: usize) -> Self {
        Self::with_convention(m, calibration().chosen)
    }

    pub fn with_convention(m: usize, convention: BracketConvention) -> Self {
        PoissonAlgebra {
            m,
            table: VarTable::grassmann(m),
            convention,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.m.div_ceil(2)
    }

    pub fn is_even(&self) -> bool {
        self.m.is_multiple_of(2)
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn convention(&self) -> BracketConvention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// Basis masks in monomial order.
    pub fn basis_masks(&self) -> Vec<u64> {
        basis_masks(self.m)
    }

    pub fn basis(&self) -> Vec<SuperPoly> {
        self.basis_masks()
            .into_iter()
            .map(|s| SuperPoly::odd_monomial(&self.table, s))
            .collect()
    }

    pub fn basis_label(&self, mask: u64) -> String {
        monomial_label(&self.table, mask)
    }

    fn check(&self, f: &SuperPoly) -> Result<()> {
        if same_table(f.table(), &self.table) {
            Ok(())
        } else {
            Err(Error::Incompatible(format!("element is not in po(0|{})", self.m)))
        }
    }

    /// Poisson bracket, extended bilinearly over parity components.
    pub fn bracket(&self, f: &SuperPoly, g: &SuperPoly) -> Result<SuperPoly> {
        self.check(f)?;
        self.check(g)?;
        let mut out = SuperPoly::zero(&self.table);
        for pf in 0..2u8 {
            let fp = f.parity_part(pf);
            if fp.is_zero() {
                continue;
            }
            let h = self.bracket_homogeneous(&fp, pf, g)?;
            out = out.add(&h)?;
        }
        Ok(out)
    }

    fn bracket_homogeneous(&self, f: &SuperPoly, pf: u8, g: &SuperPoly) -> Result<SuperPoly> {
        let c = self.convention;
        let d1 = |k: usize| f.deriv_var(Var::Odd(k), c.first);
        let d2 = |k: usize| g.deriv_var(Var::Odd(k), c.second);
        let mut acc = SuperPoly::zero(&self.table);
        if self.is_even() {
            let n = self.m / 2;
            for i in 0..n {
                acc = acc.add(&d1(i).mul(&d2(n + i))?)?;
                acc = acc.add(&d1(n + i).mul(&d2(i))?)?;
            }
        } else {
            for a in 0..self.m {
                let t = d1(a).mul(&d2(a))?;
                acc.add_assign_scaled(&t, &rat::int(2 * clifford::signature(a + 1)))?;
            }
        }
        let s = c.sign * if pf == 1 { -1 } else { 1 };
        Ok(acc.scale(&rat::int(s)))
    }

    /// `B(f, g) = ∫ f g`.
    pub fn form_b(&self, f: &SuperPoly, g: &SuperPoly) -> Result<Rat> {
        self.check(f)?;
        f.mul(g)?.berezin()
    }

    /// `r_k(f) = ∫ f^k`.
    pub fn r_k(&self, f: &SuperPoly, k: u32) -> Result<Rat> {
        self.check(f)?;
        if k == 0 {
            return Err(Error::Invalid("r_k needs k >= 1".into()));
        }
        f.pow(k).berezin()
    }

    /// Weight of a basis monomial under `h_i = ξ_i η_i` (even `m` only), read
    /// off from the bracket.
    pub fn torus_weight(&self, mask: u64) -> Vec<i64> {
        if !self.is_even() {
            return Vec::new();
        }
        let n = self.m / 2;
        let e = SuperPoly::odd_monomial(&self.table, mask);
        (0..n)
            .map(|i| {
                let h = SuperPoly::odd_monomial(&self.table, (1 << i) | (1 << (n + i)));
                let b = self.bracket(&h, &e).expect("same table");
                if b.is_zero() {
                    return 0;
                }
                let ratio = b.coeff(&SuperMonomial::odd_only(0, mask));
                assert_eq!(b.len(), 1, "torus must act diagonally");
                assert!(ratio.is_integer());
                ratio.to_integer().try_into().expect("small weight")
            })
            .collect()
    }

    /// Exact structure constants on the monomial basis, with the torus weights
    /// (even `m`), the degree grading `|A| - 2`, and the form `B`.
    pub fn structure_constants(&self) -> LieSuperAlgebra {
        let masks = self.basis_masks();
        let index: BTreeMap<u64, usize> = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let basis = self.basis();
        let mut constants = BTreeMap::new();
        for (a, fa) in basis.iter().enumerate() {
            for (b, fb) in basis.iter().enumerate() {
                let br = self.bracket(fa, fb).expect("same table");
                if br.is_zero() {
                    continue;
                }
                let v: BTreeMap<usize, Rat> = br
                    .terms()
                    .iter()
                    .map(|(m, c)| (index[&m.odd], c.clone()))
                    .collect();
                constants.insert((a, b), sparse_from_map(v));
            }
        }
        let mut form = BTreeMap::new();
        for (a, fa) in basis.iter().enumerate() {
            for (b, fb) in basis.iter().enumerate() {
                let v = self.form_b(fa, fb).expect("same table");
                if !v.is_zero() {
                    form.insert((a, b), v);
                }
            }
        }
        let grading: Vec<Vec<i64>> = masks
            .iter()
            .map(|&s| {
                let mut w = self.torus_weight(s);
                w.push(s.count_ones() as i64 - 2);
                w
            })
            .collect();
        let torus_forms: Vec<Vec<i64>> = if self.is_even() {
            let n = self.m / 2;
            (0..n)
                .map(|i| (0..=n).map(|j| i64::from(i == j)).collect())
                .collect()
        } else {
            Vec::new()
        };
        LieSuperAlgebra::new(
            format!("po(0|{})", self.m),
            masks.iter().map(|&s| self.basis_label(s)).collect(),
            masks.iter().map(|s| (s.count_ones() % 2) as u8).collect(),
            constants,
        )
        .with_grading(grading, torus_forms)
        .with_form(form)
        .with_provenance("bracket", self.convention.describe())
        .with_provenance("berezin", "integral of the canonical top monomial = 1")
    }
}

pub fn basis_masks(m: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (0..(1u64 << m)).collect();
    masks.sort_by(|a, b| SuperMonomial::odd_only(0, *a).cmp(&SuperMonomial::odd_only(0, *b)));
    masks
}

pub fn monomial_label(table: &VarTable, mask: u64) -> String {
    if mask == 0 {
        return "1".into();
    }
    (0..table.n_odd())
        .filter(|k| mask & (1 << k) != 0)
        .map(|k| table.odd_vars()[k].clone())
        .collect()
}

/// Symbol table `c_A` (parity of `A`) in basis order, matching the coadjoint
/// module of `po(0|m)`.
pub fn symbol_table(m: usize) -> Arc<VarTable> {
    let t = VarTable::grassmann(m);
    let masks = basis_masks(m);
    let even: Vec<String> = masks
        .iter()
        .filter(|s| s.count_ones() % 2 == 0)
        .map(|&s| crate::lie::coordinate_name(&monomial_label(&t, s)))
        .collect();
    let odd: Vec<String> = masks
        .iter()
        .filter(|s| s.count_ones() % 2 == 1)
        .map(|&s| crate::lie::coordinate_name(&monomial_label(&t, s)))
        .collect();
    VarTable::new(even, odd).expect("at most 64 odd symbols for m <= 7")
}

/// The generic even element `f = sum_A c_A * (monomial A)`, over the symbol
/// table followed by the Grassmann generators.
pub fn generic_element(m: usize) -> Result<(SuperPoly, Arc<VarTable>)> {
    let symbols = symbol_table(m);
    let grass = VarTable::grassmann(m);
    let full = symbols.concat(&grass)?;
    let mut f = SuperPoly::zero(&full);
    for s in basis_masks(m) {
        let c = SuperPoly::var(&full, &crate::lie::coordinate_name(&monomial_label(&grass, s)))?;
        let mono = SuperPoly::odd_monomial(&grass, s).embed(&full)?;
        f = f.add(&c.mul(&mono)?)?;
    }
    Ok((f, symbols))
}

/// `r_k` as a polynomial in the coordinates `c_A`.
pub fn r_k_generic(m: usize, k: u32) -> Result<SuperPoly> {
    let (f, symbols) = generic_element(m)?;
    r_k_of(&f, &symbols, m, k)
}

pub(crate) fn r_k_of(f: &SuperPoly, symbols: &Arc<VarTable>, m: usize, k: u32) -> Result<SuperPoly> {
    if k == 0 {
        return Err(Error::Invalid("r_k needs k >= 1".into()));
    }
    let mut acc = f.clone();
    for _ in 1..k {
        acc = acc.mul(f)?;
    }
    acc.berezin_over(&grassmann_names(m), symbols)
}

/// All `r_1..r_kmax` sharing one generic element.
pub fn r_k_family(m: usize, kmax: u32) -> Result<Vec<SuperPoly>> {
    let (f, symbols) = generic_element(m)?;
    let mut out = Vec::new();
    let mut acc = SuperPoly::one(f.table());
    for _ in 0..kmax {
        acc = acc.mul(&f)?;
        out.push(acc.berezin_over(&grassmann_names(m), &symbols)?);
    }
    Ok(out)
}


/// Sign rule `B({f,g},h) = ε B(f,{g,h})` for homogeneous `f, g, h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormVariant {
    Plus,
    Minus,
    /// `ε = (-1)^{p(f)}`
    ParityOfFirst,
    /// `ε = -(-1)^{p(f)}`
    MinusParityOfFirst,
}

impl FormVariant {
    pub const ALL: [FormVariant; 4] = [
        FormVariant::Plus,
        FormVariant::Minus,
        FormVariant::ParityOfFirst,
        FormVariant::MinusParityOfFirst,
    ];

    pub fn sign(self, pf: u8) -> i64 {
        let s = if pf % 2 == 1 { -1 } else { 1 };
        match self {
            FormVariant::Plus => 1,
            FormVariant::Minus => -1,
            FormVariant::ParityOfFirst => s,
            FormVariant::MinusParityOfFirst => -s,
        }
    }
}

/// Exact checks of the bracket laws on seeded random homogeneous triples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketLaws {
    pub m: usize,
    pub triples: usize,
    pub antisymmetry_failures: usize,
    pub jacobi_failures: usize,
    pub leibniz_failures: usize,
    pub parity_failures: usize,
    /// Form variants that held on every triple.
    pub form_variants: Vec<FormVariant>,
}

impl BracketLaws {
    pub fn all_hold(&self) -> bool {
        self.antisymmetry_failures == 0
            && self.jacobi_failures == 0
            && self.leibniz_failures == 0
            && self.parity_failures == 0
            && !self.form_variants.is_empty()
    }
}

fn koszul(a: u8, b: u8) -> Rat {
    rat::int(if a * b % 2 == 1 { -1 } else { 1 })
}

impl PoissonAlgebra {
    pub fn random_homogeneous(&self, rng: &mut rand_chacha::ChaCha8Rng) -> (SuperPoly, u8) {
        use rand::Rng;
        loop {
            let d = rng.gen_range(0..=self.m as u32);
            let p = (d % 2) as u8;
            if let Ok(f) = crate::supercore::random_homogeneous_with(&self.table, d, p, rng) {
                return (f, p);
            }
        }
    }

    pub fn check_laws(&self, triples: usize, seed: u64) -> Result<BracketLaws> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut out = BracketLaws {
            m: self.m,
            triples,
            ..Default::default()
        };
        let mut variants = FormVariant::ALL.to_vec();
        for _ in 0..triples {
            let (f, pf) = self.random_homogeneous(&mut rng);
            let (g, pg) = self.random_homogeneous(&mut rng);
            let (h, _) = self.random_homogeneous(&mut rng);
            let fg = self.bracket(&f, &g)?;
            let gf = self.bracket(&g, &f)?;
            if !fg.add(&gf.scale(&koszul(pf, pg)))?.is_zero() {
                out.antisymmetry_failures += 1;
            }
            if !fg.is_zero() && fg.parity() != Some((pf + pg) % 2) {
                out.parity_failures += 1;
            }
            let lhs = self.bracket(&f, &self.bracket(&g, &h)?)?;
            let rhs = self
                .bracket(&fg, &h)?
                .add(&self.bracket(&g, &self.bracket(&f, &h)?)?.scale(&koszul(pf, pg)))?;
            if lhs != rhs {
                out.jacobi_failures += 1;
            }
            let lhs = self.bracket(&f, &g.mul(&h)?)?;
            let rhs = fg
                .mul(&h)?
                .add(&g.mul(&self.bracket(&f, &h)?)?.scale(&koszul(pf, pg)))?;
            if lhs != rhs {
                out.leibniz_failures += 1;
            }
            let left = self.form_b(&fg, &h)?;
            let right = self.form_b(&f, &self.bracket(&g, &h)?)?;
            variants.retain(|v| left == right.clone() * rat::int(v.sign(pf)));
        }
        out.form_variants = variants;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(po: &PoissonAlgebra, s: &str) -> SuperPoly {
        SuperPoly::parse(po.table(), s).unwrap()
    }

    #[test]
    fn calibration_is_unique() {
        let c = calibration();
        assert_eq!(c.passing.len(), 1);
        assert_eq!(
            c.chosen,
            BracketConvention { first: Side::Left, second: Side::Left, sign: -1 }
        );
    }

    #[test]
    fn bracket_examples() {
        let po = PoissonAlgebra::new(2);
        assert_eq!(po.bracket(&p(&po, "xi1"), &p(&po, "eta1")).unwrap(), p(&po, "1"));
        assert_eq!(po.bracket(&p(&po, "xi1*eta1"), &p(&po, "xi1")).unwrap(), p(&po, "xi1"));
        assert_eq!(po.bracket(&p(&po, "xi1*eta1"), &p(&po, "eta1")).unwrap(), p(&po, "-1/1*eta1"));
        for g in po.basis() {
            assert!(po.bracket(&p(&po, "1"), &g).unwrap().is_zero());
        }
        // the literal convention disagrees on the basic pair
        let raw = PoissonAlgebra::with_convention(2, BracketConvention::LITERAL);
        assert_eq!(raw.bracket(&p(&raw, "xi1"), &p(&raw, "eta1")).unwrap(), p(&raw, "-1/1"));
    }

    #[test]
    fn form_examples() {
        let po = PoissonAlgebra::new(4);
        assert_eq!(po.form_b(&p(&po, "xi1*eta1"), &p(&po, "xi2*eta2")).unwrap(), rat::int(-1));
        assert_eq!(po.form_b(&p(&po, "1"), &p(&po, "xi1*xi2*eta1*eta2")).unwrap(), rat::int(1));
        assert!(po.form_b(&p(&po, "xi1"), &p(&po, "xi1")).unwrap().is_zero());
    }

    #[test]
    fn form_parity_and_nondegeneracy() {
        for m in 1..=4 {
            let alg = PoissonAlgebra::new(m).structure_constants();
            let mut rows = vec![vec![Rat::zero(); alg.dim()]; alg.dim()];
            for ((a, b), v) in alg.form.as_ref().unwrap() {
                rows[*a][*b] = v.clone();
                assert_eq!((alg.parities[*a] + alg.parities[*b]) as usize % 2, m % 2);
            }
            assert_eq!(crate::linalg::dense::rank(&rows), alg.dim());
        }
    }

    #[test]
    fn r_k_examples() {
        let po = PoissonAlgebra::new(4);
        let f = p(&po, "3/1*xi1*eta1 + 5/1*xi2*eta2");
        assert_eq!(po.r_k(&f, 2).unwrap(), rat::int(-30));
        assert!(po.r_k(&f, 1).unwrap().is_zero());
        assert!(po.r_k(&f, 3).unwrap().is_zero());
    }

    #[test]
    fn structure_constant_examples() {
        let alg = PoissonAlgebra::new(2).structure_constants();
        assert_eq!(alg.dim(), 4);
        assert_eq!(alg.labels, vec!["1", "xi1", "eta1", "xi1eta1"]);
        assert_eq!(alg.bracket_basis(1, 2), &[(0, rat::int(1))]);
        alg.validate().unwrap();
        assert_eq!(alg.grading[3], vec![0, 0]);
        assert_eq!(alg.grading[1], vec![1, -1]);
    }

    #[test]
    fn laws_hold() {
        for m in 2..=4 {
            let laws = PoissonAlgebra::new(m).check_laws(40, m as u64).unwrap();
            assert!(laws.all_hold(), "{laws:?}");
        }
    }

    #[test]
    fn generic_r2_torus() {
        let r2 = r_k_generic(4, 2).unwrap();
        let t = r2.table().clone();
        let mut assign = BTreeMap::new();
        for v in t.even_vars().iter().chain(t.odd_vars()) {
            assign.insert(v.clone(), SuperPoly::zero(&VarTable::empty()));
        }
        let x1 = SuperPoly::constant(&VarTable::empty(), rat::int(3));
        let x2 = SuperPoly::constant(&VarTable::empty(), rat::int(5));
        assign.insert("c_xi1eta1".into(), x1);
        assign.insert("c_xi2eta2".into(), x2);
        let v = r2.substitute(&assign, &VarTable::empty()).unwrap();
        assert_eq!(v.constant_term(), rat::int(-30));
    }
}

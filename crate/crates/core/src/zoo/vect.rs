use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{kernel_vectors, regrade, subalgebra};
use crate::error::{Error, Result};
use crate::lie::{sparse_from_map, LieSuperAlgebra, SparseVec};
use crate::linalg::dense;
use crate::poisson::{basis_masks, monomial_label};
use crate::rat::{self, Rat};
use crate::supercore::{Side, SuperMonomial, SuperPoly, Var, VarTable};

fn theta_table(m: usize) -> Arc<VarTable> {
    VarTable::odd_only((1..=m).map(|i| format!("th{i}"))).expect("m <= 64")
}

/// Basis `θ_I ∂_j` of `vect(0|m)` as `(I, j)`, `j` 0-based, in monomial order
/// of `I` and then by `j`.
pub fn vect_basis(m: usize) -> Vec<(u64, usize)> {
    basis_masks(m)
        .into_iter()
        .flat_map(|s| (0..m).map(move |j| (s, j)))
        .collect()
}

fn field_label(t: &VarTable, (s, j): (u64, usize)) -> String {
    if s == 0 {
        format!("D{}", j + 1)
    } else {
        format!("{}D{}", monomial_label(t, s), j + 1)
    }
}

/// Component polynomials `f_j` of a field written as a sparse vector.
fn collect_field(
    index: &BTreeMap<(u64, usize), usize>,
    comps: &[(usize, SuperPoly)],
) -> SparseVec {
    let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
    for (j, p) in comps {
        for (mono, c) in p.terms() {
            *acc.entry(index[&(mono.odd, *j)]).or_insert_with(Rat::zero) += c;
        }
    }
    sparse_from_map(acc)
}

/// `vect(0|m)`: `[f ∂_i, g ∂_j] = f ∂_i(g) ∂_j - (-1)^{p(X)p(Y)} g ∂_j(f) ∂_i`.
pub fn vect_algebra(m: usize) -> Result<LieSuperAlgebra> {
    if m == 0 {
        return Err(Error::Invalid("vect(0|m) needs m >= 1".into()));
    }
    let t = theta_table(m);
    let basis = vect_basis(m);
    let index: BTreeMap<(u64, usize), usize> =
        basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let parity = |(s, _): (u64, usize)| ((s.count_ones() + 1) % 2) as u8;
    let mut constants = BTreeMap::new();
    for (a, &(si, i)) in basis.iter().enumerate() {
        let f = SuperPoly::odd_monomial(&t, si);
        for (b, &(sj, j)) in basis.iter().enumerate() {
            let g = SuperPoly::odd_monomial(&t, sj);
            let t1 = f.mul(&g.deriv_var(Var::Odd(i), Side::Left))?;
            let koszul = parity((si, i)) * parity((sj, j)) == 1;
            let mut t2 = g.mul(&f.deriv_var(Var::Odd(j), Side::Left))?;
            if !koszul {
                t2 = t2.neg();
            }
            let v = collect_field(&index, &[(j, t1), (i, t2)]);
            if !v.is_empty() {
                constants.insert((a, b), v);
            }
        }
    }
    let grading: Vec<Vec<i64>> = basis
        .iter()
        .map(|&(s, j)| (0..m).map(|k| i64::from(s >> k & 1 == 1) - i64::from(k == j)).collect())
        .collect();
    let units: Vec<Vec<i64>> = (0..m).map(|i| (0..m).map(|k| i64::from(i == k)).collect()).collect();
    let mut g = LieSuperAlgebra::new(
        format!("vect(0|{m})"),
        basis.iter().map(|&b| field_label(&t, b)).collect(),
        basis.iter().map(|&b| parity(b)).collect(),
        constants,
    )
    .with_grading(grading, Vec::new())
    .with_provenance("bracket", "[f d_i, g d_j] = f d_i(g) d_j - (-1)^{p(X)p(Y)} g d_j(f) d_i, left derivatives");
    g.torus_forms = g.realized_torus_forms(&units);
    Ok(g)
}

/// `sum_j ∂_j f_j` for the basis field `index`, without sign, on function
/// masks.
fn raw_divergence(m: usize, (s, j): (u64, usize)) -> Option<(u64, Rat)> {
    let t = theta_table(m);
    let d = SuperPoly::odd_monomial(&t, s).deriv_var(Var::Odd(j), Side::Left);
    d.terms().iter().next().map(|(mono, c)| (mono.odd, c.clone()))
}

/// `div(f ∂_j) = (-1)^{p(f)} ∂_j f` on basis fields, as a function-mask vector.
pub fn divergence(m: usize, field: (u64, usize)) -> SparseVec {
    match raw_divergence(m, field) {
        None => Vec::new(),
        Some((mask, c)) => {
            let sign = rat::int(rat::parity_sign(field.0.count_ones()));
            vec![(mask as usize, c * sign)]
        }
    }
}

/// `svect(0|m) = ker div`.
pub fn svect_algebra(m: usize) -> Result<LieSuperAlgebra> {
    if m < 2 {
        return Err(Error::Invalid("svect(0|m) needs m >= 2".into()));
    }
    let vect = vect_algebra(m)?;
    let basis = vect_basis(m);
    let kernel = kernel_vectors(&vect, |i| divergence(m, basis[i]))?;
    let mut g = subalgebra(&vect, &format!("svect(0|{m})"), &kernel)?;
    g.provenance.insert("divergence".into(), "div(f d_j) = (-1)^{p(f)} d_j f".into());
    Ok(g)
}

/// The deformation term `τ` of the volume `(1 + τ) vvol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DeformTerm {
    /// `τ = θ_1 ⋯ θ_m`
    #[default]
    Top,
    /// `τ = θ_1 θ_m`
    Pair,
    /// `τ = 0`
    Off,
}

impl DeformTerm {
    pub fn as_str(self) -> &'static str {
        match self {
            DeformTerm::Top => "top",
            DeformTerm::Pair => "pair",
            DeformTerm::Off => "off",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "top" => Ok(DeformTerm::Top),
            "pair" => Ok(DeformTerm::Pair),
            "off" => Ok(DeformTerm::Off),
            _ => Err(Error::Invalid(format!("unknown deform term {s:?}"))),
        }
    }

    pub fn mask(self, m: usize) -> u64 {
        match self {
            DeformTerm::Top => (1u64 << m) - 1,
            DeformTerm::Pair => 1 | (1u64 << (m - 1)),
            DeformTerm::Off => 0,
        }
    }
}

/// Sign `s(X)` in `L_X((1+τ) vvol) = (X(τ) + s(X) (1+τ) sum_j ∂_j f_j) vvol`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensitySign {
    Plus,
    Minus,
    /// `s = (-1)^{p(X)}`
    ParityPlus,
    /// `s = -(-1)^{p(X)}`
    ParityMinus,
}

impl DensitySign {
    pub const ALL: [DensitySign; 4] = [
        DensitySign::Plus,
        DensitySign::Minus,
        DensitySign::ParityPlus,
        DensitySign::ParityMinus,
    ];

    fn value(self, parity: u8) -> i64 {
        let p = rat::parity_sign(parity as u32);
        match self {
            DensitySign::Plus => 1,
            DensitySign::Minus => -1,
            DensitySign::ParityPlus => p,
            DensitySign::ParityMinus => -p,
        }
    }
}

/// Lie derivative of `(1+τ) vvol` along a basis field, as a function-mask
/// vector.
fn density_derivative(m: usize, tau: u64, sign: DensitySign, field: (u64, usize)) -> SparseVec {
    let t = theta_table(m);
    let (s, j) = field;
    let f = SuperPoly::odd_monomial(&t, s);
    let mut acc = f.mul(&SuperPoly::odd_monomial(&t, tau).deriv_var(Var::Odd(j), Side::Left)).unwrap();
    if tau == 0 {
        acc = SuperPoly::zero(&t);
    }
    if let Some((mask, c)) = raw_divergence(m, field) {
        let parity = ((s.count_ones() + 1) % 2) as u8;
        let d = SuperPoly::monomial(&t, SuperMonomial::odd_only(0, mask), c * rat::int(sign.value(parity)));
        let density = SuperPoly::one(&t).add(&SuperPoly::odd_monomial(&t, tau)).unwrap();
        let density = if tau == 0 { SuperPoly::one(&t) } else { density };
        acc = acc.add(&density.mul(&d).unwrap()).unwrap();
    }
    sparse_from_map(acc.terms().iter().map(|(mono, c)| (mono.odd as usize, c.clone())).collect())
}

/// Forms on the weight lattice vanishing on the weight of `τ`.
fn forms_killing(m: usize, tau: u64) -> Vec<Vec<i64>> {
    let row: Vec<Rat> = (0..m).map(|k| rat::int(i64::from(tau >> k & 1 == 1))).collect();
    dense::kernel(&[row], m).iter().map(|v| rat::primitive_integers(v)).collect()
}

/// Kernel of `X ↦ L_X((1+τ) vvol)` with an explicit sign rule.
pub fn svect_tilde_with(m: usize, term: DeformTerm, sign: DensitySign) -> Result<LieSuperAlgebra> {
    if m < 2 {
        return Err(Error::Invalid("svect_tilde(0|m) needs m >= 2".into()));
    }
    let tau = term.mask(m);
    if tau.count_ones() % 2 == 1 {
        return Err(Error::Invalid(format!(
            "the {} deformation term is odd for m = {m}; the deformed subalgebra is not Z/2-graded",
            term.as_str()
        )));
    }
    let vect = regrade(&vect_algebra(m)?, &forms_killing(m, tau));
    let basis = vect_basis(m);
    let kernel = kernel_vectors(&vect, |i| density_derivative(m, tau, sign, basis[i]))?;
    let mut g = subalgebra(&vect, &format!("svect_tilde(0|{m})"), &kernel)?;
    g.provenance.insert("deform_term".into(), term.as_str().into());
    g.provenance.insert("density_sign".into(), format!("{sign:?}"));
    Ok(g)
}

/// `∫ L_X(g vvol) = 0` for every basis field `X` and monomial `g` of
/// `Λ(θ_1..θ_m)`, where `L_X(g vvol) = (X(g) + s(X) (sum_j ∂_j f_j) g) vvol`.
pub fn density_sign_integrates(m: usize, sign: DensitySign) -> bool {
    let t = theta_table(m);
    vect_basis(m).into_iter().all(|(s, j)| {
        let f = SuperPoly::odd_monomial(&t, s);
        let parity = ((s.count_ones() + 1) % 2) as u8;
        let div = f.deriv_var(Var::Odd(j), Side::Left).scale(&rat::int(sign.value(parity)));
        (0..(1u64 << m)).all(|gm| {
            let g = SuperPoly::odd_monomial(&t, gm);
            let xg = f.mul(&g.deriv_var(Var::Odd(j), Side::Left)).unwrap();
            let total = xg.add(&div.mul(&g).unwrap()).unwrap();
            total.berezin().unwrap().is_zero()
        })
    })
}

/// Sign rule for the Lie derivative of densities: the unique one for which
/// every Lie derivative integrates to zero, checked for `m = 1, 2, 3`.
pub fn density_sign() -> DensitySign {
    static SIGN: std::sync::OnceLock<DensitySign> = std::sync::OnceLock::new();
    *SIGN.get_or_init(|| {
        let passing: Vec<DensitySign> = DensitySign::ALL
            .into_iter()
            .filter(|s| (1..=3).all(|m| density_sign_integrates(m, *s)))
            .collect();
        assert_eq!(passing.len(), 1, "density sign must be unique: {passing:?}");
        passing[0]
    })
}

/// `svect_tilde(0|m)`: fields preserving `(1 + τ) vvol`.
pub fn svect_tilde(m: usize, term: DeformTerm) -> Result<LieSuperAlgebra> {
    svect_tilde_with(m, term, density_sign())
}


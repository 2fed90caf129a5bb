//! Quantization of `po(0|m)`, the defect of the bracket under it, and the
//! trace moments of a generic element.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::element::{quantize, CliffordElement};
use super::fock::{word_supertrace, FockRep};
use super::hpoly::HPoly;
use super::odd::{quantize_odd, ThetaElement};
use super::word::CliffordWord;
use crate::error::{Error, Result};
use crate::poisson::{basis_masks, monomial_label, r_k_of, symbol_table, PoissonAlgebra};
use crate::rat::{self, Rat};
use crate::supercore::{SuperPoly, VarTable};

/// Image of the quantization: the full Clifford algebra for even `m`, the
/// odd subalgebra spanned by `θ̂_I` for odd `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantized {
    Even(CliffordElement),
    Odd(ThetaElement),
}

impl Quantized {
    pub fn valuation(&self) -> Option<u32> {
        match self {
            Quantized::Even(x) => x.valuation(),
            Quantized::Odd(x) => x.terms().values().filter_map(HPoly::valuation).min(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Quantized::Even(x) => x.is_zero(),
            Quantized::Odd(x) => x.is_zero(),
        }
    }

    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Quantized::Even(a), Quantized::Even(b)) => Ok(Quantized::Even(a.supercommutator(b)?)),
            (Quantized::Odd(a), Quantized::Odd(b)) => Ok(Quantized::Odd(a.supercommutator(b)?)),
            _ => Err(Error::Incompatible("mixed quantization routes".into())),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Quantized::Even(a), Quantized::Even(b)) => Ok(Quantized::Even(a.mul(b)?)),
            (Quantized::Odd(a), Quantized::Odd(b)) => Ok(Quantized::Odd(a.mul(b)?)),
            _ => Err(Error::Incompatible("mixed quantization routes".into())),
        }
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        match self {
            Quantized::Even(a) => Ok(Quantized::Even(a.pow(k)?)),
            Quantized::Odd(a) => Ok(Quantized::Odd(a.pow(k)?)),
        }
    }

    /// `self - h * other`.
    pub fn sub_h(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Quantized::Even(a), Quantized::Even(b)) => {
                let h = HPoly::constant(b.table(), 1, -Rat::one());
                Ok(Quantized::Even(a.add(&b.scale_h(&h)?)?))
            }
            (Quantized::Odd(a), Quantized::Odd(b)) => {
                let mut out = a.clone();
                for (m, c) in b.terms() {
                    out.add_term(*m, &c.shift(1).neg())?;
                }
                Ok(Quantized::Odd(out))
            }
            _ => Err(Error::Incompatible("mixed quantization routes".into())),
        }
    }
}

/// `Q(f)` for `f` in `po(0|m)`.
pub fn quantize_po(po: &PoissonAlgebra, f: &SuperPoly) -> Result<Quantized> {
    if po.is_even() {
        Ok(Quantized::Even(quantize(f)?))
    } else {
        Ok(Quantized::Odd(quantize_odd(f)?))
    }
}

/// `[Q f, Q g] - h Q({f, g})`.
pub fn lemma4_defect(po: &PoissonAlgebra, f: &SuperPoly, g: &SuperPoly) -> Result<Quantized> {
    let qf = quantize_po(po, f)?;
    let qg = quantize_po(po, g)?;
    let qb = quantize_po(po, &po.bracket(f, g)?)?;
    qf.supercommutator(&qg)?.sub_h(&qb)
}

/// Minimum defect valuation over all basis pairs (`None`: every defect is
/// exactly zero), plus the number of pairs checked.
pub fn lemma4_scan(po: &PoissonAlgebra) -> Result<(Option<u32>, usize)> {
    let basis = po.basis();
    let mut least: Option<u32> = None;
    let mut pairs = 0;
    for f in &basis {
        for g in &basis {
            pairs += 1;
            if let Some(v) = lemma4_defect(po, f, g)?.valuation() {
                least = Some(least.map_or(v, |l| l.min(v)));
            }
        }
    }
    Ok((least, pairs))
}

/// `Q(f)` for the generic even element `f = sum c_A A`, with coefficients in
/// the symbol table.
pub fn quantize_generic(m: usize) -> Result<(Quantized, Arc<VarTable>)> {
    let symbols = symbol_table(m);
    let grass = VarTable::grassmann(m);
    let n = m.div_ceil(2);
    let coeff = |s: u64| -> Result<HPoly> {
        let name = crate::lie::coordinate_name(&monomial_label(&grass, s));
        Ok(HPoly::term(0, SuperPoly::var(&symbols, &name)?))
    };
    let q = if m.is_multiple_of(2) {
        let mut x = CliffordElement::zero(n, &symbols);
        let low = (1u64 << n) - 1;
        for s in basis_masks(m) {
            x.add_term(CliffordWord::new((s & low) as u32, (s >> n) as u32), &coeff(s)?)?;
        }
        Quantized::Even(x)
    } else {
        let mut x = ThetaElement::zero(n, &symbols);
        for s in basis_masks(m) {
            x.add_term(s, &coeff(s)?)?;
        }
        Quantized::Odd(x)
    };
    Ok((q, symbols))
}

/// `str` of a Clifford element with polynomial coefficients, through the
/// per-word Fock supertraces.
pub fn supertrace(x: &CliffordElement) -> Result<HPoly> {
    let rep = FockRep::new(x.n());
    let mut out = HPoly::zero(x.table());
    let mut cache: BTreeMap<CliffordWord, HPoly> = BTreeMap::new();
    for (w, c) in x.terms() {
        let tau = cache
            .entry(*w)
            .or_insert_with(|| word_supertrace(&rep, *w))
            .clone();
        for (p, s) in tau.coeffs() {
            out.add_assign(&c.shift(*p).scale(&s.constant_term()))?;
        }
    }
    Ok(out)
}

/// Trace moment of `Q(f)^k` for the generic `f`: `str` for even `m`, the
/// top-coefficient queer trace for odd `m`.
pub fn moment(m: usize, k: u32) -> Result<(HPoly, Arc<VarTable>)> {
    let (q, symbols) = quantize_generic(m)?;
    let t = match q.pow(k)? {
        Quantized::Even(x) => supertrace(&x)?,
        Quantized::Odd(x) => x.qtr(),
    };
    Ok((t, symbols))
}

/// Comparison of the lowest moment component with `(1/k) ∫ f^k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentReport {
    pub m: usize,
    pub k: u32,
    /// `str` for even `m`, `qtr` for odd `m`.
    pub route: String,
    pub valuation: Option<u32>,
    /// `h^n` for the supertrace route; no exponent is asserted for `qtr`.
    pub claimed_exponent: Option<u32>,
    pub exponent_matches_claim: Option<bool>,
    /// Exact `λ` with `lowest = λ (1/k) ∫ f^k`, as `p/q` text.
    pub constant: Option<String>,
    pub proportional: bool,
    /// Both sides vanish identically.
    pub vacuous: bool,
}

/// Exact ratio `a = λ b`, if it exists (`b` nonzero).
pub fn proportionality(a: &SuperPoly, b: &SuperPoly) -> Option<Rat> {
    let (mono, cb) = b.leading()?;
    let lambda = a.coeff(mono) / cb;
    if a.sub(&b.scale(&lambda)).ok()?.is_zero() {
        Some(lambda)
    } else {
        None
    }
}

pub fn moment_report(m: usize, k: u32) -> Result<MomentReport> {
    if k == 0 {
        return Err(Error::Invalid("moments need k >= 1".into()));
    }
    let (t, symbols) = moment(m, k)?;
    let (f, _) = crate::poisson::generic_element(m)?;
    let rhs = r_k_of(&f, &symbols, m, k)?.scale(&rat::frac(1, k as i64));
    let claimed = m.is_multiple_of(2).then_some((m / 2) as u32);
    let (valuation, lowest) = match t.lowest_component() {
        Ok((v, p)) => (Some(v), p),
        Err(Error::ZeroValuation) => (None, SuperPoly::zero(&symbols)),
        Err(e) => return Err(e),
    };
    let vacuous = lowest.is_zero() && rhs.is_zero();
    let constant = if rhs.is_zero() {
        None
    } else {
        proportionality(&lowest, &rhs)
    };
    let proportional = vacuous || constant.as_ref().is_some_and(|c| !c.is_zero());
    Ok(MomentReport {
        m,
        k,
        valuation,
        route: if m.is_multiple_of(2) { "str" } else { "qtr" }.into(),
        claimed_exponent: claimed,
        exponent_matches_claim: claimed.map(|c| valuation == Some(c) || vacuous),
        constant: constant.map(|c| rat::to_text(&c)),
        proportional,
        vacuous,
    })
}

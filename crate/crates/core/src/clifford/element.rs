use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::hpoly::HPoly;
use super::word::{word_product, CliffordWord, ProductTable};
use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use crate::supercore::{same_table, SuperPoly, VarTable};

/// Element of the deformed Clifford superalgebra on `n` pairs, with
/// coefficients in `Q[h] (x) Lambda(coefficient table)`. Coefficients are
/// written to the left of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordElement {
    n: usize,
    table: Arc<VarTable>,
    terms: BTreeMap<CliffordWord, HPoly>,
}

impl CliffordElement {
    pub fn zero(n: usize, table: &Arc<VarTable>) -> Self {
        CliffordElement {
            n,
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn word(n: usize, table: &Arc<VarTable>, w: CliffordWord, c: HPoly) -> Self {
        let mut e = Self::zero(n, table);
        e.add_term(w, &c).expect("same table");
        e
    }

    pub fn scalar_word(n: usize, w: CliffordWord, c: Rat) -> Self {
        let t = VarTable::empty();
        Self::word(n, &t, w, HPoly::constant(&t, 0, c))
    }

    pub fn identity(n: usize, table: &Arc<VarTable>) -> Self {
        Self::word(n, table, CliffordWord::ONE, HPoly::term(0, SuperPoly::one(table)))
    }

    /// `xî_k` (1-based).
    pub fn xi(n: usize, k: usize) -> Self {
        Self::scalar_word(n, CliffordWord::new(1 << (k - 1), 0), Rat::one())
    }

    /// `etâ_k` (1-based).
    pub fn eta(n: usize, k: usize) -> Self {
        Self::scalar_word(n, CliffordWord::new(0, 1 << (k - 1)), Rat::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> &BTreeMap<CliffordWord, HPoly> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: CliffordWord) -> HPoly {
        self.terms.get(&w).cloned().unwrap_or_else(|| HPoly::zero(&self.table))
    }

    pub fn add_term(&mut self, w: CliffordWord, c: &HPoly) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if !same_table(c.table(), &self.table) {
            return Err(Error::Incompatible("coefficient tables differ".into()));
        }
        match self.terms.get_mut(&w) {
            Some(e) => {
                e.add_assign(c)?;
                if e.is_zero() {
                    self.terms.remove(&w);
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
        Ok(())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Incompatible(format!(
                "Clifford algebras on {} and {} pairs",
                self.n, other.n
            )));
        }
        if !same_table(&self.table, &other.table) {
            return Err(Error::Incompatible("coefficient tables differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat::int(-1)))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = Self::zero(self.n, &self.table);
        for (w, c) in &self.terms {
            out.add_term(*w, &c.scale(s)).expect("same table");
        }
        out
    }

    pub fn scale_h(&self, c: &HPoly) -> Result<Self> {
        let mut out = Self::zero(self.n, &self.table);
        for (w, d) in &self.terms {
            out.add_term(*w, &c.mul(d)?)?;
        }
        Ok(out)
    }

    /// Same element over another coefficient table holding the same names.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<Self> {
        let mut out = Self::zero(self.n, target);
        for (w, c) in &self.terms {
            let mut h = HPoly::zero(target);
            for (k, p) in c.coeffs() {
                h.add_term(*k, &p.embed(target)?)?;
            }
            out.add_term(*w, &h)?;
        }
        Ok(out)
    }

    /// Parity of a homogeneous element: word parity plus coefficient parity.
    pub fn parity(&self) -> Option<u8> {
        let mut found = None;
        for (w, c) in &self.terms {
            for p in c.coeffs().values() {
                let q = (w.parity() + p.parity()?) % 2;
                match found {
                    None => found = Some(q),
                    Some(f) if f != q => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(0))
    }

    /// Normal-ordered product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let table = ProductTable::shared(self.n);
        let mut acc: BTreeMap<CliffordWord, HPoly> = BTreeMap::new();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                // (ca wa)(cb wb) = ca (wa cb) wb = ca twist^{p(wa)}(cb) wa wb
                let cb = if wa.parity() == 1 { cb.parity_twist() } else { cb.clone() };
                let coeff = ca.mul(&cb)?;
                if coeff.is_zero() {
                    continue;
                }
                let owned;
                let prods = match &table {
                    Some(t) => t.get(*wa, *wb),
                    None => {
                        owned = word_product(*wa, *wb);
                        &owned[..]
                    }
                };
                for t in prods {
                    let mut c = coeff.shift(t.power);
                    if t.negative {
                        c = c.neg();
                    }
                    match acc.get_mut(&t.word) {
                        Some(e) => e.add_assign(&c)?,
                        None => {
                            acc.insert(t.word, c);
                        }
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(CliffordElement {
            n: self.n,
            table: self.table.clone(),
            terms: acc,
        })
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.n, &self.table);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `ab - (-1)^{p(a)p(b)} ba`, extended bilinearly over parity components.
    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.n, &self.table);
        for pa in 0..2u8 {
            let a = self.parity_part(pa);
            if a.is_zero() {
                continue;
            }
            for pb in 0..2u8 {
                let b = other.parity_part(pb);
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul(&b)?;
                let ba = b.mul(&a)?;
                let term = if pa * pb == 1 { ab.add(&ba)? } else { ab.sub(&ba)? };
                out = out.add(&term)?;
            }
        }
        Ok(out)
    }

    pub fn parity_part(&self, parity: u8) -> Self {
        let mut out = Self::zero(self.n, &self.table);
        for (w, c) in &self.terms {
            let mut h = HPoly::zero(&self.table);
            for (k, p) in c.coeffs() {
                let part = p.parity_part((parity + w.parity()) % 2);
                h.add_term(*k, &part).expect("same table");
            }
            out.add_term(*w, &h).expect("same table");
        }
        out
    }

    /// Least power of `h` over all coefficients.
    pub fn valuation(&self) -> Option<u32> {
        self.terms.values().filter_map(HPoly::valuation).min()
    }

    /// Specialize `h = 0`: the symbol of the element as a Grassmann polynomial
    /// in `xi1..xin, eta1..etan` with constant coefficients.
    pub fn symbol_at_zero(&self) -> Result<SuperPoly> {
        let t = VarTable::grassmann(2 * self.n);
        let mut out = SuperPoly::zero(&t);
        for (w, c) in &self.terms {
            let z = c.at_zero();
            if z.is_zero() {
                continue;
            }
            if z.len() != 1 || z.degree() != Some(0) {
                return Err(Error::Invalid("symbol_at_zero needs scalar coefficients".into()));
            }
            let mask = (w.xi as u64) | ((w.eta as u64) << self.n);
            out.add_assign_scaled(&SuperPoly::odd_monomial(&t, mask), &z.constant_term())?;
        }
        Ok(out)
    }

    pub fn to_text_map(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        self.terms
            .iter()
            .map(|(w, c)| (w.label(self.n), c.to_text_map()))
            .collect()
    }
}

/// The quantization map: `Q(xi_I eta_J) = xî_I etâ_J` on a polynomial over
/// `xi1..xin, eta1..etan` (canonical order is already the normal form).
pub fn quantize(f: &SuperPoly) -> Result<CliffordElement> {
    let t = f.table();
    if t.n_even() != 0 || !t.n_odd().is_multiple_of(2) {
        return Err(Error::Invalid(
            "Q needs an even number of odd generators xi, eta".into(),
        ));
    }
    let n = t.n_odd() / 2;
    if **t != *VarTable::grassmann(2 * n) {
        return Err(Error::Invalid("Q needs the canonical xi/eta table".into()));
    }
    let empty = VarTable::empty();
    let mut out = CliffordElement::zero(n, &empty);
    let low = (1u64 << n) - 1;
    for (m, c) in f.terms() {
        let w = CliffordWord::new((m.odd & low) as u32, (m.odd >> n) as u32);
        out.add_term(w, &HPoly::constant(&empty, 0, c.clone()))?;
    }
    Ok(out)
}

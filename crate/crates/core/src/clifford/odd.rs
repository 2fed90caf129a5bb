//! Odd Clifford subalgebra generated by `2n-1` anticommuting elements and its
//! queer trace.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::element::CliffordElement;
use super::hpoly::HPoly;
use super::word::CliffordWord;
use crate::error::{Error, Result};
use crate::linalg::dense;
use crate::rat::{self, Rat};
use crate::supercore::{reorder_sign, SuperPoly, VarTable};

/// Sign of the square of `θ̂_a` (1-based) in units of `h`.
pub fn signature(a: usize) -> i64 {
    if a % 2 == 1 {
        1
    } else {
        -1
    }
}

/// `θ̂_{2i-1} = xî_i + etâ_i`, `θ̂_{2i} = xî_i - etâ_i` for `i < n`, and
/// `θ̂_{2n-1} = xî_n + etâ_n`.
pub fn odd_generators(n: usize) -> Vec<CliffordElement> {
    assert!(n >= 1);
    (1..=2 * n - 1).map(|a| theta_hat(n, a)).collect()
}

/// `θ̂_a` for `1 <= a <= 2n`; `θ̂_{2n} = xî_n - etâ_n` is the odd structure
/// supercommuting with the generators.
pub fn theta_hat(n: usize, a: usize) -> CliffordElement {
    let i = a.div_ceil(2);
    let xi = CliffordElement::xi(n, i);
    let eta = CliffordElement::eta(n, i);
    if a % 2 == 1 {
        xi.add(&eta).expect("same algebra")
    } else {
        xi.sub(&eta).expect("same algebra")
    }
}

pub fn odd_structure(n: usize) -> CliffordElement {
    theta_hat(n, 2 * n)
}

/// Element of the odd Clifford subalgebra in the basis of products
/// `θ̂_I = θ̂_{i1}...θ̂_{il}`, `I` a bitmask over `2n-1` generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaElement {
    n: usize,
    table: Arc<VarTable>,
    terms: BTreeMap<u64, HPoly>,
}

impl ThetaElement {
    pub fn zero(n: usize, table: &Arc<VarTable>) -> Self {
        ThetaElement {
            n,
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> usize {
        2 * self.n - 1
    }

    pub fn top(&self) -> u64 {
        (1u64 << self.generators()) - 1
    }

    pub fn terms(&self) -> &BTreeMap<u64, HPoly> {
        &self.terms
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mask: u64) -> HPoly {
        self.terms.get(&mask).cloned().unwrap_or_else(|| HPoly::zero(&self.table))
    }

    pub fn add_term(&mut self, mask: u64, c: &HPoly) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&mask) {
            Some(e) => {
                e.add_assign(c)?;
                if e.is_zero() {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c.clone());
            }
        }
        Ok(())
    }

    pub fn identity(n: usize, table: &Arc<VarTable>) -> Self {
        let mut e = Self::zero(n, table);
        e.add_term(0, &HPoly::term(0, SuperPoly::one(table))).expect("same table");
        e
    }

    /// Blade product: reorder sign times `ε_a h` for every repeated generator.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::Incompatible("different odd Clifford algebras".into()));
        }
        let mut out = Self::zero(self.n, &self.table);
        for (a, ca) in &self.terms {
            let odd_a = a.count_ones() % 2 == 1;
            for (b, cb) in &other.terms {
                let cb = if odd_a { cb.parity_twist() } else { cb.clone() };
                let mut coeff = ca.mul(&cb)?;
                if coeff.is_zero() {
                    continue;
                }
                let mut negative = reorder_sign(*a, *b);
                let common = a & b;
                let mut bits = common;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if signature(k + 1) < 0 {
                        negative = !negative;
                    }
                }
                coeff = coeff.shift(common.count_ones());
                if negative {
                    coeff = coeff.neg();
                }
                out.add_term(a ^ b, &coeff)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.n, &self.table);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.n, &self.table);
        for pa in 0..2u8 {
            let a = self.parity_part(pa);
            for pb in 0..2u8 {
                let b = other.parity_part(pb);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let ab = a.mul(&b)?;
                let ba = b.mul(&a)?;
                let s = if pa * pb == 1 { Rat::one() } else { -Rat::one() };
                let mut term = ab;
                for (m, c) in &ba.terms {
                    term.add_term(*m, &c.scale(&s))?;
                }
                for (m, c) in &term.terms {
                    out.add_term(*m, c)?;
                }
            }
        }
        Ok(out)
    }

    pub fn parity_part(&self, parity: u8) -> Self {
        let mut out = Self::zero(self.n, &self.table);
        for (m, c) in &self.terms {
            let wp = (m.count_ones() % 2) as u8;
            let mut h = HPoly::zero(&self.table);
            for (k, p) in c.coeffs() {
                h.add_term(*k, &p.parity_part((parity + wp) % 2)).expect("same table");
            }
            out.add_term(*m, &h).expect("same table");
        }
        out
    }

    /// Queer trace: coefficient of the top product `θ̂_1...θ̂_{2n-1}`.
    pub fn qtr(&self) -> HPoly {
        self.coeff(self.top())
    }

    /// Expansion in normal-ordered `xî, etâ` words.
    pub fn to_clifford(&self) -> Result<CliffordElement> {
        let mut out = CliffordElement::zero(self.n, &self.table);
        for (m, c) in &self.terms {
            let blade = theta_blade(self.n, *m).embed(&self.table)?;
            out = out.add(&blade.scale_h(c)?)?;
        }
        Ok(out)
    }
}

/// `θ̂_I` as a scalar Clifford element.
pub fn theta_blade(n: usize, mask: u64) -> CliffordElement {
    let mut acc = CliffordElement::identity(n, &VarTable::empty());
    for a in 0..(2 * n - 1) {
        if mask & (1 << a) != 0 {
            acc = acc.mul(&theta_hat(n, a + 1)).expect("same algebra");
        }
    }
    acc
}

/// `Q(θ_I) = θ̂_I` on a polynomial over `th1..th(2n-1)`.
pub fn quantize_odd(f: &SuperPoly) -> Result<ThetaElement> {
    let t = f.table();
    let m = t.n_odd();
    if t.n_even() != 0 || m % 2 != 1 || **t != *VarTable::grassmann(m) {
        return Err(Error::Invalid("odd quantization needs the canonical theta table".into()));
    }
    let empty = VarTable::empty();
    let mut out = ThetaElement::zero(m.div_ceil(2), &empty);
    for (mono, c) in f.terms() {
        out.add_term(mono.odd, &HPoly::constant(&empty, 0, c.clone()))?;
    }
    Ok(out)
}

/// Generic element `sum_A c_A θ̂_A` with coefficients in the symbol table.
pub fn theta_from_coeffs(n: usize, table: &Arc<VarTable>, coeffs: &[(u64, SuperPoly)]) -> ThetaElement {
    let mut out = ThetaElement::zero(n, table);
    for (mask, c) in coeffs {
        out.add_term(*mask, &HPoly::term(0, c.clone())).expect("same table");
    }
    out
}

/// Rewrite a Clifford element lying in the odd subalgebra in the `θ̂_I`
/// basis; [`Error::NotInSubalgebra`] otherwise.
pub fn odd_decompose(x: &CliffordElement) -> Result<ThetaElement> {
    let n = x.n();
    if n == 0 {
        return Err(Error::Invalid("odd subalgebra needs n >= 1".into()));
    }
    let gens = 2 * n - 1;
    let table = x.table().clone();
    let mut residual = x.clone();
    let mut out = ThetaElement::zero(n, &table);
    for len in (0..=gens as u32).rev() {
        let top_words: Vec<CliffordWord> = residual
            .terms()
            .keys()
            .filter(|w| w.len() == len)
            .copied()
            .collect();
        if top_words.is_empty() {
            continue;
        }
        let subsets: Vec<u64> = (0u64..(1 << gens)).filter(|s| s.count_ones() == len).collect();
        let expansions: Vec<CliffordElement> = subsets.iter().map(|&s| theta_blade(n, s)).collect();
        // rows: all words of this length appearing anywhere
        let mut rows: Vec<CliffordWord> = top_words.clone();
        for e in &expansions {
            for w in e.terms().keys() {
                if w.len() == len && !rows.contains(w) {
                    rows.push(*w);
                }
            }
        }
        rows.sort();
        let mat: Vec<Vec<Rat>> = rows
            .iter()
            .map(|w| expansions.iter().map(|e| e.coeff(*w).scalar_at(0)).collect())
            .collect();
        // left inverse via solving against each unit target is wasteful; solve
        // coefficient-wise on the flattened residual instead
        let mut coeffs: Vec<HPoly> = vec![HPoly::zero(&table); subsets.len()];
        let mut keys: BTreeMap<(u32, crate::supercore::SuperMonomial), ()> = BTreeMap::new();
        for w in &rows {
            for (k, p) in residual.coeff(*w).coeffs() {
                for m in p.terms().keys() {
                    keys.insert((*k, m.clone()), ());
                }
            }
        }
        for (k, m) in keys.keys() {
            let b: Vec<Rat> = rows
                .iter()
                .map(|w| residual.coeff(*w).coeff(*k).coeff(m))
                .collect();
            let sol = dense::solve(&mat, &b).ok_or(Error::NotInSubalgebra)?;
            for (i, s) in sol.into_iter().enumerate() {
                if !s.is_zero() {
                    coeffs[i].add_term(*k, &SuperPoly::monomial(&table, m.clone(), s))?;
                }
            }
        }
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.add_term(subsets[i], c)?;
            let blade = expansions[i].embed(&table)?;
            residual = residual.sub(&blade.scale_h(c)?)?;
        }
        if residual.terms().keys().any(|w| w.len() >= len) {
            return Err(Error::NotInSubalgebra);
        }
    }
    if !residual.is_zero() {
        return Err(Error::NotInSubalgebra);
    }
    Ok(out)
}

/// Queer trace of a Clifford element of the odd subalgebra.
pub fn qtr(x: &CliffordElement) -> Result<HPoly> {
    Ok(odd_decompose(x)?.qtr())
}

/// `str(J θ̂_top) / 2` in the Fock module, `J` the odd structure. For `x` in
/// the subalgebra `str(J x) / 2` is the matrix queer trace of `x` (`tr B` in
/// a basis where `J = (0 1; -1 0)` up to scale), and it equals this constant
/// times the top-coefficient queer trace.
pub fn matrix_qtr_constant(n: usize) -> HPoly {
    let rep = super::fock::FockRep::new(n);
    let jx = odd_structure(n)
        .mul(&theta_blade(n, (1u64 << (2 * n - 1)) - 1))
        .expect("same algebra");
    rep.matrix(&jx).expect("matching n").str().scale(&rat::frac(1, 2))
}

/// Matrix queer trace `str(J x) / 2` of an element of the subalgebra.
pub fn matrix_qtr(x: &CliffordElement) -> Result<HPoly> {
    let rep = super::fock::FockRep::new(x.n());
    let j = odd_structure(x.n()).embed(x.table())?;
    Ok(rep.matrix(&j.mul(x)?)?.str().scale(&rat::frac(1, 2)))
}

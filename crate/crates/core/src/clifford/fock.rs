use std::sync::Arc;

use num_traits::One;

use super::element::CliffordElement;
use super::hpoly::HPoly;
use super::word::CliffordWord;
use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use crate::supercore::{odd_before, reorder_sign, VarTable};

/// Square matrix with a parity on every basis vector; entries in `Q[h]`
/// with coefficients over `table`. Products assume even (e.g. scalar)
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperMatrix {
    pub parities: Vec<u8>,
    table: Arc<VarTable>,
    entries: Vec<HPoly>,
}

impl SuperMatrix {
    pub fn zero(parities: Vec<u8>, table: &Arc<VarTable>) -> Self {
        let d = parities.len();
        SuperMatrix {
            parities,
            table: table.clone(),
            entries: vec![HPoly::zero(table); d * d],
        }
    }

    pub fn identity(parities: Vec<u8>, table: &Arc<VarTable>) -> Self {
        let mut m = Self::zero(parities, table);
        for i in 0..m.size() {
            m.set(i, i, HPoly::constant(table, 0, Rat::one()));
        }
        m
    }

    /// Elementary matrix `E_ij` (rational).
    pub fn elementary(parities: Vec<u8>, i: usize, j: usize) -> Self {
        let t = VarTable::empty();
        let mut m = Self::zero(parities, &t);
        m.set(i, j, HPoly::constant(&t, 0, Rat::one()));
        m
    }

    pub fn size(&self) -> usize {
        self.parities.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &HPoly {
        &self.entries[i * self.size() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: HPoly) {
        let d = self.size();
        self.entries[i * d + j] = v;
    }

    /// Block parity of a homogeneous matrix: `p(i) + p(j)` on its support.
    pub fn parity(&self) -> Option<u8> {
        let d = self.size();
        let mut found = None;
        for i in 0..d {
            for j in 0..d {
                if self.get(i, j).is_zero() {
                    continue;
                }
                let p = (self.parities[i] + self.parities[j]) % 2;
                match found {
                    None => found = Some(p),
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
        Some(found.unwrap_or(0))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.parities != other.parities {
            return Err(Error::Incompatible("matrix gradings differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            a.add_assign(b)?;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e = e.scale(s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = self.size();
        let mut out = Self::zero(self.parities.clone(), &self.table);
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * d + j;
                    let prod = a.mul(b)?;
                    out.entries[idx].add_assign(&prod)?;
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::identity(self.parities.clone(), &self.table);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `AB - (-1)^{p(A)p(B)} BA` for homogeneous matrices.
    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        let pa = self.parity().ok_or_else(|| Error::Invalid("inhomogeneous matrix".into()))?;
        let pb = other.parity().ok_or_else(|| Error::Invalid("inhomogeneous matrix".into()))?;
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        ab.add(&ba.scale(&rat::int(if pa * pb == 1 { 1 } else { -1 })))
    }

    /// Supertrace `sum_i (-1)^{p(i)} X_ii`.
    pub fn str(&self) -> HPoly {
        let mut acc = HPoly::zero(&self.table);
        for i in 0..self.size() {
            let e = self.get(i, i);
            let t = if self.parities[i] == 1 { e.neg() } else { e.clone() };
            acc.add_assign(&t).expect("same table");
        }
        acc
    }

    /// Queer trace `tr B` of a matrix `(A B; B A)` on an `N|N` grading.
    pub fn qtr(&self) -> Result<HPoly> {
        let d = self.size();
        if !d.is_multiple_of(2) || self.parities[..d / 2].iter().any(|&p| p != 0) {
            return Err(Error::Invalid("qtr needs an N|N block grading".into()));
        }
        let half = d / 2;
        let mut acc = HPoly::zero(&self.table);
        for i in 0..half {
            acc.add_assign(self.get(i, half + i))?;
        }
        Ok(acc)
    }
}

/// Fock module of the Clifford algebra on `n` pairs: Grassmann monomials in
/// `xi1..xin`, even ones first, each block in monomial order.
#[derive(Clone, Debug)]
pub struct FockRep {
    pub n: usize,
    pub basis: Vec<u32>,
}

impl FockRep {
    pub fn new(n: usize) -> Self {
        let mut basis: Vec<u32> = (0..(1u32 << n)).collect();
        basis.sort_by_key(|s| (s.count_ones() % 2, s.count_ones(), std::cmp::Reverse(s.reverse_bits())));
        FockRep { n, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn parities(&self) -> Vec<u8> {
        self.basis.iter().map(|s| (s.count_ones() % 2) as u8).collect()
    }

    fn position(&self, s: u32) -> usize {
        self.basis.iter().position(|&b| b == s).expect("basis mask")
    }

    pub fn label(&self, i: usize) -> String {
        let s = self.basis[i];
        if s == 0 {
            return "1".into();
        }
        (0..self.n)
            .filter(|k| s & (1 << k) != 0)
            .map(|k| format!("xi{}", k + 1))
            .collect()
    }

    /// Image of the basis vector `xi_S` under a word: `(sign, power, target)`.
    pub fn act_word(&self, w: CliffordWord, s: u32) -> Option<(bool, u32, u32)> {
        let mut cur = s;
        let mut negative = false;
        // etâ_J = etâ_{j1} ... etâ_{jr}: the rightmost factor acts first
        for k in (0..self.n).rev() {
            if w.eta & (1 << k) == 0 {
                continue;
            }
            if cur & (1 << k) == 0 {
                return None;
            }
            negative ^= odd_before(cur as u64, k) % 2 == 1;
            cur &= !(1 << k);
        }
        if cur & w.xi != 0 {
            return None;
        }
        negative ^= reorder_sign(w.xi as u64, cur as u64);
        Some((negative, w.eta.count_ones(), cur | w.xi))
    }

    pub fn word_matrix(&self, w: CliffordWord) -> SuperMatrix {
        let t = VarTable::empty();
        let mut m = SuperMatrix::zero(self.parities(), &t);
        for (j, &s) in self.basis.iter().enumerate() {
            if let Some((neg, p, target)) = self.act_word(w, s) {
                let i = self.position(target);
                m.set(i, j, HPoly::constant(&t, p, rat::int(if neg { -1 } else { 1 })));
            }
        }
        m
    }

    /// Matrix of a Clifford element in this representation, with entries
    /// written to the right of the basis vectors: `x(e_j) = sum_i e_i X_ij`.
    /// Odd coefficients pick up the sign of the row vector, and composition
    /// becomes plain matrix multiplication.
    pub fn matrix(&self, x: &CliffordElement) -> Result<SuperMatrix> {
        if x.n() != self.n {
            return Err(Error::Incompatible(format!(
                "element on {} pairs, Fock module on {}",
                x.n(),
                self.n
            )));
        }
        let mut m = SuperMatrix::zero(self.parities(), x.table());
        for (w, c) in x.terms() {
            for (j, &s) in self.basis.iter().enumerate() {
                if let Some((neg, p, target)) = self.act_word(*w, s) {
                    let i = self.position(target);
                    let mut v = c.shift(p);
                    if self.basis[i].count_ones() % 2 == 1 {
                        v = v.parity_twist();
                    }
                    if neg {
                        v = v.neg();
                    }
                    let mut e = m.get(i, j).clone();
                    e.add_assign(&v)?;
                    m.set(i, j, e);
                }
            }
        }
        Ok(m)
    }
}

/// `str(fock(w))` for a single normal-ordered word.
pub fn word_supertrace(rep: &FockRep, w: CliffordWord) -> HPoly {
    rep.word_matrix(w).str()
}

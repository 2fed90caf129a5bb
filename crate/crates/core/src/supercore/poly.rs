use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::monomial::{odd_after, odd_before, reorder_sign, SuperMonomial};
use super::vars::{same_table, Var, VarTable};
use crate::error::{Error, Result};
use crate::rat::{self, Rat};

/// Sparse supercommutative polynomial with exact rational coefficients.
#[derive(Clone)]
pub struct SuperPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<SuperMonomial, Rat>,
}

impl PartialEq for SuperPoly {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for SuperPoly {}

impl fmt::Debug for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperPoly({})", self.to_text())
    }
}

impl fmt::Display for SuperPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl SuperPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        SuperPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<VarTable>, c: Rat) -> Self {
        let mut p = Self::zero(table);
        p.add_term(SuperMonomial::one(table.n_even()), c);
        p
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        Self::constant(table, Rat::one())
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Self> {
        let v = table.lookup(name)?;
        Ok(Self::monomial(table, Self::var_monomial(table, v), Rat::one()))
    }

    pub fn var_monomial(table: &VarTable, v: Var) -> SuperMonomial {
        let mut m = SuperMonomial::one(table.n_even());
        match v {
            Var::Even(i) => m.even[i] = 1,
            Var::Odd(i) => m.odd = 1 << i,
        }
        m
    }

    pub fn monomial(table: &Arc<VarTable>, m: SuperMonomial, c: Rat) -> Self {
        let mut p = Self::zero(table);
        p.add_term(m, c);
        p
    }

    /// Product of odd variables given as a bitmask, in canonical order.
    pub fn odd_monomial(table: &Arc<VarTable>, mask: u64) -> Self {
        Self::monomial(table, SuperMonomial::odd_only(table.n_even(), mask), Rat::one())
    }

    pub fn from_terms(
        table: &Arc<VarTable>,
        terms: impl IntoIterator<Item = (SuperMonomial, Rat)>,
    ) -> Self {
        let mut p = Self::zero(table);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn terms(&self) -> &BTreeMap<SuperMonomial, Rat> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<SuperMonomial, Rat> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Same as [`SuperPoly::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &SuperMonomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Constant term.
    pub fn constant_term(&self) -> Rat {
        self.coeff(&SuperMonomial::one(self.table.n_even()))
    }

    pub fn leading(&self) -> Option<(&SuperMonomial, &Rat)> {
        self.terms.iter().next()
    }

    pub fn add_term(&mut self, m: SuperMonomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &SuperPoly) -> Result<()> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(Error::Incompatible(
                "polynomials live over different variable tables".into(),
            ))
        }
    }

    pub fn add(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn add_assign_scaled(&mut self, other: &SuperPoly, s: &Rat) -> Result<()> {
        self.check(other)?;
        if s.is_zero() {
            return Ok(());
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
        Ok(())
    }

    pub fn neg(&self) -> SuperPoly {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, s: &Rat) -> SuperPoly {
        if s.is_zero() {
            return Self::zero(&self.table);
        }
        SuperPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * s)).collect(),
        }
    }

    /// Koszul-signed product in canonical order.
    pub fn mul(&self, other: &SuperPoly) -> Result<SuperPoly> {
        self.check(other)?;
        let mut out = Self::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, neg)) = ma.mul(mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> SuperPoly {
        let mut acc = Self::one(&self.table);
        for _ in 0..k {
            acc = acc.mul(self).expect("same table");
        }
        acc
    }

    /// Left derivative: odd variables are moved to the front before removal.
    pub fn left_deriv(&self, name: &str) -> Result<SuperPoly> {
        let v = self.table.lookup(name)?;
        Ok(self.deriv_var(v, Side::Left))
    }

    /// Right derivative: odd variables are moved to the back before removal.
    pub fn right_deriv(&self, name: &str) -> Result<SuperPoly> {
        let v = self.table.lookup(name)?;
        Ok(self.deriv_var(v, Side::Right))
    }

    pub fn deriv_var(&self, v: Var, side: Side) -> SuperPoly {
        let mut out = Self::zero(&self.table);
        for (m, c) in &self.terms {
            match v {
                Var::Even(i) => {
                    let e = m.even[i];
                    if e == 0 {
                        continue;
                    }
                    let mut nm = m.clone();
                    nm.even[i] -= 1;
                    out.add_term(nm, c * Rat::from_integer(e.into()));
                }
                Var::Odd(k) => {
                    let bit = 1u64 << k;
                    if m.odd & bit == 0 {
                        continue;
                    }
                    let passes = match side {
                        Side::Left => odd_before(m.odd, k),
                        Side::Right => odd_after(m.odd, k),
                    };
                    let mut nm = m.clone();
                    nm.odd &= !bit;
                    out.add_term(nm, if passes % 2 == 1 { -c.clone() } else { c.clone() });
                }
            }
        }
        out
    }

    /// `Some(0|1)` when every term has the same parity; `None` otherwise (zero is even).
    pub fn parity(&self) -> Option<u8> {
        let mut it = self.terms.keys().map(|m| m.parity());
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    pub fn parity_part(&self, parity: u8) -> SuperPoly {
        SuperPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.parity() == parity)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Even part minus odd part: the effect of moving the polynomial past an odd scalar.
    pub fn parity_twist(&self) -> SuperPoly {
        SuperPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.parity() == 1 { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    /// `Some(d)` when all terms have total degree `d`.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => Some(0),
            Some(d) => it.all(|e| e == d).then_some(d),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Algebra homomorphism determined by `assignment`; unassigned variables map
    /// to the variable of the same name in the target table.
    pub fn substitute(
        &self,
        assignment: &BTreeMap<String, SuperPoly>,
        target: &Arc<VarTable>,
    ) -> Result<SuperPoly> {
        let n_even = self.table.n_even();
        let mut images: Vec<SuperPoly> = Vec::with_capacity(n_even + self.table.n_odd());
        for (idx, name) in self
            .table
            .even_vars()
            .iter()
            .chain(self.table.odd_vars())
            .enumerate()
        {
            let odd = idx >= n_even;
            let img = match assignment.get(name) {
                Some(p) => {
                    if !same_table(p.table(), target) {
                        return Err(Error::Incompatible(format!(
                            "value for {name:?} is over a different table"
                        )));
                    }
                    let want = if odd { 1 } else { 0 };
                    match p.parity() {
                        Some(q) if p.is_zero() || q == want => p.clone(),
                        _ => {
                            return Err(Error::ParityMismatch(format!(
                                "value substituted for {name:?} must have parity {want}"
                            )))
                        }
                    }
                }
                None => {
                    let v = target.lookup(name)?;
                    if v.is_odd() != odd {
                        return Err(Error::ParityMismatch(format!(
                            "{name:?} changes parity between tables"
                        )));
                    }
                    SuperPoly::var(target, name)?
                }
            };
            images.push(img);
        }
        let mut out = Self::zero(target);
        let one = Self::one(target);
        for (m, c) in &self.terms {
            let mut acc = one.clone();
            for (i, &e) in m.even.iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&images[i])?;
                }
            }
            let mut bits = m.odd;
            while bits != 0 && !acc.is_zero() {
                let k = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                acc = acc.mul(&images[n_even + k])?;
            }
            out.add_assign_scaled(&acc, c)?;
        }
        Ok(out)
    }

    /// Same polynomial over another table holding (at least) the same names.
    pub fn embed(&self, target: &Arc<VarTable>) -> Result<SuperPoly> {
        if same_table(&self.table, target) {
            return Ok(self.clone());
        }
        let even_map: Vec<usize> = self
            .table
            .even_vars()
            .iter()
            .map(|n| match target.lookup(n)? {
                Var::Even(i) => Ok(i),
                Var::Odd(_) => Err(Error::ParityMismatch(n.clone())),
            })
            .collect::<Result<_>>()?;
        let odd_map: Vec<usize> = self
            .table
            .odd_vars()
            .iter()
            .map(|n| match target.lookup(n)? {
                Var::Odd(i) => Ok(i),
                Var::Even(_) => Err(Error::ParityMismatch(n.clone())),
            })
            .collect::<Result<_>>()?;
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut nm = SuperMonomial::one(target.n_even());
            for (i, &e) in m.even.iter().enumerate() {
                nm.even[even_map[i]] += e;
            }
            // images in source order; count inversions to sort
            let mut seq = Vec::new();
            let mut bits = m.odd;
            while bits != 0 {
                seq.push(odd_map[bits.trailing_zeros() as usize]);
                bits &= bits - 1;
            }
            let mut inversions = 0usize;
            for a in 0..seq.len() {
                for b in a + 1..seq.len() {
                    if seq[a] > seq[b] {
                        inversions += 1;
                    }
                }
                nm.odd |= 1 << seq[a];
            }
            out.add_term(nm, if inversions % 2 == 1 { -c.clone() } else { c.clone() });
        }
        Ok(out)
    }

    /// Berezin integral on a purely odd table: the coefficient of the product of
    /// all odd variables in canonical order.
    pub fn berezin(&self) -> Result<Rat> {
        if self.table.n_even() != 0 {
            return Err(Error::Invalid(
                "berezin integral needs a purely odd variable table".into(),
            ));
        }
        let n = self.table.n_odd();
        let top = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Ok(self.coeff(&SuperMonomial::odd_only(0, top)))
    }

    /// Integrate out the odd variables `names` (their canonical-order product
    /// placed at the right). The remaining variables must exist in `target`.
    pub fn berezin_over(&self, names: &[String], target: &Arc<VarTable>) -> Result<SuperPoly> {
        let mut mask = 0u64;
        for n in names {
            match self.table.lookup(n)? {
                Var::Odd(k) => mask |= 1 << k,
                Var::Even(_) => {
                    return Err(Error::Invalid(format!(
                        "cannot Berezin-integrate the even variable {n:?}"
                    )))
                }
            }
        }
        let rest_table = target;
        let mut stripped = Self::zero(&self.table);
        for (m, c) in &self.terms {
            if m.odd & mask != mask {
                continue;
            }
            let rest = m.odd & !mask;
            // m = rest * top  up to moving top factors past later rest factors
            let neg = reorder_sign(rest, mask);
            let mut nm = m.clone();
            nm.odd = rest;
            stripped.add_term(nm, if neg { -c.clone() } else { c.clone() });
        }
        // drop integrated variables from the table
        let keep_even: Vec<String> = self.table.even_vars().to_vec();
        let keep_odd: Vec<String> = self
            .table
            .odd_vars()
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) == 0)
            .map(|(_, n)| n.clone())
            .collect();
        let reduced = VarTable::new(keep_even, keep_odd)?;
        let mut compact = Self::zero(&reduced);
        for (m, c) in stripped.terms {
            let mut nm = SuperMonomial::one(reduced.n_even());
            nm.even.copy_from_slice(&m.even);
            let mut j = 0;
            for k in 0..self.table.n_odd() {
                if mask & (1 << k) != 0 {
                    continue;
                }
                if m.odd & (1 << k) != 0 {
                    nm.odd |= 1 << j;
                }
                j += 1;
            }
            compact.add_term(nm, c);
        }
        compact.embed(rest_table)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rat) -> Rat) -> SuperPoly {
        Self::from_terms(&self.table, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Canonical text form: terms in monomial order, `p/q` coefficients.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&rat::to_text(c));
            out.push_str(&self.monomial_text(m, "*"));
        }
        out
    }

    /// Variable part of a term, each factor prefixed by `sep`.
    pub fn monomial_text(&self, m: &SuperMonomial, sep: &str) -> String {
        let mut s = String::new();
        for (i, &e) in m.even.iter().enumerate() {
            if e == 0 {
                continue;
            }
            s.push_str(sep);
            s.push_str(&self.table.even_vars()[i]);
            if e > 1 {
                s.push_str(&format!("^{e}"));
            }
        }
        let mut bits = m.odd;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            s.push_str(sep);
            s.push_str(&self.table.odd_vars()[k]);
        }
        s
    }

    /// Inverse of [`SuperPoly::to_text`]; factors may appear in any order.
    pub fn parse(table: &Arc<VarTable>, text: &str) -> Result<SuperPoly> {
        let text = text.trim().replace(" - ", " + -");
        let mut out = Self::zero(table);
        if text == "0" || text.is_empty() {
            return Ok(out);
        }
        for term in text.split(" + ") {
            let term = term.trim();
            let (negative, body) = match term.strip_prefix('-') {
                Some(rest) if rest.starts_with(|c: char| c.is_ascii_alphabetic()) => (true, rest),
                _ => (false, term),
            };
            let mut factors = body.split('*').peekable();
            // a leading variable means an implicit coefficient of one
            let coeff = match factors.peek() {
                Some(first) if first.starts_with(|c: char| c.is_ascii_alphabetic()) => Rat::one(),
                _ => rat::from_text(factors.next().unwrap_or(""))?,
            };
            let coeff = if negative { -coeff } else { coeff };
            let mut acc = Self::constant(table, coeff);
            for f in factors {
                let (name, exp) = match f.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {f:?}")))?,
                    ),
                    None => (f, 1),
                };
                let v = Self::var(table, name)?;
                for _ in 0..exp {
                    acc = acc.mul(&v)?;
                }
            }
            out = out.add(&acc)?;
        }
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Left,
    Right,
}

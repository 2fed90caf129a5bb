use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A variable reference inside a [`VarTable`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Even(usize),
    Odd(usize),
}

impl Var {
    pub fn is_odd(self) -> bool {
        matches!(self, Var::Odd(_))
    }
}

/// Ordered even and odd variable names. The stored order is the canonical
/// order that fixes every Koszul sign.
#[derive(Debug)]
pub struct VarTable {
    even: Vec<String>,
    odd: Vec<String>,
    index: HashMap<String, Var>,
}

/// Odd variables are packed into a `u64` bitmask.
pub const MAX_ODD_VARS: usize = 64;

impl VarTable {
    pub fn new<S: Into<String>, T: Into<String>>(
        even: impl IntoIterator<Item = S>,
        odd: impl IntoIterator<Item = T>,
    ) -> Result<Arc<Self>> {
        let even: Vec<String> = even.into_iter().map(Into::into).collect();
        let odd: Vec<String> = odd.into_iter().map(Into::into).collect();
        if odd.len() > MAX_ODD_VARS {
            return Err(Error::Invalid(format!(
                "{} odd variables exceed the bitmask capacity {MAX_ODD_VARS}",
                odd.len()
            )));
        }
        let mut index = HashMap::new();
        for (i, name) in even.iter().enumerate() {
            check_name(name)?;
            if index.insert(name.clone(), Var::Even(i)).is_some() {
                return Err(Error::Invalid(format!("duplicate variable {name:?}")));
            }
        }
        for (i, name) in odd.iter().enumerate() {
            check_name(name)?;
            if index.insert(name.clone(), Var::Odd(i)).is_some() {
                return Err(Error::Invalid(format!("duplicate variable {name:?}")));
            }
        }
        Ok(Arc::new(VarTable { even, odd, index }))
    }

    /// Table on odd generators only.
    pub fn odd_only<S: Into<String>>(odd: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        Self::new(Vec::<String>::new(), odd)
    }

    pub fn empty() -> Arc<Self> {
        Self::new(Vec::<String>::new(), Vec::<String>::new()).expect("empty table is valid")
    }

    /// `xi1..xin, eta1..etan` for even `m = 2n`, `th1..thm` for odd `m`.
    pub fn grassmann(m: usize) -> Arc<Self> {
        Self::odd_only(grassmann_names(m)).expect("m <= 64")
    }

    pub fn even_vars(&self) -> &[String] {
        &self.even
    }

    pub fn odd_vars(&self) -> &[String] {
        &self.odd
    }

    pub fn n_even(&self) -> usize {
        self.even.len()
    }

    pub fn n_odd(&self) -> usize {
        self.odd.len()
    }

    pub fn lookup(&self, name: &str) -> Result<Var> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, v: Var) -> &str {
        match v {
            Var::Even(i) => &self.even[i],
            Var::Odd(i) => &self.odd[i],
        }
    }

    /// Concatenation: `self`'s variables first, then `other`'s, per parity class.
    pub fn concat(&self, other: &VarTable) -> Result<Arc<Self>> {
        Self::new(
            self.even.iter().chain(&other.even).cloned(),
            self.odd.iter().chain(&other.odd).cloned(),
        )
    }
}

impl PartialEq for VarTable {
    fn eq(&self, other: &Self) -> bool {
        self.even == other.even && self.odd == other.odd
    }
}

impl Eq for VarTable {}

pub fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn grassmann_names(m: usize) -> Vec<String> {
    if m.is_multiple_of(2) {
        let n = m / 2;
        (1..=n)
            .map(|i| format!("xi{i}"))
            .chain((1..=n).map(|i| format!("eta{i}")))
            .collect()
    } else {
        (1..=m).map(|i| format!("th{i}")).collect()
    }
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '[' | ']' | ':'))
        && !name.starts_with(|c: char| c.is_ascii_digit() || c == '-');
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(format!("variable name {name:?} is not allowed")))
    }
}

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::supercore::{same_table, SuperPoly, VarTable};

/// Polynomial in the deformation parameter with [`SuperPoly`] coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct HPoly {
    table: Arc<VarTable>,
    coeffs: BTreeMap<u32, SuperPoly>,
}

impl fmt::Debug for HPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPoly(")?;
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "h^{k}: {c}")?;
        }
        write!(f, ")")
    }
}

impl HPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        HPoly {
            table: table.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn term(power: u32, c: SuperPoly) -> Self {
        let mut h = Self::zero(c.table());
        if !c.is_zero() {
            h.coeffs.insert(power, c);
        }
        h
    }

    pub fn constant(table: &Arc<VarTable>, power: u32, c: Rat) -> Self {
        Self::term(power, SuperPoly::constant(table, c))
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn coeffs(&self) -> &BTreeMap<u32, SuperPoly> {
        &self.coeffs
    }

    pub fn coeff(&self, power: u32) -> SuperPoly {
        self.coeffs
            .get(&power)
            .cloned()
            .unwrap_or_else(|| SuperPoly::zero(&self.table))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Least power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_power(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    /// `(k0, F_k0)` for `F = sum_{k >= k0} F_k h^k`.
    pub fn lowest_component(&self) -> Result<(u32, SuperPoly)> {
        self.coeffs
            .iter()
            .next()
            .map(|(k, c)| (*k, c.clone()))
            .ok_or(Error::ZeroValuation)
    }

    pub fn add_term(&mut self, power: u32, c: &SuperPoly) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        if !same_table(c.table(), &self.table) {
            return Err(Error::Incompatible("coefficient tables differ".into()));
        }
        match self.coeffs.get_mut(&power) {
            Some(e) => {
                *e = e.add(c)?;
                if e.is_zero() {
                    self.coeffs.remove(&power);
                }
            }
            None => {
                self.coeffs.insert(power, c.clone());
            }
        }
        Ok(())
    }

    pub fn add_assign(&mut self, other: &HPoly) -> Result<()> {
        for (k, c) in &other.coeffs {
            self.add_term(*k, c)?;
        }
        Ok(())
    }

    pub fn add(&self, other: &HPoly) -> Result<HPoly> {
        let mut out = self.clone();
        out.add_assign(other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &HPoly) -> Result<HPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> HPoly {
        self.scale(&-Rat::from_integer(1.into()))
    }

    pub fn scale(&self, s: &Rat) -> HPoly {
        if s.is_zero() {
            return Self::zero(&self.table);
        }
        HPoly {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.scale(s))).collect(),
        }
    }

    /// Multiply by `h^shift`.
    pub fn shift(&self, shift: u32) -> HPoly {
        HPoly {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().map(|(k, c)| (k + shift, c.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &HPoly) -> Result<HPoly> {
        let mut out = Self::zero(&self.table);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                out.add_term(a + b, &ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn mul_poly(&self, p: &SuperPoly) -> Result<HPoly> {
        let mut out = Self::zero(&self.table);
        for (a, ca) in &self.coeffs {
            out.add_term(*a, &ca.mul(p)?)?;
        }
        Ok(out)
    }

    pub fn parity_twist(&self) -> HPoly {
        HPoly {
            table: self.table.clone(),
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, c.parity_twist())).collect(),
        }
    }

    /// Value at `h = 0`.
    pub fn at_zero(&self) -> SuperPoly {
        self.coeff(0)
    }

    /// Constant (variable-free) coefficient at power `k`.
    pub fn scalar_at(&self, k: u32) -> Rat {
        self.coeffs
            .get(&k)
            .map(|c| c.constant_term())
            .unwrap_or_else(Rat::zero)
    }

    /// Map power -> canonical polynomial text.
    pub fn to_text_map(&self) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .map(|(k, c)| (k.to_string(), c.to_text()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn lowest_component_examples() {
        let t = VarTable::empty();
        let f = HPoly::constant(&t, 2, int(3)).add(&HPoly::constant(&t, 3, int(5))).unwrap();
        let (k, c) = f.lowest_component().unwrap();
        assert_eq!(k, 2);
        assert_eq!(c, SuperPoly::constant(&t, int(3)));
        assert!(matches!(HPoly::zero(&t).lowest_component(), Err(Error::ZeroValuation)));
        let g = HPoly::constant(&t, 1, int(2));
        let (k2, c2) = f.mul(&g).unwrap().lowest_component().unwrap();
        assert_eq!((k2, c2), (3, SuperPoly::constant(&t, int(6))));
    }
}

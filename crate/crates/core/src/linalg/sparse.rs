//! Sparse fraction-free elimination over the integers.
//!
//! Rows are kept primitive (content 1) and the pivot of every row is its
//! lowest column, so the final reduced form and the kernel basis depend only
//! on the row space and the column order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rat::{self, Rat};

/// Sparse integer row sorted by column, no zero entries.
pub type IntRow = Vec<(usize, BigInt)>;

/// Scale a rational row to a primitive integer row with positive lead.
pub fn integer_row(row: &[(usize, Rat)]) -> IntRow {
    primitive(clear_denominators(row))
}

/// Scale a rational row to coprime integers, keeping signs.
pub fn clear_denominators(row: &[(usize, Rat)]) -> IntRow {
    let d = rat::common_denominator(row.iter().map(|(_, r)| r));
    let ints: IntRow = row
        .iter()
        .filter(|(_, r)| !r.is_zero())
        .map(|(c, r)| (*c, (r * Rat::from_integer(d.clone())).to_integer()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|(c, x)| (c, x / &g)).collect()
}

fn primitive(mut row: IntRow) -> IntRow {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in row.iter_mut() {
            *x /= &g;
        }
    }
    if row.first().is_some_and(|(_, x)| x.is_negative()) {
        for (_, x) in row.iter_mut() {
            *x = -x.clone();
        }
    }
    row
}

/// `a * x - b * y`, dropping zeros.
fn combine(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some((cx, _)), Some((cy, _))) => cx.cmp(cy),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match take {
            std::cmp::Ordering::Less => {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((y[j].0, -(b * &y[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Incremental echelon form: pivot rows keyed by their lowest column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, IntRow>,
    nonzeros: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            pivots: BTreeMap::new(),
            nonzeros: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Stored nonzeros, for budget accounting.
    pub fn nonzeros(&self) -> usize {
        self.nonzeros
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.ncols
    }

    /// Reduce a row against the pivots (leading entries only).
    fn reduce(&self, mut row: IntRow) -> IntRow {
        while let Some((c, lead)) = row.first().cloned() {
            let Some(p) = self.pivots.get(&c) else { break };
            let g = lead.gcd(&p[0].1);
            let a = &p[0].1 / &g;
            let b = &lead / &g;
            row = primitive(combine(&a, &row, &b, p));
        }
        row
    }

    /// Insert a row; returns true when it was independent.
    pub fn insert(&mut self, row: IntRow) -> bool {
        let row = self.reduce(primitive(row));
        match row.first() {
            None => false,
            Some((c, _)) => {
                debug_assert!(row.iter().all(|(k, _)| *k < self.ncols));
                self.nonzeros += row.len();
                self.pivots.insert(*c, row);
                true
            }
        }
    }

    /// Whether a row lies in the row space.
    pub fn contains(&self, row: IntRow) -> bool {
        self.reduce_fully(primitive(row)).is_empty()
    }

    /// Reduce every entry that sits at a pivot column.
    fn reduce_fully(&self, mut row: IntRow) -> IntRow {
        let mut k = 0;
        while k < row.len() {
            let c = row[k].0;
            if let Some(p) = self.pivots.get(&c) {
                let g = row[k].1.gcd(&p[0].1);
                let a = &p[0].1 / &g;
                let b = &row[k].1 / &g;
                let head: IntRow = row[..k].iter().map(|(i, x)| (*i, x * &a)).collect();
                let tail = combine(&a, &row[k..], &b, p);
                row = head;
                row.extend(tail);
                row = primitive(row);
                // the entry at c is gone; continue from the same position
                continue;
            }
            k += 1;
        }
        row
    }

    /// Fully reduced rows (zero at every other pivot column), primitive with
    /// positive pivots, in pivot order.
    pub fn reduced_rows(&self) -> Vec<IntRow> {
        let mut done: BTreeMap<usize, IntRow> = BTreeMap::new();
        for (c, row) in self.pivots.iter().rev() {
            let mut r = row.clone();
            let mut k = 1;
            while k < r.len() {
                let col = r[k].0;
                if let Some(p) = done.get(&col) {
                    let g = r[k].1.gcd(&p[0].1);
                    let a = &p[0].1 / &g;
                    let b = &r[k].1 / &g;
                    r = primitive(combine(&a, &r, &b, p));
                    continue;
                }
                k += 1;
            }
            done.insert(*c, r);
        }
        done.into_values().collect()
    }

    /// Pivot columns in increasing order.
    pub fn pivot_columns(&self) -> Vec<usize> {
        self.pivots.keys().copied().collect()
    }

    /// Kernel of the row space: one primitive integer vector per free column,
    /// zero at the other free columns and positive at its own. Each vector is
    /// paired with its free column.
    pub fn kernel(&self) -> Vec<(usize, IntRow)> {
        let reduced = self.reduced_rows();
        // free column -> list of (pivot column, pivot value, entry)
        let mut by_free: BTreeMap<usize, Vec<(usize, BigInt, BigInt)>> = BTreeMap::new();
        for r in &reduced {
            let (pc, pv) = (r[0].0, r[0].1.clone());
            for (c, x) in &r[1..] {
                by_free.entry(*c).or_default().push((pc, pv.clone(), x.clone()));
            }
        }
        let mut out = Vec::new();
        for f in (0..self.ncols).filter(|c| !self.pivots.contains_key(c)) {
            // x_f = L, x_p = -L e / d with L the lcm of the pivot values
            let entries = by_free.remove(&f).unwrap_or_default();
            let l = entries.iter().fold(BigInt::one(), |acc, (_, d, _)| acc.lcm(d));
            let mut v: IntRow = entries
                .iter()
                .map(|(pc, d, e)| (*pc, -(e * (&l / d))))
                .collect();
            v.push((f, l));
            v.sort_by_key(|(c, _)| *c);
            let g = v.iter().fold(BigInt::zero(), |acc, (_, x)| acc.gcd(x));
            for (_, x) in v.iter_mut() {
                *x /= &g;
            }
            out.push((f, v));
        }
        out
    }
}

/// Rational view of an integer row.
pub fn to_rational(row: &[(usize, BigInt)]) -> Vec<(usize, Rat)> {
    row.iter().map(|(c, x)| (*c, Rat::from_integer(x.clone()))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense;

    fn dense_row(v: &[i64]) -> IntRow {
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(c, x)| (c, BigInt::from(*x)))
            .collect()
    }

    #[test]
    fn kernel_matches_dense() {
        let rows = [[2, 4, 0, 6, 1], [1, 2, 1, 3, 0], [3, 6, 1, 9, 1]];
        let mut e = Echelon::new(5);
        for r in &rows {
            e.insert(dense_row(r));
        }
        assert_eq!(e.rank(), 2);
        let drows: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|x| rat::int(*x)).collect()).collect();
        let dk = dense::kernel(&drows, 5);
        let sk = e.kernel();
        assert_eq!(sk.len(), dk.len());
        for ((_, s), d) in sk.iter().zip(&dk) {
            let dr: Vec<(usize, Rat)> = d.iter().cloned().enumerate().filter(|(_, r)| !r.is_zero()).collect();
            assert_eq!(s, &clear_denominators(&dr));
        }
    }

    #[test]
    fn membership() {
        let mut e = Echelon::new(3);
        e.insert(dense_row(&[1, 1, 0]));
        assert!(e.contains(dense_row(&[3, 3, 0])));
        assert!(!e.contains(dense_row(&[0, 1, 0])));
        assert!(e.contains(Vec::new()));
    }

    #[test]
    fn reduced_rows_are_reduced() {
        let mut e = Echelon::new(4);
        e.insert(dense_row(&[1, 2, 3, 4]));
        e.insert(dense_row(&[0, 3, 1, 1]));
        e.insert(dense_row(&[0, 0, 2, 5]));
        let r = e.reduced_rows();
        let pivots = e.pivot_columns();
        for row in &r {
            for (c, _) in &row[1..] {
                assert!(!pivots.contains(c));
            }
        }
    }
}

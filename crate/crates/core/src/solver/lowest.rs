use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{check_invariant, coefficient_row, invariants, SolverOptions, Witness};
use crate::clifford::{moment, HPoly};
use crate::error::{Error, Result};
use crate::lie::ModuleAction;
use crate::rat::{self, Rat};
use crate::supercore::{SuperMonomial, SuperPoly};
use crate::zoo::po_algebra;

/// One `ħ`-level of an eliminated combination: coefficients over the
/// monomial index at its valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationVector {
    pub valuation: u32,
    pub coefficients: Vec<(usize, Rat)>,
}

#[derive(Clone, Debug)]
pub struct LowestSpan {
    /// Independent lowest components, each with its witness.
    pub basis: Vec<SuperPoly>,
    pub witnesses: Vec<Witness>,
    /// Every lowest component reached by the elimination, dependent ones
    /// included, in pivot order.
    pub reached: Vec<ValuationVector>,
    pub monomials: Vec<SuperMonomial>,
}

impl LowestSpan {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

type Row = BTreeMap<usize, Rat>;

fn axpy(acc: &mut Row, s: &Rat, v: &Row) {
    for (k, x) in v {
        let e = acc.entry(*k).or_insert_with(Rat::zero);
        *e += s * x;
        if e.is_zero() {
            acc.remove(k);
        }
    }
}

/// All lowest components of `Q`-linear combinations of the family.
///
/// Rows are keyed `(power, monomial)` and reduced by their leading entries
/// in that order. A row whose leading term cancels moves on to a higher
/// power, so every pivot row is a combination whose lowest component starts
/// at its pivot, and the span of those components is the whole set reached.
pub fn lowest_component_span(family: &[HPoly], d: u32) -> Result<LowestSpan> {
    let Some(first) = family.first() else {
        return Ok(LowestSpan {
            basis: Vec::new(),
            witnesses: Vec::new(),
            reached: Vec::new(),
            monomials: Vec::new(),
        });
    };
    let table = first.table().clone();
    let mut monos = BTreeSet::new();
    let mut powers = BTreeSet::new();
    for f in family {
        if !crate::supercore::same_table(f.table(), &table) {
            return Err(Error::Incompatible("family members use different tables".into()));
        }
        for (k, c) in f.coeffs() {
            if c.is_zero() {
                continue;
            }
            if c.terms().keys().any(|m| m.degree() != d) {
                return Err(Error::Invalid(format!("component at h^{k} is not of degree {d}")));
            }
            powers.insert(*k);
            monos.extend(c.terms().keys().cloned());
        }
    }
    let monos: Vec<SuperMonomial> = monos.into_iter().collect();
    let index: HashMap<SuperMonomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let powers: Vec<u32> = powers.into_iter().collect();
    let width = monos.len().max(1);
    let col = |level: usize, i: usize| level * width + i;

    // pivot column -> (row, witness over the family)
    let mut pivots: BTreeMap<usize, (Row, Row)> = BTreeMap::new();
    for (j, f) in family.iter().enumerate() {
        let mut row = Row::new();
        for (level, k) in powers.iter().enumerate() {
            for (i, c) in coefficient_row(&f.coeff(*k), &index)? {
                row.insert(col(level, i), c);
            }
        }
        let mut wit = Row::from([(j, Rat::one())]);
        while let Some((&c, lead)) = row.iter().next() {
            let Some((prow, pwit)) = pivots.get(&c) else { break };
            let s = -(lead / &prow[&c]);
            axpy(&mut row, &s, prow);
            axpy(&mut wit, &s, pwit);
        }
        if let Some(&c) = row.keys().next() {
            pivots.insert(c, (row, wit));
        }
    }

    let mut reached = Vec::new();
    let mut basis = Vec::new();
    let mut witnesses = Vec::new();
    let mut span = crate::linalg::sparse::Echelon::new(monos.len());
    for (c, (row, wit)) in &pivots {
        let level = c / width;
        let coefficients: Vec<(usize, Rat)> = row
            .range(col(level, 0)..col(level + 1, 0))
            .map(|(k, x)| (k - col(level, 0), x.clone()))
            .collect();
        reached.push(ValuationVector {
            valuation: powers[level],
            coefficients: coefficients.clone(),
        });
        if span.insert(crate::linalg::sparse::integer_row(&coefficients)) {
            basis.push(SuperPoly::from_terms(
                &table,
                coefficients.iter().map(|(i, x)| (monos[*i].clone(), x.clone())),
            ));
            witnesses.push(Witness {
                valuation: powers[level],
                combination: wit.iter().map(|(j, x)| (*j, rat::to_text(x))).collect(),
            });
        }
    }
    Ok(LowestSpan {
        basis,
        witnesses,
        reached,
        monomials: monos,
    })
}

/// Products of trace moments `s_{k1} ... s_{kr}` with `k1 <= ... <= kr` and
/// `sum k_i = d`, labelled by their partitions.
pub fn moment_family(m: usize, d: u32, moments: &[HPoly]) -> Result<Vec<(Vec<u32>, HPoly)>> {
    fn rec(
        moments: &[HPoly],
        start: u32,
        left: u32,
        parts: &mut Vec<u32>,
        acc: &HPoly,
        out: &mut Vec<(Vec<u32>, HPoly)>,
    ) -> Result<()> {
        if left == 0 {
            out.push((parts.clone(), acc.clone()));
            return Ok(());
        }
        for k in start..=left {
            parts.push(k);
            let next = acc.mul(&moments[k as usize - 1])?;
            rec(moments, k, left - k, parts, &next, out)?;
            parts.pop();
        }
        Ok(())
    }
    if moments.len() < d as usize {
        return Err(Error::Invalid(format!("need moments s_1..s_{d} for m = {m}")));
    }
    let Some(first) = moments.first() else {
        return Ok(vec![(Vec::new(), HPoly::constant(&crate::poisson::symbol_table(m), 0, Rat::one()))]);
    };
    let one = HPoly::constant(first.table(), 0, Rat::one());
    let mut out = Vec::new();
    rec(moments, 1, d, &mut Vec::new(), &one, &mut out)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureDegree {
    pub degree: u32,
    pub family_size: usize,
    pub invariants_dim: Option<usize>,
    pub lowest_span_dim: Option<usize>,
    /// Every lowest component (of each product and of each combination)
    /// passes the invariance check.
    pub lowest_components_invariant: bool,
    pub dims_agree: Option<bool>,
    pub aborted: bool,
    pub witnesses: Vec<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub m: usize,
    pub route: String,
    /// For odd `m` the comparison is recorded without being asserted.
    pub asserted: bool,
    pub degrees: Vec<ConjectureDegree>,
}

impl ConjectureReport {
    pub fn aborted(&self) -> bool {
        self.degrees.iter().any(|d| d.aborted)
    }

    /// True when every degree was computed and agrees; an aborted degree
    /// counts as not established.
    pub fn holds(&self) -> bool {
        !self.aborted()
            && self
                .degrees
                .iter()
                .all(|d| d.lowest_components_invariant && d.dims_agree != Some(false))
    }
}

/// Dimension of the invariants of `po(0|m)` against the span of lowest
/// components of moment products, for `d = 1..=d_max`.
pub fn conjecture6_report(m: usize, d_max: u32, opts: SolverOptions) -> Result<ConjectureReport> {
    if m == 0 || m > 6 {
        return Err(Error::Invalid(format!("m = {m} outside 1..=6")));
    }
    let action = ModuleAction::coadjoint(&std::sync::Arc::new(po_algebra(m)));
    let mut moments: Vec<HPoly> = Vec::new();
    let mut degrees = Vec::new();
    for d in 1..=d_max {
        let run = invariants(&action, d, opts)?;
        if run.aborted {
            degrees.push(ConjectureDegree {
                degree: d,
                family_size: 0,
                invariants_dim: None,
                lowest_span_dim: None,
                lowest_components_invariant: true,
                dims_agree: None,
                aborted: true,
                witnesses: Vec::new(),
            });
            continue;
        }
        while moments.len() < d as usize {
            moments.push(moment(m, moments.len() as u32 + 1)?.0);
        }
        let family = moment_family(m, d, &moments)?;
        let mut ok = true;
        for (_, f) in &family {
            if let Ok((_, low)) = f.lowest_component() {
                ok &= check_invariant(&low, &action)?;
            }
        }
        let polys: Vec<HPoly> = family.into_iter().map(|(_, f)| f).collect();
        let span = lowest_component_span(&polys, d)?;
        for v in &span.basis {
            ok &= check_invariant(v, &action)?;
        }
        let inv_dim = run.basis.dim();
        degrees.push(ConjectureDegree {
            degree: d,
            family_size: polys.len(),
            invariants_dim: Some(inv_dim),
            lowest_span_dim: Some(span.dim()),
            lowest_components_invariant: ok,
            dims_agree: Some(inv_dim == span.dim()),
            aborted: false,
            witnesses: span.witnesses,
        });
    }
    Ok(ConjectureReport {
        m,
        route: if m.is_multiple_of(2) { "str" } else { "qtr" }.into(),
        asserted: m.is_multiple_of(2),
        degrees,
    })
}

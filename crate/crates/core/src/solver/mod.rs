//! Invariant polynomials of a module: `∩_γ ker D_γ` on `S^d`.
//!
//! The space is split into blocks of fixed parity and grading. Every `D_γ`
//! maps a block into a single block, so the kernel is computed block by block
//! with fraction-free elimination and the blocks are merged in key order.

mod lowest;
mod membership;
mod space;

#[cfg(test)]
mod tests;

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conventions::convention_hash;
use crate::error::{Error, Result};
use crate::lie::ModuleAction;
use crate::linalg::sparse::{integer_row, Echelon};
use crate::rat::{self, Rat};
use crate::supercore::{odd_before, Side, SuperMonomial, SuperPoly, Var, VarTable};

pub use lowest::{
    conjecture6_report, lowest_component_span, moment_family, ConjectureDegree, ConjectureReport,
    LowestSpan, ValuationVector,
};
pub use membership::{
    exceptional_invariant, literal_radial_target, po_torus_coordinates, radial_image, radial_part,
    radial_table, span_membership, twisted_radial_target, ExceptionalInvariant, Membership,
};
pub use space::{BlockKey, BlockedSpace, Coordinates};

/// Default cap on stored monomials and on matrix nonzeros per block.
pub const DEFAULT_BUDGET: usize = 4_000_000;

/// The enumerated monomial basis of `S^d` on the module coordinates.
#[derive(Clone, Debug)]
pub struct PolySpaceBasis {
    pub coords: Arc<Coordinates>,
    pub space: BlockedSpace,
    pub monomials: Vec<SuperMonomial>,
}

impl PolySpaceBasis {
    pub fn new(action: &ModuleAction, degree: u32, weight_filter: bool, budget: usize) -> Result<Self> {
        let coords = Arc::new(Coordinates::new(action)?);
        let space = BlockedSpace::new(&coords, degree, weight_filter, budget)?;
        let monomials = space.monomials();
        Ok(PolySpaceBasis {
            coords,
            space,
            monomials,
        })
    }

    pub fn degree(&self) -> u32 {
        self.space.degree
    }

    pub fn weight_filter(&self) -> bool {
        self.space.weight_filter
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.coords.table
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }
}

/// `D_γ` as a map on monomials: `sum_b D(c_b) ∂^L f/∂c_b`.
#[derive(Clone, Debug)]
struct Derivation {
    /// `(b, image of c_b)` for the coordinates that `e_γ` moves.
    images: Vec<(Var, Vec<(SuperMonomial, Rat)>)>,
}

impl Derivation {
    fn new(coords: &Coordinates, action: &ModuleAction, gamma: usize) -> Self {
        let images = action.actions[gamma]
            .iter()
            .enumerate()
            .filter(|(_, img)| !img.is_empty())
            .map(|(b, img)| {
                let lin = img.iter().map(|(c, r)| (coords.monomial(*c), r.clone())).collect();
                (coords.vars[b], lin)
            })
            .collect();
        Derivation { images }
    }

    fn apply(&self, u: &SuperMonomial, mut emit: impl FnMut(SuperMonomial, Rat)) {
        for (v, lin) in &self.images {
            let (rest, factor) = match *v {
                Var::Even(i) => {
                    if u.even[i] == 0 {
                        continue;
                    }
                    let mut r = u.clone();
                    r.even[i] -= 1;
                    (r, rat::int(u.even[i] as i64))
                }
                Var::Odd(k) => {
                    if u.odd >> k & 1 == 0 {
                        continue;
                    }
                    let r = SuperMonomial {
                        even: u.even.clone(),
                        odd: u.odd & !(1 << k),
                    };
                    let s = if odd_before(u.odd, k) % 2 == 1 { -1 } else { 1 };
                    (r, rat::int(s))
                }
            };
            for (c, a) in lin {
                if let Some((w, neg)) = c.mul(&rest) {
                    let x = a * &factor;
                    emit(w, if neg { -x } else { x });
                }
            }
        }
    }
}

/// Exact sparse matrix with labelled rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: Vec<SuperMonomial>,
    pub entries: Vec<Vec<(usize, Rat)>>,
    pub ncols: usize,
}

impl SparseMatrix {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Vec::is_empty)
    }

    pub fn nonzeros(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }
}

fn assemble(der: &Derivation, columns: &[SuperMonomial]) -> SparseMatrix {
    let mut rows: BTreeMap<SuperMonomial, BTreeMap<usize, Rat>> = BTreeMap::new();
    for (j, u) in columns.iter().enumerate() {
        der.apply(u, |w, x| {
            let e = rows.entry(w).or_default().entry(j).or_insert_with(Rat::zero);
            *e += x;
        });
    }
    let mut labels = Vec::new();
    let mut entries = Vec::new();
    for (w, row) in rows {
        let row: Vec<(usize, Rat)> = row.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        if !row.is_empty() {
            labels.push(w);
            entries.push(row);
        }
    }
    SparseMatrix {
        rows: labels,
        entries,
        ncols: columns.len(),
    }
}

/// Matrix of `D_γ` from the given basis of `S^d` to `S^d`.
pub fn derivation_matrix(action: &ModuleAction, basis: &PolySpaceBasis, gamma: usize) -> Result<SparseMatrix> {
    if gamma >= action.algebra.dim() {
        return Err(Error::Invalid(format!("no basis element {gamma}")));
    }
    let der = Derivation::new(&basis.coords, action, gamma);
    Ok(assemble(&der, &basis.monomials))
}

/// `D_γ P` for every basis element `γ`, through polynomial derivatives.
pub fn derivation_images(poly: &SuperPoly, action: &ModuleAction) -> Result<Vec<SuperPoly>> {
    let coords = Coordinates::new(action)?;
    let p = poly.embed(&coords.table)?;
    let linear: Vec<SuperPoly> = (0..coords.len())
        .map(|c| SuperPoly::monomial(&coords.table, coords.monomial(c), Rat::from_integer(1.into())))
        .collect();
    let mut out = Vec::new();
    for gamma in 0..action.algebra.dim() {
        let mut acc = SuperPoly::zero(&coords.table);
        for (b, img) in action.actions[gamma].iter().enumerate() {
            if img.is_empty() {
                continue;
            }
            let d = p.deriv_var(coords.vars[b], Side::Left);
            if d.is_zero() {
                continue;
            }
            let mut image = SuperPoly::zero(&coords.table);
            for (c, r) in img {
                image.add_assign_scaled(&linear[*c], r)?;
            }
            acc = acc.add(&image.mul(&d)?)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `true` iff `D_γ P = 0` for every basis element `γ`.
pub fn check_invariant(poly: &SuperPoly, action: &ModuleAction) -> Result<bool> {
    Ok(derivation_images(poly, action)?.iter().all(SuperPoly::is_zero))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockStatus {
    Done,
    Aborted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockReport {
    pub parity: u8,
    pub weight: Vec<i64>,
    pub size: usize,
    pub kernel_dim: Option<usize>,
    pub nonzeros: usize,
    pub status: BlockStatus,
}

/// Combination certificate: `lowest = lowest component of sum coeff_i F_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub valuation: u32,
    /// `(family index, coefficient as p/q)`.
    pub combination: Vec<(usize, String)>,
}

/// Linearly independent invariants of one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantBasis {
    pub algebra: String,
    pub module: String,
    pub degree: u32,
    pub basis: Vec<SuperPoly>,
    pub convention_hash: String,
    pub witnesses: Option<Vec<Witness>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantBasisJson {
    pub algebra: String,
    pub module: String,
    pub degree: u32,
    pub dim: usize,
    pub basis: Vec<String>,
    pub convention_hash: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witnesses: Option<Vec<Witness>>,
}

impl InvariantBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> InvariantBasisJson {
        InvariantBasisJson {
            algebra: self.algebra.clone(),
            module: self.module.clone(),
            degree: self.degree,
            dim: self.basis.len(),
            basis: self.basis.iter().map(SuperPoly::to_text).collect(),
            convention_hash: self.convention_hash.clone(),
            witnesses: self.witnesses.clone(),
        }
    }

    /// Parse the polynomials back over the given table.
    pub fn from_json(j: &InvariantBasisJson, table: &Arc<VarTable>) -> Result<Self> {
        let basis = j
            .basis
            .iter()
            .map(|t| SuperPoly::parse(table, t))
            .collect::<Result<Vec<_>>>()?;
        if basis.len() != j.dim {
            return Err(Error::Invalid("dim does not match the basis length".into()));
        }
        Ok(InvariantBasis {
            algebra: j.algebra.clone(),
            module: j.module.clone(),
            degree: j.degree,
            basis,
            convention_hash: j.convention_hash.clone(),
            witnesses: j.witnesses.clone(),
        })
    }
}

/// Result of an invariant computation, possibly cut short by the budget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantsRun {
    /// Invariants from the completed blocks (all of them when not aborted).
    pub basis: InvariantBasis,
    pub blocks: Vec<BlockReport>,
    pub aborted: bool,
    pub reason: Option<String>,
    /// Size of the largest block whose elimination finished.
    pub largest_block_processed: usize,
    pub space_dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub weight_filter: bool,
    pub budget: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            weight_filter: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

struct BlockOutcome {
    report: BlockReport,
    kernel: Vec<(SuperMonomial, SuperPoly)>,
}

fn solve_block(
    coords: &Coordinates,
    ders: &[Derivation],
    key: &BlockKey,
    columns: &[SuperMonomial],
    budget: usize,
) -> Result<BlockOutcome> {
    let mut ech = Echelon::new(columns.len());
    let mut nonzeros = 0usize;
    let abort = |nonzeros| BlockOutcome {
        report: BlockReport {
            parity: key.parity,
            weight: key.weight.clone(),
            size: columns.len(),
            kernel_dim: None,
            nonzeros,
            status: BlockStatus::Aborted,
        },
        kernel: Vec::new(),
    };
    for der in ders {
        if ech.is_full() {
            break;
        }
        let mat = assemble(der, columns);
        let mut target: Option<BlockKey> = None;
        for w in &mat.rows {
            let k = coords.key(w);
            match &target {
                None => target = Some(k),
                Some(t) if *t != k => {
                    return Err(Error::Invalid(
                        "the action is not homogeneous for the module grading".into(),
                    ))
                }
                _ => {}
            }
        }
        nonzeros += mat.nonzeros();
        if nonzeros > budget {
            return Ok(abort(nonzeros));
        }
        for row in &mat.entries {
            ech.insert(integer_row(row));
            if ech.nonzeros() > budget {
                return Ok(abort(nonzeros.max(ech.nonzeros())));
            }
        }
    }
    let kernel: Vec<(SuperMonomial, SuperPoly)> = ech
        .kernel()
        .into_iter()
        .map(|(f, v)| {
            let poly = SuperPoly::from_terms(
                &coords.table,
                v.into_iter().map(|(c, x)| (columns[c].clone(), Rat::from_integer(x))),
            );
            (columns[f].clone(), poly)
        })
        .collect();
    Ok(BlockOutcome {
        report: BlockReport {
            parity: key.parity,
            weight: key.weight.clone(),
            size: columns.len(),
            kernel_dim: Some(kernel.len()),
            nonzeros,
            status: BlockStatus::Done,
        },
        kernel,
    })
}

/// Basis of the invariants in `S^d`, ordered by the free monomial of each
/// vector in the canonical order. Each vector is primitive over the integers
/// and has coefficient `+1 * content` at its free monomial.
pub fn invariants(action: &ModuleAction, degree: u32, opts: SolverOptions) -> Result<InvariantsRun> {
    let algebra = action.algebra.name.clone();
    let module = action.kind.as_str().to_string();
    let empty = |reason: String| InvariantsRun {
        basis: InvariantBasis {
            algebra: algebra.clone(),
            module: module.clone(),
            degree,
            basis: Vec::new(),
            convention_hash: convention_hash(),
            witnesses: None,
        },
        blocks: Vec::new(),
        aborted: true,
        reason: Some(reason),
        largest_block_processed: 0,
        space_dim: 0,
    };
    let basis = match PolySpaceBasis::new(action, degree, opts.weight_filter, opts.budget) {
        Ok(b) => b,
        Err(Error::Budget(reason)) => return Ok(empty(reason)),
        Err(e) => return Err(e),
    };
    let coords = basis.coords.clone();
    let ders: Vec<Derivation> = (0..action.algebra.dim())
        .map(|g| Derivation::new(&coords, action, g))
        .filter(|d| !d.images.is_empty())
        .collect();
    let blocks: Vec<(&BlockKey, &Vec<SuperMonomial>)> = basis.space.blocks.iter().collect();
    let outcomes = blocks
        .par_iter()
        .map(|(k, cols)| solve_block(&coords, &ders, k, cols, opts.budget))
        .collect::<Result<Vec<_>>>()?;
    let aborted = outcomes.iter().any(|o| o.report.status == BlockStatus::Aborted);
    let largest = outcomes
        .iter()
        .filter(|o| o.report.status == BlockStatus::Done)
        .map(|o| o.report.size)
        .max()
        .unwrap_or(0);
    let mut kernel: Vec<(SuperMonomial, SuperPoly)> = Vec::new();
    let mut reports = Vec::new();
    for o in outcomes {
        reports.push(o.report);
        kernel.extend(o.kernel);
    }
    kernel.sort_by(|a, b| a.0.cmp(&b.0));
    let reason = aborted.then(|| {
        let worst = reports
            .iter()
            .filter(|r| r.status == BlockStatus::Aborted)
            .map(|r| r.nonzeros)
            .max()
            .unwrap_or(0);
        format!("a block needed {worst} nonzeros, budget {}", opts.budget)
    });
    Ok(InvariantsRun {
        basis: InvariantBasis {
            algebra,
            module,
            degree,
            basis: kernel.into_iter().map(|(_, p)| p).collect(),
            convention_hash: convention_hash(),
            witnesses: None,
        },
        blocks: reports,
        aborted,
        reason,
        largest_block_processed: largest,
        space_dim: basis.len(),
    })
}

/// Coefficient vector of `p` over the given monomial index.
pub(crate) fn coefficient_row(
    p: &SuperPoly,
    index: &HashMap<SuperMonomial, usize>,
) -> Result<Vec<(usize, Rat)>> {
    let mut row: Vec<(usize, Rat)> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            index
                .get(m)
                .map(|&i| (i, c.clone()))
                .ok_or_else(|| Error::Invalid(format!("monomial {} outside the space", p.monomial_text(m, "*"))))
        })
        .collect::<Result<_>>()?;
    row.sort_by_key(|(i, _)| *i);
    Ok(row)
}

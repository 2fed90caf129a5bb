//! Constructors for the Lie superalgebras of the open-case list, and the
//! subspace tools (subalgebras, quotients, kernels) they are built from.

mod matrix;
mod vect;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{sparse_axpy, sparse_from_map, LieSuperAlgebra, SparseVec};
use crate::linalg::dense;
use crate::poisson::PoissonAlgebra;
use crate::rat::{self, Rat};

pub use matrix::{gl_from_fock, gl_natural, psq_algebra, q_algebra, qtr_functional, sq_algebra};
pub use vect::{density_sign, svect_tilde_with, 
    divergence, svect_algebra, svect_tilde, vect_algebra, vect_basis, DeformTerm, DensitySign,
};

type BlockKey = (u8, Vec<i64>);

fn block_of(g: &LieSuperAlgebra, v: &[(usize, Rat)]) -> Result<BlockKey> {
    let mut keys = v.iter().map(|(i, _)| (g.parities[*i], g.grading[*i].clone()));
    let first = keys
        .next()
        .ok_or_else(|| Error::Invalid("zero vector in a spanning set".into()))?;
    if keys.any(|k| k != first) {
        return Err(Error::Invalid(format!(
            "vector is not homogeneous in {} (parity and grading)",
            g.name
        )));
    }
    Ok(first)
}

/// Reduced echelon basis of the span of homogeneous vectors, block by block,
/// ordered by pivot index. Each output vector is 1 at its pivot and 0 at the
/// other pivots.
pub fn span_basis(g: &LieSuperAlgebra, vectors: &[SparseVec]) -> Result<Vec<SparseVec>> {
    let mut blocks: BTreeMap<BlockKey, Vec<&SparseVec>> = BTreeMap::new();
    for v in vectors.iter().filter(|v| !v.is_empty()) {
        blocks.entry(block_of(g, v)?).or_default().push(v);
    }
    let mut out = Vec::new();
    for vs in blocks.values() {
        let mut cols: Vec<usize> = vs.iter().flat_map(|v| v.iter().map(|(i, _)| *i)).collect();
        cols.sort_unstable();
        cols.dedup();
        let pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
        let mut rows: Vec<Vec<Rat>> = vs
            .iter()
            .map(|v| {
                let mut row = vec![Rat::zero(); cols.len()];
                for (i, r) in v.iter() {
                    row[pos[i]] = r.clone();
                }
                row
            })
            .collect();
        dense::rref(&mut rows);
        for row in rows {
            out.push(
                row.into_iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(k, r)| (cols[k], r))
                    .collect::<SparseVec>(),
            );
        }
    }
    out.sort_by_key(|v| v[0].0);
    Ok(out)
}

/// Coordinates of `w` in an echelon basis from [`span_basis`], or `None` when
/// `w` is outside the span.
fn coordinates(basis: &[SparseVec], w: &[(usize, Rat)]) -> Option<SparseVec> {
    let mut residual: BTreeMap<usize, Rat> = w.iter().cloned().collect();
    let mut coords = Vec::new();
    for (k, b) in basis.iter().enumerate() {
        let c = residual.get(&b[0].0).cloned().unwrap_or_else(Rat::zero);
        if !c.is_zero() {
            sparse_axpy(&mut residual, &-c.clone(), b);
            coords.push((k, c));
        }
    }
    residual.is_empty().then_some(coords)
}

fn combination_label(g: &LieSuperAlgebra, v: &[(usize, Rat)]) -> String {
    if v.len() == 1 && v[0].1.is_one() {
        g.labels[v[0].0].clone()
    } else {
        format!("s.{}", g.labels[v[0].0])
    }
}

/// Subalgebra spanned by homogeneous vectors; closure under the bracket is
/// verified.
pub fn subalgebra(g: &LieSuperAlgebra, name: &str, vectors: &[SparseVec]) -> Result<LieSuperAlgebra> {
    let basis = span_basis(g, vectors)?;
    let mut constants = BTreeMap::new();
    for (a, va) in basis.iter().enumerate() {
        for (b, vb) in basis.iter().enumerate() {
            let br = g.bracket(va, vb);
            if br.is_empty() {
                continue;
            }
            let c = coordinates(&basis, &br).ok_or_else(|| {
                Error::Invalid(format!(
                    "{name} is not closed: [{}, {}] leaves the span",
                    combination_label(g, va),
                    combination_label(g, vb)
                ))
            })?;
            constants.insert((a, b), c);
        }
    }
    let keys: Vec<BlockKey> = basis.iter().map(|v| block_of(g, v)).collect::<Result<_>>()?;
    let mut sub = LieSuperAlgebra::new(
        name,
        basis.iter().map(|v| combination_label(g, v)).collect(),
        keys.iter().map(|k| k.0).collect(),
        constants,
    );
    sub = sub.with_grading(keys.into_iter().map(|k| k.1).collect(), Vec::new());
    sub.torus_forms = sub.realized_torus_forms(&g.torus_forms);
    sub.provenance = g.provenance.clone();
    sub.provenance.insert("parent".into(), g.name.clone());
    sub.provenance.insert(format!("basis.{name}"), basis_text(g, &basis));
    Ok(sub)
}

fn basis_text(g: &LieSuperAlgebra, basis: &[SparseVec]) -> String {
    basis
        .iter()
        .filter(|v| v.len() > 1 || !v[0].1.is_one())
        .map(|v| {
            let terms: Vec<String> = v
                .iter()
                .map(|(i, r)| format!("{}*{}", rat::to_text(r), g.labels[*i]))
                .collect();
            format!("{} = {}", combination_label(g, v), terms.join(" + "))
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Quotient by the ideal spanned by homogeneous vectors, on the complement
/// spanned by the basis elements that are not pivots of the ideal.
pub fn quotient(g: &LieSuperAlgebra, name: &str, ideal: &[SparseVec]) -> Result<LieSuperAlgebra> {
    let ideal = span_basis(g, ideal)?;
    for v in &ideal {
        for x in 0..g.dim() {
            if coordinates(&ideal, &g.bracket(&[(x, Rat::one())], v)).is_none() {
                return Err(Error::Invalid(format!("{name}: the quotient is not by an ideal")));
            }
        }
    }
    let pivots: Vec<usize> = ideal.iter().map(|v| v[0].0).collect();
    let keep: Vec<usize> = (0..g.dim()).filter(|i| !pivots.contains(i)).collect();
    let position: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let project = |w: &[(usize, Rat)]| -> SparseVec {
        let mut r: BTreeMap<usize, Rat> = w.iter().cloned().collect();
        for b in &ideal {
            if let Some(c) = r.get(&b[0].0).cloned() {
                sparse_axpy(&mut r, &-c, b);
            }
        }
        sparse_from_map(r.into_iter().map(|(i, c)| (position[&i], c)).collect())
    };
    let mut constants = BTreeMap::new();
    for (a, &ia) in keep.iter().enumerate() {
        for (b, &ib) in keep.iter().enumerate() {
            let v = project(g.bracket_basis(ia, ib));
            if !v.is_empty() {
                constants.insert((a, b), v);
            }
        }
    }
    let mut q = LieSuperAlgebra::new(
        name,
        keep.iter().map(|&i| g.labels[i].clone()).collect(),
        keep.iter().map(|&i| g.parities[i]).collect(),
        constants,
    );
    q = q.with_grading(keep.iter().map(|&i| g.grading[i].clone()).collect(), Vec::new());
    q.torus_forms = q.realized_torus_forms(&g.torus_forms);
    q.provenance = g.provenance.clone();
    q.provenance.insert("parent".into(), g.name.clone());
    Ok(q)
}

/// Kernel of `ad`, as an echelon basis of homogeneous vectors.
pub fn center(g: &LieSuperAlgebra) -> Result<Vec<SparseVec>> {
    let mut groups: BTreeMap<BlockKey, Vec<usize>> = BTreeMap::new();
    for i in 0..g.dim() {
        groups.entry((g.parities[i], g.grading[i].clone())).or_default().push(i);
    }
    let mut out = Vec::new();
    for idx in groups.values() {
        let mut rows: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
        for (k, &x) in idx.iter().enumerate() {
            for y in 0..g.dim() {
                for (c, r) in g.bracket_basis(x, y) {
                    rows.entry((y, *c)).or_insert_with(|| vec![Rat::zero(); idx.len()])[k] += r;
                }
            }
        }
        let rows: Vec<Vec<Rat>> = rows.into_values().collect();
        for v in dense::kernel(&rows, idx.len()) {
            out.push(
                v.into_iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(k, r)| (idx[k], r))
                    .collect(),
            );
        }
    }
    span_basis(g, &out)
}

pub fn quotient_by_center(g: &LieSuperAlgebra, name: &str) -> Result<LieSuperAlgebra> {
    quotient(g, name, &center(g)?)
}

/// `[g, g]`, closed by construction and verified.
pub fn derived_subalgebra(g: &LieSuperAlgebra, name: &str) -> Result<LieSuperAlgebra> {
    let brackets: Vec<SparseVec> = g.constants().values().cloned().collect();
    subalgebra(g, name, &brackets)
}

/// Kernel of a linear map given on basis elements, computed block by block.
/// The map must send different blocks into disjoint target supports.
pub fn kernel_vectors(
    g: &LieSuperAlgebra,
    image: impl Fn(usize) -> SparseVec,
) -> Result<Vec<SparseVec>> {
    let mut groups: BTreeMap<BlockKey, Vec<usize>> = BTreeMap::new();
    for i in 0..g.dim() {
        groups.entry((g.parities[i], g.grading[i].clone())).or_default().push(i);
    }
    let mut owner: BTreeMap<usize, BlockKey> = BTreeMap::new();
    let mut out = Vec::new();
    for (key, idx) in &groups {
        let images: Vec<SparseVec> = idx.iter().map(|&i| image(i)).collect();
        let mut targets: Vec<usize> = images.iter().flat_map(|v| v.iter().map(|(t, _)| *t)).collect();
        targets.sort_unstable();
        targets.dedup();
        for t in &targets {
            if let Some(other) = owner.insert(*t, key.clone()) {
                if &other != key {
                    return Err(Error::Invalid("linear map is not homogeneous for the grading".into()));
                }
            }
        }
        let pos: BTreeMap<usize, usize> = targets.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        let mut rows = vec![vec![Rat::zero(); idx.len()]; targets.len()];
        for (k, v) in images.iter().enumerate() {
            for (t, r) in v {
                rows[pos[t]][k] = r.clone();
            }
        }
        for v in dense::kernel(&rows, idx.len()) {
            out.push(
                v.into_iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(k, r)| (idx[k], r))
                    .collect(),
            );
        }
    }
    Ok(out)
}

/// Replace the grading by the values of integer linear forms; every new
/// coordinate is offered as a torus form and kept when inner.
pub fn regrade(g: &LieSuperAlgebra, forms: &[Vec<i64>]) -> LieSuperAlgebra {
    let grading: Vec<Vec<i64>> = g
        .grading
        .iter()
        .map(|w| forms.iter().map(|f| f.iter().zip(w).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let units: Vec<Vec<i64>> = (0..forms.len())
        .map(|i| (0..forms.len()).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut out = g.clone().with_grading(grading, Vec::new());
    out.torus_forms = out.realized_torus_forms(&units);
    out
}

/// `po(0|m)` with its torus weights, degree grading and form.
pub fn po_algebra(m: usize) -> LieSuperAlgebra {
    PoissonAlgebra::new(m).structure_constants()
}

/// `h(0|m) = po(0|m) / constants`.
pub fn h_algebra(m: usize) -> Result<LieSuperAlgebra> {
    quotient_by_center(&po_algebra(m), &format!("h(0|{m})"))
}

/// `sh(0|m) = [h(0|m), h(0|m)]`.
pub fn sh_algebra(m: usize) -> Result<LieSuperAlgebra> {
    derived_subalgebra(&h_algebra(m)?, &format!("sh(0|{m})"))
}

/// The two readings of `spo(0|m)`: the derived algebra of `po(0|m)` and the
/// integral-zero subspace `{f : ∫ f = 0}` (an error if it is not closed).
pub fn spo_candidates(m: usize) -> Result<(LieSuperAlgebra, Result<LieSuperAlgebra>)> {
    let po = po_algebra(m);
    let derived = derived_subalgebra(&po, &format!("spo_derived(0|{m})"))?;
    let top = po.dim() - 1;
    let vectors: Vec<SparseVec> = (0..top).map(|i| vec![(i, Rat::one())]).collect();
    let integral_zero = subalgebra(&po, &format!("spo_int0(0|{m})"), &vectors);
    Ok((derived, integral_zero))
}

/// Algebra selector shared by the command line and the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraName {
    Po,
    H,
    Sh,
    Vect,
    Svect,
    SvectTilde,
    Gl,
    Q,
    Sq,
    Psq,
}

impl AlgebraName {
    pub const ALL: [AlgebraName; 10] = [
        AlgebraName::Po,
        AlgebraName::H,
        AlgebraName::Sh,
        AlgebraName::Vect,
        AlgebraName::Svect,
        AlgebraName::SvectTilde,
        AlgebraName::Gl,
        AlgebraName::Q,
        AlgebraName::Sq,
        AlgebraName::Psq,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraName::Po => "po",
            AlgebraName::H => "h",
            AlgebraName::Sh => "sh",
            AlgebraName::Vect => "vect",
            AlgebraName::Svect => "svect",
            AlgebraName::SvectTilde => "svect-tilde",
            AlgebraName::Gl => "gl",
            AlgebraName::Q => "q",
            AlgebraName::Sq => "sq",
            AlgebraName::Psq => "psq",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown algebra {s:?}")))
    }

    /// Whether the size parameter is `m` (odd superspace) or `n`.
    pub fn uses_m(self) -> bool {
        !matches!(self, AlgebraName::Gl | AlgebraName::Q | AlgebraName::Sq | AlgebraName::Psq)
    }
}

/// Build a named algebra. `size` is `m` for the function-space algebras, the
/// number of Fock pairs for `gl` (giving `gl(2^{n-1}|2^{n-1})`) and `N` for
/// the queer family.
pub fn build(name: AlgebraName, size: usize, deform: DeformTerm) -> Result<LieSuperAlgebra> {
    match name {
        AlgebraName::Po => Ok(po_algebra(size)),
        AlgebraName::H => h_algebra(size),
        AlgebraName::Sh => sh_algebra(size),
        AlgebraName::Vect => vect_algebra(size),
        AlgebraName::Svect => svect_algebra(size),
        AlgebraName::SvectTilde => svect_tilde(size, deform),
        AlgebraName::Gl => Ok(gl_from_fock(size)?.0),
        AlgebraName::Q => q_algebra(size),
        AlgebraName::Sq => sq_algebra(size),
        AlgebraName::Psq => psq_algebra(size),
    }
}

#[cfg(test)]
mod tests;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{coefficient_row, invariants, SolverOptions};
use crate::error::{Error, Result};
use crate::lie::{coordinate_name, ModuleAction};
use crate::linalg::dense;
use crate::rat::{self, Rat};
use crate::supercore::{SuperMonomial, SuperPoly, Var, VarTable};

/// Coordinates of the torus `h_i = xi_i eta_i` in `po(0|2n)`.
pub fn po_torus_coordinates(n: usize) -> Vec<String> {
    (1..=n).map(|i| coordinate_name(&format!("xi{i}eta{i}"))).collect()
}

/// Even variables `x1..xn`.
pub fn radial_table(n: usize) -> Arc<VarTable> {
    VarTable::new((1..=n).map(|i| format!("x{i}")), Vec::<String>::new()).expect("even table")
}

/// Set every non-torus coordinate to zero and rename the torus coordinates
/// to `x1..xn`.
pub fn radial_part(poly: &SuperPoly, torus: &[String]) -> Result<SuperPoly> {
    let table = poly.table();
    let mut slots = Vec::new();
    for name in torus {
        match table.lookup(name)? {
            Var::Even(i) => slots.push(i),
            Var::Odd(_) => {
                return Err(Error::ParityMismatch(format!("torus coordinate {name} is odd")));
            }
        }
    }
    let target = radial_table(torus.len());
    let mut out = SuperPoly::zero(&target);
    for (m, c) in poly.terms() {
        if m.odd != 0 {
            continue;
        }
        let on_torus: u32 = slots.iter().map(|&i| m.even[i]).sum();
        if on_torus != m.even.iter().sum::<u32>() {
            continue;
        }
        let mono = SuperMonomial {
            even: slots.iter().map(|&i| m.even[i]).collect(),
            odd: 0,
        };
        out.add_term(mono, c.clone());
    }
    Ok(out)
}

/// Outcome of a span-membership test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    /// Number of generator products of the requested degree.
    pub products: usize,
    /// Exponent multisets (generator indices) with coefficients, when a
    /// member.
    pub combination: Option<Vec<(Vec<usize>, String)>>,
}

/// Products `g_{i1} ... g_{ir}` with `i1 <= ... <= ir` and total degree `d`.
fn products(generators: &[(usize, u32, &SuperPoly)], d: u32, one: &SuperPoly) -> Result<Vec<(Vec<usize>, SuperPoly)>> {
    fn rec(
        gens: &[(usize, u32, &SuperPoly)],
        start: usize,
        left: u32,
        idx: &mut Vec<usize>,
        acc: &SuperPoly,
        out: &mut Vec<(Vec<usize>, SuperPoly)>,
    ) -> Result<()> {
        if left == 0 {
            out.push((idx.clone(), acc.clone()));
            return Ok(());
        }
        for k in start..gens.len() {
            let (i, deg, g) = gens[k];
            if deg <= left {
                idx.push(i);
                let next = acc.mul(g)?;
                rec(gens, k, left - deg, idx, &next, out)?;
                idx.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(generators, 0, d, &mut Vec::new(), one, &mut out)?;
    Ok(out)
}

/// Whether `candidate` lies in the span of the degree-`d` products of the
/// generators (the empty product is `1`).
pub fn span_membership(candidate: &SuperPoly, generators: &[SuperPoly], d: u32) -> Result<Membership> {
    if candidate.is_zero() {
        return Ok(Membership {
            member: true,
            products: 0,
            combination: Some(Vec::new()),
        });
    }
    if candidate.degree() != Some(d) {
        return Err(Error::Invalid(format!("candidate is not homogeneous of degree {d}")));
    }
    let table = candidate.table();
    let gens: Vec<SuperPoly> = generators.iter().map(|g| g.embed(table)).collect::<Result<_>>()?;
    let mut usable = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        if g.is_zero() {
            continue;
        }
        match g.degree() {
            Some(0) => {}
            Some(k) => usable.push((i, k, g)),
            None => return Err(Error::Invalid(format!("generator {i} is not homogeneous"))),
        }
    }
    let prods = products(&usable, d, &SuperPoly::one(table))?;
    let monos: BTreeSet<SuperMonomial> = prods
        .iter()
        .flat_map(|(_, p)| p.terms().keys().cloned())
        .chain(candidate.terms().keys().cloned())
        .collect();
    let index: HashMap<SuperMonomial, usize> = monos.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut a = vec![vec![Rat::zero(); prods.len()]; index.len()];
    for (j, (_, p)) in prods.iter().enumerate() {
        for (i, c) in coefficient_row(p, &index)? {
            a[i][j] = c;
        }
    }
    let mut b = vec![Rat::zero(); index.len()];
    for (i, c) in coefficient_row(candidate, &index)? {
        b[i] = c;
    }
    let solution = dense::solve(&a, &b);
    Ok(Membership {
        member: solution.is_some(),
        products: prods.len(),
        combination: solution.map(|x| {
            prods
                .iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|((idx, _), c)| (idx.clone(), rat::to_text(&c)))
                .collect()
        }),
    })
}

/// `x1^2 x2^2 (x1^2 - x2^2)` in the radial variables.
pub fn literal_radial_target() -> SuperPoly {
    SuperPoly::parse(&radial_table(2), "x1^4*x2^2 - x1^2*x2^4").expect("fixed text")
}

/// The literal target after `x2 -> i x2`, up to sign: `x1^2 x2^2 (x1^2 + x2^2)`.
pub fn twisted_radial_target() -> SuperPoly {
    SuperPoly::parse(&radial_table(2), "x1^4*x2^2 + x1^2*x2^4").expect("fixed text")
}

/// An invariant of `po(0|4)` of degree 6 with a prescribed radial part,
/// tested against the products of `r_1..r_6`.
#[derive(Clone, Debug)]
pub struct ExceptionalInvariant {
    pub invariant: SuperPoly,
    pub radial: SuperPoly,
    pub invariants_dim: usize,
    pub membership: Membership,
}

/// Basis (reduced, canonical order) of the radial parts of the given
/// invariants.
pub fn radial_image(basis: &[SuperPoly], torus: &[String]) -> Result<Vec<SuperPoly>> {
    let radials: Vec<SuperPoly> = basis.iter().map(|p| radial_part(p, torus)).collect::<Result<_>>()?;
    let monos: BTreeSet<SuperMonomial> = radials.iter().flat_map(|p| p.terms().keys().cloned()).collect();
    let monos: Vec<SuperMonomial> = monos.into_iter().collect();
    let index: HashMap<SuperMonomial, usize> = monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = crate::linalg::sparse::Echelon::new(monos.len());
    for p in &radials {
        ech.insert(crate::linalg::sparse::integer_row(&coefficient_row(p, &index)?));
    }
    let table = radial_table(torus.len());
    Ok(ech
        .reduced_rows()
        .into_iter()
        .map(|r| {
            SuperPoly::from_terms(&table, r.into_iter().map(|(c, x)| (monos[c].clone(), Rat::from_integer(x))))
        })
        .collect())
}

/// Search the degree-6 invariants of `po(0|4)` for an element whose radial
/// part equals `target`; `None` when the radial image misses it.
pub fn exceptional_invariant(
    action: &ModuleAction,
    r_family: &[SuperPoly],
    target: &SuperPoly,
    opts: SolverOptions,
) -> Result<Option<ExceptionalInvariant>> {
    let run = invariants(action, 6, opts)?;
    if run.aborted {
        return Err(Error::Budget(run.reason.unwrap_or_default()));
    }
    let torus = po_torus_coordinates(2);
    let radials: Vec<SuperPoly> = run.basis.basis.iter().map(|p| radial_part(p, &torus)).collect::<Result<_>>()?;
    let target = target.embed(&radial_table(2))?;
    let monos: BTreeSet<SuperMonomial> = radials
        .iter()
        .flat_map(|p| p.terms().keys().cloned())
        .chain(target.terms().keys().cloned())
        .collect();
    let index: HashMap<SuperMonomial, usize> = monos.into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut a = vec![vec![Rat::zero(); radials.len()]; index.len()];
    for (j, p) in radials.iter().enumerate() {
        for (i, c) in coefficient_row(p, &index)? {
            a[i][j] = c;
        }
    }
    let mut b = vec![Rat::zero(); index.len()];
    for (i, c) in coefficient_row(&target, &index)? {
        b[i] = c;
    }
    let Some(x) = dense::solve(&a, &b) else {
        return Ok(None);
    };
    let table = action_table(&run.basis.basis, action)?;
    let mut inv = SuperPoly::zero(&table);
    for (p, c) in run.basis.basis.iter().zip(&x) {
        if !c.is_zero() {
            inv.add_assign_scaled(p, c)?;
        }
    }
    let membership = span_membership(&inv, r_family, 6)?;
    Ok(Some(ExceptionalInvariant {
        radial: radial_part(&inv, &torus)?,
        invariant: inv,
        invariants_dim: run.basis.dim(),
        membership,
    }))
}

fn action_table(basis: &[SuperPoly], action: &ModuleAction) -> Result<Arc<VarTable>> {
    match basis.first() {
        Some(p) => Ok(p.table().clone()),
        None => action.var_table(),
    }
}

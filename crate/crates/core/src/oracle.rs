//! Dense brute-force reference for invariant spaces, for cross-checking the
//! block solver on small algebras.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::Result;
use crate::lie::ModuleAction;
use crate::linalg::{dense, sparse};
use crate::rat::Rat;
use crate::supercore::{SuperMonomial, SuperPoly};

/// Each monomial as its list of variable factors, from products of variables.
fn monomials(action: &ModuleAction, d: u32) -> Result<Vec<(SuperMonomial, Vec<usize>)>> {
    let table = action.var_table()?;
    let vars: Vec<SuperPoly> = action
        .labels
        .iter()
        .map(|l| SuperPoly::var(&table, l))
        .collect::<Result<_>>()?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, factors)) = stack.pop() {
        if factors.len() == d as usize {
            let mut p = SuperPoly::one(&table);
            for &f in &factors {
                p = p.mul(&vars[f])?;
            }
            if let Some((m, _)) = p.leading() {
                if seen.insert(m.clone()) {
                    out.push((m.clone(), factors));
                }
            }
            continue;
        }
        for b in start..vars.len() {
            let mut next = factors.clone();
            next.push(b);
            stack.push((b, next));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `D_γ` on `v_{f1} ... v_{fk}`, one factor at a time with Koszul signs.
fn derive(action: &ModuleAction, gamma: usize, factors: &[usize]) -> Result<SuperPoly> {
    let table = action.var_table()?;
    let var = |b: usize| SuperPoly::var(&table, &action.labels[b]);
    let pg = action.algebra.parities[gamma];
    let mut total = SuperPoly::zero(&table);
    for i in 0..factors.len() {
        let passed: u8 = factors[..i].iter().map(|&b| action.parities[b]).sum::<u8>() % 2;
        let mut image = SuperPoly::zero(&table);
        for (c, r) in &action.actions[gamma][factors[i]] {
            image.add_assign_scaled(&var(*c)?, r)?;
        }
        let mut p = SuperPoly::one(&table);
        for (j, &b) in factors.iter().enumerate() {
            p = if j == i { p.mul(&image)? } else { p.mul(&var(b)?)? };
        }
        let s = if pg * passed == 1 { -1 } else { 1 };
        total.add_assign_scaled(&p, &Rat::from_integer(s.into()))?;
    }
    Ok(total)
}

/// Invariants of degree `d` via one dense matrix over all of `S^d`, in
/// the solver's normal form.
pub fn dense_invariants(action: &ModuleAction, d: u32) -> Result<Vec<SuperPoly>> {
    let table = action.var_table()?;
    let monos = monomials(action, d)?;
    let n = monos.len();
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for gamma in 0..action.algebra.dim() {
        let images: Vec<SuperPoly> = monos
            .iter()
            .map(|(m, f)| {
                // sign of the ordered factor product relative to the monomial
                let mut p = SuperPoly::one(&table);
                for &b in f {
                    p = p.mul(&SuperPoly::var(&table, &action.labels[b])?)?;
                }
                let sign = p.coeff(m);
                Ok(derive(action, gamma, f)?.scale(&(Rat::from_integer(1.into()) / sign)))
            })
            .collect::<Result<_>>()?;
        let targets: BTreeSet<SuperMonomial> = images.iter().flat_map(|p| p.terms().keys().cloned()).collect();
        for t in targets {
            rows.push(images.iter().map(|p| p.coeff(&t)).collect());
        }
    }
    let kernel = if rows.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| Rat::from_integer(((i == j) as i64).into())).collect())
            .collect()
    } else {
        dense::kernel(&rows, n)
    };
    Ok(kernel
        .into_iter()
        .map(|v| {
            let row: Vec<(usize, Rat)> = v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect();
            let ints = sparse::clear_denominators(&row);
            SuperPoly::from_terms(
                &table,
                ints.into_iter().map(|(c, x)| (monos[c].0.clone(), Rat::from_integer(x))),
            )
        })
        .collect())
}

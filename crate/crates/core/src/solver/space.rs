use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lie::ModuleAction;
use crate::supercore::{SuperMonomial, Var, VarTable};

/// Parity and total grading of a homogeneous block of `S^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockKey {
    pub parity: u8,
    pub weight: Vec<i64>,
}

/// Module coordinates as polynomial variables.
#[derive(Clone, Debug)]
pub struct Coordinates {
    pub table: Arc<VarTable>,
    /// Variable of each module basis vector.
    pub vars: Vec<Var>,
    pub grading: Vec<Vec<i64>>,
    pub torus_forms: Vec<Vec<i64>>,
    /// Module basis index of each even / odd variable.
    even_index: Vec<usize>,
    odd_index: Vec<usize>,
}

impl Coordinates {
    pub fn new(action: &ModuleAction) -> Result<Self> {
        let table = action.var_table()?;
        let (mut ne, mut no) = (0, 0);
        let mut even_index = Vec::new();
        let mut odd_index = Vec::new();
        let vars = (0..action.dim())
            .map(|b| {
                if action.parities[b] == 0 {
                    even_index.push(b);
                    ne += 1;
                    Var::Even(ne - 1)
                } else {
                    odd_index.push(b);
                    no += 1;
                    Var::Odd(no - 1)
                }
            })
            .collect();
        let width = action.grading.first().map(Vec::len).unwrap_or(0);
        let grading = if action.grading.len() == action.dim() {
            action.grading.clone()
        } else {
            vec![vec![0; width]; action.dim()]
        };
        let torus_forms = action
            .algebra
            .torus_forms
            .iter()
            .filter(|f| f.len() == width)
            .cloned()
            .collect();
        Ok(Coordinates {
            table,
            vars,
            grading,
            torus_forms,
            even_index,
            odd_index,
        })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn width(&self) -> usize {
        self.grading.first().map(Vec::len).unwrap_or(0)
    }

    /// The linear monomial of coordinate `b`.
    pub fn monomial(&self, b: usize) -> SuperMonomial {
        let mut m = SuperMonomial::one(self.table.n_even());
        match self.vars[b] {
            Var::Even(i) => m.even[i] = 1,
            Var::Odd(k) => m.odd = 1 << k,
        }
        m
    }

    pub fn key(&self, u: &SuperMonomial) -> BlockKey {
        let mut w = vec![0; self.width()];
        for (i, e) in u.even.iter().enumerate() {
            if *e > 0 {
                add_scaled(&mut w, &self.grading[self.even_index[i]], *e as i64);
            }
        }
        for (k, &b) in self.odd_index.iter().enumerate() {
            if u.odd >> k & 1 == 1 {
                add_scaled(&mut w, &self.grading[b], 1);
            }
        }
        BlockKey {
            parity: u.parity(),
            weight: w,
        }
    }

    pub fn is_torus_neutral(&self, weight: &[i64]) -> bool {
        self.torus_forms
            .iter()
            .all(|f| f.iter().zip(weight).map(|(a, b)| a * b).sum::<i64>() == 0)
    }
}

fn add_scaled(acc: &mut [i64], v: &[i64], s: i64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += s * x;
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Monomials of `S^d` grouped into homogeneous blocks, each in canonical order.
#[derive(Clone, Debug)]
pub struct BlockedSpace {
    pub degree: u32,
    pub weight_filter: bool,
    pub blocks: BTreeMap<BlockKey, Vec<SuperMonomial>>,
}

impl BlockedSpace {
    /// Enumerate `S^d`. The budget caps the number of stored monomials,
    /// counting the partial even and odd lists as well.
    pub fn new(coords: &Coordinates, degree: u32, weight_filter: bool, budget: usize) -> Result<Self> {
        let ne = coords.even_index.len();
        let no = coords.odd_index.len();
        let d = degree as u64;
        let mut lists: u128 = 0;
        for j in 0..=d.min(no as u64) {
            let r = d - j;
            let evens = if ne == 0 { (r == 0) as u128 } else { binomial(ne as u64 + r - 1, r) };
            lists += evens + binomial(no as u64, j);
        }
        if lists > budget as u128 {
            return Err(Error::Budget(format!(
                "enumerating S^{degree} needs {lists} partial monomials, budget {budget}"
            )));
        }
        let width = coords.width();
        let mut blocks: BTreeMap<BlockKey, Vec<SuperMonomial>> = BTreeMap::new();
        let mut stored = 0usize;
        for j in 0..=degree.min(no as u32) {
            let evens = even_parts(coords, degree - j, width);
            let odds = odd_parts(coords, j, width);
            for (we, es) in &evens {
                for (wo, os) in &odds {
                    let w: Vec<i64> = we.iter().zip(wo).map(|(a, b)| a + b).collect();
                    if weight_filter && !coords.is_torus_neutral(&w) {
                        continue;
                    }
                    stored += es.len() * os.len();
                    if stored > budget {
                        return Err(Error::Budget(format!(
                            "S^{degree} has more than {budget} monomials in the selected blocks"
                        )));
                    }
                    let block = blocks
                        .entry(BlockKey {
                            parity: (j % 2) as u8,
                            weight: w,
                        })
                        .or_default();
                    for e in es {
                        for &o in os {
                            block.push(SuperMonomial { even: e.clone(), odd: o });
                        }
                    }
                }
            }
        }
        for b in blocks.values_mut() {
            b.sort();
        }
        Ok(BlockedSpace {
            degree,
            weight_filter,
            blocks,
        })
    }

    pub fn len(&self) -> usize {
        self.blocks.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All monomials in canonical order.
    pub fn monomials(&self) -> Vec<SuperMonomial> {
        let mut all: Vec<SuperMonomial> = self.blocks.values().flatten().cloned().collect();
        all.sort();
        all
    }
}

fn even_parts(coords: &Coordinates, r: u32, width: usize) -> HashMap<Vec<i64>, Vec<Box<[u32]>>> {
    let ne = coords.even_index.len();
    let mut out: HashMap<Vec<i64>, Vec<Box<[u32]>>> = HashMap::new();
    let mut exps = vec![0u32; ne];
    fn rec(
        coords: &Coordinates,
        i: usize,
        left: u32,
        exps: &mut Vec<u32>,
        w: &mut Vec<i64>,
        out: &mut HashMap<Vec<i64>, Vec<Box<[u32]>>>,
    ) {
        let ne = exps.len();
        if i == ne {
            if left == 0 {
                out.entry(w.clone()).or_default().push(exps.clone().into_boxed_slice());
            }
            return;
        }
        let g = &coords.grading[coords.even_index[i]];
        for e in 0..=left {
            exps[i] = e;
            add_scaled(w, g, e as i64);
            rec(coords, i + 1, left - e, exps, w, out);
            add_scaled(w, g, -(e as i64));
        }
        exps[i] = 0;
    }
    if ne == 0 {
        if r == 0 {
            out.insert(vec![0; width], vec![Vec::new().into_boxed_slice()]);
        }
        return out;
    }
    rec(coords, 0, r, &mut exps, &mut vec![0; width], &mut out);
    out
}

fn odd_parts(coords: &Coordinates, j: u32, width: usize) -> HashMap<Vec<i64>, Vec<u64>> {
    let no = coords.odd_index.len();
    let mut out: HashMap<Vec<i64>, Vec<u64>> = HashMap::new();
    fn rec(
        coords: &Coordinates,
        k: usize,
        left: u32,
        mask: u64,
        w: &mut Vec<i64>,
        out: &mut HashMap<Vec<i64>, Vec<u64>>,
    ) {
        if left == 0 {
            out.entry(w.clone()).or_default().push(mask);
            return;
        }
        let no = coords.odd_index.len();
        if no - k < left as usize {
            return;
        }
        let g = &coords.grading[coords.odd_index[k]];
        add_scaled(w, g, 1);
        rec(coords, k + 1, left - 1, mask | 1 << k, w, out);
        add_scaled(w, g, -1);
        rec(coords, k + 1, left, mask, w, out);
    }
    if (j as usize) <= no {
        rec(coords, 0, j, 0, &mut vec![0; width], &mut out);
    }
    out
}

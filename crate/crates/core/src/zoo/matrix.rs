use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use super::{kernel_vectors, quotient};
use crate::clifford::FockRep;
use crate::error::{Error, Result};
use crate::lie::{LieSuperAlgebra, ModuleAction, ModuleKind, SparseVec};
use crate::rat::{self, Rat};

fn units(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|k| i64::from(i == k)).collect()).collect()
}

fn root(n: usize, i: usize, j: usize) -> Vec<i64> {
    (0..n).map(|k| i64::from(k == i) - i64::from(k == j)).collect()
}

/// `gl(V)` for a graded space with the given basis parities, with the form
/// `str(xy)` and its natural module.
pub fn gl_natural(name: &str, parities: &[u8]) -> (LieSuperAlgebra, ModuleAction) {
    let n = parities.len();
    let idx = |i: usize, j: usize| i * n + j;
    let par = |i: usize, j: usize| (parities[i] + parities[j]) % 2;
    let mut constants: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v: BTreeMap<usize, Rat> = BTreeMap::new();
                    if j == k {
                        *v.entry(idx(i, l)).or_insert_with(|| rat::int(0)) += rat::int(1);
                    }
                    if l == i {
                        let s = if par(i, j) * par(k, l) == 1 { 1 } else { -1 };
                        *v.entry(idx(k, j)).or_insert_with(|| rat::int(0)) += rat::int(s);
                    }
                    let v = crate::lie::sparse_from_map(v);
                    if !v.is_empty() {
                        constants.insert((idx(i, j), idx(k, l)), v);
                    }
                }
            }
        }
    }
    let mut form = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            form.insert((idx(i, j), idx(j, i)), rat::int(rat::parity_sign(parities[i] as u32)));
        }
    }
    let labels = (0..n * n).map(|a| format!("E{}.{}", a / n + 1, a % n + 1)).collect();
    let mut g = LieSuperAlgebra::new(
        name,
        labels,
        (0..n * n).map(|a| par(a / n, a % n)).collect(),
        constants,
    )
    .with_grading((0..n * n).map(|a| root(n, a / n, a % n)).collect(), Vec::new())
    .with_form(form)
    .with_provenance("form", "B(x, y) = str(xy)");
    g.torus_forms = g.realized_torus_forms(&units(n));
    let g = Arc::new(g);
    let actions = (0..n * n)
        .map(|a| {
            (0..n)
                .map(|k| if a % n == k { vec![(a / n, Rat::one())] } else { Vec::new() })
                .collect()
        })
        .collect();
    let module = ModuleAction {
        algebra: g.clone(),
        kind: ModuleKind::Natural,
        labels: (1..=n).map(|i| format!("v{i}")).collect(),
        parities: parities.to_vec(),
        grading: units(n),
        actions,
    };
    ((*g).clone(), module)
}

/// `gl(2^{n-1}|2^{n-1})` on the Fock module of `n` Clifford pairs.
pub fn gl_from_fock(n: usize) -> Result<(LieSuperAlgebra, ModuleAction)> {
    if n == 0 {
        return Err(Error::Invalid("the Fock module needs n >= 1".into()));
    }
    let rep = FockRep::new(n);
    let half = 1usize << (n - 1);
    let (mut g, module) = gl_natural(&format!("gl({half}|{half})"), &rep.parities());
    g.provenance.insert(
        "fock_basis".into(),
        (0..rep.dim()).map(|i| rep.label(i)).collect::<Vec<_>>().join(","),
    );
    Ok((g, module))
}

/// `q(N) = {(A B; B A)}`: even `A_ij`, odd `B_ij`.
pub fn q_algebra(n: usize) -> Result<LieSuperAlgebra> {
    if n == 0 {
        return Err(Error::Invalid("q(N) needs N >= 1".into()));
    }
    let nn = n * n;
    let a = |i: usize, j: usize| i * n + j;
    let b = |i: usize, j: usize| nn + i * n + j;
    let mut constants: BTreeMap<(usize, usize), SparseVec> = BTreeMap::new();
    let mut put = |x: usize, y: usize, terms: Vec<(usize, i64)>| {
        let mut v: BTreeMap<usize, Rat> = BTreeMap::new();
        for (t, c) in terms {
            *v.entry(t).or_insert_with(|| rat::int(0)) += rat::int(c);
        }
        let v = crate::lie::sparse_from_map(v);
        if !v.is_empty() {
            constants.insert((x, y), v);
        }
    };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let comm = |target: &dyn Fn(usize, usize) -> usize, anti: bool| {
                        let mut t = Vec::new();
                        if j == k {
                            t.push((target(i, l), 1));
                        }
                        if l == i {
                            t.push((target(k, j), if anti { 1 } else { -1 }));
                        }
                        t
                    };
                    let aa = comm(&a, false);
                    let ab = comm(&b, false);
                    let ba = comm(&b, false);
                    let bb = comm(&a, true);
                    put(a(i, j), a(k, l), aa);
                    put(a(i, j), b(k, l), ab);
                    put(b(i, j), a(k, l), ba);
                    put(b(i, j), b(k, l), bb);
                }
            }
        }
    }
    let labels = (0..2 * nn)
        .map(|x| {
            let (blk, r) = if x < nn { ("A", x) } else { ("B", x - nn) };
            format!("{blk}{}.{}", r / n + 1, r % n + 1)
        })
        .collect();
    let grading = (0..2 * nn).map(|x| root(n, (x % nn) / n, x % n)).collect();
    let mut g = LieSuperAlgebra::new(
        format!("q({n})"),
        labels,
        (0..2 * nn).map(|x| u8::from(x >= nn)).collect(),
        constants,
    )
    .with_grading(grading, Vec::new())
    .with_provenance("qtr", "qtr((A B; B A)) = tr B");
    g.torus_forms = g.realized_torus_forms(&units(n));
    Ok(g)
}

/// `qtr` on the basis of `q(N)`: 1 on each `B_ii`.
pub fn qtr_functional(n: usize) -> SparseVec {
    (0..n).map(|i| (n * n + i * n + i, Rat::one())).collect()
}

/// `sq(N) = {x in q(N) : qtr x = 0}`.
pub fn sq_algebra(n: usize) -> Result<LieSuperAlgebra> {
    let q = q_algebra(n)?;
    let qtr: BTreeMap<usize, Rat> = qtr_functional(n).into_iter().collect();
    let kernel = kernel_vectors(&q, |i| match qtr.get(&i) {
        Some(c) => vec![(0, c.clone())],
        None => Vec::new(),
    })?;
    super::subalgebra(&q, &format!("sq({n})"), &kernel)
}

/// `psq(N) = sq(N) / (scalar identity)`.
pub fn psq_algebra(n: usize) -> Result<LieSuperAlgebra> {
    let sq = sq_algebra(n)?;
    let identity: SparseVec = (0..sq.dim())
        .filter(|&x| {
            let l = &sq.labels[x];
            l.strip_prefix('A')
                .and_then(|r| r.split_once('.'))
                .is_some_and(|(i, j)| i == j)
        })
        .map(|x| (x, Rat::one()))
        .collect();
    if identity.len() != n {
        return Err(Error::Invalid("sq(N) must contain every A_ii".into()));
    }
    let mut g = quotient(&sq, &format!("psq({n})"), &[identity])?;
    g.provenance.insert("center".into(), "quotient by the scalar identity sum_i A_ii".into());
    Ok(g)
}

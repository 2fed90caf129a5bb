//! Lie superalgebras given by exact structure constants, and their modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{self, Rat};
use crate::supercore::VarTable;

/// Sparse vector in a basis, sorted by index, no zero entries.
pub type SparseVec = Vec<(usize, Rat)>;

pub fn sparse_from_map(map: BTreeMap<usize, Rat>) -> SparseVec {
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

pub fn sparse_axpy(acc: &mut BTreeMap<usize, Rat>, s: &Rat, v: &[(usize, Rat)]) {
    if s.is_zero() {
        return;
    }
    for (i, c) in v {
        let e = acc.entry(*i).or_insert_with(Rat::zero);
        *e += s * c;
        if e.is_zero() {
            acc.remove(i);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSuperAlgebra {
    pub name: String,
    pub labels: Vec<String>,
    pub parities: Vec<u8>,
    /// `[e_a, e_b] = sum_c f_{ab}^c e_c` for `a, b` with a nonzero bracket.
    constants: BTreeMap<(usize, usize), SparseVec>,
    /// Grading vector of every basis element (empty when ungraded). The bracket
    /// is additive in it.
    pub grading: Vec<Vec<i64>>,
    /// Linear forms on grading vectors that must vanish on invariants (the
    /// components coming from a torus inside the algebra).
    pub torus_forms: Vec<Vec<i64>>,
    pub form: Option<BTreeMap<(usize, usize), Rat>>,
    pub provenance: BTreeMap<String, String>,
}

impl LieSuperAlgebra {
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        parities: Vec<u8>,
        constants: BTreeMap<(usize, usize), SparseVec>,
    ) -> Self {
        let dim = labels.len();
        assert_eq!(parities.len(), dim);
        let constants = constants.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        LieSuperAlgebra {
            name: name.into(),
            labels,
            parities,
            constants,
            grading: vec![Vec::new(); dim],
            torus_forms: Vec::new(),
            form: None,
            provenance: BTreeMap::new(),
        }
    }

    pub fn with_grading(mut self, grading: Vec<Vec<i64>>, torus_forms: Vec<Vec<i64>>) -> Self {
        assert_eq!(grading.len(), self.dim());
        self.grading = grading;
        self.torus_forms = torus_forms;
        self
    }

    pub fn with_form(mut self, form: BTreeMap<(usize, usize), Rat>) -> Self {
        self.form = Some(form.into_iter().filter(|(_, c)| !c.is_zero()).collect());
        self
    }

    pub fn with_provenance(mut self, key: &str, value: impl Into<String>) -> Self {
        self.provenance.insert(key.to_string(), value.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn dims_by_parity(&self) -> (usize, usize) {
        let odd = self.parities.iter().filter(|&&p| p == 1).count();
        (self.dim() - odd, odd)
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &[(usize, Rat)] {
        self.constants.get(&(a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn constants(&self) -> &BTreeMap<(usize, usize), SparseVec> {
        &self.constants
    }

    /// Bilinear extension to sparse vectors with rational coefficients.
    pub fn bracket(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (a, xa) in x {
            for (b, yb) in y {
                let v = self.bracket_basis(*a, *b);
                if !v.is_empty() {
                    sparse_axpy(&mut acc, &(xa * yb), v);
                }
            }
        }
        sparse_from_map(acc)
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    /// Parity of a homogeneous sparse vector (zero counts as even).
    pub fn vec_parity(&self, x: &[(usize, Rat)]) -> Option<u8> {
        let mut it = x.iter().map(|(i, _)| self.parities[*i]);
        match it.next() {
            None => Some(0),
            Some(p) => it.all(|q| q == p).then_some(p),
        }
    }

    pub fn check_antisymmetry(&self) -> Result<()> {
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let s = if self.parities[a] * self.parities[b] == 1 { 1 } else { -1 };
                let ab = self.bracket_basis(a, b);
                let ba = self.bracket_basis(b, a);
                let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
                sparse_axpy(&mut acc, &Rat::one(), ab);
                sparse_axpy(&mut acc, &rat::int(-s), ba);
                if !acc.is_empty() {
                    return Err(Error::Invalid(format!(
                        "super-antisymmetry fails for ({}, {})",
                        self.labels[a], self.labels[b]
                    )));
                }
            }
        }
        Ok(())
    }

    fn jacobi_defect(&self, x: usize, y: usize, z: usize) -> bool {
        let one = Rat::one();
        let ex = [(x, one.clone())];
        let ey = [(y, one.clone())];
        let ez = [(z, one)];
        let lhs = self.bracket(&ex, &self.bracket(&ey, &ez));
        let r1 = self.bracket(&self.bracket(&ex, &ey), &ez);
        let r2 = self.bracket(&ey, &self.bracket(&ex, &ez));
        let s = if self.parities[x] * self.parities[y] == 1 { -1 } else { 1 };
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        sparse_axpy(&mut acc, &rat::int(1), &lhs);
        sparse_axpy(&mut acc, &rat::int(-1), &r1);
        sparse_axpy(&mut acc, &rat::int(-s), &r2);
        !acc.is_empty()
    }

    /// Super Jacobi identity on all basis triples, or on `samples` seeded
    /// random triples when given.
    pub fn check_jacobi(&self, samples: Option<(usize, u64)>) -> Result<()> {
        let d = self.dim();
        let fail = |x: usize, y: usize, z: usize| {
            Err(Error::Invalid(format!(
                "super Jacobi fails for ({}, {}, {})",
                self.labels[x], self.labels[y], self.labels[z]
            )))
        };
        match samples {
            None => {
                use rayon::prelude::*;
                let bad = (0..d).into_par_iter().find_map_first(|x| {
                    for y in 0..d {
                        for z in 0..d {
                            if self.jacobi_defect(x, y, z) {
                                return Some((x, y, z));
                            }
                        }
                    }
                    None
                });
                match bad {
                    Some((x, y, z)) => fail(x, y, z),
                    None => Ok(()),
                }
            }
            Some((count, seed)) => {
                use rand::{Rng, SeedableRng};
                if d == 0 {
                    return Ok(());
                }
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    let (x, y, z) = (rng.gen_range(0..d), rng.gen_range(0..d), rng.gen_range(0..d));
                    if self.jacobi_defect(x, y, z) {
                        return fail(x, y, z);
                    }
                }
                Ok(())
            }
        }
    }

    /// Antisymmetry plus Jacobi: exhaustive up to dimension 64, sampled above.
    pub fn validate(&self) -> Result<()> {
        self.check_antisymmetry()?;
        if self.dim() <= 64 {
            self.check_jacobi(None)
        } else {
            self.check_jacobi(Some((20_000, 0x5eed)))
        }
    }

    pub fn form_value(&self, a: usize, b: usize) -> Rat {
        self.form
            .as_ref()
            .and_then(|f| f.get(&(a, b)).cloned())
            .unwrap_or_else(Rat::zero)
    }

    fn form_on(&self, x: &[(usize, Rat)], y: &[(usize, Rat)]) -> Rat {
        let mut s = Rat::zero();
        for (a, xa) in x {
            for (b, yb) in y {
                let v = self.form_value(*a, *b);
                if !v.is_zero() {
                    s += v * xa * yb;
                }
            }
        }
        s
    }

    /// `B([x,y],z) = B(x,[y,z])` on all basis triples.
    pub fn check_form_invariance(&self) -> Result<()> {
        if self.form.is_none() {
            return Ok(());
        }
        let one = Rat::one();
        for x in 0..self.dim() {
            for y in 0..self.dim() {
                let xy = self.bracket_basis(x, y);
                for z in 0..self.dim() {
                    let lhs = self.form_on(xy, &[(z, one.clone())]);
                    let rhs = self.form_on(&[(x, one.clone())], self.bracket_basis(y, z));
                    if lhs != rhs {
                        return Err(Error::Invalid(format!(
                            "form invariance fails for ({}, {}, {})",
                            self.labels[x], self.labels[y], self.labels[z]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Subspace of `candidates` (linear forms on the grading) realised by an
    /// inner element: forms `φ` such that some `x` in the algebra has
    /// `[x, e_a] = φ(grade a) e_a` for every basis element. Returned as
    /// primitive integer vectors; the candidates themselves when all survive.
    pub fn realized_torus_forms(&self, candidates: &[Vec<i64>]) -> Vec<Vec<i64>> {
        let t = candidates.len();
        if t == 0 || self.grading.iter().any(Vec::is_empty) {
            return Vec::new();
        }
        let zero: Vec<usize> = (0..self.dim())
            .filter(|&h| self.parities[h] == 0 && self.grading[h].iter().all(|&w| w == 0))
            .collect();
        let nz = zero.len();
        let ncols = nz + t;
        let mut rows: BTreeMap<(usize, usize), Vec<Rat>> = BTreeMap::new();
        for a in 0..self.dim() {
            let diag = rows.entry((a, a)).or_insert_with(|| vec![Rat::zero(); ncols]);
            for (i, phi) in candidates.iter().enumerate() {
                let w: i64 = phi.iter().zip(&self.grading[a]).map(|(p, g)| p * g).sum();
                diag[nz + i] = rat::int(-w);
            }
            for (k, &h) in zero.iter().enumerate() {
                for (c, r) in self.bracket_basis(h, a) {
                    let row = rows.entry((a, *c)).or_insert_with(|| vec![Rat::zero(); ncols]);
                    row[k] += r;
                }
            }
        }
        let rows: Vec<Vec<Rat>> = rows.into_values().collect();
        let mut lambdas: Vec<Vec<Rat>> = crate::linalg::dense::kernel(&rows, ncols)
            .into_iter()
            .map(|v| v[nz..].to_vec())
            .collect();
        crate::linalg::dense::rref(&mut lambdas);
        if lambdas.len() == t {
            return candidates.to_vec();
        }
        lambdas
            .iter()
            .map(|l| {
                let mut form = vec![Rat::zero(); candidates[0].len()];
                for (li, phi) in l.iter().zip(candidates) {
                    for (f, p) in form.iter_mut().zip(phi) {
                        *f += li * rat::int(*p);
                    }
                }
                rat::primitive_integers(&form)
            })
            .collect()
    }

    /// Degree of a basis element for the block decomposition.
    pub fn grade(&self, a: usize) -> &[i64] {
        &self.grading[a]
    }

    pub fn to_json(&self) -> AlgebraJson {
        AlgebraJson {
            name: Some(self.name.clone()),
            basis: (0..self.dim())
                .map(|i| BasisJson {
                    label: self.labels[i].clone(),
                    parity: self.parities[i],
                    weight: (!self.grading[i].is_empty()).then(|| self.grading[i].clone()),
                })
                .collect(),
            constants: self
                .constants
                .iter()
                .flat_map(|((a, b), v)| {
                    v.iter()
                        .map(move |(c, r)| ConstantJson(*a, *b, *c, rat::to_text(r)))
                })
                .collect(),
            form: self.form.as_ref().map(|f| {
                f.iter()
                    .map(|((a, b), r)| FormJson(*a, *b, rat::to_text(r)))
                    .collect()
            }),
            torus_forms: (!self.torus_forms.is_empty()).then(|| self.torus_forms.clone()),
            provenance: (!self.provenance.is_empty()).then(|| self.provenance.clone()),
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self> {
        let dim = j.basis.len();
        let mut constants: BTreeMap<(usize, usize), BTreeMap<usize, Rat>> = BTreeMap::new();
        for ConstantJson(a, b, c, r) in &j.constants {
            if *a >= dim || *b >= dim || *c >= dim {
                return Err(Error::Invalid(format!("constant index out of range: {a},{b},{c}")));
            }
            let v = rat::from_text(r)?;
            sparse_axpy(constants.entry((*a, *b)).or_default(), &v, &[(*c, Rat::one())]);
        }
        for b in &j.basis {
            if b.parity > 1 {
                return Err(Error::Invalid(format!("parity of {} must be 0 or 1", b.label)));
            }
        }
        let mut g = LieSuperAlgebra::new(
            j.name.clone().unwrap_or_else(|| "imported".into()),
            j.basis.iter().map(|b| b.label.clone()).collect(),
            j.basis.iter().map(|b| b.parity).collect(),
            constants.into_iter().map(|(k, v)| (k, sparse_from_map(v))).collect(),
        );
        let grading: Vec<Vec<i64>> =
            j.basis.iter().map(|b| b.weight.clone().unwrap_or_default()).collect();
        let len = grading.first().map(Vec::len).unwrap_or(0);
        if grading.iter().any(|w| w.len() != len) {
            return Err(Error::Invalid("weights must all have the same length".into()));
        }
        g = g.with_grading(grading, j.torus_forms.clone().unwrap_or_default());
        if let Some(f) = &j.form {
            let mut form = BTreeMap::new();
            for FormJson(a, b, r) in f {
                if *a >= dim || *b >= dim {
                    return Err(Error::Invalid(format!("form index out of range: {a},{b}")));
                }
                form.insert((*a, *b), rat::from_text(r)?);
            }
            g = g.with_form(form);
        }
        if let Some(p) = &j.provenance {
            g.provenance = p.clone();
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisJson {
    pub label: String,
    pub parity: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConstantJson(pub usize, pub usize, pub usize, pub String);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FormJson(pub usize, pub usize, pub String);

/// Interchange format for [`LieSuperAlgebra`].
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AlgebraJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub basis: Vec<BasisJson>,
    pub constants: Vec<ConstantJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<Vec<FormJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_forms: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<BTreeMap<String, String>>,
}

/// Which module of the algebra a [`ModuleAction`] realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    Adjoint,
    Coadjoint,
    Natural,
}

impl ModuleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModuleKind::Adjoint => "adjoint",
            ModuleKind::Coadjoint => "coadjoint",
            ModuleKind::Natural => "natural",
        }
    }
}

/// Exact action of every algebra basis element on a graded module.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    pub algebra: Arc<LieSuperAlgebra>,
    pub kind: ModuleKind,
    pub labels: Vec<String>,
    pub parities: Vec<u8>,
    pub grading: Vec<Vec<i64>>,
    /// `actions[g][b]` lists `(c, r)` with `rho(e_g) v_b = sum r v_c`.
    pub actions: Vec<Vec<SparseVec>>,
}

impl ModuleAction {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Adjoint module on coordinates named `e_<label>`.
    pub fn adjoint(g: &Arc<LieSuperAlgebra>) -> Self {
        let d = g.dim();
        let actions = (0..d)
            .map(|x| (0..d).map(|b| g.bracket_basis(x, b).to_vec()).collect())
            .collect();
        ModuleAction {
            algebra: g.clone(),
            kind: ModuleKind::Adjoint,
            labels: g.labels.iter().map(|l| format!("e_{l}")).collect(),
            parities: g.parities.clone(),
            grading: g.grading.clone(),
            actions,
        }
    }

    /// Dual of the adjoint module, on coordinate functions `c_<label>`.
    pub fn coadjoint(g: &Arc<LieSuperAlgebra>) -> Self {
        let d = g.dim();
        let mut actions = vec![vec![BTreeMap::<usize, Rat>::new(); d]; d];
        for ((x, a), v) in g.constants() {
            let s = if g.parities[*x] * g.parities[*a] == 1 { 1 } else { -1 };
            for (b, r) in v {
                let e = actions[*x][*b].entry(*a).or_insert_with(Rat::zero);
                *e += r * rat::int(s);
            }
        }
        ModuleAction {
            algebra: g.clone(),
            kind: ModuleKind::Coadjoint,
            labels: g.labels.iter().map(|l| coordinate_name(l)).collect(),
            parities: g.parities.clone(),
            grading: g.grading.iter().map(|w| w.iter().map(|x| -x).collect()).collect(),
            actions: actions
                .into_iter()
                .map(|row| row.into_iter().map(sparse_from_map).collect())
                .collect(),
        }
    }

    pub fn trivial_check_dims(&self) -> Result<()> {
        if self.actions.len() != self.algebra.dim()
            || self.actions.iter().any(|a| a.len() != self.dim())
        {
            return Err(Error::Invalid("action matrices have the wrong shape".into()));
        }
        Ok(())
    }

    /// Variables of the polynomial ring on the module basis, in basis order.
    pub fn var_table(&self) -> Result<Arc<VarTable>> {
        let even = (0..self.dim()).filter(|&i| self.parities[i] == 0).map(|i| self.labels[i].clone());
        let odd = (0..self.dim()).filter(|&i| self.parities[i] == 1).map(|i| self.labels[i].clone());
        VarTable::new(even.collect::<Vec<_>>(), odd.collect::<Vec<_>>())
    }

    fn apply(&self, g: usize, v: &[(usize, Rat)]) -> BTreeMap<usize, Rat> {
        let mut acc = BTreeMap::new();
        for (b, r) in v {
            sparse_axpy(&mut acc, r, &self.actions[g][*b]);
        }
        acc
    }

    /// `rho([x,y]) = rho(x) rho(y) - (-1)^{p(x)p(y)} rho(y) rho(x)` on all
    /// basis pairs and module basis vectors.
    pub fn check_representation(&self) -> Result<()> {
        self.trivial_check_dims()?;
        let g = &self.algebra;
        for x in 0..g.dim() {
            for y in 0..g.dim() {
                let s = if g.parities[x] * g.parities[y] == 1 { -1 } else { 1 };
                for b in 0..self.dim() {
                    let mut lhs = BTreeMap::new();
                    for (c, r) in g.bracket_basis(x, y) {
                        sparse_axpy(&mut lhs, r, &self.actions[*c][b]);
                    }
                    let yb = sparse_from_map(self.apply(y, &[(b, Rat::one())]));
                    let xb = sparse_from_map(self.apply(x, &[(b, Rat::one())]));
                    let xyb = sparse_from_map(self.apply(x, &yb));
                    let yxb = sparse_from_map(self.apply(y, &xb));
                    sparse_axpy(&mut lhs, &rat::int(-1), &xyb);
                    sparse_axpy(&mut lhs, &rat::int(s), &yxb);
                    if !lhs.is_empty() {
                        return Err(Error::Invalid(format!(
                            "action does not respect [{}, {}] on {}",
                            g.labels[x], g.labels[y], self.labels[b]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn coordinate_name(label: &str) -> String {
    format!("c_{label}")
}

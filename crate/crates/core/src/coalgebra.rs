//! Coproducts on cubical chains and on homology, algebraic law checks,
//! the primitive filtration and the tensor-coalgebra model.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::chains::{
    tensor_complex, twist_map, verify_chain_map, verify_homotopy, ChainComplex, GradedMap, HomologySummary, MapReport,
    TensorLayout,
};
use crate::cubical::CubSet;
use crate::error::{Error, Result};
use crate::field::{FieldTag, Scalar};
use crate::linalg::{Matrix, PivotBasis, Reduction, SparseVec};
use crate::nerves::TupleCodec;
use crate::shuffles::{enumerate_shuffles, signed_shuffles, Permutation, ShuffleKind};

/// `d_{S,ε}` for an ascending index set, largest index applied first.
pub fn composite_face(x: &CubSet, n: usize, set: &[usize], eps: usize, cell: usize) -> usize {
    let mut c = cell;
    let mut m = n;
    for &i in set.iter().rev() {
        c = x.face(m, i, eps, c);
        m -= 1;
    }
    c
}

/// `(d_{S₂,0}x, d_{S₁,1}x)` with `S₁ = σ(1..p)`, `S₂ = σ(p+1..n)`.
fn shuffle_term(x: &CubSet, n: usize, p: usize, s: &Permutation, cell: usize) -> (usize, usize) {
    let mut s1: Vec<usize> = (1..=p).map(|k| s.at(k)).collect();
    let mut s2: Vec<usize> = (p + 1..=n).map(|k| s.at(k)).collect();
    s1.sort_unstable();
    s2.sort_unstable();
    (composite_face(x, n, &s2, 0, cell), composite_face(x, n, &s1, 1, cell))
}

fn term_vec(c: &ChainComplex, layout: &TensorLayout, terms: &[(usize, usize, usize, i64)], n: usize) -> SparseVec {
    let mut pairs = Vec::with_capacity(terms.len());
    for &(p, a, b, s) in terms {
        let (Some(i), Some(j)) = (c.basis_index(p, a), c.basis_index(n - p, b)) else {
            continue;
        };
        pairs.push((layout.index(p, i, n - p, j), s));
    }
    SparseVec::from_int_pairs(c.field, pairs)
}

/// A coproduct-type map together with the tensor square it lands in.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub map: GradedMap,
    pub tensor: ChainComplex,
    pub layout: TensorLayout,
}

fn coproduct_from_terms(
    c: &ChainComplex,
    top: usize,
    name: &str,
    mut terms: impl FnMut(&CubSet, usize, usize) -> Vec<(usize, usize, usize, i64)>,
) -> Result<Coproduct> {
    let x = c.cubical()?.clone();
    let (tensor, layout) = tensor_complex(c, c, top)?;
    let dims: Vec<usize> = c.dims()[..=layout.top()].to_vec();
    let map = GradedMap::from_fn(name, c.field, 0, &dims, &layout.dims, |n, k| {
        let t = terms(&x, n, c.cells[n][k]);
        term_vec(c, &layout, &t, n)
    })?;
    Ok(Coproduct { map, tensor, layout })
}

/// The cubical diagonal `Δ(x) = Σ_{p+q=n} Σ_{σ∈Sh_{p,q}} ε(σ) d_{S₂,0}x ⊗ d_{S₁,1}x`,
/// with `Δ(x) = x⊗x` in degree 0.
pub fn cubical_coproduct(c: &ChainComplex, top: usize) -> Result<Coproduct> {
    coproduct_from_terms(c, top, "Δ", |x, n, cell| {
        if n == 0 {
            return vec![(0, cell, cell, 1)];
        }
        let mut out = Vec::new();
        for p in 0..=n {
            for (s, e) in signed_shuffles(p, n - p) {
                let (a, b) = shuffle_term(x, n, p, &s, cell);
                out.push((p, a, b, e));
            }
        }
        out
    })
}

/// Reduced part of Δ: only the terms with `p, q ≥ 1`.
pub fn reduced_cubical_coproduct(c: &ChainComplex, top: usize) -> Result<Coproduct> {
    coproduct_from_terms(c, top, "Δ̄", |x, n, cell| {
        let mut out = Vec::new();
        for p in 1..n {
            for (s, e) in signed_shuffles(p, n - p) {
                let (a, b) = shuffle_term(x, n, p, &s, cell);
                out.push((p, a, b, e));
            }
        }
        out
    })
}

/// Single vertex and `d_{1,0} = d_{1,1}` in every stored degree.
pub fn is_lset(x: &CubSet) -> bool {
    x.count(0) == 1 && (1..=x.max_degree).all(|n| (0..x.count(n)).all(|c| x.face(n, 1, 0, c) == x.face(n, 1, 1, c)))
}

/// The reduced halves `Δ_≺` (σ(1) = 1) and `Δ_≻` (σ(p+1) = 1), with the raw shuffle sign ε(σ).
#[derive(Clone, Debug)]
pub struct Halves {
    pub lt: GradedMap,
    pub gt: GradedMap,
    pub tensor: ChainComplex,
    pub layout: TensorLayout,
}

pub fn delta_halves(c: &ChainComplex, top: usize) -> Result<Halves> {
    let x = c.cubical()?.clone();
    if !is_lset(&x) {
        return Err(Error::NotLSet);
    }
    let half = |kind: fn(usize, usize) -> ShuffleKind, name: &str| {
        coproduct_from_terms(c, top, name, |x, n, cell| {
            let mut out = Vec::new();
            for p in 1..n {
                for (s, e) in enumerate_shuffles(kind(p, n - p)).expect("nonempty blocks") {
                    let (a, b) = shuffle_term(x, n, p, &s, cell);
                    out.push((p, a, b, e));
                }
            }
            out
        })
    };
    let lt = half(ShuffleKind::FirstFixed, "Δ≺")?;
    let gt = half(ShuffleKind::FirstIsPPlus1, "Δ≻")?;
    Ok(Halves { lt: lt.map, gt: gt.map, tensor: lt.tensor, layout: lt.layout })
}

impl Halves {
    /// `Δ_≺(x) + x⊗⋆` in positive degrees.
    pub fn lt_augmented(&self, c: &ChainComplex) -> Result<GradedMap> {
        self.augment(c, &self.lt, true)
    }

    /// `Δ_≻(x) + ⋆⊗x` in positive degrees.
    pub fn gt_augmented(&self, c: &ChainComplex) -> Result<GradedMap> {
        self.augment(c, &self.gt, false)
    }

    fn augment(&self, c: &ChainComplex, m: &GradedMap, right_unit: bool) -> Result<GradedMap> {
        let l = &self.layout;
        GradedMap::from_fn(&format!("{}+", m.name), c.field, 0, &c.dims()[..=l.top()], &l.dims, |n, k| {
            let base = m.apply(n, &SparseVec::unit(k, c.field));
            if n == 0 {
                return base;
            }
            let idx = if right_unit { l.index(n, k, 0, 0) } else { l.index(0, 0, n, k) };
            base.add(&SparseVec::unit(idx, c.field))
        })
    }
}

/// `h(x) = d_{1,0}x ⊗ x` on degree-2 cells, zero elsewhere (degree +1).
pub fn degree_two_homotopy(c: &ChainComplex, layout: &TensorLayout) -> Result<GradedMap> {
    let x = c.cubical()?.clone();
    let top = layout.top().saturating_sub(1).min(c.max_degree());
    let src = &c.dims()[..=top];
    GradedMap::from_fn("h", c.field, 1, src, &layout.dims, |n, k| {
        if n != 2 || layout.top() < 3 {
            return SparseVec::new();
        }
        let cell = c.cells[2][k];
        match c.basis_index(1, x.face(2, 1, 0, cell)) {
            Some(i) => SparseVec::unit(layout.index(1, i, 2, k), c.field),
            None => SparseVec::new(),
        }
    })
}

/// Checks `D h + h d = τΔ_≺ − Δ_≻` in degrees ≤ 2.
pub fn verify_degree_two_homotopy(c: &ChainComplex) -> Result<MapReport> {
    if c.max_degree() < 3 {
        return Err(Error::TruncationTooLow { needed: 3, available: c.max_degree() });
    }
    let halves = delta_halves(c, 3)?;
    let tau = twist_map(c.field, &halves.layout, &halves.layout)?;
    let g = tau.compose(&halves.lt)?.truncate(2).with_name("τΔ≺");
    let f = halves.gt.truncate(2);
    let h = degree_two_homotopy(c, &halves.layout)?.truncate(2);
    Ok(verify_homotopy(&f, &g, &h, c, &halves.tensor))
}

/// Chain-map certificates for Δ, Δ_≺, Δ_≻ and the sum identity `Δ_≺ + Δ_≻ = Δ̄`.
#[derive(Clone, Debug, Serialize)]
pub struct CoproductReport {
    pub name: String,
    pub top: usize,
    pub delta: MapReport,
    pub lt: MapReport,
    pub gt: MapReport,
    pub halves_sum_to_reduced: bool,
    pub homotopy: Option<MapReport>,
    pub ok: bool,
}

pub fn coproduct_report(c: &ChainComplex, top: usize) -> Result<CoproductReport> {
    let full = cubical_coproduct(c, top)?;
    let red = reduced_cubical_coproduct(c, top)?;
    let halves = delta_halves(c, top)?;
    let delta = verify_chain_map(&full.map, c, &full.tensor);
    let lt = verify_chain_map(&halves.lt, c, &halves.tensor);
    let gt = verify_chain_map(&halves.gt, c, &halves.tensor);
    let sum = halves.lt.add(&halves.gt)?;
    let halves_sum_to_reduced = sum.first_difference(&red.map).is_none();
    let homotopy = if c.max_degree() >= 3 && top >= 3 { Some(verify_degree_two_homotopy(c)?) } else { None };
    let ok = delta.ok && lt.ok && gt.ok && halves_sum_to_reduced && homotopy.as_ref().is_none_or(|h| h.ok);
    Ok(CoproductReport {
        name: c.name.clone(),
        top: halves.layout.top(),
        delta,
        lt,
        gt,
        halves_sum_to_reduced,
        homotopy,
        ok,
    })
}

/// `π_tgt ∘ f ∘ ι_src` in every degree where both homologies are known.
pub fn induced_on_homology(
    f: &GradedMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
    h_src: &HomologySummary,
    h_tgt: &HomologySummary,
) -> Result<GradedMap> {
    let r = verify_chain_map(f, src, tgt);
    if !r.ok {
        return Err(Error::NotChainMap(format!("{} fails in degree {}", f.name, r.failures[0].degree)));
    }
    let mut mats = Vec::new();
    for n in 0..=h_src.top() {
        let m = n as i64 + f.shift;
        if m < 0 || m as usize > h_tgt.top() || n > f.max_degree() {
            break;
        }
        mats.push(crate::chains::induced_matrix(f, n, h_src, h_tgt));
    }
    Ok(GradedMap { name: format!("H({})", f.name), field: f.field, shift: f.shift, mats })
}

/// Recomputes the induced map after adding boundaries to every representative.
pub fn induced_is_rep_independent(
    f: &GradedMap,
    src: &ChainComplex,
    h_src: &HomologySummary,
    h_tgt: &HomologySummary,
    induced: &GradedMap,
) -> bool {
    for (n, m) in induced.mats.iter().enumerate() {
        if n + 1 > src.max_degree() || src.dim(n + 1) == 0 {
            continue;
        }
        let tgt_n = (n as i64 + f.shift) as usize;
        for (k, z) in h_src.reps[n].iter().enumerate() {
            let b = src.d(n + 1, &SparseVec::unit(k % src.dim(n + 1), f.field));
            let img = h_tgt.project(tgt_n, &f.apply(n, &z.add(&b)));
            if img != m.columns[k] {
                return false;
            }
        }
    }
    true
}

/// Components `[n][p]` of `(π⊗π) ∘ Δ ∘ ι`, each a matrix `H_n → H_p ⊗ H_{n−p}`.
pub fn coproduct_on_homology(delta: &GradedMap, layout: &TensorLayout, h: &HomologySummary) -> Vec<Vec<Matrix>> {
    let top = h.top().min(layout.top());
    let field = h.field;
    let proj: Vec<Vec<SparseVec>> =
        (0..=top).map(|n| (0..h.chain_dims[n]).map(|i| h.project(n, &SparseVec::unit(i, field))).collect()).collect();
    let mut out = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut comps: Vec<Vec<SparseVec>> = vec![Vec::with_capacity(h.dim(n)); n + 1];
        for z in &h.reps[n] {
            let v = delta.apply(n, z);
            let mut acc: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n + 1];
            for (k, c) in &v.entries {
                let (p, i, j) = layout.split(n, *k);
                let q = n - p;
                for (a, x) in &proj[p][i].entries {
                    for (b, y) in &proj[q][j].entries {
                        acc[p].push((a * h.dim(q) + b, c.mul(x).mul(y)));
                    }
                }
            }
            for (p, pairs) in acc.into_iter().enumerate() {
                comps[p].push(SparseVec::from_pairs(pairs));
            }
        }
        out.push(
            comps
                .into_iter()
                .enumerate()
                .map(|(p, cols)| Matrix { field, rows: h.dim(p) * h.dim(n - p), cols: h.dim(n), columns: cols })
                .collect(),
        );
    }
    out
}

/// A graded (co)algebra on explicit bases. Coproduct components are stored
/// augmented: `lt[n][p]: H_n → H_p ⊗ H_{n−p}` for `n ≥ 1`, `0 ≤ p ≤ n`.
/// Degree 0 must be one-dimensional; its basis vector is the unit.
#[derive(Clone, Debug)]
pub struct GradedCoalgebra {
    pub name: String,
    pub field: FieldTag,
    pub dims: Vec<usize>,
    pub labels: Vec<Vec<String>>,
    pub lt: Option<Vec<Vec<Matrix>>>,
    pub gt: Option<Vec<Vec<Matrix>>>,
    pub counit: Vec<Scalar>,
    /// `product[p][q]: H_p ⊗ H_q → H_{p+q}` for `p, q ≥ 1`.
    pub product: Option<Vec<Vec<Matrix>>>,
}

impl GradedCoalgebra {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    fn label(&self, n: usize, i: usize) -> String {
        self.labels.get(n).and_then(|l| l.get(i)).cloned().unwrap_or_else(|| format!("e{n}_{i}"))
    }
}

/// Homology-level coalgebra of an L-set complex, with an optional chain-level
/// product `C⊗C → C` defined on the layout of `halves`.
pub fn homology_coalgebra(
    c: &ChainComplex,
    h: &HomologySummary,
    halves: &Halves,
    product: Option<&GradedMap>,
) -> Result<GradedCoalgebra> {
    let top = h.top().min(halves.layout.top());
    let lt_full = coproduct_on_homology(&halves.lt_augmented(c)?, &halves.layout, h);
    let gt_full = coproduct_on_homology(&halves.gt_augmented(c)?, &halves.layout, h);
    let field = c.field;
    let counit = h.reps[0].iter().map(|z| z.entries.iter().fold(field.zero(), |a, (_, x)| a.add(x))).collect();
    let product = product.map(|m| {
        let mut out = vec![Vec::new(); top + 1];
        for p in 1..top {
            for q in 1..=top - p {
                let cols = (0..h.dim(p) * h.dim(q))
                    .map(|k| {
                        let (a, b) = (k / h.dim(q), k % h.dim(q));
                        let v = halves.layout.tensor(p, &h.reps[p][a], q, &h.reps[q][b]);
                        h.project(p + q, &m.apply(p + q, &v))
                    })
                    .collect();
                out[p].resize_with(q + 1, || Matrix::zeros(field, 0, 0));
                out[p][q] = Matrix { field, rows: h.dim(p + q), cols: h.dim(p) * h.dim(q), columns: cols };
            }
        }
        out
    });
    let labels = (0..=top)
        .map(|n| h.reps[n].iter().map(|z| c.label(n, z.pivot().unwrap_or(0))).map(|l| format!("[{l}]")).collect())
        .collect();
    Ok(GradedCoalgebra {
        name: format!("H({})", c.name),
        field,
        dims: h.dims[..=top].to_vec(),
        labels,
        lt: Some(trim(lt_full, top)),
        gt: Some(trim(gt_full, top)),
        counit,
        product,
    })
}

fn trim(mut comps: Vec<Vec<Matrix>>, top: usize) -> Vec<Vec<Matrix>> {
    comps.truncate(top + 1);
    if let Some(first) = comps.first_mut() {
        first.clear();
    }
    comps
}

/// The coalgebra on chains themselves (meaningful when `d = 0`, where it equals homology).
pub fn chain_coalgebra(
    c: &ChainComplex,
    halves: &Halves,
    product: Option<&GradedMap>,
    top: usize,
) -> Result<GradedCoalgebra> {
    let top = top.min(halves.layout.top());
    let field = c.field;
    let lt = halves.lt_augmented(c)?;
    let gt = halves.gt_augmented(c)?;
    let l = &halves.layout;
    let dims: Vec<usize> = (0..=top).map(|n| c.dim(n)).collect();
    let comps = |m: &GradedMap| -> Vec<Vec<Matrix>> {
        (0..=top)
            .map(|n| {
                if n == 0 {
                    return Vec::new();
                }
                let mut cols: Vec<Vec<SparseVec>> = vec![Vec::new(); n + 1];
                for k in 0..dims[n] {
                    let v = m.apply(n, &SparseVec::unit(k, field));
                    let mut acc: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); n + 1];
                    for (t, a) in &v.entries {
                        let (p, i, j) = l.split(n, *t);
                        acc[p].push((i * dims[n - p] + j, a.clone()));
                    }
                    for (p, pairs) in acc.into_iter().enumerate() {
                        cols[p].push(SparseVec::from_pairs(pairs));
                    }
                }
                cols.into_iter()
                    .enumerate()
                    .map(|(p, cs)| Matrix { field, rows: dims[p] * dims[n - p], cols: dims[n], columns: cs })
                    .collect()
            })
            .collect()
    };
    let product = product.map(|m| {
        let mut out = vec![Vec::new(); top + 1];
        for p in 1..top {
            out[p].resize_with(top - p + 1, || Matrix::zeros(field, 0, 0));
            for q in 1..=top - p {
                let cols = (0..dims[p] * dims[q])
                    .map(|k| m.apply(p + q, &SparseVec::unit(l.index(p, k / dims[q], q, k % dims[q]), field)))
                    .collect();
                out[p][q] = Matrix { field, rows: dims[p + q], cols: dims[p] * dims[q], columns: cols };
            }
        }
        out
    });
    Ok(GradedCoalgebra {
        name: c.name.clone(),
        field,
        labels: (0..=top).map(|n| c.labels[n].clone()).collect(),
        lt: Some(comps(&lt)),
        gt: Some(comps(&gt)),
        counit: vec![field.one(); dims[0]],
        dims,
        product,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum Law {
    CoZinbiel,
    Codendriform,
    CocommutativeOfSum,
    /// Δ_≻ = τΔ_≺ on the reduced part.
    GtIsTwistedLt,
    Counit,
    Hopf,
    /// `Δ_≺ ∘ ⋆ = ⋆_⊗ ∘ (Δ_≺ ⊗ Δ)`.
    SemiHopf,
    /// `Δ_≺ ∘ ⋆ = ⋆_⊗ ∘ (Δ ⊗ Δ_≺)`, the other placement of Δ_≺.
    SemiHopfLeft,
    AssociativeProduct,
    CommutativeProduct,
}

impl Law {
    pub const ALL: [Law; 10] = [
        Law::CoZinbiel,
        Law::Codendriform,
        Law::CocommutativeOfSum,
        Law::GtIsTwistedLt,
        Law::Counit,
        Law::Hopf,
        Law::SemiHopf,
        Law::SemiHopfLeft,
        Law::AssociativeProduct,
        Law::CommutativeProduct,
    ];

    pub fn parse(s: &str) -> Result<Law> {
        let k = s.to_ascii_lowercase().replace(['-', '_'], "");
        Law::ALL
            .into_iter()
            .find(|l| format!("{l:?}").to_ascii_lowercase() == k)
            .ok_or_else(|| Error::BadInput(format!("unknown law '{s}'")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawFailure {
    pub degree: usize,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub law: Law,
    pub ok: bool,
    pub max_degree: usize,
    pub checked: usize,
    pub failures: Vec<LawFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LawsReport {
    pub name: String,
    pub ok: bool,
    pub laws: Vec<LawReport>,
}

type Key = Vec<(usize, usize)>;
type MultiTensor = BTreeMap<Key, Scalar>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Co {
    Lt,
    Gt,
    TwLt,
    Sum,
    Cocomm,
}

fn sign(field: FieldTag, exp: usize) -> Scalar {
    field.from_i64(if exp % 2 == 0 { 1 } else { -1 })
}

fn insert(t: &mut MultiTensor, k: Key, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match t.get_mut(&k) {
        Some(v) => {
            *v = v.add(&c);
            if v.is_zero() {
                t.remove(&k);
            }
        }
        None => {
            t.insert(k, c);
        }
    }
}

struct Evaluator<'a> {
    g: &'a GradedCoalgebra,
    lt: &'a [Vec<Matrix>],
    gt: Option<&'a [Vec<Matrix>]>,
}

impl Evaluator<'_> {
    /// Terms `(p, a, q, b, c)` of a coproduct on basis vector i of degree n.
    fn terms(&self, co: Co, reduced: bool, n: usize, i: usize) -> Vec<(usize, usize, usize, usize, Scalar)> {
        let field = self.g.field;
        let from = |comps: &[Vec<Matrix>], twist: bool| {
            let mut out = Vec::new();
            let range = if reduced { 1..n } else { 0..n + 1 };
            for p in range {
                let q = n - p;
                let dq = self.g.dim(q);
                if dq == 0 {
                    continue;
                }
                for (r, c) in &comps[n][p].columns[i].entries {
                    let (a, b) = (r / dq, r % dq);
                    if twist {
                        out.push((q, b, p, a, c.mul(&sign(field, p * q))));
                    } else {
                        out.push((p, a, q, b, c.clone()));
                    }
                }
            }
            out
        };
        match co {
            Co::Lt => from(self.lt, false),
            Co::TwLt => from(self.lt, true),
            Co::Gt => from(self.gt.expect("checked"), false),
            Co::Sum => {
                let mut v = from(self.lt, false);
                v.extend(from(self.gt.expect("checked"), false));
                v
            }
            Co::Cocomm => {
                let mut v = from(self.lt, false);
                v.extend(from(self.lt, true));
                v
            }
        }
    }

    fn co_at(&self, t: &MultiTensor, slot: usize, co: Co, reduced: bool) -> MultiTensor {
        let mut out = MultiTensor::new();
        for (k, c) in t {
            let (n, i) = k[slot];
            if n == 0 {
                continue;
            }
            for (p, a, q, b, x) in self.terms(co, reduced, n, i) {
                let mut nk = k[..slot].to_vec();
                nk.push((p, a));
                nk.push((q, b));
                nk.extend_from_slice(&k[slot + 1..]);
                insert(&mut out, nk, c.mul(&x));
            }
        }
        out
    }

    fn twist_at(&self, t: &MultiTensor, slot: usize) -> MultiTensor {
        let mut out = MultiTensor::new();
        for (k, c) in t {
            let mut nk = k.clone();
            nk.swap(slot, slot + 1);
            insert(&mut out, nk, c.mul(&sign(self.g.field, k[slot].0 * k[slot + 1].0)));
        }
        out
    }

    fn mul_at(&self, t: &MultiTensor, slot: usize) -> Result<MultiTensor> {
        let prod = self.g.product.as_ref().ok_or_else(|| Error::MissingStructure("product".into()))?;
        let mut out = MultiTensor::new();
        for (k, c) in t {
            let ((p, a), (q, b)) = (k[slot], k[slot + 1]);
            let mut push = |deg: usize, idx: usize, x: Scalar| {
                let mut nk = k[..slot].to_vec();
                nk.push((deg, idx));
                nk.extend_from_slice(&k[slot + 2..]);
                insert(&mut out, nk, c.mul(&x));
            };
            if p == 0 {
                push(q, b, self.g.field.one());
            } else if q == 0 {
                push(p, a, self.g.field.one());
            } else {
                let m = prod
                    .get(p)
                    .and_then(|r| r.get(q))
                    .filter(|m| m.rows > 0 || self.g.dim(p + q) == 0)
                    .ok_or_else(|| Error::MissingStructure(format!("product in bidegree ({p},{q})")))?;
                for (r, x) in &m.columns[a * self.g.dim(q) + b].entries {
                    push(p + q, *r, x.clone());
                }
            }
        }
        Ok(out)
    }

    /// `(a⊗b)⊗(c⊗d) ↦ (−1)^{|b||c|} (a⋆c)⊗(b⋆d)`.
    fn star_tensor(&self, t: &MultiTensor) -> Result<MultiTensor> {
        let swapped = self.twist_at(t, 1);
        let first = self.mul_at(&swapped, 0)?;
        self.mul_at(&first, 1)
    }
}

fn single(n: usize, i: usize, field: FieldTag) -> MultiTensor {
    MultiTensor::from([(vec![(n, i)], field.one())])
}

const MAX_WITNESSES: usize = 5;

/// Checks each requested law as an exact identity through `max_degree`.
pub fn check_laws(g: &GradedCoalgebra, laws: &[Law], max_degree: usize) -> Result<LawsReport> {
    let lt = g.lt.as_deref().ok_or_else(|| Error::MissingStructure("Δ≺".into()))?;
    if g.dim(0) != 1 {
        return Err(Error::MissingStructure("one-dimensional degree 0".into()));
    }
    let top = max_degree.min(g.top());
    let ev = Evaluator { g, lt, gt: g.gt.as_deref() };
    let f = g.field;
    let mut reports = Vec::new();
    for &law in laws {
        let needs_gt = matches!(law, Law::Codendriform | Law::GtIsTwistedLt);
        if needs_gt && ev.gt.is_none() {
            return Err(Error::MissingStructure("Δ≻".into()));
        }
        let needs_prod = matches!(
            law,
            Law::Hopf | Law::SemiHopf | Law::SemiHopfLeft | Law::AssociativeProduct | Law::CommutativeProduct
        );
        if needs_prod && g.product.is_none() {
            return Err(Error::MissingStructure("product".into()));
        }
        let mut failures = Vec::new();
        let mut checked = 0;
        let fail = |failures: &mut Vec<LawFailure>, degree: usize, witness: String| {
            if failures.len() < MAX_WITNESSES {
                failures.push(LawFailure { degree, witness });
            }
        };
        if !needs_prod {
            for n in 1..=top {
                for i in 0..g.dim(n) {
                    checked += 1;
                    let x = single(n, i, f);
                    let ok = match law {
                        Law::CoZinbiel => {
                            let d = ev.co_at(&x, 0, Co::Lt, true);
                            ev.co_at(&d, 0, Co::Lt, true) == ev.co_at(&d, 1, Co::Cocomm, true)
                        }
                        Law::Codendriform => {
                            let l = ev.co_at(&x, 0, Co::Lt, true);
                            let r = ev.co_at(&x, 0, Co::Gt, true);
                            ev.co_at(&l, 0, Co::Lt, true) == ev.co_at(&l, 1, Co::Sum, true)
                                && ev.co_at(&l, 0, Co::Gt, true) == ev.co_at(&r, 1, Co::Lt, true)
                                && ev.co_at(&r, 1, Co::Gt, true) == ev.co_at(&r, 0, Co::Sum, true)
                        }
                        Law::CocommutativeOfSum => {
                            let d = ev.co_at(&x, 0, Co::Cocomm, true);
                            ev.twist_at(&d, 0) == d
                                && ev.co_at(&d, 0, Co::Cocomm, true) == ev.co_at(&d, 1, Co::Cocomm, true)
                        }
                        Law::GtIsTwistedLt => ev.co_at(&x, 0, Co::Gt, true) == ev.co_at(&x, 0, Co::TwLt, true),
                        Law::Counit => {
                            let c0 = &g.counit[0];
                            let left_zero = lt[n][0].columns[i].is_zero();
                            let right = lt[n][n].columns[i].scale(c0) == SparseVec::unit(i, f);
                            left_zero && right
                        }
                        _ => unreachable!(),
                    };
                    if !ok {
                        fail(&mut failures, n, g.label(n, i));
                    }
                }
            }
        } else if law == Law::AssociativeProduct {
            for (p, q, r) in triples(top) {
                for a in 0..g.dim(p) {
                    for b in 0..g.dim(q) {
                        for c in 0..g.dim(r) {
                            checked += 1;
                            let t = MultiTensor::from([(vec![(p, a), (q, b), (r, c)], f.one())]);
                            let l = ev.mul_at(&ev.mul_at(&t, 0)?, 0)?;
                            let rr = ev.mul_at(&ev.mul_at(&t, 1)?, 0)?;
                            if l != rr {
                                fail(
                                    &mut failures,
                                    p + q + r,
                                    format!("{}⊗{}⊗{}", g.label(p, a), g.label(q, b), g.label(r, c)),
                                );
                            }
                        }
                    }
                }
            }
        } else {
            for p in 1..top {
                for q in 1..=top - p {
                    for a in 0..g.dim(p) {
                        for b in 0..g.dim(q) {
                            checked += 1;
                            let t = MultiTensor::from([(vec![(p, a), (q, b)], f.one())]);
                            let prod = ev.mul_at(&t, 0)?;
                            let ok = match law {
                                Law::CommutativeProduct => prod == ev.mul_at(&ev.twist_at(&t, 0), 0)?,
                                Law::Hopf => {
                                    let l = ev.co_at(&prod, 0, Co::Cocomm, false);
                                    let r = ev.co_at(&ev.co_at(&t, 1, Co::Cocomm, false), 0, Co::Cocomm, false);
                                    l == ev.star_tensor(&r)?
                                }
                                Law::SemiHopf | Law::SemiHopfLeft => {
                                    let (first, second) =
                                        if law == Law::SemiHopf { (Co::Lt, Co::Cocomm) } else { (Co::Cocomm, Co::Lt) };
                                    let l = ev.co_at(&prod, 0, Co::Lt, false);
                                    let r = ev.co_at(&ev.co_at(&t, 1, second, false), 0, first, false);
                                    l == ev.star_tensor(&r)?
                                }
                                _ => unreachable!(),
                            };
                            if !ok {
                                fail(&mut failures, p + q, format!("{}⊗{}", g.label(p, a), g.label(q, b)));
                            }
                        }
                    }
                }
            }
        }
        reports.push(LawReport { law, ok: failures.is_empty(), max_degree: top, checked, failures });
    }
    Ok(LawsReport { name: g.name.clone(), ok: reports.iter().all(|r| r.ok), laws: reports })
}

fn triples(top: usize) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for p in 1..=top {
        for q in 1..=top {
            for r in 1..=top {
                if p + q + r <= top {
                    v.push((p, q, r));
                }
            }
        }
    }
    v
}

/// Dimensions of the primitive filtration and the cofreeness count.
#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveReport {
    pub name: String,
    pub max_degree: usize,
    pub dims: Vec<usize>,
    /// `prim_dims[n]` for `n ≥ 1`; entry 0 is unused and zero.
    pub prim_dims: Vec<usize>,
    /// `filtration[r-1][n] = dim F_r ∩ H_n`.
    pub filtration: Vec<Vec<usize>>,
    pub connected: bool,
    /// `Σ_{compositions of n} Π dim Prim_{n_i}` per degree.
    pub cofree_dims: Vec<usize>,
    pub cofree_dims_match: bool,
}

fn kernel_basis(m: &Matrix) -> Result<Vec<SparseVec>> {
    Ok(Reduction::new(m)?.kernel)
}

pub fn primitive_analysis(g: &GradedCoalgebra, max_degree: usize) -> Result<PrimitiveReport> {
    let lt = g.lt.as_deref().ok_or_else(|| Error::MissingStructure("Δ≺".into()))?;
    let top = max_degree.min(g.top());
    let f = g.field;
    // filt[n] = basis of F_{r} ∩ H_n for the current r
    let full = |n: usize| (0..g.dim(n)).map(|i| SparseVec::unit(i, f)).collect::<Vec<_>>();
    let mut filtration: Vec<Vec<usize>> = Vec::new();
    let mut prev: Vec<Vec<SparseVec>> = vec![Vec::new(); top + 1];
    for r in 1..=top.max(1) {
        let mut cur: Vec<Vec<SparseVec>> = vec![Vec::new(); top + 1];
        for n in 1..=top {
            // reduce Δ̄≺ e_k modulo F_{r−1,p} ⊗ F_{r−1,q} in each block
            let mut rows = 0;
            let mut offsets = Vec::new();
            for p in 1..n {
                offsets.push(rows);
                rows += g.dim(p) * g.dim(n - p);
            }
            let bases: Vec<PivotBasis> = (1..n)
                .map(|p| {
                    let q = n - p;
                    let mut b = PivotBasis::new(g.dim(p) * g.dim(q));
                    if r > 1 {
                        for u in &prev[p] {
                            for w in &prev[q] {
                                let mut pairs = Vec::new();
                                for (i, x) in &u.entries {
                                    for (j, y) in &w.entries {
                                        pairs.push((i * g.dim(q) + j, x.mul(y)));
                                    }
                                }
                                b.insert_reduced(SparseVec::from_pairs(pairs));
                            }
                        }
                    }
                    b
                })
                .collect();
            let cols = (0..g.dim(n))
                .map(|k| {
                    let mut pairs = Vec::new();
                    for p in 1..n {
                        let col = &lt[n][p].columns[k];
                        let (_, rem) = bases[p - 1].decompose(col);
                        pairs.extend(rem.entries.into_iter().map(|(i, x)| (offsets[p - 1] + i, x)));
                    }
                    SparseVec::from_pairs(pairs)
                })
                .collect();
            let m = Matrix { field: f, rows, cols: g.dim(n), columns: cols };
            cur[n] = if rows == 0 { full(n) } else { kernel_basis(&m)? };
        }
        filtration.push((0..=top).map(|n| if n == 0 { 0 } else { cur[n].len() }).collect());
        prev = cur;
    }
    let connected = (1..=top).all(|n| filtration.last().map(|f| f[n]).unwrap_or(0) == g.dim(n));
    let mut prim_dims = filtration.first().cloned().unwrap_or_else(|| vec![0; top + 1]);
    prim_dims[0] = 0;
    let mut cofree_dims = vec![1usize; top + 1];
    for n in 1..=top {
        cofree_dims[n] = (1..=n).map(|k| prim_dims[k] * cofree_dims[n - k]).sum();
    }
    let cofree_dims_match = (1..=top).all(|n| cofree_dims[n] == g.dim(n));
    Ok(PrimitiveReport {
        name: g.name.clone(),
        max_degree: top,
        dims: g.dims[..=top].to_vec(),
        prim_dims,
        filtration,
        connected,
        cofree_dims,
        cofree_dims_match,
    })
}

/// Words on graded letters, as a basis of T(V) in degrees ≤ `max_degree`.
#[derive(Clone, Debug)]
pub struct TensorModel {
    pub generator_degrees: Vec<usize>,
    pub max_degree: usize,
    pub words: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl TensorModel {
    pub fn degree(&self, w: &[usize]) -> usize {
        w.iter().map(|&l| self.generator_degrees[l]).sum()
    }

    pub fn word_index(&self, w: &[usize]) -> Option<usize> {
        self.index.get(self.degree(w))?.get(w).copied()
    }

    /// Terms of the augmented half-shuffle coproduct `Δ_≺(w)`, as `(left, right, sign)`.
    pub fn half_shuffle(&self, w: &[usize]) -> Vec<(Vec<usize>, Vec<usize>, i64)> {
        let m = w.len();
        let mut out = vec![(w.to_vec(), Vec::new(), 1)];
        for p in 1..m {
            for (s, _) in enumerate_shuffles(ShuffleKind::FirstFixed(p, m - p)).expect("nonempty blocks") {
                let order: Vec<usize> = (1..=m).map(|k| s.at(k) - 1).collect();
                let mut parity = 0;
                for k in 0..m {
                    for l in k + 1..m {
                        if order[k] > order[l] {
                            parity += self.generator_degrees[w[order[k]]] * self.generator_degrees[w[order[l]]];
                        }
                    }
                }
                let left = order[..p].iter().map(|&i| w[i]).collect();
                let right = order[p..].iter().map(|&i| w[i]).collect();
                out.push((left, right, if parity % 2 == 0 { 1 } else { -1 }));
            }
        }
        out
    }

    /// Half-shuffle Δ_≺, Δ_≻ := τΔ_≺ and concatenation, through `max_degree`.
    pub fn coalgebra(&self, field: FieldTag) -> GradedCoalgebra {
        let top = self.max_degree;
        let dims: Vec<usize> = self.words.iter().map(|w| w.len()).collect();
        let mut lt = vec![Vec::new()];
        let mut gt = vec![Vec::new()];
        for n in 1..=top {
            let mut cl: Vec<Vec<Vec<(usize, Scalar)>>> = vec![vec![Vec::new(); dims[n]]; n + 1];
            let mut cg = cl.clone();
            for (k, w) in self.words[n].iter().enumerate() {
                for (l, r, s) in self.half_shuffle(w) {
                    let (p, q) = (self.degree(&l), self.degree(&r));
                    let (a, b) = (self.word_index(&l).unwrap(), self.word_index(&r).unwrap());
                    cl[p][k].push((a * dims[q] + b, field.from_i64(s)));
                    let ts = if (p * q) % 2 == 0 { s } else { -s };
                    cg[q][k].push((b * dims[p] + a, field.from_i64(ts)));
                }
            }
            let mk = |c: Vec<Vec<Vec<(usize, Scalar)>>>| -> Vec<Matrix> {
                c.into_iter()
                    .enumerate()
                    .map(|(p, cols)| Matrix {
                        field,
                        rows: dims[p] * dims[n - p],
                        cols: dims[n],
                        columns: cols.into_iter().map(SparseVec::from_pairs).collect(),
                    })
                    .collect()
            };
            lt.push(mk(cl));
            gt.push(mk(cg));
        }
        let mut product = vec![Vec::new(); top + 1];
        for p in 1..top {
            product[p].resize_with(top - p + 1, || Matrix::zeros(field, 0, 0));
            for q in 1..=top - p {
                let mut cols = Vec::with_capacity(dims[p] * dims[q]);
                for u in &self.words[p] {
                    for v in &self.words[q] {
                        let mut w = u.clone();
                        w.extend_from_slice(v);
                        cols.push(SparseVec::unit(self.word_index(&w).unwrap(), field));
                    }
                }
                product[p][q] = Matrix { field, rows: dims[p + q], cols: dims[p] * dims[q], columns: cols };
            }
        }
        let labels = self
            .words
            .iter()
            .map(|ws| {
                ws.iter()
                    .map(|w| {
                        if w.is_empty() {
                            "1".into()
                        } else {
                            w.iter().map(|l| format!("x{}", l + 1)).collect::<String>()
                        }
                    })
                    .collect()
            })
            .collect();
        GradedCoalgebra {
            name: format!("T(V), |V| = {:?}", self.generator_degrees),
            field,
            dims,
            labels,
            lt: Some(lt),
            gt: Some(gt),
            counit: vec![field.one()],
            product: Some(product),
        }
    }
}

pub fn half_shuffle_model(generator_degrees: &[usize], max_degree: usize) -> Result<TensorModel> {
    if generator_degrees.iter().any(|&d| d == 0) {
        return Err(Error::BadInput("generators must have positive degree".into()));
    }
    let mut words: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_degree + 1];
    words[0].push(Vec::new());
    for n in 1..=max_degree {
        let mut level = Vec::new();
        for (l, &d) in generator_degrees.iter().enumerate() {
            if d <= n {
                for w in &words[n - d] {
                    let mut nw = vec![l];
                    nw.extend_from_slice(w);
                    level.push(nw);
                }
            }
        }
        level.sort();
        words[n] = level;
    }
    let index = words.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect()).collect();
    Ok(TensorModel { generator_degrees: generator_degrees.to_vec(), max_degree, words, index })
}

/// Alexander–Whitney diagonal on a bar complex:
/// `(g_1, …, g_n) ↦ Σ_p (g_1, …, g_p) ⊗ (g_{p+1}, …, g_n)`.
pub fn alexander_whitney(bar: &ChainComplex, order: usize, top: usize) -> Result<Coproduct> {
    let (tensor, layout) = tensor_complex(bar, bar, top)?;
    let codec = TupleCodec { base: order };
    let dims: Vec<usize> = bar.dims()[..=layout.top()].to_vec();
    let map = GradedMap::from_fn("AW", bar.field, 0, &dims, &layout.dims, |n, k| {
        let t = codec.decode(bar.cells[n][k], n);
        let mut pairs = Vec::new();
        for p in 0..=n {
            let (a, b) = (codec.encode(&t[..p]), codec.encode(&t[p..]));
            if let (Some(i), Some(j)) = (bar.basis_index(p, a), bar.basis_index(n - p, b)) {
                pairs.push((layout.index(p, i, n - p, j), 1));
            }
        }
        SparseVec::from_int_pairs(bar.field, pairs)
    })?;
    Ok(Coproduct { map, tensor, layout })
}

/// Result of comparing `(S⊗S) ∘ Δ` with `AW ∘ S` on homology.
#[derive(Clone, Debug, Serialize)]
pub struct CoalgebraMorphismReport {
    pub name: String,
    pub degrees: Vec<usize>,
    pub ok: bool,
    pub failures: Vec<LawFailure>,
}

/// Compares `(S_*⊗S_*) ∘ Δ_*` and `AW_* ∘ S_*` as matrices on homology coordinates.
pub fn s_coalgebra_check(
    g: &crate::racks::FiniteGroup,
    field: FieldTag,
    top: usize,
) -> Result<CoalgebraMorphismReport> {
    let s =
        crate::chains::s_map(crate::chains::SMode::RackFormula, g, field, top + 1, crate::nerves::DEFAULT_CELL_BUDGET)?;
    let hs = crate::chains::homology(&s.source, top)?;
    let ht = crate::chains::homology(&s.target, top)?;
    let delta = cubical_coproduct(&s.source, top)?;
    let aw = alexander_whitney(&s.target, g.order(), top)?;
    let ds = coproduct_on_homology(&delta.map, &delta.layout, &hs);
    let dt = coproduct_on_homology(&aw.map, &aw.layout, &ht);
    let sh = induced_on_homology(&s.map, &s.source, &s.target, &hs, &ht)?;
    let mut failures = Vec::new();
    for n in 0..=top {
        for p in 0..=n {
            let q = n - p;
            // (S_p ⊗ S_q) as a Kronecker product on H_p ⊗ H_q
            let kron = kronecker(&sh.mats[p], &sh.mats[q]);
            let lhs = kron.mul(&ds[n][p])?;
            let rhs = dt[n][p].mul(&sh.mats[n])?;
            if lhs != rhs {
                failures.push(LawFailure { degree: n, witness: format!("component ({p},{q})") });
            }
        }
    }
    Ok(CoalgebraMorphismReport {
        name: g.name.clone(),
        degrees: (0..=top).collect(),
        ok: failures.is_empty(),
        failures,
    })
}

/// `(A ⊗ B)[(i·rB + j), (k·cB + l)] = A[i,k]·B[j,l]`.
pub fn kronecker(a: &Matrix, b: &Matrix) -> Matrix {
    let mut columns = Vec::with_capacity(a.cols * b.cols);
    for ca in &a.columns {
        for cb in &b.columns {
            let mut pairs = Vec::with_capacity(ca.len() * cb.len());
            for (i, x) in &ca.entries {
                for (j, y) in &cb.entries {
                    pairs.push((i * b.rows + j, x.mul(y)));
                }
            }
            columns.push(SparseVec::from_pairs(pairs));
        }
    }
    Matrix { field: a.field, rows: a.rows * b.rows, cols: a.cols * b.cols, columns }
}

#[cfg(test)]
mod tests;

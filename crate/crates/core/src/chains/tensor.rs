use super::complex::ChainComplex;
use super::maps::GradedMap;
use crate::error::Result;
use crate::field::{FieldTag, Scalar};
use crate::linalg::{Matrix, SparseVec};

/// Basis layout of `(A ⊗ B)_n = ⊕_{p+q=n} A_p ⊗ B_q`: blocks ordered by p,
/// and inside a block `index = offset + i·dim B_q + j`.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub offsets: Vec<Vec<usize>>,
    pub dims: Vec<usize>,
}

impl TensorLayout {
    pub fn new(left: &[usize], right: &[usize], top: usize) -> Self {
        let l = |p: usize| left.get(p).copied().unwrap_or(0);
        let r = |q: usize| right.get(q).copied().unwrap_or(0);
        let mut offsets = Vec::new();
        let mut dims = Vec::new();
        for n in 0..=top {
            let mut off = Vec::with_capacity(n + 1);
            let mut acc = 0;
            for p in 0..=n {
                off.push(acc);
                acc += l(p) * r(n - p);
            }
            offsets.push(off);
            dims.push(acc);
        }
        TensorLayout { left: left.to_vec(), right: right.to_vec(), offsets, dims }
    }

    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    fn r(&self, q: usize) -> usize {
        self.right.get(q).copied().unwrap_or(0)
    }

    pub fn index(&self, p: usize, i: usize, q: usize, j: usize) -> usize {
        self.offsets[p + q][p] + i * self.r(q) + j
    }

    /// `(p, i, j)` for a basis index in total degree n.
    pub fn split(&self, n: usize, k: usize) -> (usize, usize, usize) {
        let off = &self.offsets[n];
        let p = match off.binary_search(&k) {
            Ok(mut p) => {
                // skip empty blocks sharing this offset
                while p + 1 < off.len() && off[p + 1] == k {
                    p += 1;
                }
                p
            }
            Err(p) => p - 1,
        };
        let rq = self.r(n - p);
        let rel = k - off[p];
        (p, rel / rq, rel % rq)
    }

    /// `u ⊗ w` with `u ∈ A_p`, `w ∈ B_q`.
    pub fn tensor(&self, p: usize, u: &SparseVec, q: usize, w: &SparseVec) -> SparseVec {
        if p + q > self.top() {
            return SparseVec::new();
        }
        let mut pairs = Vec::with_capacity(u.len() * w.len());
        for (i, a) in &u.entries {
            for (j, b) in &w.entries {
                pairs.push((self.index(p, *i, q, *j), a.mul(b)));
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

fn koszul(field: FieldTag, exp: usize) -> Scalar {
    field.from_i64(if exp % 2 == 0 { 1 } else { -1 })
}

/// `A ⊗ B` with `d(a⊗b) = da⊗b + (−1)^{|a|} a⊗db`, through total degree `top`.
pub fn tensor_complex(a: &ChainComplex, b: &ChainComplex, top: usize) -> Result<(ChainComplex, TensorLayout)> {
    let top = top.min(a.max_degree()).min(b.max_degree());
    let layout = TensorLayout::new(&a.dims(), &b.dims(), top);
    let field = a.field;
    let mut boundary = vec![Matrix::zeros(field, 0, layout.dims[0])];
    let mut labels = Vec::new();
    for n in 0..=top {
        let mut lab = Vec::with_capacity(layout.dims[n]);
        for k in 0..layout.dims[n] {
            let (p, i, j) = layout.split(n, k);
            lab.push(format!("{}⊗{}", a.label(p, i), b.label(n - p, j)));
        }
        labels.push(lab);
        if n == 0 {
            continue;
        }
        let mut cols = Vec::with_capacity(layout.dims[n]);
        for k in 0..layout.dims[n] {
            let (p, i, j) = layout.split(n, k);
            let q = n - p;
            let ei = SparseVec::unit(i, field);
            let ej = SparseVec::unit(j, field);
            let mut v = SparseVec::new();
            if p > 0 {
                v = v.add(&layout.tensor(p - 1, &a.d(p, &ei), q, &ej));
            }
            if q > 0 {
                v.axpy(&koszul(field, p), &layout.tensor(p, &ei, q - 1, &b.d(q, &ej)));
            }
            cols.push(v);
        }
        boundary.push(Matrix::from_columns(field, layout.dims[n - 1], cols)?);
    }
    let mut c = ChainComplex::from_matrices(&format!("{}⊗{}", a.name, b.name), field, boundary)?;
    c.labels = labels;
    Ok((c, layout))
}

/// `(f ⊗ g)(a ⊗ b) = (−1)^{|g||a|} f(a) ⊗ g(b)`.
pub fn tensor_maps(f: &GradedMap, g: &GradedMap, src: &TensorLayout, tgt: &TensorLayout) -> Result<GradedMap> {
    let field = f.field;
    let shift = f.shift + g.shift;
    GradedMap::from_fn(&format!("{}⊗{}", f.name, g.name), field, shift, &src.dims, &tgt.dims, |n, k| {
        let (p, i, j) = src.split(n, k);
        let q = n - p;
        let (pp, qq) = (p as i64 + f.shift, q as i64 + g.shift);
        if pp < 0 || qq < 0 {
            return SparseVec::new();
        }
        let fa = f.apply(p, &SparseVec::unit(i, field));
        let gb = g.apply(q, &SparseVec::unit(j, field));
        let mut v = tgt.tensor(pp as usize, &fa, qq as usize, &gb);
        if (g.shift.unsigned_abs() as usize * p) % 2 == 1 {
            v = v.neg();
        }
        v
    })
}

/// `τ(a ⊗ b) = (−1)^{|a||b|} b ⊗ a` from the layout of A⊗B to that of B⊗A.
pub fn twist_map(field: FieldTag, src: &TensorLayout, tgt: &TensorLayout) -> Result<GradedMap> {
    GradedMap::from_fn("τ", field, 0, &src.dims, &tgt.dims, |n, k| {
        let (p, i, j) = src.split(n, k);
        let q = n - p;
        SparseVec { entries: vec![(tgt.index(q, j, p, i), koszul(field, p * q))] }
    })
}

use serde::Serialize;

use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::field::{FieldTag, Scalar};
use crate::linalg::{Matrix, SparseVec};

/// A degree-`shift` linear map stored per source degree:
/// `mats[n]: source_n → target_{n+shift}` (zero rows when out of range).
#[derive(Clone, Debug)]
pub struct GradedMap {
    pub name: String,
    pub field: FieldTag,
    pub shift: i64,
    pub mats: Vec<Matrix>,
}

fn tgt_dim(tgt: &[usize], n: usize, shift: i64) -> usize {
    let m = n as i64 + shift;
    if m < 0 {
        0
    } else {
        tgt.get(m as usize).copied().unwrap_or(0)
    }
}

impl GradedMap {
    /// Builds from the images of basis vectors.
    pub fn from_fn(
        name: &str,
        field: FieldTag,
        shift: i64,
        src_dims: &[usize],
        tgt_dims: &[usize],
        mut f: impl FnMut(usize, usize) -> SparseVec,
    ) -> Result<Self> {
        let mut mats = Vec::with_capacity(src_dims.len());
        for (n, &d) in src_dims.iter().enumerate() {
            let rows = tgt_dim(tgt_dims, n, shift);
            let cols = (0..d).map(|k| if rows == 0 { SparseVec::new() } else { f(n, k) }).collect();
            mats.push(Matrix::from_columns(field, rows, cols)?);
        }
        Ok(GradedMap { name: name.to_string(), field, shift, mats })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        GradedMap {
            name: "id".into(),
            field: c.field,
            shift: 0,
            mats: (0..=c.max_degree()).map(|n| Matrix::identity(c.field, c.dim(n))).collect(),
        }
    }

    pub fn zero(field: FieldTag, shift: i64, src_dims: &[usize], tgt_dims: &[usize]) -> Self {
        GradedMap {
            name: "0".into(),
            field,
            shift,
            mats: src_dims
                .iter()
                .enumerate()
                .map(|(n, &d)| Matrix::zeros(field, tgt_dim(tgt_dims, n, shift), d))
                .collect(),
        }
    }

    pub fn max_degree(&self) -> usize {
        self.mats.len() - 1
    }

    pub fn apply(&self, n: usize, v: &SparseVec) -> SparseVec {
        self.mats.get(n).map_or_else(SparseVec::new, |m| m.apply(v))
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GradedMap) -> Result<GradedMap> {
        let mut mats = Vec::new();
        for (n, m) in first.mats.iter().enumerate() {
            let mid = n as i64 + first.shift;
            if mid < 0 || mid as usize >= self.mats.len() || m.rows == 0 {
                let rows = if mid < 0 || mid as usize >= self.mats.len() { 0 } else { self.mats[mid as usize].rows };
                mats.push(Matrix::zeros(self.field, rows, m.cols));
            } else {
                mats.push(self.mats[mid as usize].mul(m)?);
            }
        }
        Ok(GradedMap {
            name: format!("{}∘{}", self.name, first.name),
            field: self.field,
            shift: self.shift + first.shift,
            mats,
        })
    }

    fn combine(&self, other: &GradedMap, sign: i64) -> Result<GradedMap> {
        if self.shift != other.shift {
            return Err(Error::ShapeError("maps of different degree".into()));
        }
        let n = self.mats.len().min(other.mats.len());
        let s = self.field.from_i64(sign);
        let mats = (0..n).map(|k| self.mats[k].add(&other.mats[k].scale(&s))).collect::<Result<Vec<_>>>()?;
        Ok(GradedMap {
            name: format!("({}{}{})", self.name, if sign > 0 { "+" } else { "−" }, other.name),
            field: self.field,
            shift: self.shift,
            mats,
        })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap {
            name: self.name.clone(),
            field: self.field,
            shift: self.shift,
            mats: self.mats.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn truncate(&self, n: usize) -> GradedMap {
        let mut g = self.clone();
        g.mats.truncate(n + 1);
        g
    }

    /// Degreewise equality over the common range.
    pub fn first_difference(&self, other: &GradedMap) -> Option<(usize, usize)> {
        let n = self.mats.len().min(other.mats.len());
        for d in 0..n {
            let (a, b) = (&self.mats[d], &other.mats[d]);
            for k in 0..a.cols.max(b.cols) {
                if a.columns.get(k) != b.columns.get(k) {
                    return Some((d, k));
                }
            }
        }
        None
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MapFailure {
    pub degree: usize,
    pub witness: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MapReport {
    pub name: String,
    pub ok: bool,
    pub checked_degrees: Vec<usize>,
    pub failures: Vec<MapFailure>,
}

fn d_or_zero(c: &ChainComplex, m: i64, v: &SparseVec) -> SparseVec {
    if m <= 0 || m as usize > c.max_degree() {
        SparseVec::new()
    } else {
        c.d(m as usize, v)
    }
}

/// `d ∘ f = (−1)^shift f ∘ d` in every degree where both sides are stored.
pub fn verify_chain_map(f: &GradedMap, src: &ChainComplex, tgt: &ChainComplex) -> MapReport {
    let mut failures = Vec::new();
    let mut checked = Vec::new();
    let sign = f.field.from_i64(if f.shift.rem_euclid(2) == 0 { 1 } else { -1 });
    for n in 1..=src.max_degree().min(f.max_degree()) {
        let m = n as i64 + f.shift;
        if m < 0 || m as usize > tgt.max_degree() {
            continue;
        }
        checked.push(n);
        for k in 0..src.dim(n) {
            let e = SparseVec::unit(k, f.field);
            let lhs = d_or_zero(tgt, m, &f.apply(n, &e));
            let rhs = f.apply(n - 1, &src.d(n, &e)).scale(&sign);
            if lhs != rhs {
                failures.push(MapFailure { degree: n, witness: src.label(n, k) });
                break;
            }
        }
    }
    MapReport { name: f.name.clone(), ok: failures.is_empty(), checked_degrees: checked, failures }
}

/// `d h + h d = g − f` for a degree +1 map `h`.
pub fn verify_homotopy(
    f: &GradedMap,
    g: &GradedMap,
    h: &GradedMap,
    src: &ChainComplex,
    tgt: &ChainComplex,
) -> MapReport {
    let mut failures = Vec::new();
    let mut checked = Vec::new();
    let top = src.max_degree().min(h.max_degree()).min(f.max_degree()).min(g.max_degree());
    for n in 0..=top {
        if n + 1 > tgt.max_degree() {
            continue;
        }
        checked.push(n);
        for k in 0..src.dim(n) {
            let e = SparseVec::unit(k, f.field);
            let dh = tgt.d(n + 1, &h.apply(n, &e));
            let hd = if n == 0 { SparseVec::new() } else { h.apply(n - 1, &src.d(n, &e)) };
            let lhs = dh.add(&hd);
            let rhs = g.apply(n, &e).sub(&f.apply(n, &e));
            if lhs != rhs {
                failures.push(MapFailure { degree: n, witness: src.label(n, k) });
                break;
            }
        }
    }
    MapReport {
        name: format!("{} : {} ≃ {}", h.name, f.name, g.name),
        ok: failures.is_empty(),
        checked_degrees: checked,
        failures,
    }
}

/// Matrix of the induced map on homology: `π_tgt ∘ f ∘ ι_src`.
pub fn induced_matrix(
    f: &GradedMap,
    n: usize,
    h_src: &super::homology::HomologySummary,
    h_tgt: &super::homology::HomologySummary,
) -> Matrix {
    let m = (n as i64 + f.shift) as usize;
    let cols = h_src.reps[n].iter().map(|z| h_tgt.project(m, &f.apply(n, z))).collect();
    Matrix { field: f.field, rows: h_tgt.dim(m), cols: h_src.dim(n), columns: cols }
}

use serde::Serialize;

use super::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::linalg::{Matrix, PivotBasis, Reduction, SparseVec};

/// Homology through some degree with chosen representatives and projections.
#[derive(Clone, Debug)]
pub struct HomologySummary {
    pub field: FieldTag,
    pub dims: Vec<usize>,
    /// Representative cycles, as vectors in the basis of C_n.
    pub reps: Vec<Vec<SparseVec>>,
    pub chain_dims: Vec<usize>,
    /// Boundaries followed by representatives, with distinct pivots.
    bases: Vec<PivotBasis>,
    /// `rep_of[n][k]`: homology coordinate of basis vector k, if it is a representative.
    rep_of: Vec<Vec<Option<usize>>>,
}

impl HomologySummary {
    pub fn top(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.dims.get(n).copied().unwrap_or(0)
    }

    /// Homology coordinates of a chain. Linear, kills boundaries, and is the
    /// class map on cycles.
    pub fn project(&self, n: usize, v: &SparseVec) -> SparseVec {
        if n >= self.dims.len() {
            return SparseVec::new();
        }
        let (coeffs, _) = self.bases[n].decompose(v);
        SparseVec::from_pairs(coeffs.into_iter().filter_map(|(k, c)| self.rep_of[n][k].map(|r| (r, c))).collect())
    }

    /// Matrix of `project` in degree n.
    pub fn projection_matrix(&self, n: usize) -> Matrix {
        let cols = (0..self.chain_dims[n]).map(|k| self.project(n, &SparseVec::unit(k, self.field))).collect();
        Matrix { field: self.field, rows: self.dim(n), cols: self.chain_dims[n], columns: cols }
    }

    /// Representatives as columns.
    pub fn inclusion_matrix(&self, n: usize) -> Matrix {
        Matrix { field: self.field, rows: self.chain_dims[n], cols: self.dim(n), columns: self.reps[n].clone() }
    }

    pub fn rep(&self, n: usize, k: usize) -> &SparseVec {
        &self.reps[n][k]
    }
}

/// Homology in degrees `0..=top`; needs the boundary in degree `top+1`.
pub fn homology(c: &ChainComplex, top: usize) -> Result<HomologySummary> {
    if top + 1 > c.max_degree() {
        return Err(Error::TruncationTooLow { needed: top + 1, available: c.max_degree() });
    }
    homology_unchecked(c, top)
}

/// Homology through `max_degree − 1`.
pub fn homology_default(c: &ChainComplex) -> Result<HomologySummary> {
    if c.max_degree() == 0 {
        return Err(Error::TruncationTooLow { needed: 1, available: 0 });
    }
    homology(c, c.max_degree() - 1)
}

/// Homology of a complex that is known to vanish above its top degree.
pub fn homology_bounded(c: &ChainComplex) -> Result<HomologySummary> {
    homology_unchecked(c, c.max_degree())
}

fn homology_unchecked(c: &ChainComplex, top: usize) -> Result<HomologySummary> {
    let field = c.field;
    let mut dims = Vec::new();
    let mut reps = Vec::new();
    let mut bases = Vec::new();
    let mut rep_of = Vec::new();
    for n in 0..=top {
        let dim = c.dim(n);
        let mut basis = PivotBasis::new(dim);
        if n < c.max_degree() {
            for col in &c.boundary[n + 1].columns {
                basis.insert_reduced(col.clone());
            }
        }
        let kernel: Vec<SparseVec> = if n == 0 {
            (0..dim).map(|k| SparseVec::unit(k, field)).collect()
        } else {
            Reduction::new(&c.boundary[n])?.kernel
        };
        let mut slot = vec![None; basis.len()];
        let mut r = Vec::new();
        for z in kernel {
            if basis.insert_reduced(z) {
                slot.push(Some(r.len()));
                r.push(basis.vectors().last().unwrap().clone());
            }
        }
        dims.push(r.len());
        reps.push(r);
        bases.push(basis);
        rep_of.push(slot);
    }
    Ok(HomologySummary { field, dims, reps, chain_dims: (0..=top).map(|n| c.dim(n)).collect(), bases, rep_of })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneratorJson {
    pub degree: usize,
    pub terms: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyJson {
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub dims: Vec<usize>,
    pub generators: Vec<GeneratorJson>,
}

impl HomologySummary {
    pub fn to_json(&self, c: &ChainComplex, max_generators: usize) -> HomologyJson {
        let mut generators = Vec::new();
        for (n, rs) in self.reps.iter().enumerate() {
            for r in rs.iter().take(max_generators) {
                generators.push(GeneratorJson {
                    degree: n,
                    terms: r.entries.iter().map(|(k, a)| (c.label(n, *k), a.to_string())).collect(),
                });
            }
        }
        HomologyJson {
            field: self.field.report_name().to_string(),
            p: match self.field {
                FieldTag::PrimeField(p) => Some(p),
                FieldTag::Rationals => None,
            },
            dims: self.dims.clone(),
            generators,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("degree,dim\n");
        for (n, d) in self.dims.iter().enumerate() {
            s.push_str(&format!("{n},{d}\n"));
        }
        s
    }
}

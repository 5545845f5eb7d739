use std::sync::Arc;

use serde::Serialize;

use crate::cubical::CubSet;
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::linalg::{Matrix, SparseVec};
use crate::nerves::SimplicialSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Flavor {
    /// Q_•: every cell is a basis element.
    Unnormalized,
    /// C_• = Q_•/D_•: nondegenerate cells only.
    Normalized,
}

#[derive(Clone, Debug)]
pub enum Backing {
    Cubical(Arc<CubSet>),
    Simplicial(Arc<SimplicialSet>),
    Abstract,
}

/// A bounded chain complex with sparse boundary matrices.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub name: String,
    pub field: FieldTag,
    pub flavor: Flavor,
    pub backing: Backing,
    /// `cells[n][k]`: cell id of the k-th basis vector (k itself when abstract).
    pub cells: Vec<Vec<usize>>,
    /// `position[n][cell]`: basis index of a cell, `usize::MAX` if absent.
    pub position: Vec<Vec<usize>>,
    /// `boundary[n]: C_n → C_{n-1}`; `boundary[0]` has zero rows.
    pub boundary: Vec<Matrix>,
    pub labels: Vec<Vec<String>>,
}

pub const NONE: usize = usize::MAX;

fn positions(cells: &[Vec<usize>], counts: &[usize]) -> Vec<Vec<usize>> {
    cells
        .iter()
        .zip(counts)
        .map(|(cs, &c)| {
            let mut p = vec![NONE; c];
            for (k, &x) in cs.iter().enumerate() {
                p[x] = k;
            }
            p
        })
        .collect()
}

impl ChainComplex {
    pub fn max_degree(&self) -> usize {
        self.boundary.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.boundary.get(n).map_or(0, |m| m.cols)
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.max_degree()).map(|n| self.dim(n)).collect()
    }

    pub fn label(&self, n: usize, k: usize) -> String {
        self.labels.get(n).and_then(|l| l.get(k)).cloned().unwrap_or_else(|| format!("e{n}_{k}"))
    }

    /// Basis index of a cell, if the cell is a basis element.
    pub fn basis_index(&self, n: usize, cell: usize) -> Option<usize> {
        self.position.get(n).and_then(|p| p.get(cell)).copied().filter(|&k| k != NONE)
    }

    pub fn cubical(&self) -> Result<&Arc<CubSet>> {
        match &self.backing {
            Backing::Cubical(x) => Ok(x),
            _ => Err(Error::NotCubical),
        }
    }

    /// A complex given directly by its boundary matrices.
    pub fn from_matrices(name: &str, field: FieldTag, boundary: Vec<Matrix>) -> Result<Self> {
        for n in 1..boundary.len() {
            if boundary[n].rows != boundary[n - 1].cols {
                return Err(Error::ShapeError(format!(
                    "boundary {n} has {} rows, C_{} has dim {}",
                    boundary[n].rows,
                    n - 1,
                    boundary[n - 1].cols
                )));
            }
        }
        if boundary.first().is_some_and(|m| m.rows != 0) {
            return Err(Error::ShapeError("boundary 0 must have zero rows".into()));
        }
        let cells: Vec<Vec<usize>> = boundary.iter().map(|m| (0..m.cols).collect()).collect();
        let counts: Vec<usize> = boundary.iter().map(|m| m.cols).collect();
        let c = ChainComplex {
            name: name.to_string(),
            field,
            flavor: Flavor::Unnormalized,
            backing: Backing::Abstract,
            position: positions(&cells, &counts),
            cells,
            boundary,
            labels: Vec::new(),
        };
        c.check_d_squared()?;
        Ok(c)
    }

    /// Boundary of a basis vector as a sparse vector.
    pub fn d(&self, n: usize, v: &SparseVec) -> SparseVec {
        if n == 0 {
            return SparseVec::new();
        }
        self.boundary[n].apply(v)
    }

    /// `d_{n-1} d_n = 0` for every stored degree; witness column on failure.
    pub fn check_d_squared(&self) -> Result<()> {
        for n in 2..self.boundary.len() {
            for (k, col) in self.boundary[n].columns.iter().enumerate() {
                if !self.boundary[n - 1].apply(col).is_zero() {
                    return Err(Error::ConstructionBug(format!(
                        "{}: d∘d ≠ 0 on degree-{n} basis element {}",
                        self.name,
                        self.label(n, k)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The truncation to degrees ≤ n.
    pub fn truncate(&self, n: usize) -> ChainComplex {
        let n = n.min(self.max_degree());
        let mut c = self.clone();
        c.boundary.truncate(n + 1);
        c.cells.truncate(n + 1);
        c.position.truncate(n + 1);
        c.labels.truncate(n + 1);
        c
    }

    /// Degrees ≥ 1 only (degree 0 replaced by zero); the reduced complex of an L-set.
    pub fn reduced(&self) -> ChainComplex {
        let mut c = self.clone();
        c.name = format!("reduced {}", self.name);
        c.boundary[0] = Matrix::zeros(self.field, 0, 0);
        c.cells[0].clear();
        for p in c.position[0].iter_mut() {
            *p = NONE;
        }
        if c.labels.first().is_some() {
            c.labels[0].clear();
        }
        if c.boundary.len() > 1 {
            let m = &self.boundary[1];
            c.boundary[1] = Matrix::zeros(self.field, 0, m.cols);
        }
        c
    }
}

/// Chains of a cubical set: d = Σ_{i=1}^n (−1)^{i+1}(d_{i,1} − d_{i,0}).
pub fn build_cubical_complex(x: Arc<CubSet>, field: FieldTag, flavor: Flavor) -> Result<ChainComplex> {
    let top = x.max_degree;
    let cells: Vec<Vec<usize>> = (0..=top)
        .map(|n| match flavor {
            Flavor::Unnormalized => (0..x.count(n)).collect(),
            Flavor::Normalized => x.nondegenerate(n),
        })
        .collect();
    let position = positions(&cells, &x.counts);
    let mut boundary = vec![Matrix::zeros(field, 0, cells[0].len())];
    for n in 1..=top {
        let mut cols = Vec::with_capacity(cells[n].len());
        for &c in &cells[n] {
            let mut pairs: Vec<(usize, i64)> = Vec::with_capacity(4 * n);
            for i in 1..=n {
                let s = if i % 2 == 1 { 1 } else { -1 };
                for (e, sg) in [(1, s), (0, -s)] {
                    let f = x.face(n, i, e, c);
                    let k = position[n - 1][f];
                    if k != NONE {
                        pairs.push((k, sg));
                    }
                }
            }
            cols.push(SparseVec::from_int_pairs(field, pairs));
        }
        boundary.push(Matrix::from_columns(field, cells[n - 1].len(), cols)?);
    }
    let labels = cells.iter().enumerate().map(|(n, cs)| cs.iter().map(|&c| x.label(n, c)).collect()).collect();
    let c = ChainComplex {
        name: format!("C({})", x.name),
        field,
        flavor,
        backing: Backing::Cubical(x),
        cells,
        position,
        boundary,
        labels,
    };
    c.check_d_squared()?;
    Ok(c)
}

/// Chains of a simplicial set: d = Σ_{i=0}^n (−1)^i d_i.
pub fn build_simplicial_complex(x: Arc<SimplicialSet>, field: FieldTag, flavor: Flavor) -> Result<ChainComplex> {
    let top = x.max_degree;
    let cells: Vec<Vec<usize>> = (0..=top)
        .map(|n| match flavor {
            Flavor::Unnormalized => (0..x.count(n)).collect(),
            Flavor::Normalized => {
                let m = x.degenerate_mask(n);
                (0..x.count(n)).filter(|&c| !m[c]).collect()
            }
        })
        .collect();
    let position = positions(&cells, &x.counts);
    let mut boundary = vec![Matrix::zeros(field, 0, cells[0].len())];
    for n in 1..=top {
        let mut cols = Vec::with_capacity(cells[n].len());
        for &c in &cells[n] {
            let pairs = (0..=n).filter_map(|i| {
                let k = position[n - 1][x.face(n, i, c)];
                (k != NONE).then_some((k, if i % 2 == 0 { 1 } else { -1 }))
            });
            cols.push(SparseVec::from_int_pairs(field, pairs));
        }
        boundary.push(Matrix::from_columns(field, cells[n - 1].len(), cols)?);
    }
    let labels = cells.iter().enumerate().map(|(n, cs)| cs.iter().map(|&c| x.label(n, c)).collect()).collect();
    let c = ChainComplex {
        name: format!("C({})", x.name),
        field,
        flavor,
        backing: Backing::Simplicial(x),
        cells,
        position,
        boundary,
        labels,
    };
    c.check_d_squared()?;
    Ok(c)
}

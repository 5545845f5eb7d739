use std::collections::BTreeMap;

use super::complex::ChainComplex;
use super::maps::GradedMap;
use crate::cubical::CubSet;
use crate::error::Result;
use crate::linalg::SparseVec;

/// `η(x) = (id − s_1 d_{1,0}) ⋯ (id − s_n d_{n,0}) x` as a combination of
/// cells of X_n, the rightmost factor applied first.
pub fn eta_on_cell(x: &CubSet, n: usize, cell: usize) -> BTreeMap<usize, i64> {
    let mut v: BTreeMap<usize, i64> = BTreeMap::from([(cell, 1)]);
    for i in (1..=n).rev() {
        let mut next = v.clone();
        for (&c, &a) in &v {
            let y = x.degen(n, i, x.face(n, i, 0, c));
            *next.entry(y).or_insert(0) -= a;
        }
        next.retain(|_, a| *a != 0);
        v = next;
    }
    v
}

/// η as a map from normalized chains to unnormalized chains.
pub fn eta_section(norm: &ChainComplex, unnorm: &ChainComplex) -> Result<GradedMap> {
    let x = norm.cubical()?.clone();
    let field = norm.field;
    let top = norm.max_degree().min(unnorm.max_degree());
    let src: Vec<usize> = (0..=top).map(|n| norm.dim(n)).collect();
    let tgt: Vec<usize> = (0..=top).map(|n| unnorm.dim(n)).collect();
    GradedMap::from_fn("η", field, 0, &src, &tgt, |n, k| {
        let e = eta_on_cell(&x, n, norm.cells[n][k]);
        SparseVec::from_int_pairs(field, e.into_iter().filter_map(|(c, a)| unnorm.basis_index(n, c).map(|i| (i, a))))
    })
}

/// The quotient ξ: Q_• → C_• (degenerate cells go to 0).
pub fn xi_projection(unnorm: &ChainComplex, norm: &ChainComplex) -> Result<GradedMap> {
    let field = norm.field;
    let top = norm.max_degree().min(unnorm.max_degree());
    let src: Vec<usize> = (0..=top).map(|n| unnorm.dim(n)).collect();
    let tgt: Vec<usize> = (0..=top).map(|n| norm.dim(n)).collect();
    GradedMap::from_fn("ξ", field, 0, &src, &tgt, |n, k| {
        norm.basis_index(n, unnorm.cells[n][k]).map_or_else(SparseVec::new, |i| SparseVec::unit(i, field))
    })
}

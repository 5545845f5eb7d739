use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::complex::{build_cubical_complex, build_simplicial_complex, ChainComplex, Flavor};
use super::maps::GradedMap;
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::linalg::SparseVec;
use crate::nerves::{bar_nerve, decode_labeling, group_cubical_nerve, rack_nerve, TupleCodec};
use crate::racks::{conj_rack, FiniteGroup};
use crate::shuffles::Permutation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SMode {
    RackFormula,
    CubicalToSimplicial,
}

/// `S_n(g) = Σ_σ ε(σ)(g^σ_1, …, g^σ_n)` where `g^σ_i` is `g_{σ(i)}` acted on,
/// in increasing order, by the `g_j` with `j ∈ σ({1..i−1})` and `j > σ(i)`.
pub fn s_terms_rack(g: &FiniteGroup, t: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let n = t.len();
    let mut out = Vec::new();
    for s in Permutation::all(n) {
        let mut tuple = Vec::with_capacity(n);
        for i in 1..=n {
            let si = s.at(i);
            let mut earlier: Vec<usize> = (1..i).map(|k| s.at(k)).filter(|&j| j > si).collect();
            earlier.sort_unstable();
            let mut x = t[si - 1];
            for j in earlier {
                x = g.conj(x, t[j - 1]);
            }
            tuple.push(x);
        }
        out.push((tuple, s.sign()));
    }
    out
}

/// `S_n(F) = Σ_σ ε(σ) σ^*F` with `σ(i) = {σ(1), …, σ(i)}`: the simplex of edge labels
/// along the chain of subsets.
pub fn s_terms_cubical(g: &FiniteGroup, n: usize, v: &[usize]) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    for s in Permutation::all(n) {
        let mut a = 0usize;
        let mut tuple = Vec::with_capacity(n);
        for i in 1..=n {
            let b = a | (1 << (s.at(i) - 1));
            tuple.push(g.m(g.inv[v[a]], v[b]));
            a = b;
        }
        out.push((tuple, s.sign()));
    }
    out
}

/// The comparison map with its source and target complexes.
#[derive(Clone, Debug)]
pub struct SMap {
    pub mode: SMode,
    pub map: GradedMap,
    pub source: ChainComplex,
    pub target: ChainComplex,
}

fn to_target(
    target: &ChainComplex,
    codec: TupleCodec,
    n: usize,
    terms: Vec<(Vec<usize>, i64)>,
    field: FieldTag,
) -> SparseVec {
    let mut acc: HashMap<usize, i64> = HashMap::new();
    for (t, s) in terms {
        if let Some(k) = target.basis_index(n, codec.encode(&t)) {
            *acc.entry(k).or_insert(0) += s;
        }
    }
    SparseVec::from_int_pairs(field, acc)
}

/// Normalized bar complex of `g` through degree `top`.
pub fn bar_complex(g: &FiniteGroup, field: FieldTag, top: usize, budget: u128) -> Result<ChainComplex> {
    build_simplicial_complex(Arc::new(bar_nerve(g, top, budget)?), field, Flavor::Normalized)
}

/// Normalized rack complex CR_•(conj g) through degree `top`.
pub fn conj_rack_complex(g: &FiniteGroup, field: FieldTag, top: usize, budget: u128) -> Result<ChainComplex> {
    build_cubical_complex(Arc::new(rack_nerve(&conj_rack(g), top, budget)?), field, Flavor::Normalized)
}

pub fn s_map(mode: SMode, g: &FiniteGroup, field: FieldTag, top: usize, budget: u128) -> Result<SMap> {
    let target = bar_complex(g, field, top, budget)?;
    let codec = TupleCodec { base: g.order() };
    match mode {
        SMode::RackFormula => {
            let source = conj_rack_complex(g, field, top, budget)?;
            let map = GradedMap::from_fn("S", field, 0, &source.dims(), &target.dims(), |n, k| {
                let t = codec.decode(source.cells[n][k], n);
                to_target(&target, codec, n, s_terms_rack(g, &t), field)
            })?;
            Ok(SMap { mode, map, source, target })
        }
        SMode::CubicalToSimplicial => {
            let source =
                build_cubical_complex(Arc::new(group_cubical_nerve(g, top, budget)?), field, Flavor::Normalized)?;
            let map = GradedMap::from_fn("S", field, 0, &source.dims(), &target.dims(), |n, k| {
                let v = decode_labeling(g, n, source.cells[n][k]);
                to_target(&target, codec, n, s_terms_cubical(g, n, &v), field)
            })?;
            Ok(SMap { mode, map, source, target })
        }
    }
}

/// Full antisymmetrization `Σ_σ ε(σ)(g_{σ(1)}, …, g_{σ(n)})`.
pub fn antisymmetrization_terms(t: &[usize]) -> Vec<(Vec<usize>, i64)> {
    Permutation::all(t.len()).into_iter().map(|s| ((1..=t.len()).map(|i| t[s.at(i) - 1]).collect(), s.sign())).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct AntisymmetrizationReport {
    pub ok: bool,
    pub degrees: Vec<usize>,
    /// Symmetric tensors checked to lie in the kernel of S.
    pub symmetric_checked: usize,
    pub failures: Vec<String>,
}

/// For abelian G: S equals the antisymmetrization on chains, and kills
/// symmetric tensors `t + τ_{i,i+1} t`.
pub fn antisymmetrization_compare(g: &FiniteGroup, field: FieldTag, max_n: usize) -> Result<AntisymmetrizationReport> {
    if !g.is_abelian() {
        return Err(Error::NotAbelian);
    }
    if field.characteristic() != 0 {
        return Err(Error::BadInput("antisymmetrization comparison needs characteristic 0".into()));
    }
    let sm = s_map(SMode::RackFormula, g, field, max_n, crate::nerves::DEFAULT_CELL_BUDGET)?;
    let codec = TupleCodec { base: g.order() };
    let mut failures = Vec::new();
    let mut symmetric_checked = 0;
    for n in 1..=max_n {
        for k in 0..sm.source.dim(n) {
            let t = codec.decode(sm.source.cells[n][k], n);
            let expect = to_target(&sm.target, codec, n, antisymmetrization_terms(&t), field);
            if sm.map.apply(n, &SparseVec::unit(k, field)) != expect {
                failures.push(format!("S_{n}{:?}", t));
            }
            for i in 0..n.saturating_sub(1) {
                let mut u = t.clone();
                u.swap(i, i + 1);
                let ku = sm.source.basis_index(n, codec.encode(&u)).unwrap();
                let sym = SparseVec::from_int_pairs(field, [(k, 1), (ku, 1)]);
                symmetric_checked += 1;
                if !sm.map.apply(n, &sym).is_zero() {
                    failures.push(format!("S_{n} on symmetric tensor at {:?}", t));
                }
            }
        }
    }
    Ok(AntisymmetrizationReport {
        ok: failures.is_empty(),
        degrees: (1..=max_n).collect(),
        symmetric_checked,
        failures,
    })
}

/// Matrix of the map `CL(N^□G) → CR(conj G)` induced by the explicit bijection,
/// given the L-subobject inclusion.
pub fn l_to_rack_map(
    g: &FiniteGroup,
    lc: &ChainComplex,
    l_inclusion: &[Vec<usize>],
    rack: &ChainComplex,
) -> Result<GradedMap> {
    let field = lc.field;
    let codec = TupleCodec { base: g.order() };
    GradedMap::from_fn("φ", field, 0, &lc.dims(), &rack.dims(), |n, k| {
        let v = decode_labeling(g, n, l_inclusion[n][lc.cells[n][k]]);
        let t: Vec<usize> = (0..n).map(|j| v[1 << j]).collect();
        rack.basis_index(n, codec.encode(&t)).map_or_else(SparseVec::new, |i| SparseVec::unit(i, field))
    })
}

/// Map of normalized complexes induced by the inclusion of a sub-cubical set.
pub fn inclusion_map(sub: &ChainComplex, total: &ChainComplex, inclusion: &[Vec<usize>]) -> Result<GradedMap> {
    let field = sub.field;
    GradedMap::from_fn("inc", field, 0, &sub.dims(), &total.dims(), |n, k| {
        total.basis_index(n, inclusion[n][sub.cells[n][k]]).map_or_else(SparseVec::new, |i| SparseVec::unit(i, field))
    })
}

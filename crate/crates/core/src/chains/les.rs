use std::sync::Arc;

use serde::Serialize;

use super::complex::{build_cubical_complex, ChainComplex, Flavor};
use super::homology::{homology, HomologySummary};
use super::maps::{induced_matrix, verify_chain_map, GradedMap};
use crate::cubical::{gamma_functor, l_functor, CubSet};
use crate::error::{Error, Result};
use crate::field::FieldTag;
use crate::linalg::{Matrix, Reduction, SparseVec};

/// `sub ↪ total ↠ quotient`, all degree-0 chain maps.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub sub: ChainComplex,
    pub total: ChainComplex,
    pub quotient: ChainComplex,
    pub inc: GradedMap,
    pub proj: GradedMap,
}

/// Sub complex spanned by the basis vectors `sub_idx[n]` of `total`, and the
/// quotient spanned by the others.
pub fn ses_from_subbasis(total: &ChainComplex, sub_idx: &[Vec<usize>]) -> Result<ShortExactSequence> {
    let field = total.field;
    let top = total.max_degree();
    let mut sub_pos = Vec::new();
    let mut quo_idx = Vec::new();
    let mut quo_pos = Vec::new();
    for n in 0..=top {
        let mut sp = vec![usize::MAX; total.dim(n)];
        for (k, &i) in sub_idx[n].iter().enumerate() {
            sp[i] = k;
        }
        let qi: Vec<usize> = (0..total.dim(n)).filter(|&i| sp[i] == usize::MAX).collect();
        let mut qp = vec![usize::MAX; total.dim(n)];
        for (k, &i) in qi.iter().enumerate() {
            qp[i] = k;
        }
        sub_pos.push(sp);
        quo_idx.push(qi);
        quo_pos.push(qp);
    }
    let restrict = |idx: &Vec<Vec<usize>>, pos: &Vec<Vec<usize>>, check_closed: bool| -> Result<Vec<Matrix>> {
        let mut b = vec![Matrix::zeros(field, 0, idx[0].len())];
        for n in 1..=top {
            let mut cols = Vec::new();
            for &i in &idx[n] {
                let v = total.d(n, &SparseVec::unit(i, field));
                let mut pairs = Vec::new();
                for (r, a) in v.entries {
                    let k = pos[n - 1][r];
                    if k == usize::MAX {
                        if check_closed {
                            return Err(Error::ConstructionBug(format!(
                                "boundary of {} leaves the sub complex",
                                total.label(n, i)
                            )));
                        }
                    } else {
                        pairs.push((k, a));
                    }
                }
                cols.push(SparseVec::from_pairs(pairs));
            }
            b.push(Matrix::from_columns(field, idx[n - 1].len(), cols)?);
        }
        Ok(b)
    };
    let sub_idx_v: Vec<Vec<usize>> = sub_idx.to_vec();
    let mut sub =
        ChainComplex::from_matrices(&format!("sub {}", total.name), field, restrict(&sub_idx_v, &sub_pos, true)?)?;
    sub.labels = sub_idx_v.iter().enumerate().map(|(n, is)| is.iter().map(|&i| total.label(n, i)).collect()).collect();
    let mut quotient =
        ChainComplex::from_matrices(&format!("quotient {}", total.name), field, restrict(&quo_idx, &quo_pos, false)?)?;
    quotient.labels =
        quo_idx.iter().enumerate().map(|(n, is)| is.iter().map(|&i| total.label(n, i)).collect()).collect();
    let inc = GradedMap::from_fn("inc", field, 0, &sub.dims(), &total.dims(), |n, k| {
        SparseVec::unit(sub_idx_v[n][k], field)
    })?;
    let proj = GradedMap::from_fn("proj", field, 0, &total.dims(), &quotient.dims(), |n, k| {
        let q = quo_pos[n][k];
        if q == usize::MAX {
            SparseVec::new()
        } else {
            SparseVec::unit(q, field)
        }
    })?;
    Ok(ShortExactSequence { sub, total: total.clone(), quotient, inc, proj })
}

/// Sub complex = kernel of a surjective chain map `proj: total → quotient`.
pub fn ses_from_surjection(
    total: &ChainComplex,
    quotient: &ChainComplex,
    proj: &GradedMap,
) -> Result<ShortExactSequence> {
    let field = total.field;
    let top = total.max_degree().min(quotient.max_degree());
    let total = total.truncate(top);
    let quotient = quotient.truncate(top);
    let mut kernels: Vec<Matrix> = Vec::new();
    for n in 0..=top {
        let red = Reduction::new(&proj.mats[n])?;
        if red.rank() != quotient.dim(n) {
            return Err(Error::ConstructionBug(format!("projection not surjective in degree {n}")));
        }
        kernels.push(Matrix { field, rows: total.dim(n), cols: red.kernel.len(), columns: red.kernel });
    }
    let mut boundary = vec![Matrix::zeros(field, 0, kernels[0].cols)];
    for n in 1..=top {
        let red = Reduction::new(&kernels[n - 1])?;
        let mut cols = Vec::new();
        for z in &kernels[n].columns {
            cols.push(
                red.solve(&total.d(n, z))
                    .map_err(|_| Error::ConstructionBug(format!("kernel not closed under d in degree {n}")))?,
            );
        }
        boundary.push(Matrix::from_columns(field, kernels[n - 1].cols, cols)?);
    }
    let sub = ChainComplex::from_matrices(&format!("ker {}", proj.name), field, boundary)?;
    let inc = GradedMap { name: "inc".into(), field, shift: 0, mats: kernels };
    Ok(ShortExactSequence { sub, total, quotient, inc, proj: proj.truncate(top) })
}

/// `B ↪ Cone(f) ↠ A[−1]` with `Cone_n = B_n ⊕ A_{n−1}` and
/// `d(b, a) = (db + f a, −da)`.
pub fn mapping_cone(f: &GradedMap, a: &ChainComplex, b: &ChainComplex) -> Result<ShortExactSequence> {
    let field = b.field;
    let top = b.max_degree().min(a.max_degree() + 1);
    let bd = |n: usize| b.dim(n);
    let ad = |n: usize| if n == 0 { 0 } else { a.dim(n - 1) };
    let minus = field.from_i64(-1);
    let mut boundary = vec![Matrix::zeros(field, 0, bd(0) + ad(0))];
    let mut shifted = vec![Matrix::zeros(field, 0, ad(0))];
    for n in 1..=top {
        let mut cols = Vec::new();
        for k in 0..bd(n) {
            cols.push(b.d(n, &SparseVec::unit(k, field)));
        }
        let mut scols = Vec::new();
        for k in 0..ad(n) {
            let e = SparseVec::unit(k, field);
            let fa = f.apply(n - 1, &e);
            let da = if n >= 2 { a.d(n - 1, &e).scale(&minus) } else { SparseVec::new() };
            let mut pairs = fa.entries.clone();
            pairs.extend(da.entries.iter().map(|(i, c)| (bd(n - 1) + i, c.clone())));
            cols.push(SparseVec::from_pairs(pairs));
            scols.push(da);
        }
        boundary.push(Matrix::from_columns(field, bd(n - 1) + ad(n - 1), cols)?);
        shifted.push(Matrix::from_columns(field, ad(n - 1), scols)?);
    }
    let mut cone = ChainComplex::from_matrices(&format!("Cone({})", f.name), field, boundary)?;
    cone.labels = (0..=top)
        .map(|n| {
            (0..bd(n)).map(|k| b.label(n, k)).chain((0..ad(n)).map(|k| format!("σ{}", a.label(n - 1, k)))).collect()
        })
        .collect();
    let mut quotient = ChainComplex::from_matrices(&format!("{}[-1]", a.name), field, shifted)?;
    quotient.labels = (0..=top).map(|n| (0..ad(n)).map(|k| a.label(n - 1, k)).collect()).collect();
    let sub = b.truncate(top);
    let inc = GradedMap::from_fn("inc", field, 0, &sub.dims(), &cone.dims(), |_, k| SparseVec::unit(k, field))?;
    let proj = GradedMap::from_fn("proj", field, 0, &cone.dims(), &quotient.dims(), |n, k| {
        if k < bd(n) {
            SparseVec::new()
        } else {
            SparseVec::unit(k - bd(n), field)
        }
    })?;
    Ok(ShortExactSequence { sub, total: cone, quotient, inc, proj })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactnessNode {
    pub node: String,
    pub degree: usize,
    pub dim: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub composite_zero: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub sub_dims: Vec<usize>,
    pub total_dims: Vec<usize>,
    pub quotient_dims: Vec<usize>,
    pub nodes: Vec<ExactnessNode>,
    /// Nodes whose incoming map needs a degree beyond the truncation.
    pub unchecked: Vec<String>,
    pub ok: bool,
    #[serde(skip)]
    pub connecting: Vec<Matrix>,
    #[serde(skip)]
    pub inc_star: Vec<Matrix>,
    #[serde(skip)]
    pub proj_star: Vec<Matrix>,
}

/// Homology of the three complexes, induced maps, snake-lemma connecting
/// maps and rank-based exactness at every node through `top`.
pub fn long_exact_sequence(ses: &ShortExactSequence, top: usize) -> Result<LesReport> {
    for (name, r) in [
        ("inc", verify_chain_map(&ses.inc, &ses.sub, &ses.total)),
        ("proj", verify_chain_map(&ses.proj, &ses.total, &ses.quotient)),
    ] {
        if !r.ok {
            return Err(Error::NotChainMap(format!("{name}: {:?}", r.failures.first())));
        }
    }
    let ha = homology(&ses.sub, top)?;
    let hb = homology(&ses.total, top)?;
    let hc = homology(&ses.quotient, top)?;
    let field = ses.total.field;
    let inc_star: Vec<Matrix> = (0..=top).map(|n| induced_matrix(&ses.inc, n, &ha, &hb)).collect();
    let proj_star: Vec<Matrix> = (0..=top).map(|n| induced_matrix(&ses.proj, n, &hb, &hc)).collect();
    let mut connecting = vec![Matrix::zeros(field, 0, hc.dim(0))];
    for n in 1..=top {
        connecting.push(connecting_map(ses, n, &ha, &hc)?);
    }
    let mut nodes = Vec::new();
    let mut unchecked = Vec::new();
    let mut node = |name: &str, n: usize, dim: usize, min: Option<&Matrix>, mout: Option<&Matrix>| {
        let rank_in = min.map_or(0, |m| m.rank());
        let rank_out = mout.map_or(0, |m| m.rank());
        let composite_zero = match (min, mout) {
            (Some(i), Some(o)) if i.cols > 0 && o.rows > 0 => o.mul(i).map(|m| m.is_zero()).unwrap_or(false),
            _ => true,
        };
        let exact = composite_zero && rank_in + rank_out == dim;
        nodes.push(ExactnessNode { node: name.to_string(), degree: n, dim, rank_in, rank_out, composite_zero, exact });
    };
    for n in (0..=top).rev() {
        if n < top {
            node("sub", n, ha.dim(n), Some(&connecting[n + 1]), Some(&inc_star[n]));
        } else {
            unchecked.push(format!("sub H_{n}"));
        }
        node("total", n, hb.dim(n), Some(&inc_star[n]), Some(&proj_star[n]));
        node("quotient", n, hc.dim(n), Some(&proj_star[n]), if n >= 1 { Some(&connecting[n]) } else { None });
    }
    let ok = nodes.iter().all(|x| x.exact);
    Ok(LesReport {
        sub_dims: ha.dims.clone(),
        total_dims: hb.dims.clone(),
        quotient_dims: hc.dims.clone(),
        nodes,
        unchecked,
        ok,
        connecting,
        inc_star,
        proj_star,
    })
}

/// Lift a quotient cycle, take its boundary, pull back to the sub complex.
fn connecting_map(ses: &ShortExactSequence, n: usize, ha: &HomologySummary, hc: &HomologySummary) -> Result<Matrix> {
    let field = ses.total.field;
    let lift = Reduction::new(&ses.proj.mats[n])?;
    let pull = Reduction::new(&ses.inc.mats[n - 1])?;
    let mut cols = Vec::new();
    for z in &hc.reps[n] {
        let b =
            lift.solve(z).map_err(|_| Error::ConstructionBug(format!("cannot lift a degree-{n} quotient cycle")))?;
        let db = ses.total.d(n, &b);
        let a = pull.solve(&db).map_err(|_| {
            Error::ConstructionBug(format!("boundary of a lift is not in the sub complex (degree {n})"))
        })?;
        cols.push(ha.project(n - 1, &a));
    }
    Ok(Matrix { field, rows: ha.dim(n - 1), cols: hc.dim(n), columns: cols })
}

/// `CL(X) ↪ C(X) ↠ C^rel(X)` on normalized chains.
pub fn les_l_relative(x: Arc<CubSet>, field: FieldTag) -> Result<(ShortExactSequence, ChainComplex)> {
    let l = l_functor(&x)?;
    let total = build_cubical_complex(x.clone(), field, Flavor::Normalized)?;
    let lc = build_cubical_complex(Arc::new(l.set.clone()), field, Flavor::Normalized)?;
    let mut sub_idx = Vec::new();
    for n in 0..=x.max_degree {
        let mut v = Vec::new();
        for &cell in &lc.cells[n] {
            let old = l.inclusion[n][cell];
            v.push(
                total
                    .basis_index(n, old)
                    .ok_or_else(|| Error::ConstructionBug("nondegenerate L-cell degenerate in X".into()))?,
            );
        }
        sub_idx.push(v);
    }
    Ok((ses_from_subbasis(&total, &sub_idx)?, lc))
}

/// `C^sub(X) ↪ C(X) ↠ CΓ(X)` on normalized chains.
pub fn les_gamma(x: Arc<CubSet>, field: FieldTag) -> Result<ShortExactSequence> {
    let q = gamma_functor(&x)?;
    let top = q.set.max_degree;
    let total = build_cubical_complex(Arc::new(x.truncate(top)), field, Flavor::Normalized)?;
    let quotient = build_cubical_complex(Arc::new(q.set.clone()), field, Flavor::Normalized)?;
    let proj = GradedMap::from_fn("proj", field, 0, &total.dims(), &quotient.dims(), |n, k| {
        let class = q.projection[n][total.cells[n][k]];
        match quotient.basis_index(n, class) {
            Some(i) => SparseVec::unit(i, field),
            None => SparseVec::new(),
        }
    })?;
    ses_from_surjection(&total, &quotient, &proj)
}

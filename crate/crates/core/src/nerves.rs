//! Cubical nerve of a group, the bar nerve, and the rack nerve.

use serde::Serialize;

use crate::cubical::{build_cubset, CubSet};
use crate::error::{Error, Result};
use crate::racks::{FiniteGroup, PointedRack};

pub const DEFAULT_CELL_BUDGET: u128 = 2_000_000;

/// Above this many cells per degree no labels are stored.
const LABEL_LIMIT: usize = 50_000;

fn checked_pow(base: usize, exp: usize) -> u128 {
    let mut r: u128 = 1;
    for _ in 0..exp {
        r = r.saturating_mul(base as u128);
    }
    r
}

fn check_budget(base: usize, exps: impl Iterator<Item = (usize, usize)>, budget: u128) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (n, e) in exps {
        let cells = checked_pow(base, e);
        if cells > budget {
            return Err(Error::BudgetExceeded { degree: n, cells, budget });
        }
        out.push(cells as usize);
    }
    Ok(out)
}

/// Mixed-radix tuple codec: `x_1` is the least significant digit.
#[derive(Clone, Copy, Debug)]
pub struct TupleCodec {
    pub base: usize,
}

impl TupleCodec {
    pub fn encode(&self, t: &[usize]) -> usize {
        t.iter().rev().fold(0, |acc, &x| acc * self.base + x)
    }

    pub fn decode(&self, mut c: usize, n: usize) -> Vec<usize> {
        let mut t = Vec::with_capacity(n);
        for _ in 0..n {
            t.push(c % self.base);
            c /= self.base;
        }
        t
    }
}

fn tuple_label(names: &[String], t: &[usize]) -> String {
    let parts: Vec<&str> = t.iter().map(|&x| names[x].as_str()).collect();
    format!("({})", parts.join(","))
}

// ---------- cubical nerve of a group ----------

/// Vertex labeling of a cell: `v[A]` for subsets `A ⊆ {1..n}` as bitmasks, `v[0] = e`.
pub fn decode_labeling(g: &FiniteGroup, n: usize, c: usize) -> Vec<usize> {
    let codec = TupleCodec { base: g.order() };
    let mut v = vec![g.unit];
    v.extend(codec.decode(c, (1usize << n) - 1));
    v
}

pub fn encode_labeling(g: &FiniteGroup, v: &[usize]) -> usize {
    TupleCodec { base: g.order() }.encode(&v[1..])
}

/// Edge label `F(A → B) = v(A)^{-1} v(B)` for `A ⊆ B`.
pub fn edge_label(g: &FiniteGroup, v: &[usize], a: usize, b: usize) -> usize {
    g.m(g.inv[v[a]], v[b])
}

/// Bitmask of δ_{i,ε}(A): insert coordinate i with value ε.
fn coface_mask(a: usize, i: usize, eps: usize) -> usize {
    let low = a & ((1 << (i - 1)) - 1);
    let high = (a >> (i - 1)) << i;
    low | high | (eps << (i - 1))
}

/// Bitmask of σ_i(A): delete coordinate i.
fn codegeneracy_mask(a: usize, i: usize) -> usize {
    let low = a & ((1 << (i - 1)) - 1);
    let high = (a >> i) << (i - 1);
    low | high
}

pub fn group_nerve_face(g: &FiniteGroup, n: usize, i: usize, eps: usize, v: &[usize]) -> Vec<usize> {
    let origin = v[coface_mask(0, i, eps)];
    let oi = g.inv[origin];
    (0..1usize << (n - 1)).map(|a| g.m(oi, v[coface_mask(a, i, eps)])).collect()
}

pub fn group_nerve_degen(n: usize, i: usize, v: &[usize]) -> Vec<usize> {
    (0..1usize << n).map(|a| v[codegeneracy_mask(a, i)]).collect()
}

/// N^□G through degree `max_degree`, cells encoded as vertex labelings.
pub fn group_cubical_nerve(g: &FiniteGroup, max_degree: usize, budget: u128) -> Result<CubSet> {
    let counts = check_budget(g.order(), (0..=max_degree).map(|n| (n, (1usize << n) - 1)), budget)?;
    let labels: Vec<Vec<String>> = (0..=max_degree)
        .map(|n| {
            if counts[n] > LABEL_LIMIT {
                return Vec::new();
            }
            (0..counts[n])
                .map(|c| {
                    let v = decode_labeling(g, n, c);
                    let parts: Vec<&str> = v[1..].iter().map(|&x| g.elements[x].as_str()).collect();
                    format!("[{}]", parts.join(","))
                })
                .collect()
        })
        .collect();
    let face = |n: usize, i: usize, e: usize, c: usize| {
        let v = decode_labeling(g, n, c);
        encode_labeling(g, &group_nerve_face(g, n, i, e, &v))
    };
    let degen = |n: usize, i: usize, c: usize| {
        let v = decode_labeling(g, n - 1, c);
        encode_labeling(g, &group_nerve_degen(n, i, &v))
    };
    Ok(build_cubset(&format!("cubical_nerve({})", g.name), max_degree, counts, face, degen, labels, false))
}

/// `(v({1}), …, v({n}))` for every cell of `L(N^□G)`, encoded as a rack-nerve tuple.
/// `inclusion[n][c]` gives the cubical-nerve id of the L-cell `c`.
pub fn lnerve_to_rack_nerve(g: &FiniteGroup, inclusion: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let codec = TupleCodec { base: g.order() };
    inclusion
        .iter()
        .enumerate()
        .map(|(n, inc)| {
            inc.iter()
                .map(|&c| {
                    let v = decode_labeling(g, n, c);
                    let t: Vec<usize> = (0..n).map(|k| v[1 << k]).collect();
                    codec.encode(&t)
                })
                .collect()
        })
        .collect()
}

// ---------- rack nerve ----------

pub fn rack_nerve_face(x: &PointedRack, i: usize, eps: usize, t: &[usize]) -> Vec<usize> {
    let xi = t[i - 1];
    let mut out = Vec::with_capacity(t.len() - 1);
    for (k, &y) in t.iter().enumerate() {
        if k + 1 < i {
            out.push(if eps == 1 { x.act(y, xi) } else { y });
        } else if k + 1 > i {
            out.push(y);
        }
    }
    out
}

pub fn rack_nerve_degen(x: &PointedRack, i: usize, t: &[usize]) -> Vec<usize> {
    let mut out = t.to_vec();
    out.insert(i - 1, x.basepoint);
    out
}

/// N^R X through degree `max_degree`.
pub fn rack_nerve(x: &PointedRack, max_degree: usize, budget: u128) -> Result<CubSet> {
    let counts = check_budget(x.size(), (0..=max_degree).map(|n| (n, n)), budget)?;
    let codec = TupleCodec { base: x.size() };
    let labels: Vec<Vec<String>> = (0..=max_degree)
        .map(|n| {
            if counts[n] > LABEL_LIMIT {
                return Vec::new();
            }
            (0..counts[n]).map(|c| tuple_label(&x.elements, &codec.decode(c, n))).collect()
        })
        .collect();
    let face = |n: usize, i: usize, e: usize, c: usize| codec.encode(&rack_nerve_face(x, i, e, &codec.decode(c, n)));
    let degen = |n: usize, i: usize, c: usize| codec.encode(&rack_nerve_degen(x, i, &codec.decode(c, n - 1)));
    Ok(build_cubset(&format!("rack_nerve({})", x.name), max_degree, counts, face, degen, labels, true))
}

// ---------- simplicial sets and the bar nerve ----------

/// A truncated simplicial set. `faces[n][i][x] = d_i x` for `0 ≤ i ≤ n`;
/// `degeneracies[n][j][y] = s_j y ∈ X_n` for `y ∈ X_{n-1}`, `0 ≤ j ≤ n-1`.
#[derive(Clone, Debug)]
pub struct SimplicialSet {
    pub name: String,
    pub max_degree: usize,
    pub counts: Vec<usize>,
    pub faces: Vec<Vec<Vec<usize>>>,
    pub degeneracies: Vec<Vec<Vec<usize>>>,
    pub labels: Vec<Vec<String>>,
}

impl SimplicialSet {
    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn face(&self, n: usize, i: usize, x: usize) -> usize {
        self.faces[n][i][x]
    }

    pub fn degen(&self, n: usize, j: usize, y: usize) -> usize {
        self.degeneracies[n][j][y]
    }

    pub fn label(&self, n: usize, x: usize) -> String {
        self.labels.get(n).and_then(|l| l.get(x)).cloned().unwrap_or_else(|| format!("#{x}"))
    }

    pub fn degenerate_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; self.counts[n]];
        if n >= 1 {
            for s in &self.degeneracies[n] {
                for &x in s {
                    m[x] = true;
                }
            }
        }
        m
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplicialViolation {
    pub degree: usize,
    pub cell: usize,
    pub identity: String,
}

/// Exhaustive check of the simplicial identities.
pub fn validate_simplicial(x: &SimplicialSet) -> Vec<SimplicialViolation> {
    let mut v = Vec::new();
    let top = x.max_degree;
    // d_i d_j = d_{j-1} d_i, i < j
    for n in 2..=top {
        for c in 0..x.count(n) {
            for j in 1..=n {
                for i in 0..j {
                    if x.face(n - 1, i, x.face(n, j, c)) != x.face(n - 1, j - 1, x.face(n, i, c)) {
                        v.push(SimplicialViolation {
                            degree: n,
                            cell: c,
                            identity: format!("d_{i} d_{j} = d_{} d_{i}", j - 1),
                        });
                    }
                }
            }
        }
    }
    // s_i s_j = s_{j+1} s_i, i ≤ j, on X_{n-2}
    for n in 2..=top {
        for c in 0..x.count(n - 2) {
            for j in 0..n - 1 {
                for i in 0..=j {
                    if x.degen(n, i, x.degen(n - 1, j, c)) != x.degen(n, j + 1, x.degen(n - 1, i, c)) {
                        v.push(SimplicialViolation {
                            degree: n - 2,
                            cell: c,
                            identity: format!("s_{i} s_{j} = s_{} s_{i}", j + 1),
                        });
                    }
                }
            }
        }
    }
    // d_i s_j on X_{n-1}
    for n in 1..=top {
        for c in 0..x.count(n - 1) {
            for j in 0..n {
                let s = x.degen(n, j, c);
                for i in 0..=n {
                    let lhs = x.face(n, i, s);
                    let rhs = if i < j {
                        x.degen(n - 1, j - 1, x.face(n - 1, i, c))
                    } else if i == j || i == j + 1 {
                        c
                    } else {
                        x.degen(n - 1, j, x.face(n - 1, i - 1, c))
                    };
                    if lhs != rhs {
                        v.push(SimplicialViolation { degree: n - 1, cell: c, identity: format!("d_{i} s_{j}") });
                    }
                }
            }
        }
    }
    v
}

pub fn bar_face(g: &FiniteGroup, i: usize, t: &[usize]) -> Vec<usize> {
    let n = t.len();
    if i == 0 {
        t[1..].to_vec()
    } else if i == n {
        t[..n - 1].to_vec()
    } else {
        let mut out = t[..i - 1].to_vec();
        out.push(g.m(t[i - 1], t[i]));
        out.extend_from_slice(&t[i + 1..]);
        out
    }
}

/// `s_j` inserts `e` at 0-based position `j`, so it is σ_{j+1} in 1-based numbering.
pub fn bar_degen(g: &FiniteGroup, j: usize, t: &[usize]) -> Vec<usize> {
    let mut out = t.to_vec();
    out.insert(j, g.unit);
    out
}

/// NG through degree `max_degree`.
pub fn bar_nerve(g: &FiniteGroup, max_degree: usize, budget: u128) -> Result<SimplicialSet> {
    let counts = check_budget(g.order(), (0..=max_degree).map(|n| (n, n)), budget)?;
    let codec = TupleCodec { base: g.order() };
    let mut faces = vec![vec![Vec::new()]];
    let mut degeneracies = vec![Vec::new()];
    for n in 1..=max_degree {
        faces.push(
            (0..=n)
                .map(|i| (0..counts[n]).map(|c| codec.encode(&bar_face(g, i, &codec.decode(c, n)))).collect())
                .collect(),
        );
        degeneracies.push(
            (0..n)
                .map(|j| (0..counts[n - 1]).map(|c| codec.encode(&bar_degen(g, j, &codec.decode(c, n - 1)))).collect())
                .collect(),
        );
    }
    let labels = (0..=max_degree)
        .map(|n| {
            if counts[n] > LABEL_LIMIT {
                Vec::new()
            } else {
                (0..counts[n]).map(|c| tuple_label(&g.elements, &codec.decode(c, n))).collect()
            }
        })
        .collect();
    Ok(SimplicialSet { name: format!("bar({})", g.name), max_degree, counts, faces, degeneracies, labels })
}

//! Truncated cubical sets, the standard models □^n and L^n, and the L and Γ
//! functors.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A cubical set truncated at `max_degree`. Cells are integers `0..counts[n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubSet {
    pub name: String,
    pub max_degree: usize,
    pub counts: Vec<usize>,
    /// `faces[n][i-1][ε][x] = d_{i,ε} x` for `x ∈ X_n`, `n ≥ 1`.
    pub faces: Vec<Vec<[Vec<usize>; 2]>>,
    /// `degeneracies[n][i-1][y] = s_i y ∈ X_n` for `y ∈ X_{n-1}`, `n ≥ 1`.
    pub degeneracies: Vec<Vec<Vec<usize>>>,
    /// Optional labels per degree (empty when not recorded).
    pub labels: Vec<Vec<String>>,
    pub is_lset: bool,
}

impl CubSet {
    pub fn count(&self, n: usize) -> usize {
        self.counts[n]
    }

    pub fn face(&self, n: usize, i: usize, eps: usize, x: usize) -> usize {
        self.faces[n][i - 1][eps][x]
    }

    pub fn degen(&self, n: usize, i: usize, y: usize) -> usize {
        self.degeneracies[n][i - 1][y]
    }

    pub fn label(&self, n: usize, x: usize) -> String {
        self.labels.get(n).and_then(|l| l.get(x)).cloned().unwrap_or_else(|| format!("#{x}"))
    }

    /// `mask[x]` is true iff `x ∈ X_n` is the image of some degeneracy.
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

    /// Nondegenerate cells of degree n in increasing id order.
    pub fn nondegenerate(&self, n: usize) -> Vec<usize> {
        self.degenerate_mask(n).iter().enumerate().filter(|(_, d)| !**d).map(|(x, _)| x).collect()
    }

    /// Truncation to a lower degree.
    pub fn truncate(&self, n: usize) -> CubSet {
        let n = n.min(self.max_degree);
        CubSet {
            name: self.name.clone(),
            max_degree: n,
            counts: self.counts[..=n].to_vec(),
            faces: self.faces[..=n].to_vec(),
            degeneracies: self.degeneracies[..=n].to_vec(),
            labels: self.labels.iter().take(n + 1).cloned().collect(),
            is_lset: self.is_lset,
        }
    }

    /// Shape checks on all tables (sizes and index ranges).
    pub fn check_shape(&self) -> Result<()> {
        let n = self.max_degree;
        if self.counts.len() != n + 1 || self.faces.len() != n + 1 || self.degeneracies.len() != n + 1 {
            return Err(Error::BadInput("table count does not match max_degree".into()));
        }
        for d in 1..=n {
            if self.faces[d].len() != d || self.degeneracies[d].len() != d {
                return Err(Error::BadInput(format!("degree {d}: need {d} face/degeneracy indices")));
            }
            for fi in &self.faces[d] {
                for t in fi {
                    if t.len() != self.counts[d] || t.iter().any(|&y| y >= self.counts[d - 1]) {
                        return Err(Error::BadInput(format!("degree {d}: bad face table")));
                    }
                }
            }
            for s in &self.degeneracies[d] {
                if s.len() != self.counts[d - 1] || s.iter().any(|&y| y >= self.counts[d]) {
                    return Err(Error::BadInput(format!("degree {d}: bad degeneracy table")));
                }
            }
        }
        Ok(())
    }
}

/// A builder that fills tables from closures.
pub fn build_cubset(
    name: &str,
    max_degree: usize,
    counts: Vec<usize>,
    face: impl Fn(usize, usize, usize, usize) -> usize,
    degen: impl Fn(usize, usize, usize) -> usize,
    labels: Vec<Vec<String>>,
    is_lset: bool,
) -> CubSet {
    let mut faces = vec![Vec::new()];
    let mut degeneracies = vec![Vec::new()];
    for n in 1..=max_degree {
        faces.push(
            (1..=n)
                .map(|i| {
                    [
                        (0..counts[n]).map(|x| face(n, i, 0, x)).collect(),
                        (0..counts[n]).map(|x| face(n, i, 1, x)).collect(),
                    ]
                })
                .collect(),
        );
        degeneracies.push((1..=n).map(|i| (0..counts[n - 1]).map(|y| degen(n, i, y)).collect()).collect());
    }
    CubSet { name: name.to_string(), max_degree, counts, faces, degeneracies, labels, is_lset }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicalViolation {
    pub degree: usize,
    pub cell: usize,
    pub identity: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CubicalReport {
    pub checked: usize,
    pub violations: Vec<CubicalViolation>,
}

impl CubicalReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks the cubical identities (and the L-set conditions when flagged).
pub fn validate_cubical(x: &CubSet) -> CubicalReport {
    let mut v = Vec::new();
    let mut checked = 0;
    let top = x.max_degree;
    // d_{j,ω} d_{i,ε} = d_{i,ε} d_{j+1,ω}, i ≤ j
    for n in 2..=top {
        for c in 0..x.count(n) {
            for i in 1..n {
                for j in i..n {
                    for e in 0..2 {
                        for w in 0..2 {
                            checked += 1;
                            let lhs = x.face(n - 1, j, w, x.face(n, i, e, c));
                            let rhs = x.face(n - 1, i, e, x.face(n, j + 1, w, c));
                            if lhs != rhs {
                                v.push(CubicalViolation {
                                    degree: n,
                                    cell: c,
                                    identity: format!(
                                        "d_{{{j},{w}}} d_{{{i},{e}}} = d_{{{i},{e}}} d_{{{},{w}}}",
                                        j + 1
                                    ),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    // s_j s_i = s_i s_{j-1}, i < j, on X_{n-2}
    for n in 2..=top {
        for c in 0..x.count(n - 2) {
            for j in 2..=n {
                for i in 1..j {
                    checked += 1;
                    let lhs = x.degen(n, j, x.degen(n - 1, i, c));
                    let rhs = x.degen(n, i, x.degen(n - 1, j - 1, c));
                    if lhs != rhs {
                        v.push(CubicalViolation {
                            degree: n - 2,
                            cell: c,
                            identity: format!("s_{j} s_{i} = s_{i} s_{}", j - 1),
                        });
                    }
                }
            }
        }
    }
    // d_{j,ε} s_i on X_{n-1}
    for n in 1..=top {
        for c in 0..x.count(n - 1) {
            for i in 1..=n {
                let si = x.degen(n, i, c);
                for j in 1..=n {
                    for e in 0..2 {
                        checked += 1;
                        let lhs = x.face(n, j, e, si);
                        let (rhs, name) = if i < j {
                            (
                                x.degen(n - 1, i, x.face(n - 1, j - 1, e, c)),
                                format!("d_{{{j},{e}}} s_{i} = s_{i} d_{{{},{e}}}", j - 1),
                            )
                        } else if i == j {
                            (c, format!("d_{{{j},{e}}} s_{i} = id"))
                        } else {
                            (
                                x.degen(n - 1, i - 1, x.face(n - 1, j, e, c)),
                                format!("d_{{{j},{e}}} s_{i} = s_{} d_{{{j},{e}}}", i - 1),
                            )
                        };
                        if lhs != rhs {
                            v.push(CubicalViolation { degree: n - 1, cell: c, identity: name });
                        }
                    }
                }
            }
        }
    }
    if x.is_lset {
        checked += 1;
        if x.count(0) != 1 {
            v.push(CubicalViolation { degree: 0, cell: 0, identity: "L-set has one vertex".into() });
        }
        for n in 1..=top {
            for c in 0..x.count(n) {
                checked += 1;
                if x.face(n, 1, 0, c) != x.face(n, 1, 1, c) {
                    v.push(CubicalViolation { degree: n, cell: c, identity: "d_{1,0} = d_{1,1}".into() });
                }
            }
        }
    }
    CubicalReport { checked, violations: v }
}

/// One coordinate of a map □_m → □_n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    Const(u8),
    Var(usize),
}

/// Morphisms □_m → □_n as coordinate vectors with strictly increasing variables.
pub fn cube_maps(m: usize, n: usize) -> Vec<Vec<Coord>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(m: usize, n: usize, next_var: usize, cur: &mut Vec<Coord>, out: &mut Vec<Vec<Coord>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for c in [Coord::Const(0), Coord::Const(1)] {
            cur.push(c);
            rec(m, n, next_var, cur, out);
            cur.pop();
        }
        for k in next_var..=m {
            cur.push(Coord::Var(k));
            rec(m, n, k + 1, cur, out);
            cur.pop();
        }
    }
    rec(m, n, 1, &mut cur, &mut out);
    out
}

/// Label of a cube map like `(0,x1,1)`.
pub fn coord_label(c: &[Coord]) -> String {
    let parts: Vec<String> = c
        .iter()
        .map(|x| match x {
            Coord::Const(e) => e.to_string(),
            Coord::Var(k) => format!("x{k}"),
        })
        .collect();
    format!("({})", parts.join(","))
}

/// The factorization word of a cube map in the normal form
/// `σ_{j_1}⋯σ_{j_q} δ_{i_p,ε_p}⋯δ_{i_1,ε_1}` with increasing index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeMorphismCell {
    pub domain: usize,
    pub codomain: usize,
    /// `(i, ε)` for the cofaces, increasing in `i`.
    pub cofaces: Vec<(usize, u8)>,
    /// `j` for the codegeneracies, increasing.
    pub codegeneracies: Vec<usize>,
}

impl CubeMorphismCell {
    /// Reads off the normal form: unused input variables are deleted by σ's,
    /// constant output slots are inserted by δ's.
    pub fn from_coords(m: usize, coords: &[Coord]) -> Self {
        let used: Vec<usize> =
            coords.iter().filter_map(|c| if let Coord::Var(k) = c { Some(*k) } else { None }).collect();
        let codegeneracies = (1..=m).filter(|k| !used.contains(k)).collect();
        let cofaces = coords
            .iter()
            .enumerate()
            .filter_map(|(pos, c)| if let Coord::Const(e) = c { Some((pos + 1, *e)) } else { None })
            .collect();
        CubeMorphismCell { domain: m, codomain: coords.len(), cofaces, codegeneracies }
    }

    /// Evaluates the word on a vertex of □_m.
    pub fn apply(&self, v: &[u8]) -> Vec<u8> {
        let mut w: Vec<u8> = v.to_vec();
        // σ_{j_q} acts first: delete from the largest index down
        for &j in self.codegeneracies.iter().rev() {
            w.remove(j - 1);
        }
        // δ_{i_1} acts first: insert from the smallest index up
        for &(i, e) in &self.cofaces {
            w.insert(i - 1, e);
        }
        w
    }
}

#[cfg(test)]
fn eval_coords(c: &[Coord], v: &[u8]) -> Vec<u8> {
    c.iter()
        .map(|x| match x {
            Coord::Const(e) => *e,
            Coord::Var(k) => v[k - 1],
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Cube,
    LCube,
}

/// □^n truncated at `truncation`.
pub fn cube_model(n: usize, truncation: usize) -> CubSet {
    let cells: Vec<Vec<Vec<Coord>>> = (0..=truncation).map(|m| cube_maps(m, n)).collect();
    let index: Vec<HashMap<Vec<Coord>, usize>> =
        cells.iter().map(|cs| cs.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect()).collect();
    let counts = cells.iter().map(|c| c.len()).collect();
    let labels = cells.iter().map(|cs| cs.iter().map(|c| coord_label(c)).collect()).collect();
    let face = |m: usize, i: usize, e: usize, x: usize| {
        let img: Vec<Coord> = cells[m][x]
            .iter()
            .map(|c| match *c {
                Coord::Var(k) if k == i => Coord::Const(e as u8),
                Coord::Var(k) if k > i => Coord::Var(k - 1),
                other => other,
            })
            .collect();
        index[m - 1][&img]
    };
    let degen = |m: usize, i: usize, y: usize| {
        let img: Vec<Coord> = cells[m - 1][y]
            .iter()
            .map(|c| match *c {
                Coord::Var(k) if k >= i => Coord::Var(k + 1),
                other => other,
            })
            .collect();
        index[m][&img]
    };
    build_cubset(&format!("cube:{n}"), truncation, counts, face, degen, labels, false)
}

/// Standard model; `truncation` defaults to n+1. For `LCube` the cube is
/// built one degree higher so that Γ returns the requested truncation.
pub fn standard_model(kind: ModelKind, n: usize, truncation: Option<usize>) -> Result<CubSet> {
    let t = truncation.unwrap_or(n + 1);
    if t < n {
        return Err(Error::TruncationTooLow { needed: n, available: t });
    }
    match kind {
        ModelKind::Cube => Ok(cube_model(n, t)),
        ModelKind::LCube => {
            let mut q = gamma_functor(&cube_model(n, t + 1))?.set;
            q.name = format!("lcube:{n}");
            Ok(q)
        }
    }
}

/// A sub-cubical set together with its inclusion.
#[derive(Clone, Debug)]
pub struct SubObject {
    pub set: CubSet,
    /// `inclusion[n][new] = old`.
    pub inclusion: Vec<Vec<usize>>,
}

/// A quotient together with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub set: CubSet,
    /// `projection[n][old] = class`.
    pub projection: Vec<Vec<usize>>,
}

/// LX: cells whose iterated first faces all agree.
pub fn l_functor(x: &CubSet) -> Result<SubObject> {
    if x.count(0) != 1 {
        return Err(Error::LNeedsSingleVertex(x.count(0)));
    }
    let top = x.max_degree;
    let mut member: Vec<Vec<bool>> = vec![vec![true; 1]];
    for n in 1..=top {
        let prev = &member[n - 1];
        let m: Vec<bool> = (0..x.count(n))
            .map(|c| {
                let a = x.face(n, 1, 0, c);
                a == x.face(n, 1, 1, c) && prev[a]
            })
            .collect();
        member.push(m);
    }
    let inclusion: Vec<Vec<usize>> =
        member.iter().map(|m| m.iter().enumerate().filter(|(_, b)| **b).map(|(c, _)| c).collect()).collect();
    let mut new_id: Vec<HashMap<usize, usize>> = Vec::new();
    for inc in &inclusion {
        new_id.push(inc.iter().enumerate().map(|(k, &c)| (c, k)).collect());
    }
    let mut faces = vec![Vec::new()];
    let mut degeneracies = vec![Vec::new()];
    for n in 1..=top {
        let mut fn_ = Vec::with_capacity(n);
        for i in 1..=n {
            let mut pair: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
            for (e, slot) in pair.iter_mut().enumerate() {
                for &c in &inclusion[n] {
                    let f = x.face(n, i, e, c);
                    let id = *new_id[n - 1].get(&f).ok_or_else(|| {
                        Error::InternalInvariantViolation(format!("face d_{{{i},{e}}} of cell {c} leaves LX"))
                    })?;
                    slot.push(id);
                }
            }
            fn_.push(pair);
        }
        faces.push(fn_);
        let mut dn = Vec::with_capacity(n);
        for i in 1..=n {
            let mut s = Vec::new();
            for &c in &inclusion[n - 1] {
                let y = x.degen(n, i, c);
                let id = *new_id[n].get(&y).ok_or_else(|| {
                    Error::InternalInvariantViolation(format!("degeneracy s_{i} of cell {c} leaves LX"))
                })?;
                s.push(id);
            }
            dn.push(s);
        }
        degeneracies.push(dn);
    }
    let labels = inclusion.iter().enumerate().map(|(n, inc)| inc.iter().map(|&c| x.label(n, c)).collect()).collect();
    Ok(SubObject {
        set: CubSet {
            name: format!("L({})", x.name),
            max_degree: top,
            counts: inclusion.iter().map(|v| v.len()).collect(),
            faces,
            degeneracies,
            labels,
            is_lset: true,
        },
        inclusion,
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let nx = self.0[y];
            self.0[y] = r;
            y = nx;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// ΓX: coequalizer of d_{1,0}, d_{1,1} degreewise; truncated one degree lower.
pub fn gamma_functor(x: &CubSet) -> Result<Quotient> {
    if x.max_degree == 0 {
        return Err(Error::TruncationTooLow { needed: 1, available: 0 });
    }
    let top = x.max_degree - 1;
    let mut projection: Vec<Vec<usize>> = vec![vec![0; x.count(0)]];
    let mut reps: Vec<Vec<usize>> = vec![vec![0]];
    for n in 1..=top {
        let mut uf = UnionFind::new(x.count(n));
        for y in 0..x.count(n + 1) {
            uf.union(x.face(n + 1, 1, 0, y), x.face(n + 1, 1, 1, y));
        }
        let mut class_of_root: HashMap<usize, usize> = HashMap::new();
        let mut proj = Vec::with_capacity(x.count(n));
        let mut rp = Vec::new();
        for c in 0..x.count(n) {
            let r = uf.find(c);
            let k = *class_of_root.entry(r).or_insert_with(|| {
                rp.push(c);
                rp.len() - 1
            });
            proj.push(k);
        }
        projection.push(proj);
        reps.push(rp);
    }
    let mut faces = vec![Vec::new()];
    let mut degeneracies = vec![Vec::new()];
    for n in 1..=top {
        let classes = reps[n].len();
        let mut fn_ = Vec::with_capacity(n);
        for i in 1..=n {
            let mut pair: [Vec<usize>; 2] = [vec![usize::MAX; classes], vec![usize::MAX; classes]];
            for (e, slot) in pair.iter_mut().enumerate() {
                for c in 0..x.count(n) {
                    let k = projection[n][c];
                    let img = projection[n - 1][x.face(n, i, e, c)];
                    if slot[k] == usize::MAX {
                        slot[k] = img;
                    } else if slot[k] != img {
                        return Err(Error::QuotientIllDefined(format!(
                            "degree {n}: d_{{{i},{e}}} not constant on the class of cell {}",
                            x.label(n, c)
                        )));
                    }
                }
            }
            fn_.push(pair);
        }
        faces.push(fn_);
        let prev_classes = reps[n - 1].len();
        let mut dn = Vec::with_capacity(n);
        for i in 1..=n {
            let mut s = vec![usize::MAX; prev_classes];
            for c in 0..x.count(n - 1) {
                let k = projection[n - 1][c];
                let img = projection[n][x.degen(n, i, c)];
                if s[k] == usize::MAX {
                    s[k] = img;
                } else if s[k] != img {
                    return Err(Error::QuotientIllDefined(format!(
                        "degree {}: s_{i} not constant on the class of cell {}",
                        n - 1,
                        x.label(n - 1, c)
                    )));
                }
            }
            dn.push(s);
        }
        degeneracies.push(dn);
    }
    let mut labels: Vec<Vec<String>> = vec![vec!["*".to_string()]];
    for (n, rp) in reps.iter().enumerate().skip(1) {
        labels.push(rp.iter().map(|&c| x.label(n, c)).collect());
    }
    Ok(Quotient {
        set: CubSet {
            name: format!("Gamma({})", x.name),
            max_degree: top,
            counts: reps.iter().map(|r| r.len()).collect(),
            faces,
            degeneracies,
            labels,
            is_lset: true,
        },
        projection,
    })
}

/// Structure-map violations of a degreewise map `f[n]: X_n → Y_n`.
pub fn morphism_violations(x: &CubSet, y: &CubSet, f: &[Vec<usize>]) -> Vec<CubicalViolation> {
    let top = x.max_degree.min(y.max_degree).min(f.len().saturating_sub(1));
    let mut v = Vec::new();
    for n in 1..=top {
        for c in 0..x.count(n) {
            for i in 1..=n {
                for e in 0..2 {
                    if f[n - 1][x.face(n, i, e, c)] != y.face(n, i, e, f[n][c]) {
                        v.push(CubicalViolation {
                            degree: n,
                            cell: c,
                            identity: format!("f d_{{{i},{e}}} = d_{{{i},{e}}} f"),
                        });
                    }
                }
            }
        }
        for c in 0..x.count(n - 1) {
            for i in 1..=n {
                if f[n][x.degen(n, i, c)] != y.degen(n, i, f[n - 1][c]) {
                    v.push(CubicalViolation { degree: n - 1, cell: c, identity: format!("f s_{i} = s_{i} f") });
                }
            }
        }
    }
    v
}

pub fn is_bijection(f: &[usize], target: usize) -> bool {
    if f.len() != target {
        return false;
    }
    let mut seen = vec![false; target];
    for &y in f {
        if y >= target || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

/// Verifies a candidate isomorphism cell-by-cell.
pub fn verify_isomorphism(x: &CubSet, y: &CubSet, f: &[Vec<usize>]) -> Vec<CubicalViolation> {
    let top = x.max_degree.min(y.max_degree);
    let mut v = Vec::new();
    for n in 0..=top {
        if n >= f.len() || !is_bijection(&f[n], y.count(n)) || x.count(n) != y.count(n) {
            v.push(CubicalViolation { degree: n, cell: 0, identity: "degreewise bijection".into() });
        }
    }
    if v.is_empty() {
        v.extend(morphism_violations(x, y, f));
    }
    v
}

/// Backtracking search for an isomorphism through `min(max_degree)`.
/// `node_budget` caps the number of partial assignments explored.
pub fn find_isomorphism(x: &CubSet, y: &CubSet, node_budget: usize) -> Result<Option<Vec<Vec<usize>>>> {
    let top = x.max_degree.min(y.max_degree);
    for n in 0..=top {
        if x.count(n) != y.count(n) {
            return Ok(None);
        }
    }
    let mut nodes = 0usize;
    let mut maps: Vec<Vec<usize>> = Vec::new();
    let found = iso_degree(x, y, 0, top, &mut maps, &mut nodes, node_budget)?;
    Ok(if found { Some(maps) } else { None })
}

type FaceKey = Vec<usize>;

fn face_key(s: &CubSet, n: usize, c: usize, f: Option<&[usize]>) -> FaceKey {
    let mut k = Vec::with_capacity(2 * n);
    for i in 1..=n {
        for e in 0..2 {
            let d = s.face(n, i, e, c);
            k.push(f.map_or(d, |m| m[d]));
        }
    }
    k
}

fn iso_degree(
    x: &CubSet,
    y: &CubSet,
    n: usize,
    top: usize,
    maps: &mut Vec<Vec<usize>>,
    nodes: &mut usize,
    budget: usize,
) -> Result<bool> {
    if n > top {
        return Ok(true);
    }
    let cnt = x.count(n);
    let mut f = vec![usize::MAX; cnt];
    let mut used = vec![false; cnt];
    // forced images of degenerate cells
    if n >= 1 {
        let prev = &maps[n - 1];
        for i in 1..=n {
            for z in 0..x.count(n - 1) {
                let c = x.degen(n, i, z);
                let t = y.degen(n, i, prev[z]);
                if f[c] == usize::MAX {
                    f[c] = t;
                } else if f[c] != t {
                    return Ok(false);
                }
            }
        }
        for c in 0..cnt {
            if f[c] != usize::MAX {
                if used[f[c]] {
                    return Ok(false);
                }
                used[f[c]] = true;
                if face_key(x, n, c, Some(prev)) != face_key(y, n, f[c], None) {
                    return Ok(false);
                }
            }
        }
    }
    let ymask = y.degenerate_mask(n);
    // group remaining cells by face key
    let mut groups: BTreeMap<FaceKey, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for c in 0..cnt {
        if f[c] == usize::MAX {
            let key = if n == 0 { Vec::new() } else { face_key(x, n, c, Some(&maps[n - 1])) };
            groups.entry(key).or_default().0.push(c);
        }
    }
    for t in 0..cnt {
        if !used[t] {
            if ymask[t] {
                return Ok(false);
            }
            let key = if n == 0 { Vec::new() } else { face_key(y, n, t, None) };
            groups.entry(key).or_default().1.push(t);
        }
    }
    let groups: Vec<(Vec<usize>, Vec<usize>)> = groups.into_values().collect();
    if groups.iter().any(|(a, b)| a.len() != b.len()) {
        return Ok(false);
    }
    assign_groups(x, y, n, top, &groups, 0, &mut f, maps, nodes, budget)
}

#[allow(clippy::too_many_arguments)]
fn assign_groups(
    x: &CubSet,
    y: &CubSet,
    n: usize,
    top: usize,
    groups: &[(Vec<usize>, Vec<usize>)],
    g: usize,
    f: &mut Vec<usize>,
    maps: &mut Vec<Vec<usize>>,
    nodes: &mut usize,
    budget: usize,
) -> Result<bool> {
    *nodes += 1;
    if *nodes > budget {
        return Err(Error::NoIsomorphism(format!("search budget of {budget} nodes exhausted")));
    }
    if g == groups.len() {
        maps.push(f.clone());
        if iso_degree(x, y, n + 1, top, maps, nodes, budget)? {
            return Ok(true);
        }
        maps.pop();
        return Ok(false);
    }
    let (src, tgt) = &groups[g];
    if n == top {
        // nothing above constrains the pairing
        for (a, b) in src.iter().zip(tgt) {
            f[*a] = *b;
        }
        return assign_groups(x, y, n, top, groups, g + 1, f, maps, nodes, budget);
    }
    let mut perm: Vec<usize> = (0..tgt.len()).collect();
    loop {
        for (k, a) in src.iter().enumerate() {
            f[*a] = tgt[perm[k]];
        }
        if assign_groups(x, y, n, top, groups, g + 1, f, maps, nodes, budget)? {
            return Ok(true);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    for a in src {
        f[*a] = usize::MAX;
    }
    Ok(false)
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// JSON form of a cubical set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubSetJson {
    pub max_degree: usize,
    pub cells: Vec<Vec<usize>>,
    pub faces: BTreeMap<String, Vec<Vec<Vec<usize>>>>,
    pub degeneracies: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<Vec<String>>,
}

impl CubSet {
    pub fn to_json(&self, with_labels: bool) -> CubSetJson {
        let mut faces = BTreeMap::new();
        let mut degeneracies = BTreeMap::new();
        for n in 1..=self.max_degree {
            faces.insert(n.to_string(), self.faces[n].iter().map(|p| vec![p[0].clone(), p[1].clone()]).collect());
            degeneracies.insert(n.to_string(), self.degeneracies[n].clone());
        }
        CubSetJson {
            max_degree: self.max_degree,
            cells: self.counts.iter().map(|&c| (0..c).collect()).collect(),
            faces,
            degeneracies,
            labels: if with_labels {
                (0..=self.max_degree).map(|n| (0..self.count(n)).map(|c| self.label(n, c)).collect()).collect()
            } else {
                Vec::new()
            },
        }
    }

    pub fn from_json(name: &str, j: CubSetJson, is_lset: bool) -> Result<Self> {
        let n = j.max_degree;
        if j.cells.len() != n + 1 {
            return Err(Error::BadInput("cells list length must be max_degree+1".into()));
        }
        for (d, cs) in j.cells.iter().enumerate() {
            if cs.iter().enumerate().any(|(k, &c)| k != c) {
                return Err(Error::BadInput(format!("degree {d}: cell ids must be 0..count")));
            }
        }
        let mut faces = vec![Vec::new()];
        let mut degeneracies = vec![Vec::new()];
        for d in 1..=n {
            let f =
                j.faces.get(&d.to_string()).ok_or_else(|| Error::BadInput(format!("missing faces for degree {d}")))?;
            let mut fd = Vec::new();
            for per_i in f {
                if per_i.len() != 2 {
                    return Err(Error::BadInput(format!("degree {d}: each face index needs two tables")));
                }
                fd.push([per_i[0].clone(), per_i[1].clone()]);
            }
            faces.push(fd);
            degeneracies.push(
                j.degeneracies
                    .get(&d.to_string())
                    .ok_or_else(|| Error::BadInput(format!("missing degeneracies for degree {d}")))?
                    .clone(),
            );
        }
        let set = CubSet {
            name: name.to_string(),
            max_degree: n,
            counts: j.cells.iter().map(|c| c.len()).collect(),
            faces,
            degeneracies,
            labels: j.labels,
            is_lset,
        };
        set.check_shape()?;
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_one_counts() {
        let c = standard_model(ModelKind::Cube, 1, None).unwrap();
        assert_eq!(c.count(0), 2);
        assert_eq!(c.count(1), 3);
        assert_eq!(c.nondegenerate(1).len(), 1);
    }

    #[test]
    fn cube_models_satisfy_identities() {
        for n in 0..=3 {
            let c = standard_model(ModelKind::Cube, n, Some(n + 2)).unwrap();
            let r = validate_cubical(&c);
            assert!(r.ok(), "{:?}", r.violations.first());
        }
    }

    #[test]
    fn cube_cell_counts_match_formula() {
        let binom = |n: usize, k: usize| -> usize { (0..k).fold(1, |a, i| a * (n - i) / (i + 1)) };
        for n in 0..=3 {
            let c = cube_model(n, 5);
            for m in 0..=5 {
                let expect: usize = (0..=n.min(m)).map(|j| binom(n, j) * (1 << (n - j)) * binom(m, j)).sum();
                assert_eq!(c.count(m), expect);
            }
        }
    }

    #[test]
    fn normal_form_words_reproduce_maps() {
        for n in 0..=3 {
            for m in 0..=3 {
                for coords in cube_maps(m, n) {
                    let w = CubeMorphismCell::from_coords(m, &coords);
                    assert!(w.cofaces.windows(2).all(|p| p[0].0 < p[1].0));
                    assert!(w.codegeneracies.windows(2).all(|p| p[0] < p[1]));
                    assert_eq!(n - w.cofaces.len(), m - w.codegeneracies.len());
                    for bits in 0..(1u32 << m) {
                        let v: Vec<u8> = (0..m).map(|k| ((bits >> k) & 1) as u8).collect();
                        assert_eq!(w.apply(&v), eval_coords(&coords, &v));
                    }
                }
            }
        }
    }

    #[test]
    fn corrupted_face_is_reported() {
        let mut c = standard_model(ModelKind::Cube, 2, None).unwrap();
        let before = validate_cubical(&c);
        assert!(before.ok());
        // corrupt one face entry in degree 2
        let x = c.nondegenerate(2)[0];
        let old = c.faces[2][0][0][x];
        c.faces[2][0][0][x] = (old + 1) % c.count(1);
        let after = validate_cubical(&c);
        assert!(!after.ok());
        assert!(after.violations.iter().all(|v| v.identity.contains("d_{1,0}") || v.identity.contains("s_")));
        assert!(after.violations.iter().any(|v| v.degree == 2 && v.cell == x));
    }

    #[test]
    fn literal_degeneracy_identity_fails_on_cube() {
        // s_j s_i = s_{i-1} s_j for i < j as printed
        let c = standard_model(ModelKind::Cube, 2, Some(3)).unwrap();
        let mut bad = 0;
        for y in 0..c.count(1) {
            let (i, j) = (2, 3);
            if c.degen(3, j, c.degen(2, i, y)) != c.degen(3, i - 1, c.degen(2, j - 1, y)) {
                bad += 1;
            }
        }
        assert!(bad > 0);
    }

    #[test]
    fn lcube_one_has_single_vertex() {
        let l = standard_model(ModelKind::LCube, 1, None).unwrap();
        assert_eq!(l.count(0), 1);
        assert!(l.is_lset);
        assert!(validate_cubical(&l).ok());
    }

    #[test]
    fn lcube_zero_is_a_point() {
        let l = standard_model(ModelKind::LCube, 0, Some(3)).unwrap();
        assert!(l.counts.iter().all(|&c| c == 1));
    }

    #[test]
    fn gamma_of_cube_is_lcube() {
        for n in 1..=2 {
            let g = gamma_functor(&cube_model(n, n + 2)).unwrap().set;
            let l = standard_model(ModelKind::LCube, n, Some(n + 1)).unwrap();
            assert_eq!(g.counts, l.counts);
            assert_eq!(g.faces, l.faces);
            assert_eq!(g.degeneracies, l.degeneracies);
        }
    }

    #[test]
    fn gamma_is_idempotent_and_l_fixes_lsets() {
        let g = gamma_functor(&cube_model(2, 5)).unwrap().set;
        let gg = gamma_functor(&g).unwrap().set;
        let iso = find_isomorphism(&gg, &g.truncate(gg.max_degree), 1_000_000).unwrap();
        assert!(iso.is_some());
        let lg = l_functor(&g).unwrap().set;
        assert_eq!(lg.counts, g.counts);
        let llg = l_functor(&lg).unwrap().set;
        assert_eq!((llg.counts, llg.faces, llg.degeneracies), (lg.counts, lg.faces, lg.degeneracies));
    }

    #[test]
    fn l_rejects_many_vertices() {
        assert!(matches!(l_functor(&cube_model(1, 2)), Err(Error::LNeedsSingleVertex(2))));
    }

    #[test]
    fn projection_commutes_with_structure() {
        let x = cube_model(2, 4);
        let q = gamma_functor(&x).unwrap();
        assert!(morphism_violations(&x.truncate(q.set.max_degree), &q.set, &q.projection).is_empty());
    }

    #[test]
    fn json_roundtrip() {
        let c = standard_model(ModelKind::Cube, 2, None).unwrap();
        let j = serde_json::to_string(&c.to_json(true)).unwrap();
        let back = CubSet::from_json("cube:2", serde_json::from_str(&j).unwrap(), false).unwrap();
        assert_eq!(back.faces, c.faces);
        assert_eq!(back.degeneracies, c.degeneracies);
    }

    #[test]
    fn iso_finder_rejects_nonisomorphic() {
        let a = standard_model(ModelKind::LCube, 1, Some(2)).unwrap();
        let b = standard_model(ModelKind::LCube, 2, Some(2)).unwrap();
        assert!(find_isomorphism(&a, &b, 10_000).unwrap().is_none());
    }
}

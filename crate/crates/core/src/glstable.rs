//! Matrices over ℤ/m and 𝔽_p, the interleaving product μ_n, block sums,
//! conjugator matrices, and the Pontryagin product on rack chains.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chains::{
    build_cubical_complex, tensor_complex, verify_chain_map, verify_homotopy, ChainComplex, Flavor, GradedMap,
    MapReport, TensorLayout,
};
use crate::error::{Error, Result};
use crate::field::{is_prime, FieldTag};
use crate::linalg::SparseVec;
use crate::nerves::{rack_nerve, TupleCodec};
use crate::racks::{conj_rack, FiniteGroup, PointedRack};

/// Above this many candidate matrices the full group is not enumerated.
const ENUMERATION_CAP: u64 = 4096;
/// Tuples of group elements are enumerated exhaustively up to this count.
const EXHAUSTIVE_CAP: usize = 10_000;
const MAX_GROUP_ORDER: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingTag {
    ZMod(u64),
    PrimeField(u64),
}

impl RingTag {
    pub fn zmod(m: u64) -> Result<Self> {
        if m < 2 || m > u32::MAX as u64 {
            return Err(Error::BadInput(format!("modulus {m} out of range")));
        }
        Ok(RingTag::ZMod(m))
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(RingTag::PrimeField(p))
    }

    /// `zmod:<m>`, `f<p>` or `fp:<p>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |t: &str| t.parse::<u64>().map_err(|_| Error::BadInput(format!("bad ring '{s}'")));
        if let Some(m) = s.strip_prefix("zmod:") {
            Self::zmod(num(m)?)
        } else if let Some(p) = s.strip_prefix("fp:") {
            Self::prime_field(num(p)?)
        } else if let Some(p) = s.strip_prefix('f') {
            Self::prime_field(num(p)?)
        } else {
            Err(Error::BadInput(format!("bad ring '{s}' (expected zmod:<m> or f<p>)")))
        }
    }

    pub fn modulus(self) -> u64 {
        match self {
            RingTag::ZMod(m) | RingTag::PrimeField(m) => m,
        }
    }

    pub fn is_unit(self, a: u64) -> bool {
        gcd(a % self.modulus(), self.modulus()) == 1
    }

    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus()
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.modulus() - b % self.modulus()) % self.modulus()
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.modulus()
    }

    fn inv(self, a: u64) -> Option<u64> {
        let m = self.modulus() as i64;
        let (mut r0, mut r1, mut s0, mut s1) = (m, (a % self.modulus()) as i64, 0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        (r0 == 1).then(|| s0.rem_euclid(m) as u64)
    }
}

impl fmt::Display for RingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingTag::ZMod(m) => write!(f, "zmod:{m}"),
            RingTag::PrimeField(p) => write!(f, "f{p}"),
        }
    }
}

impl Serialize for RingTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Row-major square matrix with entries reduced mod the ring's modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    pub ring: RingTag,
    pub n: usize,
    pub entries: Vec<u64>,
}

impl SquareMatrix {
    pub fn identity(ring: RingTag, n: usize) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        SquareMatrix { ring, n, entries }
    }

    pub fn from_rows(ring: RingTag, rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch("rows of a square matrix must have equal length".into()));
        }
        let entries = rows.iter().flatten().map(|&x| x % ring.modulus()).collect();
        Ok(SquareMatrix { ring, n, entries })
    }

    /// `P e_k = e_{perm[k]}` (0-based).
    pub fn permutation(ring: RingTag, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut entries = vec![0; n * n];
        for (k, &r) in perm.iter().enumerate() {
            entries[r * n + k] = 1;
        }
        SquareMatrix { ring, n, entries }
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.n.max(1)).map(|r| r.to_vec()).take(self.n).collect()
    }

    fn check(&self, other: &SquareMatrix) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        if self.n != other.n {
            return Err(Error::SizeMismatch(format!("{} vs {}", self.n, other.n)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check(other)?;
        let (n, r) = (self.n, self.ring);
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] = r.add(entries[i * n + j], r.mul(a, other.get(k, j)));
                }
            }
        }
        Ok(SquareMatrix { ring: r, n, entries })
    }

    /// Upper-triangular form by Euclidean row operations, applied alongside to `aug`.
    /// Returns the sign picked up by row swaps.
    fn triangularize(&self, aug: &mut [Vec<u64>]) -> (Vec<Vec<u64>>, bool) {
        let (n, r) = (self.n, self.ring);
        let mut a = self.rows();
        let mut neg = false;
        for col in 0..n {
            loop {
                let piv = (col..n).filter(|&i| a[i][col] != 0).min_by_key(|&i| a[i][col]);
                let Some(p) = piv else { break };
                if p != col {
                    a.swap(p, col);
                    aug.swap(p, col);
                    neg = !neg;
                }
                let mut done = true;
                for i in col + 1..n {
                    if a[i][col] == 0 {
                        continue;
                    }
                    let q = a[i][col] / a[col][col];
                    for j in 0..n {
                        a[i][j] = r.sub(a[i][j], r.mul(q, a[col][j]));
                        aug[i][j] = r.sub(aug[i][j], r.mul(q, aug[col][j]));
                    }
                    if a[i][col] != 0 {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
        }
        (a, neg)
    }

    pub fn determinant(&self) -> u64 {
        let mut aug = vec![vec![0; self.n]; self.n];
        let (a, neg) = self.triangularize(&mut aug);
        let d = (0..self.n).fold(1 % self.ring.modulus(), |acc, i| self.ring.mul(acc, a[i][i]));
        if neg {
            self.ring.sub(0, d)
        } else {
            d
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.ring.is_unit(self.determinant())
    }

    pub fn inverse(&self) -> Option<SquareMatrix> {
        let (n, r) = (self.n, self.ring);
        let mut aug = SquareMatrix::identity(r, n).rows();
        let (mut a, _) = self.triangularize(&mut aug);
        for col in (0..n).rev() {
            let u = r.inv(a[col][col])?;
            for j in 0..n {
                a[col][j] = r.mul(u, a[col][j]);
                aug[col][j] = r.mul(u, aug[col][j]);
            }
            for i in 0..col {
                let q = a[i][col];
                if q == 0 {
                    continue;
                }
                for j in 0..n {
                    a[i][j] = r.sub(a[i][j], r.mul(q, a[col][j]));
                    aug[i][j] = r.sub(aug[i][j], r.mul(q, aug[col][j]));
                }
            }
        }
        Some(SquareMatrix { ring: r, n, entries: aug.into_iter().flatten().collect() })
    }

    /// `X⁻¹ M X`.
    pub fn conjugate_by(&self, x: &SquareMatrix) -> Result<SquareMatrix> {
        let xi = x.inverse().ok_or_else(|| Error::BadInput("conjugator is not invertible".into()))?;
        xi.mul(self)?.mul(x)
    }

    /// `M ⊕ I` of the given size.
    pub fn pad(&self, size: usize) -> SquareMatrix {
        if size <= self.n {
            return self.clone();
        }
        direct_sum(self, &SquareMatrix::identity(self.ring, size - self.n)).expect("same ring")
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| format!("[{}]", r.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Equality of stable matrices: both padded by identity to a common size.
pub fn stable_eq(a: &SquareMatrix, b: &SquareMatrix) -> bool {
    let n = a.n.max(b.n);
    a.ring == b.ring && a.pad(n) == b.pad(n)
}

pub fn direct_sum(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    if a.ring != b.ring {
        return Err(Error::RingMismatch);
    }
    let n = a.n + b.n;
    let mut entries = vec![0; n * n];
    for i in 0..a.n {
        for j in 0..a.n {
            entries[i * n + j] = a.get(i, j);
        }
    }
    for i in 0..b.n {
        for j in 0..b.n {
            entries[(a.n + i) * n + a.n + j] = b.get(i, j);
        }
    }
    Ok(SquareMatrix { ring: a.ring, n, entries })
}

/// μ_n(A, B): entries of A on odd rows and columns, B on even ones (1-based).
pub fn interleave_mu(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    a.check(b)?;
    let n = 2 * a.n;
    let mut entries = vec![0; n * n];
    for i in 0..a.n {
        for j in 0..a.n {
            entries[(2 * i) * n + 2 * j] = a.get(i, j);
            entries[(2 * i + 1) * n + 2 * j + 1] = b.get(i, j);
        }
    }
    Ok(SquareMatrix { ring: a.ring, n, entries })
}

/// P_n: `e_k ↦ e_{2k−1}` for k ≤ n and `e_k ↦ e_{2(k−n)}` for k > n, so that
/// `P_n⁻¹ μ_n(A,B) P_n = A ⊕ B`.
pub fn p_matrix(ring: RingTag, n: usize) -> SquareMatrix {
    let perm: Vec<usize> = (0..2 * n).map(|k| if k < n { 2 * k } else { 2 * (k - n) + 1 }).collect();
    SquareMatrix::permutation(ring, &perm)
}

/// D_{m,n} = [[0, I_n], [I_m, 0]], size m+n: `D⁻¹(A ⊕ B)D = B ⊕ A` for A of size n
/// and B of size m.
pub fn d_matrix(ring: RingTag, m: usize, n: usize) -> SquareMatrix {
    let perm: Vec<usize> = (0..m + n).map(|k| if k < m { n + k } else { k - m }).collect();
    SquareMatrix::permutation(ring, &perm)
}

/// The product of adjacent transpositions C_{1,2} C_{2,3} ⋯ C_{2n−1,2n}.
pub fn transposition_product(ring: RingTag, n: usize) -> SquareMatrix {
    let mut c = SquareMatrix::identity(ring, 2 * n);
    for i in 0..2 * n - 1 {
        let mut perm: Vec<usize> = (0..2 * n).collect();
        perm.swap(i, i + 1);
        c = c.mul(&SquareMatrix::permutation(ring, &perm)).expect("same shape");
    }
    c
}

/// Conjugators for the associativity identities (size 4n):
/// `X = P_{2n}(I_{2n} ⊕ P_n)`, `Y = P_{2n}(P_n ⊕ I_{2n})(I_n ⊕ D_{n,2n})`.
pub fn associativity_conjugators(ring: RingTag, n: usize) -> (SquareMatrix, SquareMatrix) {
    let i = |k| SquareMatrix::identity(ring, k);
    let p2 = p_matrix(ring, 2 * n);
    let x = p2.mul(&direct_sum(&i(2 * n), &p_matrix(ring, n)).unwrap()).unwrap();
    let y = p2
        .mul(&direct_sum(&p_matrix(ring, n), &i(2 * n)).unwrap())
        .unwrap()
        .mul(&direct_sum(&i(n), &d_matrix(ring, n, 2 * n)).unwrap())
        .unwrap();
    (x, y)
}

/// Conjugators for the commutativity identities (size 2n): `X = P_n`, `Y = P_n D_{n,n}`.
pub fn commutativity_conjugators(ring: RingTag, n: usize) -> (SquareMatrix, SquareMatrix) {
    let p = p_matrix(ring, n);
    let y = p.mul(&d_matrix(ring, n, n)).unwrap();
    (p, y)
}

/// All invertible n×n matrices, when there are few enough candidates.
pub fn all_invertible(ring: RingTag, n: usize) -> Option<Vec<SquareMatrix>> {
    let m = ring.modulus();
    let cells = (n * n) as u32;
    let total = m.checked_pow(cells).filter(|&t| t <= ENUMERATION_CAP)?;
    let mut out = Vec::new();
    for mut code in 0..total {
        let mut entries = Vec::with_capacity(n * n);
        for _ in 0..cells {
            entries.push(code % m);
            code /= m;
        }
        let a = SquareMatrix { ring, n, entries };
        if a.is_invertible() {
            out.push(a);
        }
    }
    Some(out)
}

pub fn random_invertible(ring: RingTag, n: usize, rng: &mut impl Rng) -> SquareMatrix {
    loop {
        let entries = (0..n * n).map(|_| rng.random_range(0..ring.modulus())).collect();
        let a = SquareMatrix { ring, n, entries };
        if a.is_invertible() {
            return a;
        }
    }
}

struct Pool {
    ring: RingTag,
    n: usize,
    all: Option<Vec<SquareMatrix>>,
}

impl Pool {
    fn new(ring: RingTag, n: usize) -> Self {
        Pool { ring, n, all: all_invertible(ring, n) }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> SquareMatrix {
        match &self.all {
            Some(v) => v[rng.random_range(0..v.len())].clone(),
            None => random_invertible(self.ring, self.n, rng),
        }
    }
}

/// Every tuple drawn from the pools when that is small, else `trials` random ones.
fn sample(pools: &[&Pool], trials: usize, rng: &mut ChaCha8Rng) -> (Vec<Vec<SquareMatrix>>, bool) {
    let sizes: Option<Vec<usize>> = pools.iter().map(|p| p.all.as_ref().map(Vec::len)).collect();
    if let Some(sizes) = sizes {
        let total = sizes.iter().try_fold(1usize, |acc, &s| acc.checked_mul(s));
        if let Some(total) = total.filter(|&t| t <= EXHAUSTIVE_CAP) {
            let out = (0..total)
                .map(|mut code| {
                    pools
                        .iter()
                        .zip(&sizes)
                        .map(|(p, &s)| {
                            let a = p.all.as_ref().unwrap()[code % s].clone();
                            code /= s;
                            a
                        })
                        .collect()
                })
                .collect();
            return (out, true);
        }
    }
    ((0..trials).map(|_| pools.iter().map(|p| p.draw(rng)).collect()).collect(), false)
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub ok: bool,
    pub cases: usize,
    pub exhaustive: bool,
    pub witness: Option<String>,
}

/// Outcome of checking the transposition-product conjugator C_n in place of P_n.
#[derive(Clone, Debug, Serialize)]
pub struct LiteralCheck {
    pub name: String,
    pub n: usize,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixLemmaReport {
    pub ring: RingTag,
    pub n_max: usize,
    pub trials: usize,
    pub seed: u64,
    pub ok: bool,
    pub checks: Vec<LemmaCheck>,
    pub literal: Vec<LiteralCheck>,
}

type Case = Vec<SquareMatrix>;

fn run_check(
    name: String,
    cases: (Vec<Case>, bool),
    mut test: impl FnMut(&Case) -> Result<bool>,
) -> Result<LemmaCheck> {
    let (cases, exhaustive) = cases;
    let mut witness = None;
    for c in &cases {
        if !test(c)? {
            witness = Some(c.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ; "));
            break;
        }
    }
    Ok(LemmaCheck { name, ok: witness.is_none(), cases: cases.len(), exhaustive, witness })
}

/// The nested rack products `a⋆(b⋆c)` and `(a⋆b)⋆c` of tuples of GL_n matrices,
/// each entry a 4n×4n matrix.
pub fn triple_products(a: &[SquareMatrix], b: &[SquareMatrix], c: &[SquareMatrix]) -> Result<(Case, Case)> {
    let n = a.first().or(b.first()).or(c.first()).map_or(0, |m| m.n);
    let ring = a.iter().chain(b).chain(c).next().map_or(RingTag::ZMod(2), |m| m.ring);
    let i = |k| SquareMatrix::identity(ring, k);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for g in a {
        left.push(interleave_mu(&g.pad(2 * n), &i(2 * n))?);
        right.push(interleave_mu(&interleave_mu(g, &i(n))?, &i(2 * n))?);
    }
    for g in b {
        left.push(interleave_mu(&i(2 * n), &interleave_mu(g, &i(n))?)?);
        right.push(interleave_mu(&interleave_mu(&i(n), g)?, &i(2 * n))?);
    }
    for g in c {
        left.push(interleave_mu(&i(2 * n), &interleave_mu(&i(n), g)?)?);
        right.push(interleave_mu(&i(2 * n), &g.pad(2 * n))?);
    }
    Ok((left, right))
}

/// Checks the conjugator lemmas, μ as a group morphism, and the explicit X, Y
/// witnesses for associativity and commutativity, for sizes 1..=n_max.
pub fn verify_matrix_lemmas(ring: RingTag, n_max: usize, trials: usize, seed: u64) -> Result<MatrixLemmaReport> {
    if n_max == 0 {
        return Err(Error::BadInput("n_max must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pools: Vec<Pool> = (0..=n_max).map(|n| Pool::new(ring, n.max(1))).collect();
    let id = |k| SquareMatrix::identity(ring, k);
    let mut checks = Vec::new();
    let mut literal = Vec::new();
    for n in 1..=n_max {
        let pool = &pools[n];
        checks.push(LemmaCheck {
            name: format!("mu_unit n={n}"),
            ok: interleave_mu(&id(n), &id(n))? == id(2 * n),
            cases: 1,
            exhaustive: true,
            witness: None,
        });
        checks.push(run_check(format!("mu_morphism n={n}"), sample(&[pool; 4], trials, &mut rng), |c| {
            let lhs = interleave_mu(&c[0].mul(&c[1])?, &c[2].mul(&c[3])?)?;
            Ok(lhs == interleave_mu(&c[0], &c[2])?.mul(&interleave_mu(&c[1], &c[3])?)?)
        })?);
        let p = p_matrix(ring, n);
        checks.push(run_check(format!("P_conjugation n={n}"), sample(&[pool; 2], trials, &mut rng), |c| {
            Ok(interleave_mu(&c[0], &c[1])?.conjugate_by(&p)? == direct_sum(&c[0], &c[1])?)
        })?);
        for m in 1..=n_max {
            let d = d_matrix(ring, m, n);
            checks.push(run_check(
                format!("D_conjugation m={m} n={n}"),
                sample(&[pool, &pools[m]], trials, &mut rng),
                |c| Ok(direct_sum(&c[0], &c[1])?.conjugate_by(&d)? == direct_sum(&c[1], &c[0])?),
            )?);
        }
        checks.push(run_check(format!("direct_sum_associative n={n}"), sample(&[pool; 3], trials, &mut rng), |c| {
            Ok(direct_sum(&direct_sum(&c[0], &c[1])?, &c[2])? == direct_sum(&c[0], &direct_sum(&c[1], &c[2])?)?)
        })?);

        let (x, y) = associativity_conjugators(ring, n);
        let i1 = id(n);
        let i2 = id(2 * n);
        checks.push(run_check(format!("associativity_XY n={n}"), sample(&[pool], trials, &mut rng), |c| {
            let a = &c[0];
            let blocks = |k: usize| {
                let mut parts = vec![i1.clone(); 4];
                parts[k] = a.clone();
                let s = direct_sum(&direct_sum(&parts[0], &parts[1])?, &direct_sum(&parts[2], &parts[3])?)?;
                Ok::<_, Error>(s)
            };
            let x_side = [
                interleave_mu(&a.pad(2 * n), &i2)?,
                interleave_mu(&i2, &interleave_mu(a, &i1)?)?,
                interleave_mu(&i2, &interleave_mu(&i1, a)?)?,
            ];
            let y_side = [
                interleave_mu(&interleave_mu(a, &i1)?, &i2)?,
                interleave_mu(&interleave_mu(&i1, a)?, &i2)?,
                interleave_mu(&i2, &a.pad(2 * n))?,
            ];
            let targets = [blocks(0)?, blocks(2)?, blocks(3)?];
            for k in 0..3 {
                if x_side[k].conjugate_by(&x)? != targets[k] || y_side[k].conjugate_by(&y)? != targets[k] {
                    return Ok(false);
                }
            }
            Ok(true)
        })?);
        checks.push(run_check(format!("associativity_tuples n={n}"), sample(&[pool; 3], trials, &mut rng), |c| {
            let (l, r) = triple_products(&c[..1], &c[1..2], &c[2..])?;
            for (u, v) in l.iter().zip(&r) {
                if u.conjugate_by(&x)? != v.conjugate_by(&y)? {
                    return Ok(false);
                }
            }
            Ok(true)
        })?);
        let (cx, cy) = commutativity_conjugators(ring, n);
        checks.push(run_check(format!("commutativity_XY n={n}"), sample(&[pool], trials, &mut rng), |c| {
            let a = &c[0];
            let a_i = interleave_mu(a, &i1)?;
            let i_a = interleave_mu(&i1, a)?;
            let a_first = direct_sum(a, &i1)?;
            let a_second = direct_sum(&i1, a)?;
            Ok(a_i.conjugate_by(&cx)? == a_first
                && i_a.conjugate_by(&cy)? == a_first
                && i_a.conjugate_by(&cx)? == a_second
                && a_i.conjugate_by(&cy)? == a_second)
        })?);

        let cn = transposition_product(ring, n);
        let (cases, _) = sample(&[pool; 2], trials, &mut rng);
        let mut witness = None;
        for c in &cases {
            if interleave_mu(&c[0], &c[1])?.conjugate_by(&cn)? != direct_sum(&c[0], &c[1])? {
                witness = Some(format!("A={} B={}", c[0], c[1]));
                break;
            }
        }
        literal.push(LiteralCheck {
            name: "transposition_product_conjugation".into(),
            n,
            holds: witness.is_none(),
            witness,
        });
    }
    let ok = checks.iter().all(|c| c.ok);
    Ok(MatrixLemmaReport { ring, n_max, trials, seed, ok, checks, literal })
}

/// The multiplicative closure of `gens` (plus the identity) as a finite group.
pub fn matrix_group(name: &str, gens: &[SquareMatrix]) -> Result<(FiniteGroup, Vec<SquareMatrix>)> {
    let first = gens.first().ok_or_else(|| Error::BadInput("no generators".into()))?;
    let mut elems = vec![SquareMatrix::identity(first.ring, first.n)];
    let mut index: HashMap<SquareMatrix, usize> = HashMap::from([(elems[0].clone(), 0)]);
    for g in gens {
        if !g.is_invertible() {
            return Err(Error::BadInput(format!("{g} is not invertible")));
        }
        if !index.contains_key(g) {
            index.insert(g.clone(), elems.len());
            elems.push(g.clone());
        }
    }
    let mut k = 0;
    while k < elems.len() {
        for g in gens {
            let h = elems[k].mul(g)?;
            if !index.contains_key(&h) {
                if elems.len() >= MAX_GROUP_ORDER {
                    return Err(Error::BadInput(format!("matrix group exceeds {MAX_GROUP_ORDER} elements")));
                }
                index.insert(h.clone(), elems.len());
                elems.push(h);
            }
        }
        k += 1;
    }
    let mul = elems
        .iter()
        .map(|a| elems.iter().map(|b| a.mul(b).map(|c| index[&c])).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let labels = elems.iter().map(|a| a.to_string()).collect();
    Ok((FiniteGroup::from_table(name, labels, mul, 0)?, elems))
}

/// GL_n(R) as a finite group (small cases only).
pub fn gl_group(ring: RingTag, n: usize) -> Result<(FiniteGroup, Vec<SquareMatrix>)> {
    let all =
        all_invertible(ring, n).ok_or_else(|| Error::BadInput(format!("GL_{n}({ring}) too large to enumerate")))?;
    matrix_group(&format!("GL_{n}({ring})"), &all)
}

/// Checks `μ(x◁x', y◁y') = μ(x,y)◁μ(x',y')` and `μ(e,e) = e` on the whole table.
pub fn check_rack_morphism(x: &PointedRack, z: &PointedRack, mu: &[Vec<usize>]) -> Result<()> {
    let n = x.elements.len();
    if mu.len() != n || mu.iter().any(|r| r.len() != n) || mu.iter().flatten().any(|&v| v >= z.elements.len()) {
        return Err(Error::SizeMismatch("product table does not match the racks".into()));
    }
    if mu[x.basepoint][x.basepoint] != z.basepoint {
        return Err(Error::NotRackMorphism("μ(e, e) is not the basepoint".into()));
    }
    for a in 0..n {
        for b in 0..n {
            for a2 in 0..n {
                for b2 in 0..n {
                    if mu[x.op[a][a2]][x.op[b][b2]] != z.op[mu[a][b]][mu[a2][b2]] {
                        return Err(Error::NotRackMorphism(format!(
                            "at ({}, {}) ◁ ({}, {})",
                            x.elements[a], x.elements[b], x.elements[a2], x.elements[b2]
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `(x_1..x_p) ⋆ (y_1..y_q) = (μ(x_1,e), …, μ(x_p,e), μ(e,y_1), …, μ(e,y_q))`
/// as a map from the tensor square of `src` into `tgt`.
pub fn pontryagin_rack_product(
    src: &ChainComplex,
    x: &PointedRack,
    tgt: &ChainComplex,
    z: &PointedRack,
    mu: &[Vec<usize>],
    layout: &TensorLayout,
) -> Result<GradedMap> {
    check_rack_morphism(x, z, mu)?;
    let field = tgt.field;
    let cx = TupleCodec { base: x.elements.len() };
    let cz = TupleCodec { base: z.elements.len() };
    let e = x.basepoint;
    GradedMap::from_fn("⋆", field, 0, &layout.dims, &tgt.dims(), |n, k| {
        let (p, i, j) = layout.split(n, k);
        let a = cx.decode(src.cells[p][i], p);
        let b = cx.decode(src.cells[n - p][j], n - p);
        let t: Vec<usize> = a.iter().map(|&g| mu[g][e]).chain(b.iter().map(|&h| mu[e][h])).collect();
        tgt.basis_index(n, cz.encode(&t)).map_or_else(SparseVec::new, |r| SparseVec::unit(r, field))
    })
}

/// Pontryagin product on CR(conj G) induced by the multiplication of G;
/// a rack morphism exactly when G is abelian.
pub fn group_pontryagin(g: &FiniteGroup, c: &ChainComplex, layout: &TensorLayout) -> Result<GradedMap> {
    let x = conj_rack(g);
    pontryagin_rack_product(c, &x, c, &x, &g.mul, layout)
}

#[derive(Clone, Debug, Serialize)]
pub struct InterleaveProductReport {
    pub ring: RingTag,
    pub n: usize,
    pub source_order: usize,
    pub target_order: usize,
    pub top: usize,
    pub chain_map: MapReport,
    pub ok: bool,
}

/// The product CR(GL_n(R))^{⊗2} → CR(μ_n(GL_n × GL_n)) induced by the
/// interleaving, certified as a chain map through degree `top`.
pub fn interleave_product_check(
    ring: RingTag,
    n: usize,
    field: FieldTag,
    top: usize,
    budget: u128,
) -> Result<InterleaveProductReport> {
    let (g, mats) = gl_group(ring, n)?;
    let mut images = Vec::with_capacity(mats.len() * mats.len());
    for a in &mats {
        for b in &mats {
            images.push(interleave_mu(a, b)?);
        }
    }
    let (h, hmats) = matrix_group(&format!("mu_{n}({ring})"), &images)?;
    let hidx: HashMap<&SquareMatrix, usize> = hmats.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let k = mats.len();
    let mu: Vec<Vec<usize>> = (0..k).map(|a| (0..k).map(|b| hidx[&images[a * k + b]]).collect()).collect();
    let (x, z) = (conj_rack(&g), conj_rack(&h));
    let src = build_cubical_complex(Arc::new(rack_nerve(&x, top, budget)?), field, Flavor::Normalized)?;
    let tgt = build_cubical_complex(Arc::new(rack_nerve(&z, top, budget)?), field, Flavor::Normalized)?;
    let (tensor, layout) = tensor_complex(&src, &src, top)?;
    let prod = pontryagin_rack_product(&src, &x, &tgt, &z, &mu, &layout)?;
    let chain_map = verify_chain_map(&prod, &tensor, &tgt);
    let ok = chain_map.ok;
    Ok(InterleaveProductReport { ring, n, source_order: g.order(), target_order: h.order(), top, chain_map, ok })
}

/// Candidate homotopies between the identity and `c_a = − ◁ a` on rack chains.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum HomotopyForm {
    /// `(x_1..x_n) ↦ (a, x_1, …, x_n)`.
    Prepend,
    /// `(x_1..x_n) ↦ (−1)^n (x_1, …, x_n, a)`.
    SignedAppend,
}

/// `c_a(x_1..x_n) = (x_1◁a, …, x_n◁a)`.
pub fn conjugation_action(c: &ChainComplex, x: &PointedRack, a: usize) -> Result<GradedMap> {
    let field = c.field;
    let codec = TupleCodec { base: x.elements.len() };
    GradedMap::from_fn("c_a", field, 0, &c.dims(), &c.dims(), |n, k| {
        let t: Vec<usize> = codec.decode(c.cells[n][k], n).into_iter().map(|y| x.op[y][a]).collect();
        c.basis_index(n, codec.encode(&t)).map_or_else(SparseVec::new, |r| SparseVec::unit(r, field))
    })
}

pub fn conjugation_homotopy(c: &ChainComplex, x: &PointedRack, a: usize, form: HomotopyForm) -> Result<GradedMap> {
    let field = c.field;
    let codec = TupleCodec { base: x.elements.len() };
    GradedMap::from_fn("h_a", field, 1, &c.dims(), &c.dims(), |n, k| {
        let mut t = codec.decode(c.cells[n][k], n);
        let sign = match form {
            HomotopyForm::Prepend => {
                t.insert(0, a);
                1
            }
            HomotopyForm::SignedAppend => {
                t.push(a);
                if n % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
        };
        c.basis_index(n + 1, codec.encode(&t))
            .map_or_else(SparseVec::new, |r| SparseVec::from_int_pairs(field, [(r, sign)]))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugationReport {
    pub rack: String,
    pub a: String,
    pub top: usize,
    /// `d h + h d = c_a − id` with the signed append form.
    pub signed_append: MapReport,
    /// `d h + h d = id − c_a` with the prepend form.
    pub prepend_to_id: MapReport,
    /// `d h + h d = c_a − id` with the prepend form.
    pub prepend_from_id: MapReport,
    pub ok: bool,
}

/// Certifies that `c_a` induces the identity on HR through degree `top`.
pub fn conjugation_invariance(
    x: &PointedRack,
    a: usize,
    field: FieldTag,
    top: usize,
    budget: u128,
) -> Result<ConjugationReport> {
    if a >= x.elements.len() {
        return Err(Error::BadInput(format!("element index {a} out of range")));
    }
    let c = build_cubical_complex(Arc::new(rack_nerve(x, top + 1, budget)?), field, Flavor::Normalized)?;
    let id = GradedMap::identity(&c);
    let ca = conjugation_action(&c, x, a)?;
    let signed = conjugation_homotopy(&c, x, a, HomotopyForm::SignedAppend)?;
    let prepend = conjugation_homotopy(&c, x, a, HomotopyForm::Prepend)?;
    let signed_append = verify_homotopy(&id, &ca, &signed, &c, &c);
    let prepend_to_id = verify_homotopy(&ca, &id, &prepend, &c, &c);
    let prepend_from_id = verify_homotopy(&id, &ca, &prepend, &c, &c);
    let ok = signed_append.ok;
    Ok(ConjugationReport {
        rack: x.name.clone(),
        a: x.elements[a].clone(),
        top,
        signed_append,
        prepend_to_id,
        prepend_from_id,
        ok,
    })
}

#[cfg(test)]
mod tests;

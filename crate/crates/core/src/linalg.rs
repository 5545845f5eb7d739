//! Sparse column matrices and the column-reduction kernel used by every
//! homology computation.

use crate::error::{Error, Result};
use crate::field::{FieldTag, Scalar};

/// Sparse vector with strictly increasing indices and no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    pub entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    pub fn unit(i: usize, field: FieldTag) -> Self {
        SparseVec { entries: vec![(i, field.one())] }
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_pairs(mut pairs: Vec<(usize, Scalar)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Scalar)> = Vec::with_capacity(pairs.len());
        for (i, a) in pairs {
            match entries.last_mut() {
                Some((j, b)) if *j == i => *b = b.add(&a),
                _ => entries.push((i, a)),
            }
        }
        entries.retain(|(_, a)| !a.is_zero());
        SparseVec { entries }
    }

    /// Builds from integer coefficients.
    pub fn from_int_pairs(field: FieldTag, pairs: impl IntoIterator<Item = (usize, i64)>) -> Self {
        Self::from_pairs(pairs.into_iter().map(|(i, c)| (i, field.from_i64(c))).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Largest index carrying a nonzero entry.
    pub fn pivot(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, a)| (*i, a.mul(c))).collect() }
    }

    pub fn neg(&self) -> SparseVec {
        SparseVec { entries: self.entries.iter().map(|(i, a)| (*i, a.neg())).collect() }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: &Scalar, other: &SparseVec) {
        if c.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (a, b) = (&self.entries, &other.entries);
        let (mut x, mut y) = (0, 0);
        while x < a.len() || y < b.len() {
            if y >= b.len() || (x < a.len() && a[x].0 < b[y].0) {
                out.push(a[x].clone());
                x += 1;
            } else if x >= a.len() || b[y].0 < a[x].0 {
                out.push((b[y].0, b[y].1.mul(c)));
                y += 1;
            } else {
                let s = a[x].1.add(&b[y].1.mul(c));
                if !s.is_zero() {
                    out.push((a[x].0, s));
                }
                x += 1;
                y += 1;
            }
        }
        self.entries = out;
    }

    pub fn add(&self, other: &SparseVec) -> SparseVec {
        let mut r = self.clone();
        if let Some((_, a)) = other.entries.first() {
            r.axpy(&a.field().one(), other);
        }
        r
    }

    pub fn sub(&self, other: &SparseVec) -> SparseVec {
        let mut r = self.clone();
        if let Some((_, a)) = other.entries.first() {
            r.axpy(&a.field().one().neg(), other);
        }
        r
    }

    pub fn max_index(&self) -> Option<usize> {
        self.pivot()
    }

    pub fn to_dense(&self, len: usize, field: FieldTag) -> Vec<Scalar> {
        let mut v = vec![field.zero(); len];
        for (i, a) in &self.entries {
            v[*i] = a.clone();
        }
        v
    }
}

/// Matrix stored as sparse columns over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub field: FieldTag,
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(field: FieldTag, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, columns: vec![SparseVec::new(); cols] }
    }

    pub fn identity(field: FieldTag, n: usize) -> Self {
        Matrix { field, rows: n, cols: n, columns: (0..n).map(|i| SparseVec::unit(i, field)).collect() }
    }

    pub fn from_columns(field: FieldTag, rows: usize, columns: Vec<SparseVec>) -> Result<Self> {
        for c in &columns {
            if let Some(p) = c.pivot() {
                if p >= rows {
                    return Err(Error::ShapeError(format!("row index {p} out of range {rows}")));
                }
            }
        }
        Ok(Matrix { field, rows, cols: columns.len(), columns })
    }

    /// Dense integer rows, converted into the field.
    pub fn from_int_rows(field: FieldTag, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut cols = vec![Vec::new(); c];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    cols[j].push((i, v));
                }
            }
        }
        Matrix {
            field,
            rows: r,
            cols: c,
            columns: cols.into_iter().map(|p| SparseVec::from_int_pairs(field, p)).collect(),
        }
    }

    pub fn from_scalar_rows(field: FieldTag, rows: &[Vec<Scalar>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut cols = vec![Vec::new(); c];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != c {
                return Err(Error::ShapeError("ragged rows".into()));
            }
            for (j, v) in row.iter().enumerate() {
                if v.field() != field {
                    return Err(Error::FieldMismatch);
                }
                if !v.is_zero() {
                    cols[j].push((i, v.clone()));
                }
            }
        }
        Ok(Matrix { field, rows: r, cols: c, columns: cols.into_iter().map(SparseVec::from_pairs).collect() })
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c].get(r).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    /// Verifies every entry lives in `self.field`.
    pub fn check_field(&self) -> Result<()> {
        for c in &self.columns {
            for (_, a) in &c.entries {
                if a.field() != self.field {
                    return Err(Error::FieldMismatch);
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, a) in &v.entries {
            out.axpy(a, &self.columns[*j]);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeError(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            columns: other.columns.iter().map(|c| self.apply(c)).collect(),
        })
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeError(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().zip(&other.columns).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut cols = vec![Vec::new(); self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, a) in &c.entries {
                cols[*i].push((j, a.clone()));
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            columns: cols.into_iter().map(|entries| SparseVec { entries }).collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (j, c) in self.columns.iter().enumerate() {
            for (i, a) in &c.entries {
                d[*i][j] = a.clone();
            }
        }
        d
    }

    /// Rows of string-formatted entries (rationals as `num/den`).
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.to_dense().into_iter().map(|r| r.into_iter().map(|a| a.to_string()).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        let mut b = PivotBasis::new(self.rows);
        for c in &self.columns {
            b.insert_reduced(c.clone());
        }
        b.len()
    }
}

/// Vectors with pairwise distinct pivots (largest nonzero index).
#[derive(Clone, Debug)]
pub struct PivotBasis {
    dim: usize,
    vecs: Vec<SparseVec>,
    pivot_owner: Vec<Option<usize>>,
}

impl PivotBasis {
    pub fn new(dim: usize) -> Self {
        PivotBasis { dim, vecs: Vec::new(), pivot_owner: vec![None; dim] }
    }

    pub fn len(&self) -> usize {
        self.vecs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vecs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[SparseVec] {
        &self.vecs
    }

    pub fn owner(&self, row: usize) -> Option<usize> {
        self.pivot_owner[row]
    }

    /// Lowest-pivot reduction; returns the residue, which is zero iff `v`
    /// lies in the span. When `track` is given, subtracted multiples are
    /// mirrored onto it using the companion vectors.
    fn reduce_lowest(&self, mut v: SparseVec, mut track: Option<(&mut SparseVec, &[SparseVec])>) -> SparseVec {
        while let Some(p) = v.pivot() {
            let Some(k) = self.pivot_owner[p] else { break };
            let b = &self.vecs[k];
            let c = v.get(p).unwrap().div(b.get(p).unwrap()).unwrap().neg();
            v.axpy(&c, b);
            if let Some((t, comp)) = track.as_mut() {
                t.axpy(&c, &comp[k]);
            }
        }
        v
    }

    /// Reduces `v` and adds the residue if nonzero; returns whether it was new.
    pub fn insert_reduced(&mut self, v: SparseVec) -> bool {
        let r = self.reduce_lowest(v, None);
        match r.pivot() {
            None => false,
            Some(p) => {
                self.pivot_owner[p] = Some(self.vecs.len());
                self.vecs.push(r);
                true
            }
        }
    }

    /// Adds a vector whose pivot is not yet owned.
    pub fn push_unchecked(&mut self, v: SparseVec) -> usize {
        let p = v.pivot().expect("zero vector");
        assert!(self.pivot_owner[p].is_none(), "pivot already owned");
        self.pivot_owner[p] = Some(self.vecs.len());
        self.vecs.push(v);
        self.vecs.len() - 1
    }

    pub fn residue(&self, v: &SparseVec) -> SparseVec {
        self.reduce_lowest(v.clone(), None)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.residue(v).is_zero()
    }

    /// Full reduction from the top index downward: `v = Σ c_k b_k + rem`
    /// with `rem` vanishing at every pivot position. Linear in `v`.
    pub fn decompose(&self, v: &SparseVec) -> (Vec<(usize, Scalar)>, SparseVec) {
        let mut v = v.clone();
        let mut coeffs = Vec::new();
        let mut bound = usize::MAX;
        loop {
            let found = v
                .entries
                .iter()
                .rev()
                .find(|(i, _)| *i < bound && self.pivot_owner[*i].is_some())
                .map(|(i, a)| (*i, a.clone()));
            let Some((i, a)) = found else { break };
            let k = self.pivot_owner[i].unwrap();
            let b = &self.vecs[k];
            let c = a.div(b.get(i).unwrap()).unwrap();
            v.axpy(&c.neg(), b);
            coeffs.push((k, c));
            bound = i;
        }
        (coeffs, v)
    }
}

/// Result of reducing the columns of a matrix.
#[derive(Clone, Debug)]
pub struct ColumnSpaceAnalysis {
    pub rank: usize,
    pub kernel_basis: Matrix,
    pub image_basis: Matrix,
    pub pivot_columns: Vec<usize>,
}

/// Column reduction `R = M V` keeping the combinations `V`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub field: FieldTag,
    pub rows: usize,
    pub cols: usize,
    /// Reduced nonzero columns with distinct pivots.
    pub image: PivotBasis,
    /// `combos[k]` satisfies `M * combos[k] = image.vectors()[k]`.
    pub combos: Vec<SparseVec>,
    pub kernel: Vec<SparseVec>,
    pub pivot_columns: Vec<usize>,
}

impl Reduction {
    pub fn new(m: &Matrix) -> Result<Self> {
        m.check_field()?;
        let mut image = PivotBasis::new(m.rows);
        let mut combos: Vec<SparseVec> = Vec::new();
        let mut kernel = Vec::new();
        let mut pivot_columns = Vec::new();
        for (j, col) in m.columns.iter().enumerate() {
            let mut t = SparseVec::unit(j, m.field);
            let r = image.reduce_lowest(col.clone(), Some((&mut t, &combos)));
            if r.is_zero() {
                kernel.push(t);
            } else {
                image.push_unchecked(r);
                combos.push(t);
                pivot_columns.push(j);
            }
        }
        Ok(Reduction { field: m.field, rows: m.rows, cols: m.cols, image, combos, kernel, pivot_columns })
    }

    pub fn rank(&self) -> usize {
        self.image.len()
    }

    /// Some `x` with `M x = v`, or `NoSolution`.
    pub fn solve(&self, v: &SparseVec) -> Result<SparseVec> {
        if let Some(p) = v.pivot() {
            if p >= self.rows {
                return Err(Error::ShapeError(format!("vector index {p} out of range {}", self.rows)));
            }
        }
        let mut x = SparseVec::new();
        let r = self.image.reduce_lowest(v.clone(), Some((&mut x, &self.combos)));
        if r.is_zero() {
            Ok(x.neg())
        } else {
            Err(Error::NoSolution)
        }
    }
}

pub fn column_space_analysis(m: &Matrix) -> Result<ColumnSpaceAnalysis> {
    let red = Reduction::new(m)?;
    Ok(ColumnSpaceAnalysis {
        rank: red.rank(),
        kernel_basis: Matrix { field: m.field, rows: m.cols, cols: red.kernel.len(), columns: red.kernel.clone() },
        image_basis: Matrix { field: m.field, rows: m.rows, cols: red.rank(), columns: red.image.vectors().to_vec() },
        pivot_columns: red.pivot_columns,
    })
}

pub fn solve_in_image(m: &Matrix, v: &SparseVec) -> Result<SparseVec> {
    if let Some(p) = v.pivot() {
        if p >= m.rows {
            return Err(Error::ShapeError(format!("vector index {p} out of range {}", m.rows)));
        }
    }
    for (_, a) in &v.entries {
        if a.field() != m.field {
            return Err(Error::FieldMismatch);
        }
    }
    Reduction::new(m)?.solve(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    const Q: FieldTag = FieldTag::Rationals;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::Q(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    #[test]
    fn identity_has_full_rank() {
        let a = column_space_analysis(&Matrix::identity(Q, 2)).unwrap();
        assert_eq!(a.rank, 2);
        assert_eq!(a.kernel_basis.cols, 0);
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let a = column_space_analysis(&Matrix::zeros(Q, 3, 4)).unwrap();
        assert_eq!(a.rank, 0);
        assert_eq!(a.kernel_basis.cols, 4);
    }

    #[test]
    fn rank_one_kernel_is_two_minus_one() {
        let m = Matrix::from_int_rows(Q, &[vec![1, 2], vec![2, 4]]);
        let a = column_space_analysis(&m).unwrap();
        assert_eq!(a.rank, 1);
        assert_eq!(a.kernel_basis.cols, 1);
        let k = &a.kernel_basis.columns[0];
        // proportional to (2, -1)
        let ratio = k.get(0).unwrap().div(k.get(1).unwrap()).unwrap();
        assert_eq!(ratio, Q.from_i64(-2));
        assert!(m.apply(k).is_zero());
    }

    #[test]
    fn solve_examples() {
        let v = SparseVec::from_int_pairs(Q, [(0, 3), (1, -1)]);
        assert_eq!(solve_in_image(&Matrix::identity(Q, 2), &v).unwrap(), v);
        assert!(matches!(solve_in_image(&Matrix::zeros(Q, 2, 2), &v), Err(Error::NoSolution)));
        let m = Matrix::from_int_rows(Q, &[vec![2]]);
        let x = solve_in_image(&m, &SparseVec::from_int_pairs(Q, [(0, 1)])).unwrap();
        assert_eq!(x.get(0).unwrap(), &q(1, 2));
    }

    #[test]
    fn solve_rejects_bad_shape() {
        let v = SparseVec::from_int_pairs(Q, [(5, 1)]);
        assert!(matches!(solve_in_image(&Matrix::identity(Q, 2), &v), Err(Error::ShapeError(_))));
    }

    #[test]
    fn mixed_field_matrix_rejected() {
        let mut m = Matrix::identity(Q, 2);
        m.columns[1] = SparseVec::unit(1, FieldTag::PrimeField(3));
        assert!(matches!(column_space_analysis(&m), Err(Error::FieldMismatch)));
    }

    #[test]
    fn decompose_splits_span_and_complement() {
        let mut b = PivotBasis::new(3);
        b.insert_reduced(SparseVec::from_int_pairs(Q, [(0, 1), (2, 1)]));
        let v = SparseVec::from_int_pairs(Q, [(0, 2), (1, 5), (2, 3)]);
        let (c, rem) = b.decompose(&v);
        assert_eq!(c, vec![(0, Q.from_i64(3))]);
        assert_eq!(rem, SparseVec::from_int_pairs(Q, [(0, -1), (1, 5)]));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6)
            .prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r))
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(rows in small_matrix()) {
            let m = Matrix::from_int_rows(Q, &rows);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_is_annihilated_and_dimension_adds_up(rows in small_matrix()) {
            let m = Matrix::from_int_rows(Q, &rows);
            let a = column_space_analysis(&m).unwrap();
            prop_assert_eq!(a.rank + a.kernel_basis.cols, m.cols);
            prop_assert!(m.mul(&a.kernel_basis).unwrap().is_zero());
            prop_assert_eq!(a.kernel_basis.rank(), a.kernel_basis.cols);
        }

        #[test]
        fn fp_rank_matches_rational_rank_without_small_primes(rows in small_matrix()) {
            // entries in [-3,3]: reduction mod a large prime keeps all pivots unless
            // some minor is divisible by it, which cannot happen below the Hadamard bound
            let p = 1_000_003u64;
            let mq = Matrix::from_int_rows(Q, &rows);
            let mp = Matrix::from_int_rows(FieldTag::prime(p).unwrap(), &rows);
            prop_assert_eq!(mq.rank(), mp.rank());
        }

        #[test]
        fn solve_recovers_image_vectors(rows in small_matrix(), x in proptest::collection::vec(-3i64..4, 6)) {
            let m = Matrix::from_int_rows(Q, &rows);
            let xv = SparseVec::from_int_pairs(Q, x.iter().take(m.cols).copied().enumerate());
            let v = m.apply(&xv);
            let sol = solve_in_image(&m, &v).unwrap();
            prop_assert_eq!(m.apply(&sol), v);
        }
    }
}

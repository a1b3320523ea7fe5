//! Exact linear algebra over the rationals.
//!
//! Everything here works with [`Q`] (arbitrary precision rationals). Subspaces are
//! stored by their reduced row echelon basis, so two subspaces compare equal exactly
//! when they are the same subspace.

pub mod poly;

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;
pub type Vector = Vec<Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero_vec(n: usize) -> Vector {
    vec![Q::zero(); n]
}

pub fn unit_vec(n: usize, i: usize) -> Vector {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut s = Q::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

pub fn vec_add(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Q], b: &[Q]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Q], c: &Q) -> Vector {
    a.iter().map(|x| x * c).collect()
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a += c * x;
        }
    }
}

/// Linear combination `sum coeffs[i] * vectors[i]` in `Q^n`.
pub fn combine(n: usize, coeffs: &[Q], vectors: &[Vector]) -> Vector {
    let mut out = zero_vec(n);
    for (c, v) in coeffs.iter().zip(vectors) {
        axpy(&mut out, c, v);
    }
    out
}

/// Lexicographic comparison of rational vectors.
pub fn cmp_vec(a: &[Q], b: &[Q]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinAlgError {
    DimensionMismatch { expected: usize, found: usize },
    Inconsistent { column: usize },
    Singular,
    NotIndependent,
}

impl fmt::Display for LinAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinAlgError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            LinAlgError::Inconsistent { column } => {
                write!(f, "linear system is inconsistent (right-hand side column {column})")
            }
            LinAlgError::Singular => write!(f, "matrix is singular"),
            LinAlgError::NotIndependent => write!(f, "vectors are not linearly independent"),
        }
    }
}

/// Dense row-major matrix over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from rows; `cols` is used when `rows` is empty.
    pub fn from_rows(cols: usize, rows: &[Vector]) -> Result<Self, LinAlgError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(LinAlgError::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix { rows: rows.len(), cols, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vector]) -> Result<Self, LinAlgError> {
        Ok(Matrix::from_rows(rows, cols)?.transpose())
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix { rows, cols, data: entries.iter().map(|&x| q(x)).collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[Q]) {
        for i in 0..self.rows {
            self[(i, j)] = v[i].clone();
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    /// Row vector times matrix, `v^T M`.
    pub fn vec_mul(&self, v: &[Q]) -> Vector {
        assert_eq!(self.rows, v.len(), "vector-matrix shape mismatch");
        let mut out = zero_vec(self.cols);
        for (i, c) in v.iter().enumerate() {
            axpy(&mut out, c, self.row(i));
        }
        out
    }

    /// `u^T M v`.
    pub fn bilinear(&self, u: &[Q], v: &[Q]) -> Q {
        dot(u, &self.mul_vec(v))
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_add(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix { rows: self.rows, cols: self.cols, data: vec_sub(&self.data, &other.data) }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: vec_scale(&self.data, c) }
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, k: usize) -> Matrix {
        let mut out = Matrix::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    pub fn is_skew(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self[(i, i)].is_zero() && (i + 1..self.rows).all(|j| self[(i, j)] == -&self[(j, i)])
            })
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (i + 1..self.rows).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn data(&self) -> &[Q] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Q> {
        self.data
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<Q>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Sub-block with the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    pub fn rank(&self) -> usize {
        let mut rows = self.row_vecs();
        rref_rows(&mut rows, self.cols).len()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows = self.row_vecs();
        let pivots = rref_rows(&mut rows, self.cols);
        let mut out = Matrix::from_rows(self.cols, &rows).expect("row length preserved");
        out.rows = rows.len();
        (out, pivots)
    }

    pub fn determinant(&self) -> Result<Q, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Ok(Q::zero());
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let piv = a[c][c].clone();
            det *= &piv;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &piv;
                let (top, bottom) = a.split_at_mut(r);
                axpy(&mut bottom[0][c..], &-f, &top[c][c..]);
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix, LinAlgError> {
        if !self.is_square() {
            return Err(LinAlgError::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let mut rows: Vec<Vector> = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vec(n, i));
                r
            })
            .collect();
        let pivots = rref_rows(&mut rows, n);
        if pivots.len() < n {
            return Err(LinAlgError::Singular);
        }
        let inv: Vec<Vector> = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        Matrix::from_rows(n, &inv)
    }

    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref();
        let n = self.cols;
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..n).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vec(n);
            v[free] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, free)].clone();
            }
            basis.push(v);
        }
        Subspace::span(n, &basis)
    }

    /// Span of the columns.
    pub fn column_space(&self) -> Subspace {
        Subspace::span(self.rows, &self.transpose().row_vecs())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Gauss-Jordan elimination in place, searching pivots among the first `limit`
/// columns. Zero rows are dropped; pivots are normalised to one. Returns the pivot
/// columns in increasing order.
pub fn rref_rows(rows: &mut Vec<Vector>, limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -row[c].clone();
                axpy(&mut row[c..], &f, &pivot_row[c..]);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// A linear subspace of `Q^n`, stored by its canonical reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(n: usize) -> Self {
        Subspace { ambient: n, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient: n, basis: (0..n).map(|i| unit_vec(n, i)).collect(), pivots: (0..n).collect() }
    }

    /// Span of the given vectors. Panics if a vector has the wrong length; use
    /// [`Subspace::try_span`] for untrusted input.
    pub fn span(n: usize, vectors: &[Vector]) -> Self {
        Subspace::try_span(n, vectors).expect("vector length matches ambient dimension")
    }

    pub fn try_span(n: usize, vectors: &[Vector]) -> Result<Self, LinAlgError> {
        for v in vectors {
            if v.len() != n {
                return Err(LinAlgError::DimensionMismatch { expected: n, found: v.len() });
            }
        }
        let mut rows: Vec<Vector> = vectors.iter().filter(|v| !is_zero_vec(v)).cloned().collect();
        let pivots = rref_rows(&mut rows, n);
        Ok(Subspace { ambient: n, basis: rows, pivots })
    }

    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let vs: Vec<Vector> = indices.iter().map(|&i| unit_vec(n, i)).collect();
        Subspace::span(n, &vs)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis_matrix(&self) -> Matrix {
        Matrix::from_rows(self.ambient, &self.basis).expect("basis rows have ambient length")
    }

    /// Coordinates of `v` in the canonical basis, or `None` if `v` is not in the subspace.
    pub fn coordinates(&self, v: &[Q]) -> Option<Vector> {
        if v.len() != self.ambient {
            return None;
        }
        let c: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let back = combine(self.ambient, &c, &self.basis);
        if back.as_slice() == v {
            Some(c)
        } else {
            None
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.ambient == self.ambient && other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    pub fn with_vectors(&self, extra: &[Vector]) -> Subspace {
        let mut vs = self.basis.clone();
        vs.extend(extra.iter().cloned());
        Subspace::span(self.ambient, &vs)
    }

    /// Linear functionals vanishing on the subspace, as rows of a matrix.
    pub fn annihilator(&self) -> Matrix {
        if self.basis.is_empty() {
            return Matrix::identity(self.ambient);
        }
        let k = self.basis_matrix().kernel();
        k.basis_matrix()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let a = self.annihilator();
        let b = other.annihilator();
        let mut rows = a.row_vecs();
        rows.extend(b.row_vecs());
        Matrix::from_rows(self.ambient, &rows).expect("annihilator rows").kernel()
    }

    /// Standard basis vectors at the non-pivot columns; they span a complement.
    pub fn complement_indices(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn complement(&self) -> Subspace {
        Subspace::coordinate(self.ambient, &self.complement_indices())
    }

    /// Image under a linear map given as a matrix acting on column vectors.
    pub fn image(&self, m: &Matrix) -> Subspace {
        let vs: Vec<Vector> = self.basis.iter().map(|v| m.mul_vec(v)).collect();
        Subspace::span(m.rows(), &vs)
    }

    /// `{ v : m v in target }`.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Subspace {
        let ann = target.annihilator();
        ann.mul(m).kernel()
    }

    pub fn is_invariant(&self, m: &Matrix) -> bool {
        self.basis.iter().all(|v| self.contains(&m.mul_vec(v)))
    }

    /// Canonical ordering: larger dimension first, then pivots, then entries.
    pub fn canonical_cmp(&self, other: &Subspace) -> Ordering {
        other
            .dim()
            .cmp(&self.dim())
            .then_with(|| self.pivots.cmp(&other.pivots))
            .then_with(|| {
                for (a, b) in self.basis.iter().zip(&other.basis) {
                    match cmp_vec(a, b) {
                        Ordering::Equal => {}
                        o => return o,
                    }
                }
                Ordering::Equal
            })
    }
}

pub fn rref_basis(m: &Matrix) -> Subspace {
    Subspace::span(m.cols(), &m.row_vecs())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceRelation {
    pub intersection: Subspace,
    pub sum: Subspace,
    pub a_contains_b: bool,
    pub b_contains_a: bool,
}

pub fn subspace_relate(a: &Subspace, b: &Subspace) -> Result<SubspaceRelation, LinAlgError> {
    if a.ambient() != b.ambient() {
        return Err(LinAlgError::DimensionMismatch { expected: a.ambient(), found: b.ambient() });
    }
    Ok(SubspaceRelation {
        intersection: a.intersection(b),
        sum: a.sum(b),
        a_contains_b: a.contains_space(b),
        b_contains_a: b.contains_space(a),
    })
}

/// Solution set of `A X = B`: one particular solution plus the kernel of `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Matrix,
    pub kernel: Subspace,
}

pub fn solve_linear(a: &Matrix, rhs: &Matrix) -> Result<Solution, LinAlgError> {
    if a.rows() != rhs.rows() {
        return Err(LinAlgError::DimensionMismatch { expected: a.rows(), found: rhs.rows() });
    }
    let n = a.cols();
    let k = rhs.cols();
    let mut rows: Vec<Vector> = (0..a.rows())
        .map(|i| {
            let mut r = a.row(i).to_vec();
            r.extend(rhs.row(i).iter().cloned());
            r
        })
        .collect();
    let pivots = rref_rows(&mut rows, n + k);
    if let Some(&c) = pivots.iter().find(|&&c| c >= n) {
        return Err(LinAlgError::Inconsistent { column: c - n });
    }
    let mut x = Matrix::zeros(n, k);
    for (i, &p) in pivots.iter().enumerate() {
        for j in 0..k {
            x[(p, j)] = rows[i][n + j].clone();
        }
    }
    Ok(Solution { particular: x, kernel: a.kernel() })
}

/// Solves `A x = b` for a single right-hand side.
pub fn solve_vec(a: &Matrix, b: &[Q]) -> Option<Vector> {
    let rhs = Matrix::from_cols(b.len(), &[b.to_vec()]).ok()?;
    solve_linear(a, &rhs).ok().map(|s| s.particular.col(0))
}

/// `{ v : form(v, w) = 0 for all w in W }` for the bilinear form `v^T F w`.
pub fn orthogonal_complement(form: &Matrix, w: &Subspace) -> Result<Subspace, LinAlgError> {
    if !form.is_square() || form.rows() != w.ambient() {
        return Err(LinAlgError::DimensionMismatch { expected: w.ambient(), found: form.rows() });
    }
    let rows: Vec<Vector> = w.basis().iter().map(|x| form.mul_vec(x)).collect();
    if rows.is_empty() {
        return Ok(Subspace::full(w.ambient()));
    }
    Ok(Matrix::from_rows(w.ambient(), &rows)?.kernel())
}

/// An ordered, linearly independent family with a coordinate solver for its span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    n: usize,
    vectors: Vec<Vector>,
    reduced: Vec<Vector>,
    transform: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Frame {
    pub fn new(n: usize, vectors: Vec<Vector>) -> Result<Frame, LinAlgError> {
        let k = vectors.len();
        let mut rows: Vec<Vector> = Vec::with_capacity(k);
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != n {
                return Err(LinAlgError::DimensionMismatch { expected: n, found: v.len() });
            }
            let mut r = v.clone();
            r.extend(unit_vec(k, i));
            rows.push(r);
        }
        let pivots = rref_rows(&mut rows, n);
        if pivots.len() < k {
            return Err(LinAlgError::NotIndependent);
        }
        let reduced = rows.iter().map(|r| r[..n].to_vec()).collect();
        let transform = rows.iter().map(|r| r[n..].to_vec()).collect();
        Ok(Frame { n, vectors, reduced, transform, pivots })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Coordinates of `v` with respect to the frame vectors, `None` if outside the span.
    pub fn coords(&self, v: &[Q]) -> Option<Vector> {
        if v.len() != self.n {
            return None;
        }
        let lead: Vector = self.pivots.iter().map(|&p| v[p].clone()).collect();
        if combine(self.n, &lead, &self.reduced).as_slice() != v {
            return None;
        }
        Some(combine(self.len(), &lead, &self.transform))
    }

    pub fn vector(&self, coords: &[Q]) -> Vector {
        combine(self.n, coords, &self.vectors)
    }

    pub fn span(&self) -> Subspace {
        Subspace::span(self.n, &self.vectors)
    }
}

/// Extends the standard basis choice greedily: returns indices `i` such that the
/// unit vectors `e_i` together with `base` stay independent, until the full space
/// is spanned.
pub fn greedy_unit_complement(base: &Subspace) -> Vec<usize> {
    let n = base.ambient();
    let mut cur = base.clone();
    let mut picked = Vec::new();
    for i in 0..n {
        if cur.is_full() {
            break;
        }
        let e = unit_vec(n, i);
        if !cur.contains(&e) {
            cur = cur.with_vectors(&[e]);
            picked.push(i);
        }
    }
    picked
}

pub fn sign(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact square root of a non-negative rational, if it is a rational square.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer();
    let d = x.denom();
    let rn = n.sqrt();
    let rd = d.sqrt();
    if &(&rn * &rn) == n && &(&rd * &rd) == d {
        Some(Q::new(rn, rd))
    } else {
        None
    }
}

/// All principal minors of a square matrix, indexed by subsets in increasing bitmask order.
pub fn principal_minors(m: &Matrix) -> Vec<(Vec<usize>, Q)> {
    let n = m.rows();
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let det = m.select(&idx, &idx).determinant().expect("square");
        out.push((idx, det));
    }
    out
}

/// Leading principal minors `det M[0..k, 0..k]` for `k = 1..n`.
pub fn leading_minors(m: &Matrix) -> Vec<Q> {
    (1..=m.rows())
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            m.select(&idx, &idx).determinant().expect("square")
        })
        .collect()
}

/// Positive definiteness of a symmetric matrix via Sylvester's criterion.
pub fn is_positive_definite(m: &Matrix) -> bool {
    m.is_symmetric() && leading_minors(m).iter().all(Signed::is_positive)
}

/// Positive semidefiniteness of a symmetric matrix: all principal minors are non-negative.
pub fn is_positive_semidefinite(m: &Matrix) -> bool {
    m.is_symmetric() && principal_minors(m).iter().all(|(_, d)| !d.is_negative())
}

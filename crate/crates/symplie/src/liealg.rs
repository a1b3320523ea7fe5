//! Lie algebras by structure constants, representations, Chevalley-Eilenberg
//! cochains in low degree, central and derived series, derivations and
//! semidirect products.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exactla::{
    axpy, is_zero_vec, unit_vec, zero_vec, Frame, LinAlgError, Matrix, Subspace, Vector, Q,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieError {
    DimensionMismatch { expected: usize, found: usize },
    IndexOutOfRange { index: usize, dim: usize },
    NotAntisymmetric { i: usize, j: usize },
    Jacobi { i: usize, j: usize, k: usize },
    NotRepresentation { i: usize, j: usize },
    DegreeOutOfRange { degree: usize },
    NotDerivation,
    NotClosed,
    NotSubalgebra,
    NotIdeal,
    LinAlg(LinAlgError),
}

impl fmt::Display for LieError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            LieError::IndexOutOfRange { index, dim } => write!(f, "basis index {index} out of range for dimension {dim}"),
            LieError::NotAntisymmetric { i, j } => write!(f, "bracket is not antisymmetric at ({i}, {j})"),
            LieError::Jacobi { i, j, k } => write!(f, "Jacobi identity fails on basis triple ({i}, {j}, {k})"),
            LieError::NotRepresentation { i, j } => {
                write!(f, "matrices do not define a representation: bracket of {i} and {j} fails")
            }
            LieError::DegreeOutOfRange { degree } => write!(f, "cochain degree {degree} is out of range"),
            LieError::NotDerivation => write!(f, "map is not a derivation"),
            LieError::NotClosed => write!(f, "cochain is not closed"),
            LieError::NotSubalgebra => write!(f, "subspace is not a subalgebra"),
            LieError::NotIdeal => write!(f, "subspace is not an ideal"),
            LieError::LinAlg(e) => write!(f, "{e}"),
        }
    }
}

impl From<LinAlgError> for LieError {
    fn from(e: LinAlgError) -> Self {
        LieError::LinAlg(e)
    }
}

/// Binomial coefficient for small arguments.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Increasing `d`-tuples of `0..n` in lexicographic order.
pub fn combos(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn rec(n: usize, d: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, d, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, d, 0, &mut cur, &mut out);
    out
}

/// Position of an increasing tuple in the lexicographic order of [`combos`].
pub fn combo_index(n: usize, c: &[usize]) -> usize {
    let k = c.len();
    let mut idx = 0;
    let mut prev: isize = -1;
    for (i, &ci) in c.iter().enumerate() {
        for j in (prev + 1) as usize..ci {
            idx += binomial(n - 1 - j, k - 1 - i);
        }
        prev = ci as isize;
    }
    idx
}

/// Sorts indices in place and returns the permutation sign, or 0 on a repeat.
fn sort_sign(idx: &mut [usize]) -> i32 {
    let mut sign = 1;
    for i in 0..idx.len() {
        for j in 0..idx.len() - 1 - i {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            } else if idx[j] == idx[j + 1] {
                return 0;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        0
    } else {
        sign
    }
}

/// A finite-dimensional Lie algebra given by structure constants `[e_i, e_j] = c_ij^k e_k`.
/// Equality compares structure constants only, not labels.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    c: Vec<Q>,
    sparse: Vec<Vec<(usize, Q)>>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.dim == o.dim && self.c == o.c
    }
}

impl Eq for LieAlgebra {}

impl LieAlgebra {
    fn build(dim: usize, c: Vec<Q>) -> Result<LieAlgebra, LieError> {
        if c.len() != dim * dim * dim {
            return Err(LieError::DimensionMismatch { expected: dim * dim * dim, found: c.len() });
        }
        for i in 0..dim {
            for j in i..dim {
                for k in 0..dim {
                    let a = &c[(i * dim + j) * dim + k];
                    let b = &c[(j * dim + i) * dim + k];
                    if *a != -b.clone() {
                        return Err(LieError::NotAntisymmetric { i, j });
                    }
                }
            }
        }
        let sparse = (0..dim * dim)
            .map(|ij| (0..dim).filter_map(|k| {
                let x = &c[ij * dim + k];
                (!x.is_zero()).then(|| (k, x.clone()))
            }).collect())
            .collect();
        let labels = (1..=dim).map(|i| format!("e{i}")).collect();
        Ok(LieAlgebra { dim, labels, c, sparse })
    }

    /// Structure constants indexed `c[(i * n + j) * n + k]`; antisymmetry and Jacobi are checked.
    pub fn from_structure_constants(dim: usize, c: Vec<Q>) -> Result<LieAlgebra, LieError> {
        let g = LieAlgebra::build(dim, c)?;
        if let Some(&(i, j, k)) = validate_jacobi(&g).first() {
            return Err(LieError::Jacobi { i, j, k });
        }
        Ok(g)
    }

    /// Only antisymmetry is enforced; use [`validate_jacobi`] to test the result.
    pub fn from_brackets_unchecked(dim: usize, brackets: &[(usize, usize, Vector)]) -> Result<LieAlgebra, LieError> {
        let mut c = vec![Q::zero(); dim * dim * dim];
        for (i, j, v) in brackets {
            let (i, j) = (*i, *j);
            if i >= dim || j >= dim {
                return Err(LieError::IndexOutOfRange { index: i.max(j), dim });
            }
            if v.len() != dim {
                return Err(LieError::DimensionMismatch { expected: dim, found: v.len() });
            }
            if i == j {
                if !is_zero_vec(v) {
                    return Err(LieError::NotAntisymmetric { i, j });
                }
                continue;
            }
            for k in 0..dim {
                c[(i * dim + j) * dim + k] = v[k].clone();
                c[(j * dim + i) * dim + k] = -v[k].clone();
            }
        }
        LieAlgebra::build(dim, c)
    }

    /// Brackets `[e_i, e_j] = v` for listed pairs (others zero), with Jacobi checked.
    pub fn from_brackets(dim: usize, brackets: &[(usize, usize, Vector)]) -> Result<LieAlgebra, LieError> {
        let g = LieAlgebra::from_brackets_unchecked(dim, brackets)?;
        if let Some(&(i, j, k)) = validate_jacobi(&g).first() {
            return Err(LieError::Jacobi { i, j, k });
        }
        Ok(g)
    }

    /// Convenience constructor from sparse integer data `(i, j, [(k, c)])`.
    pub fn from_int_brackets(dim: usize, brackets: &[(usize, usize, &[(usize, i64)])]) -> Result<LieAlgebra, LieError> {
        let bs: Vec<(usize, usize, Vector)> = brackets
            .iter()
            .map(|(i, j, terms)| {
                let mut v = zero_vec(dim);
                for &(k, c) in terms.iter() {
                    v[k] += crate::exactla::q(c);
                }
                (*i, *j, v)
            })
            .collect();
        LieAlgebra::from_brackets(dim, &bs)
    }

    pub fn abelian(dim: usize) -> LieAlgebra {
        LieAlgebra::build(dim, vec![Q::zero(); dim * dim * dim]).expect("zero bracket")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> LieAlgebra {
        assert_eq!(labels.len(), self.dim);
        self.labels = labels;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn structure_constants(&self) -> &[Q] {
        &self.c
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> &Q {
        &self.c[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero entries of `[e_i, e_j]`.
    pub fn bracket_terms(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.sparse[i * self.dim + j]
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> Vector {
        let mut v = zero_vec(self.dim);
        for (k, c) in self.bracket_terms(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vector {
        let n = self.dim;
        let mut out = zero_vec(n);
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() || i == j {
                    continue;
                }
                let terms = &self.sparse[i * n + j];
                if terms.is_empty() {
                    continue;
                }
                let f = ui * vj;
                for (k, c) in terms {
                    out[*k] += &f * c;
                }
            }
        }
        out
    }

    /// Matrix of `ad(u)`; column `j` is `[u, e_j]`.
    pub fn ad(&self, u: &[Q]) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.bracket(u, &unit_vec(self.dim, j));
            m.set_col(j, &col);
        }
        m
    }

    pub fn ad_basis(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for (k, c) in self.bracket_terms(i, j) {
                m[(*k, j)] = c.clone();
            }
        }
        m
    }

    pub fn is_abelian(&self) -> bool {
        self.sparse.iter().all(Vec::is_empty)
    }

    /// Structure constants of the subalgebra spanned by `basis`, in that basis.
    pub fn in_basis(&self, basis: &[Vector]) -> Result<LieAlgebra, LieError> {
        let frame = Frame::new(self.dim, basis.to_vec())?;
        let k = basis.len();
        let mut c = vec![Q::zero(); k * k * k];
        for a in 0..k {
            for b in a + 1..k {
                let br = self.bracket(&basis[a], &basis[b]);
                let co = frame.coords(&br).ok_or(LieError::NotSubalgebra)?;
                for (t, x) in co.into_iter().enumerate() {
                    c[(b * k + a) * k + t] = -x.clone();
                    c[(a * k + b) * k + t] = x;
                }
            }
        }
        LieAlgebra::build(k, c)
    }

    /// Quotient by an ideal, with basis the classes of `complement`.
    pub fn quotient(&self, ideal: &Subspace, complement: &[Vector]) -> Result<LieAlgebra, LieError> {
        let mut all = complement.to_vec();
        all.extend(ideal.basis().iter().cloned());
        let frame = Frame::new(self.dim, all)?;
        if frame.len() != self.dim {
            return Err(LieError::DimensionMismatch { expected: self.dim, found: frame.len() });
        }
        let k = complement.len();
        let mut c = vec![Q::zero(); k * k * k];
        for a in 0..k {
            for b in a + 1..k {
                let br = self.bracket(&complement[a], &complement[b]);
                let co = frame.coords(&br).expect("frame spans the algebra");
                for t in 0..k {
                    c[(a * k + b) * k + t] = co[t].clone();
                    c[(b * k + a) * k + t] = -co[t].clone();
                }
            }
        }
        LieAlgebra::build(k, c)
    }

    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n = self.dim + other.dim;
        let mut c = vec![Q::zero(); n * n * n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, x) in self.bracket_terms(i, j) {
                    c[(i * n + j) * n + k] = x.clone();
                }
            }
        }
        let o = self.dim;
        for i in 0..other.dim {
            for j in 0..other.dim {
                for (k, x) in other.bracket_terms(i, j) {
                    c[((i + o) * n + j + o) * n + k + o] = x.clone();
                }
            }
        }
        LieAlgebra::build(n, c).expect("direct sum is antisymmetric")
    }

    /// Image of the algebra under the linear change of basis `new e_i = basis[i]`.
    pub fn change_basis(&self, basis: &[Vector]) -> Result<LieAlgebra, LieError> {
        if basis.len() != self.dim {
            return Err(LieError::DimensionMismatch { expected: self.dim, found: basis.len() });
        }
        self.in_basis(basis)
    }
}

/// Basis triples `i < j < k` on which the Jacobi identity fails.
pub fn validate_jacobi(g: &LieAlgebra) -> Vec<(usize, usize, usize)> {
    let n = g.dim();
    let mut bad = Vec::new();
    let e = |i: usize| unit_vec(n, i);
    for i in 0..n {
        for j in i + 1..n {
            let eij = g.bracket_basis(i, j);
            for k in j + 1..n {
                let a = g.bracket(&eij, &e(k));
                let b = g.bracket(&g.bracket_basis(j, k), &e(i));
                let c = g.bracket(&g.bracket_basis(k, i), &e(j));
                let s: Vector = a.iter().zip(&b).zip(&c).map(|((x, y), z)| x + y + z).collect();
                if !is_zero_vec(&s) {
                    bad.push((i, j, k));
                }
            }
        }
    }
    bad
}

/// A representation `rho: g -> gl(M)` given by the matrices `rho(e_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    algebra: LieAlgebra,
    mats: Vec<Matrix>,
    module_dim: usize,
}

impl Representation {
    pub fn new(algebra: &LieAlgebra, mats: Vec<Matrix>) -> Result<Representation, LieError> {
        let n = algebra.dim();
        if mats.len() != n {
            return Err(LieError::DimensionMismatch { expected: n, found: mats.len() });
        }
        let m = mats.first().map(Matrix::rows).unwrap_or(0);
        for a in &mats {
            if a.rows() != m || a.cols() != m {
                return Err(LieError::DimensionMismatch { expected: m, found: a.rows().max(a.cols()) });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let lhs = mats[i].commutator(&mats[j]);
                let mut rhs = Matrix::zeros(m, m);
                for (k, c) in algebra.bracket_terms(i, j) {
                    rhs = rhs.add(&mats[*k].scale(c));
                }
                if lhs != rhs {
                    return Err(LieError::NotRepresentation { i, j });
                }
            }
        }
        Ok(Representation { algebra: algebra.clone(), mats, module_dim: m })
    }

    /// Trivial representation on `Q^m`. With `m = 0` and an empty algebra the module dimension is 0.
    pub fn trivial(algebra: &LieAlgebra, m: usize) -> Representation {
        Representation { algebra: algebra.clone(), mats: vec![Matrix::zeros(m, m); algebra.dim()], module_dim: m }
    }

    pub fn adjoint(algebra: &LieAlgebra) -> Representation {
        let mats = (0..algebra.dim()).map(|i| algebra.ad_basis(i)).collect();
        Representation { algebra: algebra.clone(), mats, module_dim: algebra.dim() }
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.mats[i]
    }

    pub fn operator(&self, u: &[Q]) -> Matrix {
        let m = self.module_dim;
        let mut out = Matrix::zeros(m, m);
        for (i, c) in u.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.mats[i].scale(c));
            }
        }
        out
    }

    pub fn act(&self, u: &[Q], x: &[Q]) -> Vector {
        let mut out = zero_vec(self.module_dim);
        for (i, c) in u.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.mats[i].mul_vec(x));
            }
        }
        out
    }
}

/// An alternating `degree`-form on an algebra of dimension `dim` with values in
/// `Q^module_dim`. Coefficients are stored per increasing index tuple (lexicographic),
/// each followed by its `module_dim` components.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cochain {
    degree: usize,
    dim: usize,
    module_dim: usize,
    coeffs: Vec<Q>,
}

impl Cochain {
    pub fn space_dim(degree: usize, dim: usize, module_dim: usize) -> usize {
        binomial(dim, degree) * module_dim
    }

    pub fn zero(degree: usize, dim: usize, module_dim: usize) -> Cochain {
        Cochain { degree, dim, module_dim, coeffs: vec![Q::zero(); Cochain::space_dim(degree, dim, module_dim)] }
    }

    pub fn from_vector(degree: usize, dim: usize, module_dim: usize, coeffs: Vector) -> Result<Cochain, LieError> {
        let expected = Cochain::space_dim(degree, dim, module_dim);
        if coeffs.len() != expected {
            return Err(LieError::DimensionMismatch { expected, found: coeffs.len() });
        }
        Ok(Cochain { degree, dim, module_dim, coeffs })
    }

    /// Builds a cochain from its values on increasing basis tuples.
    pub fn from_fn(degree: usize, dim: usize, module_dim: usize, mut f: impl FnMut(&[usize]) -> Vector) -> Cochain {
        let mut coeffs = Vec::with_capacity(Cochain::space_dim(degree, dim, module_dim));
        for c in combos(dim, degree) {
            let v = f(&c);
            assert_eq!(v.len(), module_dim);
            coeffs.extend(v);
        }
        Cochain { degree, dim, module_dim, coeffs }
    }

    /// Two-form with scalar values from a skew matrix.
    pub fn from_skew_matrix(m: &Matrix) -> Cochain {
        Cochain::from_fn(2, m.rows(), 1, |c| vec![m[(c[0], c[1])].clone()])
    }

    pub fn to_skew_matrix(&self) -> Matrix {
        assert!(self.degree == 2 && self.module_dim == 1);
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (idx, c) in combos(self.dim, 2).into_iter().enumerate() {
            let x = &self.coeffs[idx];
            m[(c[0], c[1])] = x.clone();
            m[(c[1], c[0])] = -x.clone();
        }
        m
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_vector(self) -> Vector {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coeffs)
    }

    pub fn add(&self, o: &Cochain) -> Cochain {
        assert_eq!((self.degree, self.dim, self.module_dim), (o.degree, o.dim, o.module_dim));
        Cochain { coeffs: crate::exactla::vec_add(&self.coeffs, &o.coeffs), ..self.clone() }
    }

    pub fn sub(&self, o: &Cochain) -> Cochain {
        assert_eq!((self.degree, self.dim, self.module_dim), (o.degree, o.dim, o.module_dim));
        Cochain { coeffs: crate::exactla::vec_sub(&self.coeffs, &o.coeffs), ..self.clone() }
    }

    pub fn scale(&self, c: &Q) -> Cochain {
        Cochain { coeffs: crate::exactla::vec_scale(&self.coeffs, c), ..self.clone() }
    }

    /// Value on an increasing tuple.
    pub fn at_sorted(&self, idx: &[usize]) -> &[Q] {
        let p = combo_index(self.dim, idx) * self.module_dim;
        &self.coeffs[p..p + self.module_dim]
    }

    /// Value on basis vectors `e_{idx[0]}, ...` in any order.
    pub fn on_basis(&self, idx: &[usize]) -> Vector {
        let mut s = idx.to_vec();
        let sg = sort_sign(&mut s);
        if sg == 0 {
            return zero_vec(self.module_dim);
        }
        let v = self.at_sorted(&s);
        if sg > 0 {
            v.to_vec()
        } else {
            v.iter().map(|x| -x.clone()).collect()
        }
    }

    /// Value on arbitrary vectors (multilinear extension).
    pub fn eval(&self, args: &[&[Q]]) -> Vector {
        assert_eq!(args.len(), self.degree);
        let mut out = zero_vec(self.module_dim);
        let mut idx = vec![0usize; self.degree];
        self.eval_rec(args, 0, Q::one(), &mut idx, &mut out);
        out
    }

    fn eval_rec(&self, args: &[&[Q]], pos: usize, coef: Q, idx: &mut Vec<usize>, out: &mut Vector) {
        if pos == args.len() {
            let v = self.on_basis(idx);
            axpy(out, &coef, &v);
            return;
        }
        for (i, x) in args[pos].iter().enumerate() {
            if x.is_zero() || idx[..pos].contains(&i) {
                continue;
            }
            idx[pos] = i;
            self.eval_rec(args, pos + 1, &coef * x, idx, out);
        }
    }

    pub fn eval1(&self, u: &[Q]) -> Vector {
        self.eval(&[u])
    }

    pub fn eval2(&self, u: &[Q], v: &[Q]) -> Vector {
        self.eval(&[u, v])
    }
}

fn check_cochain(rep: &Representation, c: &Cochain) -> Result<(), LieError> {
    if c.dim != rep.algebra.dim() {
        return Err(LieError::DimensionMismatch { expected: rep.algebra.dim(), found: c.dim });
    }
    if c.module_dim != rep.module_dim {
        return Err(LieError::DimensionMismatch { expected: rep.module_dim, found: c.module_dim });
    }
    Ok(())
}

/// Matrix of the coboundary `C^degree -> C^{degree+1}` in the coefficient order of [`Cochain`].
/// Only degrees 0, 1 and 2 are supported.
pub fn coboundary_matrix(rep: &Representation, degree: usize) -> Result<Matrix, LieError> {
    if degree > 2 {
        return Err(LieError::DegreeOutOfRange { degree });
    }
    let g = &rep.algebra;
    let n = g.dim();
    let m = rep.module_dim;
    let outs = combos(n, degree + 1);
    let mut mat = Matrix::zeros(outs.len() * m, binomial(n, degree) * m);
    for (oi, x) in outs.iter().enumerate() {
        // sum_i (-1)^i rho(x_i) c(x without x_i)
        for i in 0..x.len() {
            let rest: Vec<usize> = x.iter().enumerate().filter(|&(t, _)| t != i).map(|(_, &v)| v).collect();
            let col0 = combo_index(n, &rest) * m;
            let s = if i % 2 == 0 { Q::one() } else { -Q::one() };
            let rho = &rep.mats[x[i]];
            for a in 0..m {
                for b in 0..m {
                    let r = &rho[(a, b)];
                    if !r.is_zero() {
                        mat[(oi * m + a, col0 + b)] += &s * r;
                    }
                }
            }
        }
        // sum_{i<j} (-1)^{i+j} c([x_i, x_j], rest)
        for i in 0..x.len() {
            for j in i + 1..x.len() {
                let rest: Vec<usize> =
                    x.iter().enumerate().filter(|&(t, _)| t != i && t != j).map(|(_, &v)| v).collect();
                let s = if (i + j) % 2 == 0 { Q::one() } else { -Q::one() };
                for (k, ck) in g.bracket_terms(x[i], x[j]) {
                    let mut tuple = vec![*k];
                    tuple.extend(rest.iter().cloned());
                    let sg = sort_sign(&mut tuple);
                    if sg == 0 {
                        continue;
                    }
                    let f = if sg > 0 { &s * ck } else { -(&s * ck) };
                    let col0 = combo_index(n, &tuple) * m;
                    for a in 0..m {
                        mat[(oi * m + a, col0 + a)] += &f;
                    }
                }
            }
        }
    }
    Ok(mat)
}

pub fn coboundary_apply(rep: &Representation, c: &Cochain) -> Result<Cochain, LieError> {
    check_cochain(rep, c)?;
    let mat = coboundary_matrix(rep, c.degree)?;
    Ok(Cochain {
        degree: c.degree + 1,
        dim: c.dim,
        module_dim: c.module_dim,
        coeffs: mat.mul_vec(&c.coeffs),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyData {
    pub degree: usize,
    pub cocycles: Subspace,
    pub coboundaries: Subspace,
    pub h_dim: usize,
}

/// Cocycles, coboundaries and the dimension of `H^degree(g, M)` for degree 1 or 2.
pub fn cohomology_space(rep: &Representation, degree: usize) -> Result<CohomologyData, LieError> {
    if degree != 1 && degree != 2 {
        return Err(LieError::DegreeOutOfRange { degree });
    }
    let z = coboundary_matrix(rep, degree)?.kernel();
    let b = coboundary_matrix(rep, degree - 1)?.column_space();
    let h_dim = z.dim() - b.dim();
    Ok(CohomologyData { degree, cocycles: z, coboundaries: b, h_dim })
}

/// `span { [a, b] : a in A, b in B }`.
pub fn bracket_span(g: &LieAlgebra, a: &Subspace, b: &Subspace) -> Subspace {
    let mut vs = Vec::new();
    for x in a.basis() {
        for y in b.basis() {
            let z = g.bracket(x, y);
            if !is_zero_vec(&z) {
                vs.push(z);
            }
        }
    }
    Subspace::span(g.dim(), &vs)
}

/// `{ v : [g, v] in s }`.
pub fn ideal_preimage(g: &LieAlgebra, s: &Subspace) -> Subspace {
    let n = g.dim();
    let ann = s.annihilator();
    let mut rows = Vec::new();
    for i in 0..n {
        let m = ann.mul(&g.ad_basis(i));
        rows.extend(m.row_vecs());
    }
    if rows.is_empty() {
        return Subspace::full(n);
    }
    Matrix::from_rows(n, &rows).expect("rows").kernel()
}

/// `{ v : [v, s] = 0 }`.
pub fn centralizer(g: &LieAlgebra, s: &Subspace) -> Subspace {
    let n = g.dim();
    let mut rows = Vec::new();
    for x in s.basis() {
        // [v, x] = -ad(x) v
        rows.extend(g.ad(x).row_vecs());
    }
    if rows.is_empty() {
        return Subspace::full(n);
    }
    Matrix::from_rows(n, &rows).expect("rows").kernel()
}

pub fn center(g: &LieAlgebra) -> Subspace {
    centralizer(g, &Subspace::full(g.dim()))
}

/// `K(e_i, e_j) = tr(ad e_i ad e_j)`.
pub fn killing_form(g: &LieAlgebra) -> Matrix {
    let ad: Vec<Matrix> = (0..g.dim()).map(|i| g.ad_basis(i)).collect();
    Matrix::from_fn(g.dim(), g.dim(), |i, j| ad[i].mul(&ad[j]).trace())
}

/// Kernel of the Killing form, an ideal containing the nilradical.
pub fn killing_radical(g: &LieAlgebra) -> Subspace {
    if g.dim() == 0 {
        return Subspace::zero(0);
    }
    killing_form(g).kernel()
}

/// Smallest ideal containing the given subspace.
pub fn ideal_closure(g: &LieAlgebra, s: &Subspace) -> Subspace {
    let n = g.dim();
    let mut cur = s.clone();
    let mut frontier: Vec<Vector> = cur.basis().to_vec();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for i in 0..n {
                let w = g.bracket(&unit_vec(n, i), v);
                if !is_zero_vec(&w) && !cur.contains(&w) {
                    cur = cur.with_vectors(core::slice::from_ref(&w));
                    next.push(w);
                }
            }
        }
        frontier = next;
    }
    cur
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeriesKind {
    Descending,
    Ascending,
    Derived,
}

/// Terms of a series up to stabilisation. `class` is the nilpotency class
/// (descending or ascending) or the solvability degree (derived), when defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesChain {
    pub kind: SeriesKind,
    pub terms: Vec<Subspace>,
    pub class: Option<usize>,
}

impl SeriesChain {
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    pub fn term(&self, i: usize) -> &Subspace {
        let last = self.terms.len() - 1;
        &self.terms[i.min(last)]
    }
}

pub fn series(g: &LieAlgebra, kind: SeriesKind) -> SeriesChain {
    let n = g.dim();
    let full = Subspace::full(n);
    let mut terms = Vec::new();
    match kind {
        SeriesKind::Descending | SeriesKind::Derived => {
            let mut cur = full.clone();
            loop {
                let next = if kind == SeriesKind::Descending {
                    bracket_span(g, &full, &cur)
                } else {
                    bracket_span(g, &cur, &cur)
                };
                let done = next == cur;
                terms.push(cur);
                if done {
                    break;
                }
                cur = next;
            }
            let class = if terms.last().is_some_and(Subspace::is_zero) { Some(terms.len() - 1) } else { None };
            SeriesChain { kind, terms, class }
        }
        SeriesKind::Ascending => {
            let mut cur = Subspace::zero(n);
            loop {
                let next = ideal_preimage(g, &cur);
                let done = next == cur;
                terms.push(cur);
                if done {
                    break;
                }
                cur = next;
            }
            let class = if terms.last().is_some_and(Subspace::is_full) { Some(terms.len() - 1) } else { None };
            SeriesChain { kind, terms, class }
        }
    }
}

pub fn nilpotency_class(g: &LieAlgebra) -> Option<usize> {
    series(g, SeriesKind::Descending).class
}

pub fn solvability_degree(g: &LieAlgebra) -> Option<usize> {
    series(g, SeriesKind::Derived).class
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubalgebraFlags {
    pub subalgebra: bool,
    pub ideal: bool,
    pub abelian: bool,
}

pub fn subspace_algebra_flags(g: &LieAlgebra, s: &Subspace) -> Result<SubalgebraFlags, LieError> {
    if s.ambient() != g.dim() {
        return Err(LieError::DimensionMismatch { expected: g.dim(), found: s.ambient() });
    }
    let inner = bracket_span(g, s, s);
    Ok(SubalgebraFlags {
        subalgebra: s.contains_space(&inner),
        ideal: s.contains_space(&bracket_span(g, &Subspace::full(g.dim()), s)),
        abelian: inner.is_zero(),
    })
}

pub fn is_ideal(g: &LieAlgebra, s: &Subspace) -> bool {
    s.contains_space(&bracket_span(g, &Subspace::full(g.dim()), s))
}

pub fn is_derivation(g: &LieAlgebra, phi: &Matrix) -> Result<bool, LieError> {
    let n = g.dim();
    if phi.rows() != n || phi.cols() != n {
        return Err(LieError::DimensionMismatch { expected: n, found: phi.rows() });
    }
    let cols: Vec<Vector> = (0..n).map(|j| phi.col(j)).collect();
    for i in 0..n {
        for j in i + 1..n {
            let lhs = phi.mul_vec(&g.bracket_basis(i, j));
            let mut rhs = g.bracket(&cols[i], &unit_vec(n, j));
            axpy(&mut rhs, &Q::one(), &g.bracket(&unit_vec(n, i), &cols[j]));
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Der(g)` as a subspace of `Q^{n*n}` (matrices flattened row-major).
pub fn derivation_algebra(g: &LieAlgebra) -> Subspace {
    let n = g.dim();
    let var = |r: usize, c: usize| r * n + c;
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                // phi([e_i, e_j])_k - [phi e_i, e_j]_k - [e_i, phi e_j]_k = 0
                let mut row = zero_vec(n * n);
                for (l, c) in g.bracket_terms(i, j) {
                    row[var(k, *l)] += c;
                }
                for l in 0..n {
                    for (kk, c) in g.bracket_terms(l, j) {
                        if *kk == k {
                            row[var(l, i)] -= c;
                        }
                    }
                    for (kk, c) in g.bracket_terms(i, l) {
                        if *kk == k {
                            row[var(l, j)] -= c;
                        }
                    }
                }
                if !is_zero_vec(&row) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return Subspace::full(n * n);
    }
    Matrix::from_rows(n * n, &rows).expect("rows").kernel()
}

/// `alpha_phi(u, v) = alpha(phi u, v) + alpha(u, phi v)` for a derivation `phi`.
pub fn two_form_derive(g: &LieAlgebra, alpha: &Cochain, phi: &Matrix) -> Result<Cochain, LieError> {
    if alpha.degree() != 2 || alpha.dim() != g.dim() {
        return Err(LieError::DimensionMismatch { expected: g.dim(), found: alpha.dim() });
    }
    if !is_derivation(g, phi)? {
        return Err(LieError::NotDerivation);
    }
    Ok(form_derive_unchecked(alpha, phi))
}

/// The same expression without requiring `phi` to be a derivation.
pub fn form_derive_unchecked(alpha: &Cochain, phi: &Matrix) -> Cochain {
    let n = alpha.dim();
    let cols: Vec<Vector> = (0..n).map(|j| phi.col(j)).collect();
    Cochain::from_fn(2, n, alpha.module_dim(), |c| {
        let (i, j) = (c[0], c[1]);
        let mut v = alpha.eval2(&cols[i], &unit_vec(n, j));
        axpy(&mut v, &Q::one(), &alpha.eval2(&unit_vec(n, i), &cols[j]));
        v
    })
}

/// `h + M` with `[u, v] = [u, v]_h + c(u, v)`, `[u, x] = rho(u) x` and `[x, y] = 0`.
pub fn semidirect(h: &LieAlgebra, rep: &Representation, cocycle: Option<&Cochain>) -> Result<LieAlgebra, LieError> {
    if rep.algebra() != h {
        return Err(LieError::DimensionMismatch { expected: h.dim(), found: rep.algebra().dim() });
    }
    let k = h.dim();
    let m = rep.module_dim();
    if let Some(c) = cocycle {
        check_cochain(rep, c)?;
        if c.degree() != 2 {
            return Err(LieError::DegreeOutOfRange { degree: c.degree() });
        }
        if !coboundary_apply(rep, c)?.is_zero() {
            return Err(LieError::NotClosed);
        }
    }
    let n = k + m;
    let mut bs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let mut v = h.bracket_basis(i, j);
            v.extend(match cocycle {
                Some(c) => c.at_sorted(&[i, j]).to_vec(),
                None => zero_vec(m),
            });
            bs.push((i, j, v));
        }
        for a in 0..m {
            let mut v = zero_vec(k);
            v.extend(rep.action(i).col(a));
            bs.push((i, k + a, v));
        }
    }
    LieAlgebra::from_brackets(n, &bs)
}

/// A linear connection on an algebra: `mats[i]` is `nabla_{e_i}`, column `j` is `nabla_{e_i} e_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    dim: usize,
    mats: Vec<Matrix>,
}

impl Connection {
    pub fn new(dim: usize, mats: Vec<Matrix>) -> Result<Connection, LieError> {
        if mats.len() != dim {
            return Err(LieError::DimensionMismatch { expected: dim, found: mats.len() });
        }
        for m in &mats {
            if m.rows() != dim || m.cols() != dim {
                return Err(LieError::DimensionMismatch { expected: dim, found: m.rows() });
            }
        }
        Ok(Connection { dim, mats })
    }

    pub fn zero(dim: usize) -> Connection {
        Connection { dim, mats: vec![Matrix::zeros(dim, dim); dim] }
    }

    /// From values `nabla_{e_i} e_j = f(i, j)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Vector) -> Connection {
        let mats = (0..dim)
            .map(|i| {
                let mut m = Matrix::zeros(dim, dim);
                for j in 0..dim {
                    m.set_col(j, &f(i, j));
                }
                m
            })
            .collect();
        Connection { dim, mats }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn operator(&self, u: &[Q]) -> Matrix {
        let mut out = Matrix::zeros(self.dim, self.dim);
        for (i, c) in u.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.mats[i].scale(c));
            }
        }
        out
    }

    pub fn apply(&self, u: &[Q], v: &[Q]) -> Vector {
        let mut out = zero_vec(self.dim);
        for (i, c) in u.iter().enumerate() {
            if !c.is_zero() {
                axpy(&mut out, c, &self.mats[i].mul_vec(v));
            }
        }
        out
    }

    /// `T(u, v) = nabla_u v - nabla_v u - [u, v]` as a vector-valued two-form.
    pub fn torsion(&self, g: &LieAlgebra) -> Cochain {
        let n = self.dim;
        Cochain::from_fn(2, n, n, |c| {
            let (i, j) = (c[0], c[1]);
            let mut t = self.mats[i].col(j);
            axpy(&mut t, &-Q::one(), &self.mats[j].col(i));
            axpy(&mut t, &-Q::one(), &g.bracket_basis(i, j));
            t
        })
    }

    /// `R(e_i, e_j) = [nabla_i, nabla_j] - nabla_{[e_i, e_j]}` for `i < j`, in [`combos`] order.
    pub fn curvature(&self, g: &LieAlgebra) -> Vec<Matrix> {
        combos(self.dim, 2)
            .into_iter()
            .map(|c| {
                let (i, j) = (c[0], c[1]);
                self.mats[i].commutator(&self.mats[j]).sub(&self.operator(&g.bracket_basis(i, j)))
            })
            .collect()
    }

    pub fn is_torsion_free(&self, g: &LieAlgebra) -> bool {
        self.torsion(g).is_zero()
    }

    pub fn is_flat(&self, g: &LieAlgebra) -> bool {
        self.curvature(g).iter().all(Matrix::is_zero)
    }
}

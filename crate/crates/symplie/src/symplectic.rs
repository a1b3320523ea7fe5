//! Symplectic Lie algebras: validation, orthogonals, the canonical flat
//! torsion-free connection and isotropic decompositions `g = N + W + j`.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exactla::{
    axpy, orthogonal_complement, qf, unit_vec, zero_vec, LinAlgError, Matrix, Subspace, Vector, Q,
};
use crate::liealg::{bracket_span, subspace_algebra_flags, Connection, LieAlgebra, LieError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymplecticError {
    DimensionMismatch { expected: usize, found: usize },
    NotSkew { i: usize, j: usize },
    Degenerate,
    NotClosed { i: usize, j: usize, k: usize },
    NotIsotropic,
    NotSubalgebra,
    Inconsistent(&'static str),
    Lie(LieError),
}

impl fmt::Display for SymplecticError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymplecticError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            SymplecticError::NotSkew { i, j } => write!(f, "form is not skew at ({i}, {j})"),
            SymplecticError::Degenerate => write!(f, "form is degenerate"),
            SymplecticError::NotClosed { i, j, k } => write!(f, "form is not closed on basis triple ({i}, {j}, {k})"),
            SymplecticError::NotIsotropic => write!(f, "subspace is not isotropic"),
            SymplecticError::NotSubalgebra => write!(f, "subspace is not a subalgebra"),
            SymplecticError::Inconsistent(what) => write!(f, "internal consistency check failed: {what}"),
            SymplecticError::Lie(e) => write!(f, "{e}"),
        }
    }
}

impl From<LieError> for SymplecticError {
    fn from(e: LieError) -> Self {
        SymplecticError::Lie(e)
    }
}

impl From<LinAlgError> for SymplecticError {
    fn from(e: LinAlgError) -> Self {
        SymplecticError::Lie(LieError::LinAlg(e))
    }
}

/// A Lie algebra with a closed non-degenerate two-form, `omega(u, v) = u^T Omega v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticLieAlgebra {
    g: LieAlgebra,
    omega: Matrix,
}

/// First basis triple on which `omega` fails to be closed.
pub fn closedness_witness(g: &LieAlgebra, omega: &Matrix) -> Option<(usize, usize, usize)> {
    let n = g.dim();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let e = |t: usize| unit_vec(n, t);
                // omega([u,v],w) + omega([w,u],v) + omega([v,w],u)
                let s = omega.bilinear(&g.bracket_basis(i, j), &e(k))
                    + omega.bilinear(&g.bracket_basis(k, i), &e(j))
                    + omega.bilinear(&g.bracket_basis(j, k), &e(i));
                if !s.is_zero() {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

pub fn validate_symplectic(g: &LieAlgebra, omega: &Matrix) -> Result<SymplecticLieAlgebra, SymplecticError> {
    let n = g.dim();
    if omega.rows() != n || omega.cols() != n {
        return Err(SymplecticError::DimensionMismatch { expected: n, found: omega.rows() });
    }
    for i in 0..n {
        for j in i..n {
            if omega[(i, j)] != -omega[(j, i)].clone() {
                return Err(SymplecticError::NotSkew { i, j });
            }
        }
    }
    if omega.determinant()?.is_zero() {
        return Err(SymplecticError::Degenerate);
    }
    if let Some((i, j, k)) = closedness_witness(g, omega) {
        return Err(SymplecticError::NotClosed { i, j, k });
    }
    Ok(SymplecticLieAlgebra { g: g.clone(), omega: omega.clone() })
}

impl SymplecticLieAlgebra {
    pub fn new(g: &LieAlgebra, omega: &Matrix) -> Result<Self, SymplecticError> {
        validate_symplectic(g, omega)
    }

    /// Skew matrix from upper-triangular entries `(i, j, c)` with `i < j`.
    pub fn form_from_entries(n: usize, entries: &[(usize, usize, Q)]) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for (i, j, c) in entries {
            m[(*i, *j)] += c;
            m[(*j, *i)] -= c;
        }
        m
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.g
    }

    pub fn form(&self) -> &Matrix {
        &self.omega
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn omega(&self, u: &[Q], v: &[Q]) -> Q {
        self.omega.bilinear(u, v)
    }

    pub fn perp(&self, s: &Subspace) -> Subspace {
        orthogonal_complement(&self.omega, s).expect("ambient dimension matches")
    }

    pub fn is_isotropic(&self, s: &Subspace) -> bool {
        let b = s.basis();
        (0..b.len()).all(|i| (i + 1..b.len()).all(|j| self.omega(&b[i], &b[j]).is_zero()))
    }

    pub fn is_lagrangian(&self, s: &Subspace) -> bool {
        2 * s.dim() == self.dim() && self.is_isotropic(s)
    }

    /// Rank of `omega` restricted to `s`.
    pub fn restricted_rank(&self, s: &Subspace) -> usize {
        let b = s.basis();
        Matrix::from_fn(b.len(), b.len(), |i, j| self.omega(&b[i], &b[j])).rank()
    }

    pub fn is_nondegenerate_on(&self, s: &Subspace) -> bool {
        self.restricted_rank(s) == s.dim()
    }

    /// Gram matrix of `omega` on a list of vectors.
    pub fn gram(&self, vs: &[Vector]) -> Matrix {
        Matrix::from_fn(vs.len(), vs.len(), |i, j| self.omega(&vs[i], &vs[j]))
    }

    /// `[omega(a_i, b_j)]`.
    pub fn gram_between(&self, a: &[Vector], b: &[Vector]) -> Matrix {
        Matrix::from_fn(a.len(), b.len(), |i, j| self.omega(&a[i], &b[j]))
    }

    /// `iota(v) = omega(v, .)` as a row vector.
    pub fn contract(&self, v: &[Q]) -> Vector {
        self.omega.vec_mul(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyReport {
    pub dim: usize,
    pub perp_dim: usize,
    /// `(dim W^perp - dim W) / 2`
    pub corank: usize,
    pub lagrangian: bool,
    pub perp: Subspace,
}

pub fn isotropy_report(s: &SymplecticLieAlgebra, w: &Subspace) -> Result<IsotropyReport, SymplecticError> {
    if w.ambient() != s.dim() {
        return Err(SymplecticError::DimensionMismatch { expected: s.dim(), found: w.ambient() });
    }
    if !s.is_isotropic(w) {
        return Err(SymplecticError::NotIsotropic);
    }
    let perp = s.perp(w);
    Ok(IsotropyReport {
        dim: w.dim(),
        perp_dim: perp.dim(),
        corank: (perp.dim() - w.dim()) / 2,
        lagrangian: perp == *w,
        perp,
    })
}

/// Corank of a coisotropic subspace `U`, `(dim U - dim U^perp) / 2`.
pub fn coisotropic_corank(s: &SymplecticLieAlgebra, u: &Subspace) -> Option<usize> {
    let p = s.perp(u);
    u.contains_space(&p).then(|| (u.dim() - p.dim()) / 2)
}

/// The connection with `omega(nabla_u v, w) = -omega(v, [u, w])`.
pub fn canonical_connection(s: &SymplecticLieAlgebra) -> Connection {
    let n = s.dim();
    let g = &s.g;
    let inv_t = s.omega.transpose().inverse().expect("non-degenerate form");
    Connection::from_fn(n, |i, j| {
        let ej = unit_vec(n, j);
        let b: Vector = (0..n).map(|w| -s.omega(&ej, &g.bracket_basis(i, w))).collect();
        inv_t.mul_vec(&b)
    })
}

/// Whether the subalgebra `l` is totally geodesic for the canonical connection.
/// Computed as `[l, l^perp] in l^perp` and cross-checked against `nabla_l l in l`.
pub fn totally_geodesic_check(s: &SymplecticLieAlgebra, l: &Subspace) -> Result<bool, SymplecticError> {
    let flags = subspace_algebra_flags(&s.g, l)?;
    if !flags.subalgebra {
        return Err(SymplecticError::NotSubalgebra);
    }
    let lp = s.perp(l);
    let by_bracket = lp.contains_space(&bracket_span(&s.g, l, &lp));
    let nabla = canonical_connection(s);
    let by_connection =
        l.basis().iter().all(|u| l.basis().iter().all(|v| l.contains(&nabla.apply(u, v))));
    if by_bracket != by_connection {
        return Err(SymplecticError::Inconsistent("totally geodesic criteria disagree"));
    }
    Ok(by_bracket)
}

/// `g = N + W + j` with `N` isotropic and paired with `j` (`omega(n_a, j_b) = delta_ab`),
/// and `W = N^perp cap j^perp`, so that `j^perp = W + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropicDecomposition {
    pub j: Subspace,
    pub j_basis: Vec<Vector>,
    pub n_basis: Vec<Vector>,
    pub n: Subspace,
    pub w: Subspace,
    pub j_perp: Subspace,
}

impl IsotropicDecomposition {
    /// The ordered basis `N, W, j` of the whole algebra.
    pub fn full_basis(&self) -> Vec<Vector> {
        let mut b = self.n_basis.clone();
        b.extend(self.w.basis().iter().cloned());
        b.extend(self.j_basis.iter().cloned());
        b
    }
}

pub fn isotropic_decomposition(s: &SymplecticLieAlgebra, j: &Subspace) -> Result<IsotropicDecomposition, SymplecticError> {
    let n = s.dim();
    if j.ambient() != n {
        return Err(SymplecticError::DimensionMismatch { expected: n, found: j.ambient() });
    }
    if !s.is_isotropic(j) {
        return Err(SymplecticError::NotIsotropic);
    }
    let a = j.basis().to_vec();
    let k = a.len();
    // greedy choice of unit vectors pairing non-degenerately with j
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows: Vec<Vector> = Vec::new();
    for c in 0..n {
        if chosen.len() == k {
            break;
        }
        let ec = unit_vec(n, c);
        let row: Vector = a.iter().map(|am| s.omega(&ec, am)).collect();
        let mut trial = rows.clone();
        trial.push(row.clone());
        if Matrix::from_rows(k, &trial)?.rank() == trial.len() {
            rows.push(row);
            chosen.push(c);
        }
    }
    if chosen.len() != k {
        return Err(SymplecticError::Degenerate);
    }
    let p = Matrix::from_rows(k, &rows)?;
    let t = p.inverse()?;
    let nprime: Vec<Vector> = (0..k)
        .map(|l| {
            let mut v = zero_vec(n);
            for (r, &c) in chosen.iter().enumerate() {
                v[c] += &t[(l, r)];
            }
            v
        })
        .collect();
    let half = qf(1, 2);
    let n_basis: Vec<Vector> = (0..k)
        .map(|l| {
            let mut v = nprime[l].clone();
            for m in 0..k {
                let c = &half * s.omega(&nprime[l], &nprime[m]);
                axpy(&mut v, &c, &a[m]);
            }
            v
        })
        .collect();
    for l in 0..k {
        for m in 0..k {
            let want = if l == m { Q::one() } else { Q::zero() };
            if s.omega(&n_basis[l], &a[m]) != want || !s.omega(&n_basis[l], &n_basis[m]).is_zero() {
                return Err(SymplecticError::Inconsistent("isotropic complement"));
            }
        }
    }
    let nsp = Subspace::span(n, &n_basis);
    let j_perp = s.perp(j);
    let w = s.perp(&nsp).intersection(&j_perp);
    if w.dim() + 2 * k != n || j_perp != w.sum(j) {
        return Err(SymplecticError::Inconsistent("isotropic decomposition dimensions"));
    }
    Ok(IsotropicDecomposition { j: j.clone(), j_basis: a, n_basis, n: nsp, w, j_perp })
}

/// Greedily extends an isotropic subspace to a maximal isotropic one for a possibly
/// degenerate skew form, using the canonical bases of successive orthogonals.
pub fn extend_to_maximal_isotropic(form: &Matrix, start: &Subspace) -> Subspace {
    let mut l = start.clone();
    loop {
        let perp = orthogonal_complement(form, &l).expect("shape");
        match perp.basis().iter().find(|v| !l.contains(v)) {
            Some(v) => l = l.with_vectors(core::slice::from_ref(v)),
            None => return l,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    fn h3r() -> SymplecticLieAlgebra {
        // [e1, e2] = e3, omega = e14 + e23
        let g = LieAlgebra::from_int_brackets(4, &[(0, 1, &[(2, 1)])]).unwrap();
        let w = SymplecticLieAlgebra::form_from_entries(4, &[(0, 3, q(1)), (1, 2, q(1))]);
        validate_symplectic(&g, &w).unwrap()
    }

    #[test]
    fn closedness_witness_found() {
        let g = LieAlgebra::from_int_brackets(4, &[(0, 1, &[(2, 1)])]).unwrap();
        // e12 + e34 is not closed: d(e3) = -e12, so d(e34) = -e124
        let w = SymplecticLieAlgebra::form_from_entries(4, &[(0, 1, q(1)), (2, 3, q(1))]);
        assert_eq!(validate_symplectic(&g, &w), Err(SymplecticError::NotClosed { i: 0, j: 1, k: 3 }));
    }

    #[test]
    fn canonical_connection_flat_torsion_free() {
        let s = h3r();
        let nab = canonical_connection(&s);
        assert!(nab.is_flat(s.algebra()));
        assert!(nab.is_torsion_free(s.algebra()));
    }

    #[test]
    fn decomposition_of_center_line() {
        let s = h3r();
        let j = Subspace::coordinate(4, &[2]);
        let d = isotropic_decomposition(&s, &j).unwrap();
        assert_eq!(d.w.dim(), 2);
        assert_eq!(d.j_perp, d.w.sum(&j));
    }

    #[test]
    fn non_isotropic_rejected() {
        let s = h3r();
        let w = Subspace::coordinate(4, &[0, 3]);
        assert_eq!(isotropy_report(&s, &w), Err(SymplecticError::NotIsotropic));
    }
}

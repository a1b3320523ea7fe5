//! Flat Lie algebras and their Lagrangian extensions `F(h, nabla, alpha)` on `h + h*`,
//! extension triples of strongly polarized symplectic Lie algebras, and the Lagrangian
//! extension cohomology.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exactla::{
    greedy_unit_complement, qf, solve_vec, unit_vec, zero_vec, Frame, LinAlgError, Matrix, Subspace, Vector, Q,
};
use crate::liealg::{
    binomial, coboundary_apply, coboundary_matrix, combo_index, combos, is_ideal, Cochain, Connection, LieAlgebra,
    LieError, Representation,
};
use crate::symplectic::{validate_symplectic, SymplecticError, SymplecticLieAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LagExtError {
    NotTorsionFree,
    NotFlat,
    DimensionMismatch { expected: usize, found: usize },
    /// `alpha` is not a two-cocycle for the dual representation.
    NotCocycle,
    /// The cyclic sum `alpha(u,v)(w) + alpha(w,u)(v) + alpha(v,w)(u)` is non-zero on `(i, j, k)`.
    ExtensionCondition { i: usize, j: usize, k: usize },
    NotLagrangianIdeal,
    NotComplementaryLagrangian,
    NotSymmetric,
    Inconsistent(&'static str),
    Lie(LieError),
    Symplectic(SymplecticError),
}

impl fmt::Display for LagExtError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LagExtError::NotTorsionFree => write!(f, "connection has torsion"),
            LagExtError::NotFlat => write!(f, "connection is not flat"),
            LagExtError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            LagExtError::NotCocycle => write!(f, "alpha is not a cocycle for the dual representation"),
            LagExtError::ExtensionCondition { i, j, k } => {
                write!(f, "symplectic extension condition fails on ({i}, {j}, {k})")
            }
            LagExtError::NotLagrangianIdeal => write!(f, "subspace is not a Lagrangian ideal"),
            LagExtError::NotComplementaryLagrangian => write!(f, "complement is not a complementary Lagrangian subspace"),
            LagExtError::NotSymmetric => write!(f, "matrix is not symmetric"),
            LagExtError::Inconsistent(s) => write!(f, "inconsistent: {s}"),
            LagExtError::Lie(e) => write!(f, "{e}"),
            LagExtError::Symplectic(e) => write!(f, "{e}"),
        }
    }
}

impl From<LieError> for LagExtError {
    fn from(e: LieError) -> Self {
        LagExtError::Lie(e)
    }
}

impl From<SymplecticError> for LagExtError {
    fn from(e: SymplecticError) -> Self {
        LagExtError::Symplectic(e)
    }
}

impl From<LinAlgError> for LagExtError {
    fn from(e: LinAlgError) -> Self {
        LagExtError::Lie(LieError::LinAlg(e))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionInvariants {
    pub torsion: Cochain,
    /// `R(e_i, e_j)` for `i < j` in lexicographic order.
    pub curvature: Vec<Matrix>,
    pub torsion_free: bool,
    pub flat: bool,
}

pub fn connection_invariants(g: &LieAlgebra, c: &Connection) -> ConnectionInvariants {
    let torsion = c.torsion(g);
    let curvature = c.curvature(g);
    ConnectionInvariants {
        torsion_free: torsion.is_zero(),
        flat: curvature.iter().all(Matrix::is_zero),
        torsion,
        curvature,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatLieAlgebra {
    algebra: LieAlgebra,
    nabla: Connection,
}

impl FlatLieAlgebra {
    pub fn new(algebra: &LieAlgebra, nabla: &Connection) -> Result<FlatLieAlgebra, LagExtError> {
        if nabla.dim() != algebra.dim() {
            return Err(LagExtError::DimensionMismatch { expected: algebra.dim(), found: nabla.dim() });
        }
        if !nabla.is_torsion_free(algebra) {
            return Err(LagExtError::NotTorsionFree);
        }
        if !nabla.is_flat(algebra) {
            return Err(LagExtError::NotFlat);
        }
        Ok(FlatLieAlgebra { algebra: algebra.clone(), nabla: nabla.clone() })
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn nabla(&self) -> &Connection {
        &self.nabla
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// `nabla_u v = [u, v] / 2`, flat and torsion-free when `g` is two-step nilpotent.
pub fn half_ad_connection(g: &LieAlgebra) -> Connection {
    let h = qf(1, 2);
    Connection::new(g.dim(), (0..g.dim()).map(|i| g.ad_basis(i).scale(&h)).collect()).expect("square matrices")
}

/// `rho(u) xi = -xi o nabla_u`, i.e. `rho(e_i) = -(nabla_{e_i})^T` on the dual basis.
pub fn dual_rep(flat: &FlatLieAlgebra) -> Result<Representation, LagExtError> {
    let mats = flat.nabla.matrices().iter().map(|m| m.transpose().scale(&-Q::one())).collect();
    Ok(Representation::new(&flat.algebra, mats)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionTriple {
    pub flat: FlatLieAlgebra,
    /// `h*`-valued two-cochain; coefficient `k` of `alpha(e_i, e_j)` is `alpha(e_i, e_j)(e_k)`.
    pub alpha: Cochain,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StronglyPolarized {
    pub s: SymplecticLieAlgebra,
    pub a: Subspace,
    pub n: Subspace,
}

impl StronglyPolarized {
    pub fn new(s: &SymplecticLieAlgebra, a: &Subspace, n: &Subspace) -> Result<StronglyPolarized, LagExtError> {
        if !s.is_lagrangian(a) || !is_ideal(s.algebra(), a) {
            return Err(LagExtError::NotLagrangianIdeal);
        }
        if !s.is_lagrangian(n) || !a.intersection(n).is_zero() {
            return Err(LagExtError::NotComplementaryLagrangian);
        }
        Ok(StronglyPolarized { s: s.clone(), a: a.clone(), n: n.clone() })
    }
}

/// First triple `i < j < k` where the cyclic sum of `alpha` does not vanish.
pub fn extension_condition_witness(alpha: &Cochain) -> Option<(usize, usize, usize)> {
    let n = alpha.dim();
    let at = |i: usize, j: usize, k: usize| -> Q {
        let (a, b, sgn) = if i < j { (i, j, Q::one()) } else { (j, i, -Q::one()) };
        sgn * alpha.at_sorted(&[a, b])[k].clone()
    };
    for c in combos(n, 3) {
        let (i, j, k) = (c[0], c[1], c[2]);
        if !(at(i, j, k) + at(k, i, j) + at(j, k, i)).is_zero() {
            return Some((i, j, k));
        }
    }
    None
}

/// Brackets of `h + h*` (basis `e_1.., eps^1..`) for a cochain, without checks.
fn extension_brackets(flat: &FlatLieAlgebra, rho: &Representation, alpha: &Cochain) -> Vec<(usize, usize, Vector)> {
    let n = flat.dim();
    let g = &flat.algebra;
    let mut bs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = g.bracket_basis(i, j);
            v.extend(alpha.at_sorted(&[i, j]).iter().cloned());
            bs.push((i, j, v));
        }
        for k in 0..n {
            let mut v = zero_vec(n);
            v.extend(rho.action(i).col(k));
            bs.push((i, n + k, v));
        }
    }
    bs
}

/// The duality form: `omega(eps^a, e_b) = delta_ab`.
pub fn duality_form(n: usize) -> Matrix {
    let mut w = Matrix::zeros(2 * n, 2 * n);
    for a in 0..n {
        w[(n + a, a)] = Q::one();
        w[(a, n + a)] = -Q::one();
    }
    w
}

pub fn lagrangian_extension(t: &ExtensionTriple) -> Result<StronglyPolarized, LagExtError> {
    let n = t.flat.dim();
    if t.alpha.degree() != 2 || t.alpha.dim() != n || t.alpha.module_dim() != n {
        return Err(LagExtError::DimensionMismatch { expected: n, found: t.alpha.dim() });
    }
    let rho = dual_rep(&t.flat)?;
    if n >= 3 && !coboundary_apply(&rho, &t.alpha)?.is_zero() {
        return Err(LagExtError::NotCocycle);
    }
    if let Some((i, j, k)) = extension_condition_witness(&t.alpha) {
        return Err(LagExtError::ExtensionCondition { i, j, k });
    }
    let g = LieAlgebra::from_brackets(2 * n, &extension_brackets(&t.flat, &rho, &t.alpha))?;
    let s = validate_symplectic(&g, &duality_form(n))?;
    let a = Subspace::coordinate(2 * n, &(n..2 * n).collect::<Vec<_>>());
    let h = Subspace::coordinate(2 * n, &(0..n).collect::<Vec<_>>());
    StronglyPolarized::new(&s, &a, &h)
}

/// Extension triple with `h = g / a` on the classes of unit vectors complementing `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractedTriple {
    pub triple: ExtensionTriple,
    /// Lifts of the basis of `h` into `N`.
    pub lifts: Vec<Vector>,
    /// `Phi = pi_h + iota_omega` in columns: the image of each unit vector of `g` in `h + h*`.
    pub map: Matrix,
}

pub fn extension_triple(p: &StronglyPolarized) -> Result<ExtractedTriple, LagExtError> {
    let s = &p.s;
    let g = s.algebra();
    let dim = s.dim();
    let n = dim / 2;
    let cidx = greedy_unit_complement(&p.a);
    let c: Vec<Vector> = cidx.iter().map(|&i| unit_vec(dim, i)).collect();
    // lift c_i to N along a
    let mut fv = p.n.basis().to_vec();
    fv.extend(p.a.basis().iter().cloned());
    let na = Frame::new(dim, fv)?;
    let lifts: Vec<Vector> = c
        .iter()
        .map(|ci| {
            let co = na.coords(ci).expect("N + a spans g");
            na.vector(&[&co[..n], &vec![Q::zero(); n][..]].concat())
        })
        .collect();
    let h = g.quotient(&p.a, &c)?;
    let ab = p.a.basis().to_vec();
    let pairing = s.gram_between(&c, &ab);
    let pt_inv = pairing.transpose().inverse()?;
    let nabla = Connection::from_fn(n, |u, v| {
        let rhs: Vector = ab.iter().map(|am| -s.omega(&lifts[v], &g.bracket(&lifts[u], am))).collect();
        pt_inv.mul_vec(&rhs)
    });
    let flat = FlatLieAlgebra::new(&h, &nabla)?;
    // g = N + a frame with lifts first
    let mut fv = lifts.clone();
    fv.extend(ab.iter().cloned());
    let frame = Frame::new(dim, fv)?;
    let pi_a = |v: &Vector| -> Vector {
        let co = frame.coords(v).expect("frame of g");
        let mut a_part = vec![Q::zero(); n];
        a_part.extend(co[n..].iter().cloned());
        frame.vector(&a_part)
    };
    let iota = |a: &Vector| -> Vector { c.iter().map(|cb| s.omega(a, cb)).collect() };
    let alpha = Cochain::from_fn(2, n, n, |ix| iota(&pi_a(&g.bracket(&lifts[ix[0]], &lifts[ix[1]]))));
    let map = Matrix::from_cols(
        2 * n,
        &(0..dim)
            .map(|i| {
                let co = frame.coords(&unit_vec(dim, i)).expect("frame of g");
                let mut out = co[..n].to_vec();
                out.extend(iota(&pi_a(&unit_vec(dim, i))));
                out
            })
            .collect::<Vec<_>>(),
    )?;
    let triple = ExtensionTriple { flat, alpha };
    let ext = lagrangian_extension(&triple)?;
    if !is_symplectic_isomorphism(s, &ext.s, &map) {
        return Err(LagExtError::Inconsistent("pi_h + iota_omega is not an isomorphism onto F(h, nabla, alpha)"));
    }
    Ok(ExtractedTriple { triple, lifts, map })
}

/// Whether `m` (columns = images of unit vectors) is a bracket- and form-preserving bijection.
pub fn is_symplectic_isomorphism(src: &SymplecticLieAlgebra, dst: &SymplecticLieAlgebra, m: &Matrix) -> bool {
    let n = src.dim();
    if m.rows() != dst.dim() || m.cols() != n || m.rank() != n {
        return false;
    }
    let (g, h) = (src.algebra(), dst.algebra());
    for i in 0..n {
        for j in i + 1..n {
            if m.mul_vec(&g.bracket_basis(i, j)) != h.bracket(&m.col(i), &m.col(j)) {
                return false;
            }
            if src.form()[(i, j)] != dst.omega(&m.col(i), &m.col(j)) {
                return false;
            }
        }
    }
    true
}

/// Replaces `N` by the graph `{n_i + sum_k sigma_ik a*_k}` over the lifts, with `a*_k in a`
/// dual to the `h` basis; Lagrangian for symmetric `sigma`.
pub fn change_polarization(p: &StronglyPolarized, sigma: &Matrix) -> Result<StronglyPolarized, LagExtError> {
    if !sigma.is_symmetric() {
        return Err(LagExtError::NotSymmetric);
    }
    let x = extension_triple(p)?;
    let s = &p.s;
    let dim = s.dim();
    let n = dim / 2;
    let cidx = greedy_unit_complement(&p.a);
    let c: Vec<Vector> = cidx.iter().map(|&i| unit_vec(dim, i)).collect();
    let ab = p.a.basis().to_vec();
    // a*_k = sum_m t_km a_m with omega(a*_k, c_b) = delta_kb
    let pa = Matrix::from_fn(n, n, |m, b| s.omega(&ab[m], &c[b]));
    let t = pa.inverse()?.transpose();
    let dual: Vec<Vector> = (0..n)
        .map(|k| {
            let mut v = zero_vec(dim);
            for m in 0..n {
                crate::exactla::axpy(&mut v, &t[(k, m)], &ab[m]);
            }
            v
        })
        .collect();
    let graph: Vec<Vector> = (0..n)
        .map(|i| {
            let mut v = x.lifts[i].clone();
            for k in 0..n {
                crate::exactla::axpy(&mut v, &sigma[(i, k)], &dual[k]);
            }
            v
        })
        .collect();
    StronglyPolarized::new(s, &p.a, &Subspace::span(dim, &graph))
}

/// `C^1_L = S^2 h*` inside `C^1(h, h*)`: basis `sigma^(ab)`, `a <= b`.
pub fn symmetric_one_cochains(n: usize) -> Vec<Vector> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a..n {
            let mut v = zero_vec(n * n);
            v[a * n + b] = Q::one();
            v[b * n + a] = Q::one();
            out.push(v);
        }
    }
    out
}

fn alternating_one_cochains(n: usize) -> Vec<Vector> {
    combos(n, 2)
        .into_iter()
        .map(|c| {
            let mut v = zero_vec(n * n);
            v[c[0] * n + c[1]] = Q::one();
            v[c[1] * n + c[0]] = -Q::one();
            v
        })
        .collect()
}

/// Linear constraints (rows) cutting out `C^2_L` in `C^2(h, h*)`.
fn extension_condition_rows(n: usize) -> Vec<Vector> {
    let dim = binomial(n, 2) * n;
    combos(n, 3)
        .into_iter()
        .map(|c| {
            let (i, j, k) = (c[0], c[1], c[2]);
            let mut r = zero_vec(dim);
            // alpha(i,j)(k) + alpha(k,i)(j) + alpha(j,k)(i), with alpha(k,i) = -alpha(i,k)
            r[combo_index(n, &[i, j]) * n + k] += Q::one();
            r[combo_index(n, &[i, k]) * n + j] -= Q::one();
            r[combo_index(n, &[j, k]) * n + i] += Q::one();
            r
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagCohomology {
    pub c1l_dim: usize,
    pub c2l: Subspace,
    pub z2_rho: Subspace,
    pub b2_rho: Subspace,
    pub z2l: Subspace,
    pub b2l: Subspace,
    pub h2l_dim: usize,
    /// `B^2_rho cap Z^2_L`
    pub b2_rho_cap_z2l: Subspace,
    pub kappa_dim: usize,
}

pub fn lagrangian_cohomology(flat: &FlatLieAlgebra) -> Result<LagCohomology, LagExtError> {
    let n = flat.dim();
    let rho = dual_rep(flat)?;
    let d1 = coboundary_matrix(&rho, 1)?;
    let c2_dim = binomial(n, 2) * n;
    let rows = extension_condition_rows(n);
    let c2l = if rows.is_empty() { Subspace::full(c2_dim) } else { Matrix::from_rows(c2_dim, &rows)?.kernel() };
    let z2_rho = if n >= 3 { coboundary_matrix(&rho, 2)?.kernel() } else { Subspace::full(c2_dim) };
    let b2_rho = d1.column_space();
    let z2l = c2l.intersection(&z2_rho);
    let sym = symmetric_one_cochains(n);
    let image = |vs: &[Vector]| Subspace::span(c2_dim, &vs.iter().map(|v| d1.mul_vec(v)).collect::<Vec<_>>());
    let b2l = image(&sym);
    if !z2l.contains_space(&b2l) {
        return Err(LagExtError::Inconsistent("d maps S^2 into Z^2_L"));
    }
    let cap = b2_rho.intersection(&z2l);
    // B^2_rho cap Z^2_L = d(S^2 + Z^2(h)) with Z^2(h) alternating one-cochains
    let triv = Representation::trivial(flat.algebra(), 1);
    let alt = alternating_one_cochains(n);
    let closed: Vec<Vector> = if n >= 3 {
        let d2 = coboundary_matrix(&triv, 2)?;
        let z = d2.kernel();
        z.basis()
            .iter()
            .map(|lam| {
                let mut v = zero_vec(n * n);
                for (ci, coef) in lam.iter().enumerate() {
                    v = crate::exactla::vec_add(&v, &crate::exactla::vec_scale(&alt[ci], coef));
                }
                v
            })
            .collect()
    } else {
        alt.clone()
    };
    let mut gens = sym.clone();
    gens.extend(closed);
    if image(&gens) != cap {
        return Err(LagExtError::Inconsistent("B^2_rho cap Z^2_L = d(S^2 + Z^2(h))"));
    }
    // cyclic sum of d^1 lambda equals 2 d^2 lambda for alternating lambda
    if n >= 3 {
        let d2 = coboundary_matrix(&triv, 2)?;
        let rows = extension_condition_rows(n);
        for (ci, lam) in alt.iter().enumerate() {
            let dl = d1.mul_vec(lam);
            let e = unit_vec(binomial(n, 2), ci);
            let d2l = d2.mul_vec(&e);
            for (t, r) in rows.iter().enumerate() {
                let cyc: Q = r.iter().zip(&dl).map(|(a, b)| a * b).sum();
                if cyc != Q::from_integer(2.into()) * &d2l[t] {
                    return Err(LagExtError::Inconsistent("cyclic sum of d^1 lambda is 2 d^2 lambda"));
                }
            }
        }
    }
    Ok(LagCohomology {
        c1l_dim: sym.len(),
        h2l_dim: z2l.dim() - b2l.dim(),
        kappa_dim: cap.dim() - b2l.dim(),
        c2l,
        z2_rho,
        b2_rho,
        z2l,
        b2l,
        b2_rho_cap_z2l: cap,
    })
}

/// When `alpha - alpha' = d sigma` for a symmetric `sigma`, returns the verified
/// isomorphism `(u, xi) -> (u, xi + sigma(u))` from `F(h, nabla, alpha)` to `F(h, nabla, alpha')`.
pub fn extensions_isomorphic(flat: &FlatLieAlgebra, alpha: &Cochain, alpha2: &Cochain) -> Result<Option<Matrix>, LagExtError> {
    let n = flat.dim();
    let rho = dual_rep(flat)?;
    let d1 = coboundary_matrix(&rho, 1)?;
    let sym = symmetric_one_cochains(n);
    let a = Matrix::from_cols(d1.rows(), &sym.iter().map(|v| d1.mul_vec(v)).collect::<Vec<_>>())?;
    let diff: Vector = alpha.sub(alpha2).into_vector();
    let Some(x) = solve_vec(&a, &diff) else { return Ok(None) };
    let mut sigma = zero_vec(n * n);
    for (v, c) in sym.iter().zip(&x) {
        sigma = crate::exactla::vec_add(&sigma, &crate::exactla::vec_scale(v, c));
    }
    let f1 = lagrangian_extension(&ExtensionTriple { flat: flat.clone(), alpha: alpha.clone() })?;
    let f2 = lagrangian_extension(&ExtensionTriple { flat: flat.clone(), alpha: alpha2.clone() })?;
    let mut m = Matrix::identity(2 * n);
    for u in 0..n {
        for k in 0..n {
            m[(n + k, u)] = sigma[u * n + k].clone();
        }
    }
    if !is_symplectic_isomorphism(&f1.s, &f2.s, &m) {
        return Err(LagExtError::Inconsistent("constructed map is not an isomorphism of extensions"));
    }
    Ok(Some(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    /// Abelian plane with `nabla_e1 e1 = e1`, `nabla_e1 e2 = nabla_e2 e1 = e2`.
    fn plane() -> FlatLieAlgebra {
        let g = LieAlgebra::abelian(2);
        let c = Connection::from_fn(2, |i, j| match (i, j) {
            (0, 0) => vec![q(1), q(0)],
            (0, 1) | (1, 0) => vec![q(0), q(1)],
            _ => vec![q(0), q(0)],
        });
        FlatLieAlgebra::new(&g, &c).unwrap()
    }

    #[test]
    fn kernel_of_comparison_map_is_a_line() {
        let c = lagrangian_cohomology(&plane()).unwrap();
        assert_eq!(c.b2l.dim(), 1);
        assert_eq!(c.kappa_dim, 1);
    }

    #[test]
    fn extension_round_trip() {
        let t = ExtensionTriple { flat: plane(), alpha: Cochain::zero(2, 2, 2) };
        let p = lagrangian_extension(&t).unwrap();
        let x = extension_triple(&p).unwrap();
        assert_eq!(x.triple, t);
        assert_eq!(x.map, Matrix::identity(4));
    }
}

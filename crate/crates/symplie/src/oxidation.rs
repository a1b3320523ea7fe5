//! Central oxidation: extending a (symplectic) Lie algebra `gbar` by a derivation
//! `phi` and a central line, on the basis `xi, gbar..., H`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::exactla::{solve_vec, unit_vec, zero_vec, Frame, LinAlgError, Matrix, Subspace, Vector, Q};
use crate::liealg::{
    center, coboundary_apply, coboundary_matrix, form_derive_unchecked, is_derivation, validate_jacobi, Cochain,
    LieAlgebra, LieError, Representation,
};
use crate::symplectic::{validate_symplectic, SymplecticError, SymplecticLieAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OxidationError {
    DimensionMismatch { expected: usize, found: usize },
    NotDerivation,
    AlphaNotClosed,
    /// `alpha_phi(e_i, e_j) != lambda([e_i, e_j])`
    CoboundFails { i: usize, j: usize },
    MissingForm,
    /// `alpha != omegabar_phi` at `(i, j)`
    NotCompatible { i: usize, j: usize },
    NotCentral,
    ZeroPairing,
    Jacobi { i: usize, j: usize, k: usize },
    Symplectic(SymplecticError),
    Lie(LieError),
}

impl fmt::Display for OxidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OxidationError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            OxidationError::NotDerivation => write!(f, "phi is not a derivation"),
            OxidationError::AlphaNotClosed => write!(f, "alpha is not a closed two-form"),
            OxidationError::CoboundFails { i, j } => {
                write!(f, "alpha_phi differs from lambda o bracket on basis pair ({i}, {j})")
            }
            OxidationError::MissingForm => write!(f, "no symplectic form on the base"),
            OxidationError::NotCompatible { i, j } => write!(f, "alpha is not omegabar_phi at ({i}, {j})"),
            OxidationError::NotCentral => write!(f, "H is not central"),
            OxidationError::ZeroPairing => write!(f, "omega(xi, H) vanishes"),
            OxidationError::Jacobi { i, j, k } => write!(f, "Jacobi identity fails on ({i}, {j}, {k})"),
            OxidationError::Symplectic(e) => write!(f, "{e}"),
            OxidationError::Lie(e) => write!(f, "{e}"),
        }
    }
}

impl From<LieError> for OxidationError {
    fn from(e: LieError) -> Self {
        OxidationError::Lie(e)
    }
}

impl From<SymplecticError> for OxidationError {
    fn from(e: SymplecticError) -> Self {
        OxidationError::Symplectic(e)
    }
}

impl From<LinAlgError> for OxidationError {
    fn from(e: LinAlgError) -> Self {
        OxidationError::Lie(LieError::LinAlg(e))
    }
}

/// Data `(gbar, omegabar, phi, alpha, lambda)`; `alpha` and `lambda` are scalar cochains on `gbar`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OxidationData {
    pub base: LieAlgebra,
    pub omega_bar: Option<Matrix>,
    pub phi: Matrix,
    pub alpha: Cochain,
    pub lambda: Cochain,
}

fn check_shapes(d: &OxidationData) -> Result<(), OxidationError> {
    let n = d.base.dim();
    if d.phi.rows() != n || d.phi.cols() != n {
        return Err(OxidationError::DimensionMismatch { expected: n, found: d.phi.rows() });
    }
    for (c, deg) in [(&d.alpha, 2), (&d.lambda, 1)] {
        if c.dim() != n || c.degree() != deg || c.module_dim() != 1 {
            return Err(OxidationError::DimensionMismatch { expected: n, found: c.dim() });
        }
    }
    Ok(())
}

/// The bracket on `xi + gbar + H` without any consistency checks:
/// `[v, w] = [v, w]bar + alpha(v, w) H`, `[xi, v] = phi v + lambda(v) H`.
pub fn oxidation_bracket(d: &OxidationData) -> Result<LieAlgebra, OxidationError> {
    check_shapes(d)?;
    let n = d.base.dim();
    let dim = n + 2;
    let mut bs = Vec::new();
    for a in 0..n {
        let mut v = vec![Q::zero()];
        v.extend(d.phi.col(a));
        v.push(d.lambda.at_sorted(&[a])[0].clone());
        bs.push((0, a + 1, v));
        for b in a + 1..n {
            let mut v = vec![Q::zero()];
            v.extend(d.base.bracket_basis(a, b));
            v.push(d.alpha.at_sorted(&[a, b])[0].clone());
            bs.push((a + 1, b + 1, v));
        }
    }
    Ok(LieAlgebra::from_brackets_unchecked(dim, &bs)?)
}

/// First basis pair with `alpha_phi(v, w) != lambda([v, w])`, i.e. where `alpha_phi = -d lambda` fails.
pub fn cobound_witness(d: &OxidationData) -> Option<(usize, usize)> {
    let rep = Representation::trivial(&d.base, 1);
    let dl = coboundary_apply(&rep, &d.lambda).ok()?;
    let ap = form_derive_unchecked(&d.alpha, &d.phi);
    let n = d.base.dim();
    for i in 0..n {
        for j in i + 1..n {
            if ap.at_sorted(&[i, j])[0] != -dl.at_sorted(&[i, j])[0].clone() {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn central_oxidation(d: &OxidationData) -> Result<LieAlgebra, OxidationError> {
    check_shapes(d)?;
    if !is_derivation(&d.base, &d.phi)? {
        return Err(OxidationError::NotDerivation);
    }
    let rep = Representation::trivial(&d.base, 1);
    if !coboundary_apply(&rep, &d.alpha)?.is_zero() {
        return Err(OxidationError::AlphaNotClosed);
    }
    if let Some((i, j)) = cobound_witness(d) {
        return Err(OxidationError::CoboundFails { i, j });
    }
    let g = oxidation_bracket(d)?;
    if let Some(&(i, j, k)) = validate_jacobi(&g).first() {
        return Err(OxidationError::Jacobi { i, j, k });
    }
    Ok(g)
}

/// `omega = xi* ^ H* + omegabar` on the oxidised algebra; requires `alpha = omegabar_phi`.
pub fn symplectic_oxidation(d: &OxidationData) -> Result<SymplecticLieAlgebra, OxidationError> {
    let wb = d.omega_bar.as_ref().ok_or(OxidationError::MissingForm)?;
    validate_symplectic(&d.base, wb)?;
    check_shapes(d)?;
    let n = d.base.dim();
    let wphi = form_derive_unchecked(&Cochain::from_skew_matrix(wb), &d.phi);
    for i in 0..n {
        for j in i + 1..n {
            if wphi.at_sorted(&[i, j]) != d.alpha.at_sorted(&[i, j]) {
                return Err(OxidationError::NotCompatible { i, j });
            }
        }
    }
    let g = central_oxidation(d)?;
    let dim = n + 2;
    let mut w = Matrix::zeros(dim, dim);
    w[(0, dim - 1)] = Q::one();
    w[(dim - 1, 0)] = -Q::one();
    for i in 0..n {
        for j in 0..n {
            w[(i + 1, j + 1)] = wb[(i, j)].clone();
        }
    }
    Ok(validate_symplectic(&g, &w)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    /// `omegabar_{phi, phi}`
    pub omega_phi_phi: Cochain,
    pub class_vanishes: bool,
    /// Some `lambda` with `d lambda = -omegabar_{phi, phi}` when the class vanishes.
    pub lambda: Option<Cochain>,
}

pub fn oxidation_obstruction(base: &SymplecticLieAlgebra, phi: &Matrix) -> Result<Obstruction, OxidationError> {
    let g = base.algebra();
    if !is_derivation(g, phi)? {
        return Err(OxidationError::NotDerivation);
    }
    let n = g.dim();
    let alpha = form_derive_unchecked(&Cochain::from_skew_matrix(base.form()), phi);
    let beta = form_derive_unchecked(&alpha, phi);
    let rep = Representation::trivial(g, 1);
    let d1 = coboundary_matrix(&rep, 1)?;
    let target: Vector = beta.coeffs().iter().map(|x| -x.clone()).collect();
    let lambda = solve_vec(&d1, &target).map(|v| Cochain::from_vector(1, n, 1, v).expect("length"));
    Ok(Obstruction { omega_phi_phi: beta, class_vanishes: lambda.is_some(), lambda })
}

/// Oxidation data recovered from a central `H` and `xi` with `omega(xi, H) != 0`,
/// together with the basis `xi, w_1.., H` in which the algebra is the oxidation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoveredOxidation {
    pub data: OxidationData,
    pub basis: Vec<Vector>,
}

pub fn recover_oxidation_data(
    s: &SymplecticLieAlgebra,
    h: &[Q],
    xi: &[Q],
) -> Result<RecoveredOxidation, OxidationError> {
    let g = s.algebra();
    let n = g.dim();
    if h.len() != n || xi.len() != n {
        return Err(OxidationError::DimensionMismatch { expected: n, found: h.len() });
    }
    if !center(g).contains(h) || h.iter().all(Zero::is_zero) {
        return Err(OxidationError::NotCentral);
    }
    let pairing = s.omega(xi, h);
    if pairing.is_zero() {
        return Err(OxidationError::ZeroPairing);
    }
    let xi: Vector = xi.iter().map(|x| x / &pairing).collect();
    let plane = Subspace::span(n, &[xi.clone(), h.to_vec()]);
    let w = s.perp(&plane);
    let wb = w.basis().to_vec();
    let m = wb.len();
    let mut basis = vec![xi.clone()];
    basis.extend(wb.iter().cloned());
    basis.push(h.to_vec());
    let frame = Frame::new(n, basis.clone())?;
    let coords = |v: &Vector| frame.coords(v).expect("basis of the algebra");
    let base_brackets: Vec<(usize, usize, Vector)> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .map(|(a, b)| {
            let c = coords(&g.bracket(&wb[a], &wb[b]));
            (a, b, c[1..=m].to_vec())
        })
        .collect();
    let base = LieAlgebra::from_brackets(m, &base_brackets)?;
    let alpha = Cochain::from_fn(2, m, 1, |c| {
        let v = coords(&g.bracket(&wb[c[0]], &wb[c[1]]));
        vec![v[m + 1].clone()]
    });
    let mut phi = Matrix::zeros(m, m);
    let mut lam = zero_vec(m);
    for a in 0..m {
        let br = g.bracket(&xi, &wb[a]);
        let c = coords(&br);
        if !c[0].is_zero() {
            return Err(OxidationError::Symplectic(SymplecticError::Inconsistent("[xi, W] leaves H-perp")));
        }
        phi.set_col(a, &c[1..=m]);
        lam[a] = c[m + 1].clone();
        if s.omega(&xi, &br) != lam[a] {
            return Err(OxidationError::Symplectic(SymplecticError::Inconsistent("lambda(v) = omega(xi, [xi, v])")));
        }
    }
    let omega_bar = s.gram(&wb);
    let data = OxidationData {
        base,
        omega_bar: Some(omega_bar),
        phi,
        alpha,
        lambda: Cochain::from_vector(1, m, 1, lam)?,
    };
    Ok(RecoveredOxidation { data, basis })
}

/// The unit vectors `xi = e_0` and `H = e_{n+1}` of an oxidised algebra.
pub fn oxidation_axes(dim: usize) -> (Vector, Vector) {
    (unit_vec(dim, 0), unit_vec(dim, dim - 1))
}

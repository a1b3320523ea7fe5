//! Endomorphisms of (possibly degenerate) alternating vector spaces: the forms
//! `omega_phi` and `omega_{phi,phi}`, invariant Lagrangian subspaces for nilpotent
//! solutions of `omega_{phi,phi} = 0`, quadratic abelian algebras and the `q6` family.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactla::{
    leading_minors, orthogonal_complement, q, rational_sqrt, unit_vec, LinAlgError, Matrix,
    Subspace, Vector, Q,
};
use crate::liealg::Cochain;
use crate::symplectic::extend_to_maximal_isotropic;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EndoError {
    NotSkew,
    Degenerate,
    DimensionMismatch { expected: usize, found: usize },
    NotNilpotent,
    /// `omega_{phi,phi}` does not vanish.
    BetaNonzero,
    NotAbelian { p: usize, q: usize },
    NotQuadratic { p: usize },
    NotSymplecticAlgebra,
    TooLarge,
    NotSymmetric,
    Singular,
    Inconsistent(&'static str),
}

impl fmt::Display for EndoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EndoError::NotSkew => write!(f, "form is not skew"),
            EndoError::Degenerate => write!(f, "form is degenerate"),
            EndoError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            EndoError::NotNilpotent => write!(f, "endomorphism is not nilpotent"),
            EndoError::BetaNonzero => write!(f, "omega_(phi,phi) is not zero"),
            EndoError::NotAbelian { p, q } => write!(f, "generators {p} and {q} do not commute"),
            EndoError::NotQuadratic { p } => write!(f, "generator {p} does not square to zero"),
            EndoError::NotSymplecticAlgebra => write!(f, "endomorphism algebra is not symplectic"),
            EndoError::TooLarge => write!(f, "dimension exceeds four"),
            EndoError::NotSymmetric => write!(f, "matrix is not symmetric"),
            EndoError::Singular => write!(f, "matrix is singular"),
            EndoError::Inconsistent(s) => write!(f, "inconsistent: {s}"),
        }
    }
}

impl From<LinAlgError> for EndoError {
    fn from(_: LinAlgError) -> Self {
        EndoError::Inconsistent("linear algebra shape")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticVectorSpace {
    omega: Matrix,
    nondegenerate: bool,
}

impl SymplecticVectorSpace {
    /// Accepts any skew form; degeneracy is recorded.
    pub fn new(omega: &Matrix) -> Result<SymplecticVectorSpace, EndoError> {
        if !omega.is_square() || !omega.is_skew() {
            return Err(EndoError::NotSkew);
        }
        Ok(SymplecticVectorSpace { nondegenerate: omega.rank() == omega.rows(), omega: omega.clone() })
    }

    pub fn nondegenerate(omega: &Matrix) -> Result<SymplecticVectorSpace, EndoError> {
        let s = Self::new(omega)?;
        if !s.nondegenerate {
            return Err(EndoError::Degenerate);
        }
        Ok(s)
    }

    /// `omega(e_i, e_{n+i}) = 1` on `Q^{2n}`.
    pub fn standard(n: usize) -> SymplecticVectorSpace {
        let mut w = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            w[(i, n + i)] = Q::one();
            w[(n + i, i)] = -Q::one();
        }
        SymplecticVectorSpace { omega: w, nondegenerate: true }
    }

    pub fn dim(&self) -> usize {
        self.omega.rows()
    }

    pub fn omega(&self) -> &Matrix {
        &self.omega
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn pair(&self, u: &[Q], v: &[Q]) -> Q {
        self.omega.bilinear(u, v)
    }

    /// Dimension of every maximal isotropic subspace: `dim V - rank(omega) / 2`.
    pub fn max_isotropic_dim(&self) -> usize {
        self.dim() - self.omega.rank() / 2
    }

    pub fn perp(&self, s: &Subspace) -> Subspace {
        orthogonal_complement(&self.omega, s).expect("shape")
    }

    pub fn is_isotropic(&self, s: &Subspace) -> bool {
        let b = s.basis();
        b.iter().enumerate().all(|(i, u)| b[i + 1..].iter().all(|v| self.pair(u, v).is_zero()))
    }

    pub fn is_lagrangian(&self, s: &Subspace) -> bool {
        s.dim() == self.max_isotropic_dim() && self.is_isotropic(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoQuadraticData {
    pub phi: Matrix,
    pub alpha: Cochain,
    pub beta: Cochain,
    pub beta_vanishes: bool,
}

fn check_square(space: &SymplecticVectorSpace, phi: &Matrix) -> Result<(), EndoError> {
    if !phi.is_square() || phi.rows() != space.dim() {
        return Err(EndoError::DimensionMismatch { expected: space.dim(), found: phi.rows() });
    }
    Ok(())
}

/// Gram matrix of `omega_phi`.
pub fn alpha_matrix(omega: &Matrix, phi: &Matrix) -> Matrix {
    phi.transpose().mul(omega).add(&omega.mul(phi))
}

/// Gram matrix of `omega_{phi,phi}(u,v) = omega(phi^2 u, v) + 2 omega(phi u, phi v) + omega(u, phi^2 v)`.
pub fn beta_matrix(omega: &Matrix, phi: &Matrix) -> Matrix {
    let p2 = phi.mul(phi);
    let mid = phi.transpose().mul(omega).mul(phi).scale(&q(2));
    p2.transpose().mul(omega).add(&mid).add(&omega.mul(&p2))
}

pub fn quadratic_forms(space: &SymplecticVectorSpace, phi: &Matrix) -> Result<EndoQuadraticData, EndoError> {
    check_square(space, phi)?;
    let b = beta_matrix(&space.omega, phi);
    Ok(EndoQuadraticData {
        phi: phi.clone(),
        alpha: Cochain::from_skew_matrix(&alpha_matrix(&space.omega, phi)),
        beta_vanishes: b.is_zero(),
        beta: Cochain::from_skew_matrix(&b),
    })
}

/// The five elementary consequences of `omega_{phi,phi} = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicsReport {
    pub phi_skew_for_alpha: bool,
    pub ker_alpha_invariant: bool,
    pub image_perp_kernels: bool,
    pub z_perp_invariant: bool,
    pub perp_image_kernel_in_ker_alpha: bool,
}

impl BasicsReport {
    pub fn all(&self) -> bool {
        self.phi_skew_for_alpha
            && self.ker_alpha_invariant
            && self.image_perp_kernels
            && self.z_perp_invariant
            && self.perp_image_kernel_in_ker_alpha
    }
}

pub fn basics_report(space: &SymplecticVectorSpace, phi: &Matrix) -> Result<BasicsReport, EndoError> {
    check_square(space, phi)?;
    let a = alpha_matrix(&space.omega, phi);
    let ker_a = a.kernel();
    let ker_phi = phi.kernel();
    let im_phi = phi.column_space();
    let kk = ker_a.intersection(&ker_phi);
    let image_perp_kernels =
        im_phi.basis().iter().all(|x| kk.basis().iter().all(|z| space.pair(x, z).is_zero()));
    let z_perp_invariant =
        kk.basis().iter().all(|z| space.perp(&Subspace::span(space.dim(), &[z.clone()])).is_invariant(phi));
    Ok(BasicsReport {
        phi_skew_for_alpha: alpha_matrix(&a, phi).is_zero(),
        ker_alpha_invariant: ker_a.is_invariant(phi),
        image_perp_kernels,
        z_perp_invariant,
        perp_image_kernel_in_ker_alpha: ker_a.contains_space(&space.perp(&im_phi).intersection(&ker_phi)),
    })
}

/// Least `k >= 1` with `phi^k = 0`.
pub fn nilpotency_index(phi: &Matrix) -> Option<usize> {
    let n = phi.rows();
    let mut p = phi.clone();
    for k in 1..=n.max(1) {
        if p.is_zero() {
            return Some(k);
        }
        p = p.mul(phi);
    }
    None
}

/// First `j` for which `im phi^j` and `im phi^{k-j}` are not orthogonal.
pub fn images_perp_witness(space: &SymplecticVectorSpace, phi: &Matrix) -> Result<Option<usize>, EndoError> {
    check_square(space, phi)?;
    let k = nilpotency_index(phi).ok_or(EndoError::NotNilpotent)?;
    let pow = |j: usize| if j == 0 { Matrix::identity(phi.rows()) } else { phi.pow(j) };
    for j in 0..=k {
        if !pow(j).transpose().mul(&space.omega).mul(&pow(k - j)).is_zero() {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Failure of the four-term relation for generators `p, q` on basis vectors `i, j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelationWitness {
    pub p: usize,
    pub q: usize,
    pub i: usize,
    pub j: usize,
}

fn check_abelian(space: &SymplecticVectorSpace, gens: &[Matrix]) -> Result<(), EndoError> {
    for g in gens {
        check_square(space, g)?;
    }
    for p in 0..gens.len() {
        for q in p + 1..gens.len() {
            if !gens[p].commutator(&gens[q]).is_zero() {
                return Err(EndoError::NotAbelian { p, q });
            }
        }
    }
    Ok(())
}

/// `omega(phi psi u, v) + omega(phi u, psi v) + omega(psi u, phi v) + omega(u, phi psi v) = 0`
/// for all generator pairs; `None` when the algebra is symplectic.
pub fn symplectic_relation_witness(space: &SymplecticVectorSpace, gens: &[Matrix]) -> Result<Option<RelationWitness>, EndoError> {
    check_abelian(space, gens)?;
    let w = &space.omega;
    for p in 0..gens.len() {
        for q in p..gens.len() {
            let (f, g) = (&gens[p], &gens[q]);
            let fg = f.mul(g);
            let m = fg
                .transpose()
                .mul(w)
                .add(&f.transpose().mul(w).mul(g))
                .add(&g.transpose().mul(w).mul(f))
                .add(&w.mul(&fg));
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    if !m[(i, j)].is_zero() {
                        return Ok(Some(RelationWitness { p, q, i, j }));
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn is_symplectic_endo_subalgebra(space: &SymplecticVectorSpace, gens: &[Matrix]) -> Result<bool, EndoError> {
    Ok(symplectic_relation_witness(space, gens)?.is_none())
}

pub fn is_quadratic_abelian(gens: &[Matrix]) -> bool {
    gens.iter().all(|f| gens.iter().all(|g| f.mul(g).is_zero()))
}

/// Whether `omega(phi u, phi v) = 0` for every `phi` in the span of `gens`; by polarization
/// this is `omega(phi_p u, phi_q v) + omega(phi_q u, phi_p v) = 0` for all pairs.
pub fn images_isotropic(space: &SymplecticVectorSpace, gens: &[Matrix]) -> bool {
    let w = &space.omega;
    (0..gens.len()).all(|p| {
        (p..gens.len()).all(|q| {
            let (f, g) = (&gens[p], &gens[q]);
            f.transpose().mul(w).mul(g).add(&g.transpose().mul(w).mul(f)).is_zero()
        })
    })
}

fn verify_invariant_lagrangian(space: &SymplecticVectorSpace, gens: &[Matrix], l: &Subspace) -> bool {
    space.is_lagrangian(l) && gens.iter().all(|g| l.is_invariant(g))
}

fn recurse_invariant(omega: &Matrix, phi: &Matrix) -> Result<Subspace, EndoError> {
    let n = omega.rows();
    if phi.is_zero() {
        return Ok(extend_to_maximal_isotropic(omega, &Subspace::zero(n)));
    }
    let k = nilpotency_index(phi).ok_or(EndoError::NotNilpotent)?;
    let z = phi.pow(k - 1).column_space().basis()[0].clone();
    let zline = Subspace::span(n, core::slice::from_ref(&z));
    let zperp = orthogonal_complement(omega, &zline)?;
    if !zperp.is_invariant(phi) {
        return Err(EndoError::Inconsistent("Z-orthogonal is phi-invariant"));
    }
    // basis of Z^perp: Z followed by the canonical vectors not spanned together with Z
    let mut rest = Vec::new();
    let mut acc = zline.clone();
    for v in zperp.basis() {
        if !acc.contains(v) {
            acc = acc.with_vectors(core::slice::from_ref(v));
            rest.push(v.clone());
        }
    }
    let mut fv = vec![z.clone()];
    fv.extend(rest.iter().cloned());
    let frame = crate::exactla::Frame::new(n, fv)?;
    let r = rest.len();
    let wbar = Matrix::from_fn(r, r, |i, j| omega.bilinear(&rest[i], &rest[j]));
    let mut pbar = Matrix::zeros(r, r);
    for (j, w) in rest.iter().enumerate() {
        let co = frame.coords(&phi.mul_vec(w)).ok_or(EndoError::Inconsistent("phi(Z^perp) in Z^perp"))?;
        for i in 0..r {
            pbar[(i, j)] = co[i + 1].clone();
        }
    }
    let lbar = recurse_invariant(&wbar, &pbar)?;
    let mut gens = vec![z];
    for c in lbar.basis() {
        gens.push(crate::exactla::combine(n, c, &rest));
    }
    Ok(Subspace::span(n, &gens))
}

/// A `phi`-invariant maximal isotropic subspace, built by repeatedly passing to
/// `Z^perp / <Z>` for the first canonical `Z` in `im phi^{k-1}`.
pub fn invariant_lagrangian_nilpotent(space: &SymplecticVectorSpace, phi: &Matrix) -> Result<Subspace, EndoError> {
    check_square(space, phi)?;
    nilpotency_index(phi).ok_or(EndoError::NotNilpotent)?;
    if !beta_matrix(&space.omega, phi).is_zero() {
        return Err(EndoError::BetaNonzero);
    }
    let l = recurse_invariant(&space.omega, phi)?;
    if !verify_invariant_lagrangian(space, core::slice::from_ref(phi), &l) {
        return Err(EndoError::Inconsistent("constructed subspace is invariant and maximal isotropic"));
    }
    Ok(l)
}

/// Invariant Lagrangian subspaces in dimension at most four, for a single square-zero
/// endomorphism or an abelian quadratic symplectic algebra. Cases, in order: the joint
/// image is isotropic; the joint image contains a Lagrangian; single `phi` with
/// non-degenerate image (`<u, phi u>`, `u` in the orthogonal of the image); algebra with
/// two-dimensional non-degenerate image (`<phi_1 u_1, u_2>`).
pub fn invariant_lagrangian_low_dim(space: &SymplecticVectorSpace, gens: &[Matrix]) -> Result<Option<Subspace>, EndoError> {
    let n = space.dim();
    if n > 4 {
        return Err(EndoError::TooLarge);
    }
    if !space.is_nondegenerate() {
        return Err(EndoError::Degenerate);
    }
    check_abelian(space, gens)?;
    for (p, g) in gens.iter().enumerate() {
        if !g.mul(g).is_zero() {
            return Err(EndoError::NotQuadratic { p });
        }
    }
    if gens.len() > 1 && (!is_quadratic_abelian(gens) || !images_isotropic(space, gens)) {
        return Err(EndoError::NotSymplecticAlgebra);
    }
    let mut imq = Subspace::zero(n);
    for g in gens {
        imq = imq.sum(&g.column_space());
    }
    let candidate = if space.is_isotropic(&imq) {
        extend_to_maximal_isotropic(&space.omega, &imq)
    } else if let Some(l) = lagrangian_inside(space, &imq) {
        l
    } else if gens.len() == 1 {
        let phi = &gens[0];
        let u = space.perp(&imq).basis()[0].clone();
        Subspace::span(n, &[phi.mul_vec(&u), u])
    } else {
        let phi1 = gens.iter().find(|g| !g.is_zero()).expect("image is non-zero");
        let u1 = (0..n).map(|i| unit_vec(n, i)).find(|e| !phi1.mul_vec(e).iter().all(Zero::is_zero)).expect("phi1 != 0");
        let u2 = space.perp(&imq).intersection(&phi1.kernel()).basis()[0].clone();
        Subspace::span(n, &[phi1.mul_vec(&u1), u2])
    };
    Ok(verify_invariant_lagrangian(space, gens, &candidate).then_some(candidate))
}

/// A Lagrangian of `V` contained in `s`, if the restricted form allows one.
fn lagrangian_inside(space: &SymplecticVectorSpace, s: &Subspace) -> Option<Subspace> {
    let b = s.basis();
    let r = Matrix::from_fn(b.len(), b.len(), |i, j| space.pair(&b[i], &b[j]));
    let inner = extend_to_maximal_isotropic(&r, &Subspace::zero(b.len()));
    let l = Subspace::span(space.dim(), &inner.basis().iter().map(|c| crate::exactla::combine(space.dim(), c, b)).collect::<Vec<_>>());
    space.is_lagrangian(&l).then_some(l)
}

/// `V6 = V + U + W` on the basis `u1, u2, v1, v2, w1, w2`, with `omega(u1, u2) = 1`,
/// `omega(v_i, w_j) = S_ij`, and `X u_i = v_i`, `Y u_i = w_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q6Instance {
    pub s: Matrix,
    pub space: SymplecticVectorSpace,
    pub u: Subspace,
    pub v: Subspace,
    pub w: Subspace,
    pub x: Matrix,
    pub y: Matrix,
}

pub fn q6_form(s: &Matrix) -> Matrix {
    let mut w = Matrix::zeros(6, 6);
    w[(0, 1)] = Q::one();
    w[(1, 0)] = -Q::one();
    for i in 0..2 {
        for j in 0..2 {
            w[(2 + i, 4 + j)] = s[(i, j)].clone();
            w[(4 + j, 2 + i)] = -s[(i, j)].clone();
        }
    }
    w
}

pub fn q6_instance(s: &Matrix) -> Result<Q6Instance, EndoError> {
    if s.rows() != 2 || s.cols() != 2 {
        return Err(EndoError::DimensionMismatch { expected: 2, found: s.rows() });
    }
    if s.determinant()?.is_zero() {
        return Err(EndoError::Singular);
    }
    let space = SymplecticVectorSpace::nondegenerate(&q6_form(s))?;
    let mut x = Matrix::zeros(6, 6);
    let mut y = Matrix::zeros(6, 6);
    for i in 0..2 {
        x[(2 + i, i)] = Q::one();
        y[(4 + i, i)] = Q::one();
    }
    let inst = Q6Instance {
        s: s.clone(),
        u: Subspace::coordinate(6, &[0, 1]),
        v: Subspace::coordinate(6, &[2, 3]),
        w: Subspace::coordinate(6, &[4, 5]),
        space,
        x,
        y,
    };
    let (x, y) = (&inst.x, &inst.y);
    let products_vanish = [x.mul(y), y.mul(x), x.mul(x), y.mul(y)].iter().all(Matrix::is_zero);
    let decomposition = inst.space.is_isotropic(&inst.v)
        && inst.space.is_isotropic(&inst.w)
        && inst.space.perp(&inst.v.sum(&inst.w)) == inst.u;
    let s_back = Matrix::from_fn(2, 2, |i, j| inst.space.pair(&unit_vec(6, 2 + i), &unit_vec(6, 4 + j)));
    if !products_vanish || !decomposition || s_back != *s {
        return Err(EndoError::Inconsistent("q6 instance invariants"));
    }
    Ok(inst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Q6Lagrangian {
    /// `<u, Xu, Yu>` with `u = a u1 + b u2`.
    Witness { u: Vector, subspace: Subspace },
    /// `det S < 0` but `-det S` is not a rational square.
    RealOnly { discriminant: Q },
    /// `S` definite: leading principal minors certify `omega(Xu, Yu) != 0` for `u != 0`.
    CertifiedNone { leading_minors: Vec<Q> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q6Analysis {
    pub symplectic: bool,
    pub det: Q,
    pub invariant_lagrangian: Q6Lagrangian,
}

pub fn q6_analyze(s: &Matrix) -> Result<Q6Analysis, EndoError> {
    if s.rows() != 2 || s.cols() != 2 {
        return Err(EndoError::DimensionMismatch { expected: 2, found: s.rows() });
    }
    if !s.is_symmetric() {
        return Err(EndoError::NotSymmetric);
    }
    let inst = q6_instance(s)?;
    let gens = [inst.x.clone(), inst.y.clone()];
    let symplectic = is_symplectic_endo_subalgebra(&inst.space, &gens)?;
    let det = s.determinant()?;
    let (a, b, c) = (&s[(0, 0)], &s[(0, 1)], &s[(1, 1)]);
    // omega(Xu, Yu) = a x^2 + 2 b x y + c y^2
    let discriminant = q(4) * (b * b - a * c);
    let result = if det.is_positive() {
        let minors = leading_minors(s);
        let definite = minors.iter().all(Signed::is_positive)
            || minors.iter().enumerate().all(|(i, m)| if i % 2 == 0 { m.is_negative() } else { m.is_positive() });
        if !definite {
            return Err(EndoError::Inconsistent("det S > 0 implies S definite"));
        }
        Q6Lagrangian::CertifiedNone { leading_minors: minors }
    } else {
        let coords = if a.is_zero() {
            Some(vec![Q::one(), Q::zero()])
        } else {
            rational_sqrt(&(b * b - a * c)).map(|r| vec![(r - b) / a, Q::one()])
        };
        match coords {
            None => Q6Lagrangian::RealOnly { discriminant },
            Some(uc) => {
                let u = vec![uc[0].clone(), uc[1].clone(), Q::zero(), Q::zero(), Q::zero(), Q::zero()];
                let sub = Subspace::span(6, &[u.clone(), inst.x.mul_vec(&u), inst.y.mul_vec(&u)]);
                if !verify_invariant_lagrangian(&inst.space, &gens, &sub) {
                    return Err(EndoError::Inconsistent("<u, Xu, Yu> is an invariant Lagrangian"));
                }
                Q6Lagrangian::Witness { u: uc, subspace: sub }
            }
        }
    };
    Ok(Q6Analysis { symplectic, det, invariant_lagrangian: result })
}

/// Exhaustive search over coordinate subspaces of the right dimension.
pub fn coordinate_invariant_lagrangian(space: &SymplecticVectorSpace, gens: &[Matrix]) -> Option<Subspace> {
    let n = space.dim();
    let k = space.max_isotropic_dim();
    crate::liealg::combos(n, k)
        .into_iter()
        .map(|c| Subspace::coordinate(n, &c))
        .find(|l| verify_invariant_lagrangian(space, gens, l))
}

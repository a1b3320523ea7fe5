//! Exact constructors for the named example algebras, with frozen expected invariants.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, ToPrimitive, Zero};

use crate::exactla::{q, Matrix, Subspace, Vector, Q};
use crate::lagext::{lagrangian_extension, ExtensionTriple, FlatLieAlgebra, LagExtError};
use crate::liealg::{
    coboundary_matrix, combos, is_derivation, Cochain, Connection, LieAlgebra, LieError, Representation,
};
use crate::oxidation::{symplectic_oxidation, OxidationData, OxidationError};
use crate::symplectic::{SymplecticError, SymplecticLieAlgebra};

/// Stable catalog identifiers, followed by auxiliary nilpotent test entries.
pub const NAMES: &[&str] = &[
    "fdim_metab",
    "cs6",
    "irr6",
    "g8",
    "g10",
    "aff",
    "tn_cotangent",
    "gklambda",
    "filiform4",
    "h3h3",
    "heis3r",
    "filiform6",
    "trivial",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogError {
    UnknownName(String),
    InvalidParameters(String),
    Lie(LieError),
    Symplectic(SymplecticError),
    Oxidation(OxidationError),
    LagExt(LagExtError),
}

impl core::fmt::Display for CatalogError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CatalogError::UnknownName(n) => write!(f, "unknown catalog entry `{n}`"),
            CatalogError::InvalidParameters(m) => write!(f, "invalid parameters: {m}"),
            CatalogError::Lie(e) => write!(f, "{e}"),
            CatalogError::Symplectic(e) => write!(f, "{e}"),
            CatalogError::Oxidation(e) => write!(f, "{e:?}"),
            CatalogError::LagExt(e) => write!(f, "{e:?}"),
        }
    }
}

impl From<LieError> for CatalogError {
    fn from(e: LieError) -> Self {
        CatalogError::Lie(e)
    }
}

impl From<SymplecticError> for CatalogError {
    fn from(e: SymplecticError) -> Self {
        CatalogError::Symplectic(e)
    }
}

impl From<OxidationError> for CatalogError {
    fn from(e: OxidationError) -> Self {
        CatalogError::Oxidation(e)
    }
}

impl From<LagExtError> for CatalogError {
    fn from(e: LagExtError) -> Self {
        CatalogError::LagExt(e)
    }
}

fn invalid(msg: &str) -> CatalogError {
    CatalogError::InvalidParameters(msg.to_owned())
}

/// Expected values; `None` means the entry carries no expectation for that field.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExpectedInvariants {
    pub dim: usize,
    pub c_series: Option<Vec<usize>>,
    pub class: Option<usize>,
    pub solvability_degree: Option<usize>,
    pub rank: Option<usize>,
    pub lagrangian_ideal: Option<bool>,
    pub z2_dim: Option<usize>,
    pub b2_dim: Option<usize>,
    pub d_lambda2_dim: Option<usize>,
    pub max_abelian_ideal_dim: Option<usize>,
    /// Length of a complete reduction sequence to the trivial algebra.
    pub base_steps: Option<usize>,
    pub nilpotent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub params: Vec<Q>,
    pub algebra: SymplecticLieAlgebra,
    pub expected: ExpectedInvariants,
    pub marked: Vec<(String, Subspace)>,
    pub flat: Option<FlatLieAlgebra>,
}

impl CatalogEntry {
    pub fn marked(&self, name: &str) -> Option<&Subspace> {
        self.marked.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }
}

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

fn skew_from_entries(n: usize, entries: &[(usize, usize, i64)]) -> Matrix {
    let e: Vec<(usize, usize, Q)> = entries.iter().map(|&(i, j, c)| (i, j, q(c))).collect();
    SymplecticLieAlgebra::form_from_entries(n, &e)
}

fn small_int(p: &Q, what: &str) -> Result<usize, CatalogError> {
    if !p.is_integer() {
        return Err(CatalogError::InvalidParameters(format!("{what} must be an integer")));
    }
    p.to_integer().to_usize().ok_or_else(|| CatalogError::InvalidParameters(format!("{what} out of range")))
}

fn entry(
    name: &str,
    params: Vec<Q>,
    algebra: SymplecticLieAlgebra,
    expected: ExpectedInvariants,
    marked: Vec<(&str, Subspace)>,
) -> CatalogEntry {
    CatalogEntry {
        name: name.to_owned(),
        params,
        algebra,
        expected,
        marked: marked.into_iter().map(|(n, s)| (n.to_owned(), s)).collect(),
        flat: None,
    }
}

pub fn build(name: &str, params: &[Q]) -> Result<CatalogEntry, CatalogError> {
    let no_params = |e: CatalogEntry| {
        if params.is_empty() {
            Ok(e)
        } else {
            Err(invalid("this entry takes no parameters"))
        }
    };
    match name {
        "fdim_metab" => no_params(fdim_metab()?),
        "cs6" => match params {
            [] => cs6(&q(1), &q(1)),
            [a, b] => cs6(a, b),
            _ => Err(invalid("cs6 takes mu1 mu2")),
        },
        "irr6" => match params {
            [] => irr6(&[q(1), q(1), q(1)]),
            [a, b, c] => irr6(&[a.clone(), b.clone(), c.clone()]),
            _ => Err(invalid("irr6 takes w12 w34 w56")),
        },
        "g8" => no_params(g8()?),
        "g10" => no_params(g10()?),
        "aff" => match params {
            [] => aff(2, None, None),
            [n] => aff(small_int(n, "n")?, None, None),
            [n, rest @ ..] => {
                let n = small_int(n, "n")?;
                if rest.len() != 2 * n {
                    return Err(invalid("aff takes n, then lambda_1..lambda_n, then M_11..M_nn"));
                }
                aff(n, Some(&rest[..n]), Some(&rest[n..]))
            }
        },
        "tn_cotangent" => match params {
            [] => tn_cotangent(3),
            [n] => tn_cotangent(small_int(n, "n")?),
            _ => Err(invalid("tn_cotangent takes n")),
        },
        "gklambda" => match params {
            [] => gklambda(1, 2, &Matrix::identity(2)),
            [k, m, rest @ ..] => {
                let (k, m) = (small_int(k, "k")?, small_int(m, "m")?);
                if rest.len() != m * 2 * k {
                    return Err(invalid("gklambda takes k, m, then the m x 2k character matrix row by row"));
                }
                let lam = Matrix::from_fn(m, 2 * k, |i, j| rest[i * 2 * k + j].clone());
                gklambda(k, m, &lam)
            }
            _ => Err(invalid("gklambda takes k, m and characters")),
        },
        "filiform4" => no_params(filiform4()?),
        "h3h3" => no_params(h3h3()?),
        "heis3r" => no_params(heis3r()?),
        "filiform6" => no_params(filiform6()?),
        "trivial" => no_params(entry(
            "trivial",
            vec![],
            SymplecticLieAlgebra::new(&LieAlgebra::abelian(0), &Matrix::zeros(0, 0))?,
            ExpectedInvariants {
                c_series: Some(vec![0]),
                class: Some(0),
                solvability_degree: Some(0),
                rank: Some(0),
                lagrangian_ideal: Some(true),
                z2_dim: Some(0),
                b2_dim: Some(0),
                d_lambda2_dim: Some(0),
                max_abelian_ideal_dim: Some(0),
                base_steps: Some(0),
                nilpotent: true,
                ..Default::default()
            },
            vec![],
        )),
        _ => Err(CatalogError::UnknownName(name.to_owned())),
    }
}

/// The expected record of an entry built with default parameters.
pub fn expected_invariants(name: &str) -> Result<ExpectedInvariants, CatalogError> {
    Ok(build(name, &[])?.expected)
}

/// `[X,H] = Y`, `[Y,H] = -X`, `[Z,H] = Z`, `omega = X*^Y* + H*^Z*`.
fn fdim_metab() -> Result<CatalogEntry, CatalogError> {
    let g = LieAlgebra::from_int_brackets(4, &[(0, 3, &[(1, 1)]), (1, 3, &[(0, -1)]), (2, 3, &[(2, 1)])])?
        .with_labels(labels(&["X", "Y", "Z", "H"]));
    let s = SymplecticLieAlgebra::new(&g, &skew_from_entries(4, &[(0, 1, 1), (2, 3, -1)]))?;
    Ok(entry(
        "fdim_metab",
        vec![],
        s,
        ExpectedInvariants {
            dim: 4,
            rank: Some(1),
            lagrangian_ideal: Some(false),
            solvability_degree: Some(2),
            ..Default::default()
        },
        vec![
            ("XY", Subspace::coordinate(4, &[0, 1])),
            ("Z", Subspace::coordinate(4, &[2])),
            ("HZ", Subspace::coordinate(4, &[2, 3])),
        ],
    ))
}

/// `<d1, d2>` acting on `V4` by `diag(mu1, -mu1, 0, 0)`, `diag(0, 0, mu2, -mu2)`.
fn cs6(mu1: &Q, mu2: &Q) -> Result<CatalogEntry, CatalogError> {
    if mu1.is_zero() || mu2.is_zero() {
        return Err(invalid("cs6 needs mu1 * mu2 != 0"));
    }
    let v = |k: usize, c: &Q| {
        let mut x = vec![Q::zero(); 6];
        x[k] = c.clone();
        x
    };
    let bs = vec![(0, 2, v(2, mu1)), (0, 3, v(3, &-mu1)), (1, 4, v(4, mu2)), (1, 5, v(5, &-mu2))];
    let g = LieAlgebra::from_brackets(6, &bs)?.with_labels(labels(&["d1", "d2", "e1", "e2", "e3", "e4"]));
    let s = SymplecticLieAlgebra::new(&g, &skew_from_entries(6, &[(2, 3, 1), (4, 5, 1), (0, 1, 1)]))?;
    Ok(entry(
        "cs6",
        vec![mu1.clone(), mu2.clone()],
        s,
        ExpectedInvariants {
            dim: 6,
            rank: Some(2),
            lagrangian_ideal: Some(false),
            max_abelian_ideal_dim: Some(4),
            solvability_degree: Some(2),
            ..Default::default()
        },
        vec![("V4", Subspace::coordinate(6, &[2, 3, 4, 5]))],
    ))
}

/// Brackets of `h + V` with `[H, e_a] = -lambda_i(H) e_b`, `[H, e_b] = lambda_i(H) e_a` on
/// the planes `(e_a, e_b) = (e_{2i}, e_{2i+1})`; `V` first, then `h`.
fn rotation_semidirect(m: usize, hdim: usize, lam: &Matrix) -> Result<LieAlgebra, LieError> {
    let n = 2 * m + hdim;
    let mut bs = Vec::new();
    for i in 0..m {
        let (a, b) = (2 * i, 2 * i + 1);
        for c in 0..hdim {
            let l = &lam[(i, c)];
            if l.is_zero() {
                continue;
            }
            let h = 2 * m + c;
            // [e_a, H] = lambda e_b, [e_b, H] = -lambda e_a
            let mut va = vec![Q::zero(); n];
            va[b] = l.clone();
            let mut vb = vec![Q::zero(); n];
            vb[a] = -l.clone();
            bs.push((a, h, va));
            bs.push((b, h, vb));
        }
    }
    LieAlgebra::from_brackets(n, &bs)
}

/// `rho(e5) = J + 0`, `rho(e6) = 0 + J` on `<e1..e4>`, with
/// `omega = w12 e12 + w34 e34 + w56 e56`.
fn irr6(w: &[Q; 3]) -> Result<CatalogEntry, CatalogError> {
    if w.iter().any(Zero::is_zero) {
        return Err(invalid("irr6 needs w12, w34, w56 non-zero"));
    }
    let g = rotation_semidirect(2, 2, &Matrix::identity(2))?;
    let form = SymplecticLieAlgebra::form_from_entries(6, &[(0, 1, w[0].clone()), (2, 3, w[1].clone()), (4, 5, w[2].clone())]);
    let s = SymplecticLieAlgebra::new(&g, &form)?;
    Ok(entry(
        "irr6",
        w.to_vec(),
        s,
        ExpectedInvariants {
            dim: 6,
            rank: Some(0),
            lagrangian_ideal: Some(false),
            z2_dim: Some(7),
            b2_dim: Some(4),
            base_steps: Some(0),
            solvability_degree: Some(2),
            ..Default::default()
        },
        vec![
            ("a", Subspace::coordinate(6, &[0, 1, 2, 3])),
            ("a1", Subspace::coordinate(6, &[0, 1])),
            ("a2", Subspace::coordinate(6, &[2, 3])),
            ("h", Subspace::coordinate(6, &[4, 5])),
        ],
    ))
}

/// Closed forms of `irr6` on `e12, e34, e56, e15, e25, e36, e46` (0-indexed pairs).
pub fn irr6_z2_basis() -> Vec<Matrix> {
    [(0, 1), (2, 3), (4, 5), (0, 4), (1, 4), (2, 5), (3, 5)]
        .iter()
        .map(|&(i, j)| skew_from_entries(6, &[(i, j, 1)]))
        .collect()
}

/// `g_{k, lambda}`: `h` abelian of dimension `2k` acting on `V = C^m` by the characters in the
/// rows of `lam`, with `omega = sum e_{2i, 2i+1}` on `V` and the standard form on `h`.
fn gklambda(k: usize, m: usize, lam: &Matrix) -> Result<CatalogEntry, CatalogError> {
    if k == 0 || m < 2 * k {
        return Err(invalid("gklambda needs k >= 1 and m >= 2k"));
    }
    if lam.rows() != m || lam.cols() != 2 * k {
        return Err(invalid("character matrix must be m x 2k"));
    }
    let rows: Vec<Vector> = (0..m).map(|i| lam.row(i).to_vec()).collect();
    if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
        return Err(invalid("characters must be non-zero"));
    }
    if (0..m).any(|i| (i + 1..m).any(|j| rows[i] == rows[j])) {
        return Err(invalid("characters must be mutually distinct"));
    }
    if lam.rank() != 2 * k {
        return Err(invalid("characters must span h*"));
    }
    let g = rotation_semidirect(m, 2 * k, lam)?;
    let n = 2 * m + 2 * k;
    let entries: Vec<(usize, usize, i64)> = (0..m + k).map(|i| (2 * i, 2 * i + 1, 1)).collect();
    let s = SymplecticLieAlgebra::new(&g, &skew_from_entries(n, &entries))?;
    let mut params = vec![q(k as i64), q(m as i64)];
    params.extend(lam.data().iter().cloned());
    let v = Subspace::coordinate(n, &(0..2 * m).collect::<Vec<_>>());
    let h = Subspace::coordinate(n, &(2 * m..n).collect::<Vec<_>>());
    Ok(entry(
        "gklambda",
        params,
        s,
        ExpectedInvariants { dim: n, solvability_degree: Some(2), ..Default::default() },
        vec![("V", v), ("h", h)],
    ))
}

fn h3h3_base() -> Result<(LieAlgebra, Matrix), LieError> {
    let g = LieAlgebra::from_int_brackets(6, &[(0, 1, &[(2, 1)]), (3, 4, &[(5, 1)])])?
        .with_labels(labels(&["X", "Y", "Z", "X'", "Y'", "Z'"]));
    Ok((g, skew_from_entries(6, &[(0, 2, 1), (3, 5, 1), (1, 4, 1)])))
}

fn h3h3() -> Result<CatalogEntry, CatalogError> {
    let (g, w) = h3h3_base()?;
    let s = SymplecticLieAlgebra::new(&g, &w)?;
    Ok(entry(
        "h3h3",
        vec![],
        s,
        ExpectedInvariants {
            dim: 6,
            c_series: Some(vec![6, 2, 0]),
            class: Some(2),
            rank: Some(3),
            lagrangian_ideal: Some(true),
            nilpotent: true,
            ..Default::default()
        },
        vec![],
    ))
}

/// Symplectic oxidation of `h3 + h3` by `phi: Y -> X, Y' -> X'` and `lambda = 0`.
fn g8() -> Result<CatalogEntry, CatalogError> {
    let (base, wb) = h3h3_base()?;
    let mut phi = Matrix::zeros(6, 6);
    phi[(0, 1)] = Q::one();
    phi[(3, 4)] = Q::one();
    let alpha = crate::liealg::form_derive_unchecked(&Cochain::from_skew_matrix(&wb), &phi);
    let data = OxidationData { base, omega_bar: Some(wb), phi, alpha, lambda: Cochain::zero(1, 6, 1) };
    let s = symplectic_oxidation(&data)?;
    let g = s.algebra().clone().with_labels(labels(&["xi", "X", "Y", "Z", "X'", "Y'", "Z'", "H"]));
    let s = SymplecticLieAlgebra::new(&g, s.form())?;
    Ok(entry(
        "g8",
        vec![],
        s,
        ExpectedInvariants {
            dim: 8,
            c_series: Some(vec![8, 5, 3, 1, 0]),
            class: Some(4),
            rank: Some(3),
            lagrangian_ideal: Some(false),
            z2_dim: Some(11),
            d_lambda2_dim: Some(17),
            nilpotent: true,
            ..Default::default()
        },
        vec![
            ("W6", Subspace::coordinate(8, &[0, 1, 3, 4, 6, 7])),
            ("HZZ'", Subspace::coordinate(8, &[3, 6, 7])),
            ("HZZ'Y", Subspace::coordinate(8, &[2, 3, 6, 7])),
        ],
    ))
}

/// The eleven closed forms `e12, e13, e15, e16, e23, e34, e36, e56, e67, e26 - e35,
/// e24 + e57 + e18` on `g8` (1-indexed).
pub fn g8_z2_basis() -> Vec<Matrix> {
    let f = |es: &[(usize, usize, i64)]| {
        let z: Vec<(usize, usize, i64)> = es.iter().map(|&(i, j, c)| (i - 1, j - 1, c)).collect();
        skew_from_entries(8, &z)
    };
    vec![
        f(&[(1, 2, 1)]),
        f(&[(1, 3, 1)]),
        f(&[(1, 5, 1)]),
        f(&[(1, 6, 1)]),
        f(&[(2, 3, 1)]),
        f(&[(3, 4, 1)]),
        f(&[(3, 6, 1)]),
        f(&[(5, 6, 1)]),
        f(&[(6, 7, 1)]),
        f(&[(2, 6, 1), (3, 5, -1)]),
        f(&[(2, 4, 1), (5, 7, 1), (1, 8, 1)]),
    ]
}

fn g10_algebra() -> Result<LieAlgebra, LieError> {
    // x, y, u1, u2, v1, v2, w1, w2, z1, z2
    let g = LieAlgebra::from_int_brackets(
        10,
        &[
            (0, 2, &[(4, 1)]),
            (0, 3, &[(5, 1)]),
            (1, 2, &[(6, 1)]),
            (1, 3, &[(7, 1)]),
            (2, 4, &[(9, -1)]),
            (3, 5, &[(9, -1)]),
            (2, 6, &[(8, 1)]),
            (3, 7, &[(8, 1)]),
        ],
    )?;
    Ok(g.with_labels(labels(&["x", "y", "u1", "u2", "v1", "v2", "w1", "w2", "z1", "z2"])))
}

fn g10_form() -> Matrix {
    skew_from_entries(10, &[(0, 8, 1), (1, 9, 1), (2, 3, 1), (4, 6, 1), (5, 7, 1)])
}

fn g10() -> Result<CatalogEntry, CatalogError> {
    let s = SymplecticLieAlgebra::new(&g10_algebra()?, &g10_form())?;
    Ok(entry(
        "g10",
        vec![],
        s,
        ExpectedInvariants {
            dim: 10,
            c_series: Some(vec![10, 6, 2, 0]),
            class: Some(3),
            rank: Some(4),
            lagrangian_ideal: Some(false),
            max_abelian_ideal_dim: Some(8),
            nilpotent: true,
            ..Default::default()
        },
        vec![
            ("a_m", Subspace::coordinate(10, &[0, 1, 4, 5, 6, 7, 8, 9])),
            ("j4", Subspace::coordinate(10, &[1, 6, 7, 8])),
            ("Z", Subspace::coordinate(10, &[8, 9])),
            ("U", Subspace::coordinate(10, &[2, 3])),
        ],
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G10Automorphism {
    pub matrix: Matrix,
    pub is_automorphism: bool,
    pub is_symplectic: bool,
}

/// The `GL(2)` action on `g10`, with both properties re-checked on the matrix.
pub fn g10_automorphism(a: &Matrix) -> Result<G10Automorphism, CatalogError> {
    if a.rows() != 2 || a.cols() != 2 {
        return Err(invalid("A must be 2 x 2"));
    }
    let det = a.determinant().map_err(|e| CatalogError::Lie(LieError::LinAlg(e)))?;
    if det.is_zero() {
        return Err(invalid("A must be invertible"));
    }
    let (a11, a12, a21, a22) = (&a[(0, 0)], &a[(0, 1)], &a[(1, 0)], &a[(1, 1)]);
    let mut m = Matrix::zeros(10, 10);
    let mut set = |col: usize, entries: &[(usize, Q)]| {
        for (r, c) in entries {
            m[(*r, col)] = c.clone();
        }
    };
    set(0, &[(0, a11.clone()), (1, a21.clone())]);
    set(1, &[(0, a12.clone()), (1, a22.clone())]);
    set(2, &[(2, Q::one())]);
    set(3, &[(3, Q::one())]);
    for i in 0..2 {
        set(4 + i, &[(4 + i, a11.clone()), (6 + i, a21.clone())]);
        set(6 + i, &[(4 + i, a12.clone()), (6 + i, a22.clone())]);
    }
    set(8, &[(8, a22.clone()), (9, -a12.clone())]);
    set(9, &[(8, -a21.clone()), (9, a11.clone())]);
    let g = g10_algebra()?;
    let is_automorphism = (0..10).all(|i| {
        (i + 1..10).all(|j| {
            let lhs = g.bracket(&m.col(i), &m.col(j));
            let rhs = m.mul_vec(&g.bracket_basis(i, j));
            lhs == rhs
        })
    });
    let w = g10_form();
    let is_symplectic = m.transpose().mul(&w).mul(&m) == w;
    Ok(G10Automorphism { matrix: m, is_automorphism, is_symplectic })
}

/// `aff(n) = gl(n) + R^n` on `E_ij` (row-major) then `t_k`, with
/// `omega((A,u),(B,v)) = lambda(Av - Bu) + tr(M (AB - BA))`.
fn aff(n: usize, lambda: Option<&[Q]>, mdiag: Option<&[Q]>) -> Result<CatalogEntry, CatalogError> {
    if n == 0 {
        return Err(invalid("aff needs n >= 1"));
    }
    let lam: Vec<Q> = lambda.map(<[Q]>::to_vec).unwrap_or_else(|| vec![Q::one(); n]);
    let md: Vec<Q> = mdiag.map(<[Q]>::to_vec).unwrap_or_else(|| (1..=n as i64).map(q).collect());
    if lam.iter().any(Zero::is_zero) {
        return Err(invalid("every basis vector must lie outside ker lambda"));
    }
    if (0..n).any(|i| (i + 1..n).any(|j| md[i] == md[j])) {
        return Err(invalid("M must have distinct eigenvalues"));
    }
    let dim = n * n + n;
    let e = |i: usize, j: usize| i * n + j;
    let t = |k: usize| n * n + k;
    let mut bs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let (p, r) = (e(i, j), e(k, l));
                    if p >= r {
                        continue;
                    }
                    let mut v = vec![Q::zero(); dim];
                    if j == k {
                        v[e(i, l)] += Q::one();
                    }
                    if l == i {
                        v[e(k, j)] -= Q::one();
                    }
                    if v.iter().any(|x| !x.is_zero()) {
                        bs.push((p, r, v));
                    }
                }
            }
            for k in 0..n {
                if j == k {
                    let mut v = vec![Q::zero(); dim];
                    v[t(i)] = Q::one();
                    bs.push((e(i, j), t(k), v));
                }
            }
        }
    }
    let mut ls = Vec::new();
    for i in 0..n {
        for j in 0..n {
            ls.push(format!("E{}{}", i + 1, j + 1));
        }
    }
    for k in 0..n {
        ls.push(format!("t{}", k + 1));
    }
    let g = LieAlgebra::from_brackets(dim, &bs)?.with_labels(ls);
    let mut w = Matrix::zeros(dim, dim);
    for i in 0..n {
        for j in 0..n {
            // omega(E_ij, E_ji) = M_ii - M_jj
            if i != j {
                w[(e(i, j), e(j, i))] = &md[i] - &md[j];
            }
            // omega(E_ij, t_j) = lambda_i, omega(t_j, E_ij) = -lambda_i
            w[(e(i, j), t(j))] = lam[i].clone();
            w[(t(j), e(i, j))] = -lam[i].clone();
        }
    }
    let s = SymplecticLieAlgebra::new(&g, &w)?;
    let mut params = vec![q(n as i64)];
    params.extend(lam);
    params.extend(md);
    Ok(entry(
        "aff",
        params,
        s,
        ExpectedInvariants { dim, base_steps: Some(n), ..Default::default() },
        vec![("R^n", Subspace::coordinate(dim, &(n * n..dim).collect::<Vec<_>>()))],
    ))
}

/// Strictly upper triangular `t_n` on `E_ij`, `i < j` in lexicographic order, with the flat
/// torsion-free connection `nabla_A B = A B`.
pub fn tn_flat(n: usize) -> Result<FlatLieAlgebra, CatalogError> {
    if n < 2 {
        return Err(invalid("t_n needs n >= 2"));
    }
    let idx: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let d = idx.len();
    let pos = |i: usize, j: usize| idx.iter().position(|&p| p == (i, j)).expect("strictly upper");
    let prod = |a: usize, b: usize| -> Vector {
        let ((i, j), (k, l)) = (idx[a], idx[b]);
        let mut v = vec![Q::zero(); d];
        if j == k {
            v[pos(i, l)] = Q::one();
        }
        v
    };
    let mut bs = Vec::new();
    for a in 0..d {
        for b in a + 1..d {
            let v: Vector = prod(a, b).iter().zip(prod(b, a)).map(|(x, y)| x - y).collect();
            if v.iter().any(|x| !x.is_zero()) {
                bs.push((a, b, v));
            }
        }
    }
    let ls: Vec<String> = idx.iter().map(|(i, j)| format!("E{}{}", i + 1, j + 1)).collect();
    let h = LieAlgebra::from_brackets(d, &bs)?.with_labels(ls);
    let nabla = Connection::from_fn(d, prod);
    Ok(FlatLieAlgebra::new(&h, &nabla)?)
}

/// `t_n + t_n*` with the duality form and `alpha = 0`.
fn tn_cotangent(n: usize) -> Result<CatalogEntry, CatalogError> {
    let flat = tn_flat(n)?;
    let d = flat.dim();
    let p = lagrangian_extension(&ExtensionTriple { flat: flat.clone(), alpha: Cochain::zero(2, d, d) })?;
    let solv = match n {
        3 => Some(2),
        5 => Some(3),
        _ => None,
    };
    let mut e = entry(
        "tn_cotangent",
        vec![q(n as i64)],
        p.s.clone(),
        ExpectedInvariants {
            dim: 2 * d,
            class: Some(n - 1),
            solvability_degree: solv,
            lagrangian_ideal: Some(true),
            rank: Some(d),
            nilpotent: true,
            ..Default::default()
        },
        vec![("t_n*", p.a.clone()), ("t_n", p.n.clone())],
    );
    e.flat = Some(flat);
    Ok(e)
}

/// First non-degenerate form in `Z^2(g)` found by a deterministic scan over small integer
/// combinations of a basis of closed forms.
pub fn first_symplectic_form(g: &LieAlgebra, budget: usize) -> Option<Matrix> {
    let n = g.dim();
    if n % 2 != 0 {
        return None;
    }
    if n == 0 {
        return Some(Matrix::zeros(0, 0));
    }
    let rep = Representation::trivial(g, 1);
    let z2 = coboundary_matrix(&rep, 2).ok()?.kernel();
    let forms: Vec<Matrix> = z2
        .basis()
        .iter()
        .map(|v| Cochain::from_vector(2, n, 1, v.clone()).expect("length").to_skew_matrix())
        .collect();
    let r = forms.len();
    let vals = [0i64, 1, -1, 2];
    let mut tried = 0usize;
    for weight in 1..=r {
        for support in combos(r, weight) {
            let mut counter = vec![1usize; weight];
            loop {
                tried += 1;
                if tried > budget {
                    return None;
                }
                let mut w = Matrix::zeros(n, n);
                for (c, &i) in counter.iter().zip(&support) {
                    w = w.add(&forms[i].scale(&q(vals[*c])));
                }
                if w.rank() == n {
                    return Some(w);
                }
                let mut p = 0;
                while p < weight {
                    counter[p] += 1;
                    if counter[p] < vals.len() {
                        break;
                    }
                    counter[p] = 1;
                    p += 1;
                }
                if p == weight {
                    break;
                }
            }
        }
    }
    None
}

fn with_found_form(name: &str, g: LieAlgebra, expected: ExpectedInvariants) -> Result<CatalogEntry, CatalogError> {
    let w = first_symplectic_form(&g, 100_000).ok_or_else(|| invalid("no symplectic form found"))?;
    let s = SymplecticLieAlgebra::new(&g, &w)?;
    Ok(entry(name, vec![], s, expected, vec![]))
}

/// `[e1, e2] = e3`, `[e1, e3] = e4`.
fn filiform4() -> Result<CatalogEntry, CatalogError> {
    let g = LieAlgebra::from_int_brackets(4, &[(0, 1, &[(2, 1)]), (0, 2, &[(3, 1)])])?;
    let mut e = with_found_form(
        "filiform4",
        g,
        ExpectedInvariants {
            dim: 4,
            c_series: Some(vec![4, 2, 1, 0]),
            class: Some(3),
            rank: Some(2),
            lagrangian_ideal: Some(true),
            nilpotent: true,
            ..Default::default()
        },
    )?;
    e.marked.push(("C1".to_owned(), Subspace::coordinate(4, &[2, 3])));
    Ok(e)
}

/// Model filiform algebra: `[e1, e_i] = e_{i+1}` for `i = 2..5`.
fn filiform6() -> Result<CatalogEntry, CatalogError> {
    let g = LieAlgebra::from_int_brackets(6, &[(0, 1, &[(2, 1)]), (0, 2, &[(3, 1)]), (0, 3, &[(4, 1)]), (0, 4, &[(5, 1)])])?;
    with_found_form(
        "filiform6",
        g,
        ExpectedInvariants {
            dim: 6,
            c_series: Some(vec![6, 4, 3, 2, 1, 0]),
            class: Some(5),
            rank: Some(3),
            lagrangian_ideal: Some(true),
            nilpotent: true,
            ..Default::default()
        },
    )
}

/// `h3 + R` with `[e1, e2] = e3` and `omega = e14 + e23`.
fn heis3r() -> Result<CatalogEntry, CatalogError> {
    let g = LieAlgebra::from_int_brackets(4, &[(0, 1, &[(2, 1)])])?;
    let s = SymplecticLieAlgebra::new(&g, &skew_from_entries(4, &[(0, 3, 1), (1, 2, 1)]))?;
    Ok(entry(
        "heis3r",
        vec![],
        s,
        ExpectedInvariants {
            dim: 4,
            c_series: Some(vec![4, 1, 0]),
            class: Some(2),
            rank: Some(2),
            lagrangian_ideal: Some(true),
            nilpotent: true,
            ..Default::default()
        },
        vec![],
    ))
}

/// Whether `phi` is a derivation of the named entry; used by tests of the GL(2) action.
pub fn is_entry_derivation(e: &CatalogEntry, phi: &Matrix) -> bool {
    is_derivation(e.algebra.algebra(), phi).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{series, SeriesKind};

    #[test]
    fn every_name_builds() {
        for n in NAMES {
            let e = build(n, &[]).unwrap();
            assert_eq!(e.algebra.dim(), e.expected.dim, "{n}");
            if let Some(c) = &e.expected.c_series {
                assert_eq!(&series(e.algebra.algebra(), SeriesKind::Descending).dims(), c, "{n}");
            }
        }
    }

    #[test]
    fn parameter_conditions_named() {
        assert!(matches!(build("cs6", &[q(0), q(1)]), Err(CatalogError::InvalidParameters(_))));
        assert!(matches!(build("gklambda", &[q(1), q(2), q(1), q(0), q(1), q(0)]), Err(CatalogError::InvalidParameters(_))));
        assert!(matches!(build("aff", &[q(2), q(1), q(1), q(3), q(3)]), Err(CatalogError::InvalidParameters(_))));
        assert!(matches!(build("nope", &[]), Err(CatalogError::UnknownName(_))));
    }

    #[test]
    fn g10_action() {
        let id = g10_automorphism(&Matrix::identity(2)).unwrap();
        assert_eq!(id.matrix, Matrix::identity(10));
        let r = g10_automorphism(&Matrix::from_i64(2, 2, &[2, 1, 1, 1])).unwrap();
        assert!(r.is_automorphism && r.is_symplectic);
        let d = g10_automorphism(&Matrix::from_i64(2, 2, &[2, 0, 0, 1])).unwrap();
        assert!(d.is_automorphism && !d.is_symplectic);
        assert!(g10_automorphism(&Matrix::from_i64(2, 2, &[1, 2, 2, 4])).is_err());
    }
}

//! Isotropic ideals and Lagrangian subalgebras: enumeration, rank bounds with exact
//! certificates, and constructive routes to Lagrangian ideals.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::endoalg::{
    images_isotropic, invariant_lagrangian_low_dim, invariant_lagrangian_nilpotent, is_quadratic_abelian,
    nilpotency_index, q6_analyze, beta_matrix, Q6Lagrangian, SymplecticVectorSpace,
};
use crate::exactla::poly::{char_poly, factor_squarefree};
use crate::exactla::{
    combine, greedy_unit_complement, is_positive_semidefinite, q, rational_sqrt, unit_vec, zero_vec, Frame, Matrix,
    Subspace, Vector, Q,
};
use crate::liealg::{bracket_span, center, centralizer, combos, ideal_closure, is_ideal, killing_radical, series, LieAlgebra, SeriesKind};
use crate::reduction::{irreducible_base, reduce, transfer_isotropic, BaseStatus, ReductionStep, Strategy, Transfer};
use crate::symplectic::{extend_to_maximal_isotropic, SymplecticLieAlgebra};

pub fn is_isotropic_ideal(s: &SymplecticLieAlgebra, j: &Subspace) -> bool {
    s.is_isotropic(j) && is_ideal(s.algebra(), j)
}

pub fn is_subalgebra(g: &LieAlgebra, s: &Subspace) -> bool {
    s.contains_space(&bracket_span(g, s, s))
}

fn is_abelian_subspace(g: &LieAlgebra, s: &Subspace) -> bool {
    bracket_span(g, s, s).is_zero()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumMode {
    /// Coordinate subspaces of dimension at most `n / 2`.
    BasisAligned,
    /// Series terms, their intersections, and ideal closures of one-vector extensions.
    SeriesDerived,
    /// Ideal closures of random small-integer vectors and random extensions.
    Randomized { seed: u64 },
}

/// Sorts by dimension descending, then canonical basis order, and removes duplicates.
fn canonical_sort(v: &mut Vec<Subspace>) {
    v.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.canonical_cmp(b)));
    v.dedup();
}

fn push_new(out: &mut Vec<Subspace>, seen: &mut BTreeSet<Vec<Vec<Q>>>, j: Subspace) -> bool {
    if j.is_zero() {
        return false;
    }
    let key: Vec<Vec<Q>> = j.basis().to_vec();
    if seen.insert(key) {
        out.push(j);
        true
    } else {
        false
    }
}

fn basis_aligned(s: &SymplecticLieAlgebra, budget: usize) -> Vec<Subspace> {
    let n = s.dim();
    let mut out = Vec::new();
    let mut examined = 0usize;
    'outer: for d in 1..=n / 2 {
        for c in combos(n, d) {
            if examined >= budget {
                break 'outer;
            }
            examined += 1;
            let j = Subspace::coordinate(n, &c);
            if is_isotropic_ideal(s, &j) {
                out.push(j);
            }
        }
    }
    out
}

/// Extends each found ideal by single vectors of its orthogonal, closing under brackets.
fn extend_closures(s: &SymplecticLieAlgebra, out: &mut Vec<Subspace>, seen: &mut BTreeSet<Vec<Vec<Q>>>, budget: usize) {
    let g = s.algebra();
    let mut i = 0;
    let mut examined = 0usize;
    while i < out.len() && examined < budget {
        let j = out[i].clone();
        i += 1;
        let perp = s.perp(&j);
        for v in perp.basis() {
            if j.contains(v) {
                continue;
            }
            examined += 1;
            let k = ideal_closure(g, &j.with_vectors(core::slice::from_ref(v)));
            if s.is_isotropic(&k) {
                push_new(out, seen, k);
            }
            if examined >= budget {
                break;
            }
        }
    }
}

fn series_derived(s: &SymplecticLieAlgebra, budget: usize) -> Vec<Subspace> {
    let g = s.algebra();
    let n = s.dim();
    let desc = series(g, SeriesKind::Descending).terms;
    let asc = series(g, SeriesKind::Ascending).terms;
    let der = series(g, SeriesKind::Derived).terms;
    let mut seeds: Vec<Subspace> = Vec::new();
    seeds.extend(desc.iter().cloned());
    seeds.extend(asc.iter().cloned());
    seeds.extend(der.iter().cloned());
    for a in &desc {
        for b in &asc {
            seeds.push(a.intersection(b));
        }
    }
    seeds.push(center(g));
    // lower central series of the Killing radical
    let kr = killing_radical(g);
    let mut t = kr.clone();
    while !t.is_zero() {
        seeds.push(t.clone());
        let next = bracket_span(g, &kr, &t);
        if next == t {
            break;
        }
        t = next;
    }
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for c in seeds {
        if is_isotropic_ideal(s, &c) {
            push_new(&mut out, &mut seen, c.clone());
        } else {
            let cut = c.intersection(&s.perp(&c));
            if is_isotropic_ideal(s, &cut) {
                push_new(&mut out, &mut seen, cut);
            }
        }
    }
    for i in 0..n {
        let k = ideal_closure(g, &Subspace::span(n, &[unit_vec(n, i)]));
        if is_isotropic_ideal(s, &k) {
            push_new(&mut out, &mut seen, k);
        }
    }
    extend_closures(s, &mut out, &mut seen, budget);
    out
}

fn randomized(s: &SymplecticLieAlgebra, seed: u64, budget: usize) -> Vec<Subspace> {
    let g = s.algebra();
    let n = s.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    if n == 0 {
        return out;
    }
    for _ in 0..budget {
        let v: Vector = (0..n).map(|_| q(rng.gen_range(-2..=2))).collect();
        if v.iter().all(Zero::is_zero) {
            continue;
        }
        let mut j = ideal_closure(g, &Subspace::span(n, &[v]));
        while s.is_isotropic(&j) {
            push_new(&mut out, &mut seen, j.clone());
            let perp = s.perp(&j);
            let coeffs: Vector = (0..perp.dim()).map(|_| q(rng.gen_range(-2..=2))).collect();
            let w = combine(n, &coeffs, perp.basis());
            if j.contains(&w) {
                break;
            }
            j = ideal_closure(g, &j.with_vectors(&[w]));
        }
    }
    out
}

/// Verified isotropic ideals (non-zero), in canonical order.
pub fn isotropic_ideals_enumerate(s: &SymplecticLieAlgebra, mode: EnumMode, budget: usize) -> Vec<Subspace> {
    let mut out = match mode {
        EnumMode::BasisAligned => basis_aligned(s, budget),
        EnumMode::SeriesDerived => series_derived(s, budget),
        EnumMode::Randomized { seed } => randomized(s, seed, budget),
    };
    out.retain(|j| is_isotropic_ideal(s, j));
    canonical_sort(&mut out);
    out
}

/// Union of the series-derived and basis-aligned searches.
pub fn isotropic_ideal_candidates(s: &SymplecticLieAlgebra, budget: usize) -> Vec<Subspace> {
    let mut out = isotropic_ideals_enumerate(s, EnumMode::SeriesDerived, budget);
    out.extend(isotropic_ideals_enumerate(s, EnumMode::BasisAligned, budget));
    canonical_sort(&mut out);
    out
}

/// Symmetric matrix of `x -> c_k([[p, v(x)], v(x)])` with `v(x) = b_0 + sum x_a b_a`,
/// homogenised by `x_0 = 1`.
fn escape_matrix(g: &LieAlgebra, probe: &[Q], basis: &[Vector], k: usize) -> Matrix {
    let ad: Vec<Vector> = basis.iter().map(|b| g.bracket(probe, b)).collect();
    let half = Q::new(1.into(), 2.into());
    Matrix::from_fn(basis.len(), basis.len(), |a, b| {
        let x = g.bracket(&ad[a], &basis[b])[k].clone();
        let y = g.bracket(&ad[b], &basis[a])[k].clone();
        (x + y) * &half
    })
}

/// Whether `x~^T M x~ != 0` for every real `x~` with `x~_0 = 1`: `M` or `-M` is positive
/// semidefinite and no kernel vector has a non-zero `0`-coordinate.
fn nonvanishing_on_affine_chart(m: &Matrix) -> Option<i8> {
    let support: Vec<usize> =
        (0..m.rows()).filter(|&i| i == 0 || (0..m.cols()).any(|j| !m[(i, j)].is_zero())).collect();
    let r = m.select(&support, &support);
    let ker = r.kernel();
    if ker.basis().iter().any(|v| !v[0].is_zero()) {
        return None;
    }
    if is_positive_semidefinite(&r) {
        Some(1)
    } else if is_positive_semidefinite(&r.scale(&-Q::one())) {
        Some(-1)
    } else {
        None
    }
}

/// One escape direction: vectors `c_d + sum_{i>d} t_i c_i + w` with `w in m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EscapeForm {
    /// Index into the complement directions.
    pub direction: usize,
    /// Index into the probes.
    pub probe: usize,
    /// Coordinate of `[[p, v], v]` that never vanishes.
    pub coordinate: usize,
    /// Homogenised quadratic form, rows/columns ordered as `c_d`, later `c_i`, basis of `m`.
    pub form: Matrix,
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeCertificate {
    pub m: Subspace,
    /// Unit-vector indices spanning a complement of `m`.
    pub complement: Vec<usize>,
    pub probes: Vec<Vector>,
    pub forms: Vec<EscapeForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    NotAbelianIdeal,
    MalformedCertificate,
}

impl core::fmt::Display for SearchError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SearchError::NotAbelianIdeal => write!(f, "envelope is not an abelian ideal"),
            SearchError::MalformedCertificate => write!(f, "certificate does not match the envelope"),
        }
    }
}

fn direction_basis(g: &LieAlgebra, m: &Subspace, complement: &[usize], d: usize) -> Vec<Vector> {
    let n = g.dim();
    let mut basis = vec![unit_vec(n, complement[d])];
    basis.extend(complement[d + 1..].iter().map(|&i| unit_vec(n, i)));
    basis.extend(m.basis().iter().cloned());
    basis
}

/// Builds an escape certificate for `m`, trying the given probes or else the basis of `m`
/// followed by the complement directions.
pub fn escape_certificate(g: &LieAlgebra, m: &Subspace, probes: Option<&[Vector]>) -> Option<EnvelopeCertificate> {
    if !is_ideal(g, m) || !is_abelian_subspace(g, m) {
        return None;
    }
    let n = g.dim();
    let complement = greedy_unit_complement(m);
    let probes: Vec<Vector> = match probes {
        Some(p) => p.to_vec(),
        None => {
            let mut p = m.basis().to_vec();
            p.extend(complement.iter().map(|&i| unit_vec(n, i)));
            p
        }
    };
    let mut forms = Vec::new();
    for d in 0..complement.len() {
        let basis = direction_basis(g, m, &complement, d);
        let mut found = None;
        'probe: for (pi, p) in probes.iter().enumerate() {
            for k in 0..n {
                let form = escape_matrix(g, p, &basis, k);
                if let Some(sign) = nonvanishing_on_affine_chart(&form) {
                    found = Some(EscapeForm { direction: d, probe: pi, coordinate: k, form, sign });
                    break 'probe;
                }
            }
        }
        forms.push(found?);
    }
    Some(EnvelopeCertificate { m: m.clone(), complement, probes, forms })
}

/// Re-derives every escape form and its definiteness. `true` means every abelian ideal,
/// hence every isotropic ideal, lies in `m`.
pub fn verify_no_abelian_escape(g: &LieAlgebra, cert: &EnvelopeCertificate) -> Result<bool, SearchError> {
    let m = &cert.m;
    if m.ambient() != g.dim() || !is_ideal(g, m) || !is_abelian_subspace(g, m) {
        return Err(SearchError::NotAbelianIdeal);
    }
    if cert.complement != greedy_unit_complement(m) || cert.forms.len() != cert.complement.len() {
        return Err(SearchError::MalformedCertificate);
    }
    for (d, f) in cert.forms.iter().enumerate() {
        if f.direction != d || f.probe >= cert.probes.len() || f.coordinate >= g.dim() {
            return Err(SearchError::MalformedCertificate);
        }
        let basis = direction_basis(g, m, &cert.complement, d);
        let form = escape_matrix(g, &cert.probes[f.probe], &basis, f.coordinate);
        if form != f.form || nonvanishing_on_affine_chart(&form) != Some(f.sign) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Abelian ideals that serve as envelope candidates: the centraliser of `[g, g]` and
/// `[g, g]` itself.
pub fn envelope_candidates(g: &LieAlgebra) -> Vec<Subspace> {
    let d = series(g, SeriesKind::Descending);
    let c1 = d.term(1).clone();
    let mut out = Vec::new();
    for m in [centralizer(g, &c1), c1] {
        if is_ideal(g, &m) && is_abelian_subspace(g, &m) && !out.contains(&m) {
            out.push(m);
        }
    }
    out
}

/// All ideals of `g` inside the abelian ideal `m` with their isotropy, when a rational
/// combination of `ad(c)|_m` has square-free characteristic polynomial; `None` otherwise.
pub fn ideals_inside_abelian(g: &LieAlgebra, m: &Subspace) -> Option<Vec<Subspace>> {
    let n = g.dim();
    let k = m.dim();
    let frame = Frame::new(n, m.basis().to_vec()).ok()?;
    let comp = greedy_unit_complement(m);
    let ops: Vec<Matrix> = comp
        .iter()
        .map(|&c| {
            let cols: Vec<Vector> =
                m.basis().iter().map(|b| frame.coords(&g.bracket(&unit_vec(n, c), b)).expect("m is an ideal")).collect();
            Matrix::from_cols(k, &cols).expect("square")
        })
        .collect();
    if ops.is_empty() || k == 0 {
        return None;
    }
    let trials: Vec<Vec<Q>> = {
        let r = ops.len();
        let mut t: Vec<Vec<Q>> = (0..r).map(|i| (0..r).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        for base in [2i64, 3, 5, 7] {
            t.push((0..r).map(|j| q(base.pow(j as u32))).collect());
        }
        t
    };
    for coeffs in trials {
        let mut t = Matrix::zeros(k, k);
        for (c, op) in coeffs.iter().zip(&ops) {
            t = t.add(&op.scale(c));
        }
        let p = char_poly(&t);
        if !p.is_squarefree() {
            continue;
        }
        let Some(factors) = factor_squarefree(&p) else { continue };
        if factors.len() > 16 {
            return None;
        }
        let pieces: Vec<Subspace> = factors.iter().map(|f| f.eval_matrix(&t).kernel()).collect();
        let mut out = Vec::new();
        for mask in 0u32..(1u32 << pieces.len()) {
            let mut sub = Subspace::zero(k);
            for (i, p) in pieces.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sub = sub.sum(p);
                }
            }
            if ops.iter().all(|o| sub.is_invariant(o)) {
                let vs: Vec<Vector> = sub.basis().iter().map(|c| frame.vector(c)).collect();
                out.push(Subspace::span(n, &vs));
            }
        }
        canonical_sort(&mut out);
        return Some(out);
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankBounds {
    pub lower: usize,
    pub lower_witness: Subspace,
    pub upper: Option<usize>,
    /// `dimension`, `lagrangian`, `envelope` or `envelope+ideals`.
    pub upper_certificate: String,
    pub envelope: Option<EnvelopeCertificate>,
}

impl RankBounds {
    pub fn is_exact(&self) -> bool {
        self.upper == Some(self.lower)
    }
}

fn max_isotropic_in(s: &SymplecticLieAlgebra, m: &Subspace) -> usize {
    let b = m.basis();
    let r = Matrix::from_fn(b.len(), b.len(), |i, j| s.omega(&b[i], &b[j]));
    m.dim() - r.rank() / 2
}

pub fn symplectic_rank_bounds(s: &SymplecticLieAlgebra, budget: usize) -> RankBounds {
    let n = s.dim();
    let cands = isotropic_ideal_candidates(s, budget);
    let (lower, lower_witness) = match cands.first() {
        Some(j) => (j.dim(), j.clone()),
        None => (0, Subspace::zero(n)),
    };
    let mut upper = n / 2;
    let mut cert_name = String::from(if lower == n / 2 { "lagrangian" } else { "dimension" });
    let mut envelope = None;
    if lower < n / 2 {
        let g = s.algebra();
        for m in envelope_candidates(g) {
            let Some(cert) = escape_certificate(g, &m, None) else { continue };
            if verify_no_abelian_escape(g, &cert) != Ok(true) {
                continue;
            }
            let mut bound = max_isotropic_in(s, &m);
            let mut name = "envelope";
            if m.dim() <= 8 {
                if let Some(ideals) = ideals_inside_abelian(g, &m) {
                    bound = ideals.iter().filter(|j| s.is_isotropic(j)).map(Subspace::dim).max().unwrap_or(0);
                    name = "envelope+ideals";
                }
            }
            if bound < upper {
                upper = bound;
                cert_name = String::from(name);
                envelope = Some(cert);
            }
        }
    }
    RankBounds { lower, lower_witness, upper: Some(upper), upper_certificate: cert_name, envelope }
}

/// A Lagrangian subspace of `sbar`, invariant under `ops` and an ideal of `sbar`, for
/// `sbar` abelian or two-step nilpotent; `None` when no case applies.
pub fn invariant_lagrangian_ideal(sbar: &SymplecticLieAlgebra, ops: &[Matrix]) -> Option<Subspace> {
    let g = sbar.algebra();
    let n = sbar.dim();
    let ops: Vec<Matrix> = ops.iter().filter(|o| !o.is_zero()).cloned().collect();
    let good = |l: &Subspace| sbar.is_lagrangian(l) && is_ideal(g, l) && ops.iter().all(|o| l.is_invariant(o));
    let cand = if g.is_abelian() {
        invariant_lagrangian_abelian(sbar, &ops)
    } else if series(g, SeriesKind::Descending).term(2).is_zero() {
        let c = series(g, SeriesKind::Descending).term(1).clone();
        if sbar.is_lagrangian(&c) && ops.iter().all(|o| c.is_invariant(o)) {
            Some(c)
        } else {
            let perp = sbar.perp(&c);
            if !ops.iter().all(|o| perp.is_invariant(o) && c.is_invariant(o)) {
                return None;
            }
            let step = reduce(sbar, &c).ok()?;
            let induced: Vec<Matrix> = ops.iter().map(|o| induced_operator(&step, o)).collect();
            let lbar = invariant_lagrangian_abelian(&step.reduced, &induced)?;
            transfer_isotropic(&step, &lbar, Transfer::Lift).ok()
        }
    } else {
        None
    };
    let _ = n;
    cand.filter(good)
}

fn invariant_lagrangian_abelian(s: &SymplecticLieAlgebra, ops: &[Matrix]) -> Option<Subspace> {
    let n = s.dim();
    let ops: Vec<Matrix> = ops.iter().filter(|o| !o.is_zero()).cloned().collect();
    let mut image = Subspace::zero(n);
    for o in &ops {
        image = image.sum(&o.column_space());
    }
    let l = if s.is_isotropic(&image) {
        Some(extend_to_maximal_isotropic(s.form(), &image))
    } else {
        let space = SymplecticVectorSpace::nondegenerate(s.form()).ok()?;
        let distinct = {
            let mut d: Vec<Matrix> = Vec::new();
            for o in &ops {
                if !d.iter().any(|x| Subspace::span(n * n, &[x.data().to_vec()]).contains(o.data())) {
                    d.push(o.clone());
                }
            }
            d
        };
        if distinct.len() == 1 && nilpotency_index(&distinct[0]).is_some() && beta_matrix(s.form(), &distinct[0]).is_zero() {
            invariant_lagrangian_nilpotent(&space, &distinct[0]).ok()
        } else if n <= 4
            && distinct.iter().all(|o| o.mul(o).is_zero())
            && (distinct.len() == 1 || (is_quadratic_abelian(&distinct) && images_isotropic(&space, &distinct)))
        {
            invariant_lagrangian_low_dim(&space, &distinct).ok().flatten()
        } else {
            None
        }
    };
    l.filter(|l| s.is_lagrangian(l) && ops.iter().all(|o| l.is_invariant(o)))
}

/// `W`-coordinate matrix of the operator induced on `j^perp / j` by an operator of the parent.
fn induced_operator(step: &ReductionStep, op: &Matrix) -> Matrix {
    let m = step.reduced.dim();
    let cols: Vec<Vector> = step
        .w_basis()
        .iter()
        .map(|w| step.project_vec(&op.mul_vec(w)).unwrap_or_else(|| zero_vec(m)))
        .collect();
    Matrix::from_cols(m, &cols).expect("square")
}

/// Operators induced by `ad(n)`, `n in N`, on the reduction by a central isotropic ideal.
pub fn outer_operators(step: &ReductionStep) -> Vec<Matrix> {
    let g = step.parent.algebra();
    step.decomposition.n_basis.iter().map(|nb| induced_operator(step, &g.ad(nb))).collect()
}

fn lift_through_central(s: &SymplecticLieAlgebra, j: &Subspace) -> Option<Subspace> {
    let step = reduce(s, j).ok()?;
    let ops = outer_operators(&step);
    let lbar = invariant_lagrangian_ideal(&step.reduced, &ops)?;
    let l = transfer_isotropic(&step, &lbar, Transfer::Lift).ok()?;
    (s.is_lagrangian(&l) && is_ideal(s.algebra(), &l)).then_some(l)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LagrangianIdealResult {
    Found { ideal: Subspace, route: &'static str, unique: bool },
    CertifiedNone { certificate: String, rank_upper: usize },
    Unresolved { rank_lower: usize, rank_upper: Option<usize> },
}

impl LagrangianIdealResult {
    pub fn status(&self) -> &'static str {
        match self {
            LagrangianIdealResult::Found { .. } => "found",
            LagrangianIdealResult::CertifiedNone { .. } => "certified_none",
            LagrangianIdealResult::Unresolved { .. } => "unresolved",
        }
    }
}

/// Sign of `det S` for a two-generator quadratic abelian algebra on a six-dimensional space
/// of the shape `U + XU + YU`, with `S_ij = omega(X u_i, Y u_j)` on a basis of
/// `U = (im X + im Y)^perp`.
pub fn q6_shape_matrix(space: &SymplecticVectorSpace, x: &Matrix, y: &Matrix) -> Option<Matrix> {
    if space.dim() != 6 || !is_quadratic_abelian(&[x.clone(), y.clone()]) {
        return None;
    }
    let im = x.column_space().sum(&y.column_space());
    if im.dim() != 4 {
        return None;
    }
    let u = space.perp(&im);
    if u.dim() != 2 {
        return None;
    }
    let mut ub = u.basis().to_vec();
    let c = space.pair(&ub[0], &ub[1]);
    if c.is_zero() {
        return None;
    }
    ub[1] = ub[1].iter().map(|x| x / &c).collect();
    let v: Vec<Vector> = ub.iter().map(|b| x.mul_vec(b)).collect();
    let w: Vec<Vector> = ub.iter().map(|b| y.mul_vec(b)).collect();
    let vs = Subspace::span(6, &v);
    let ws = Subspace::span(6, &w);
    if vs.dim() != 2 || ws.dim() != 2 || vs.sum(&ws) != im || !space.is_isotropic(&vs) || !space.is_isotropic(&ws) {
        return None;
    }
    Some(Matrix::from_fn(2, 2, |i, j| space.pair(&v[i], &w[j])))
}

/// Corroborates a missing Lagrangian ideal of a class-three algebra by reducing along
/// `C^2 g` to a six-dimensional abelian algebra carrying a `q6`-shaped operator pair.
fn det_s_corroboration(s: &SymplecticLieAlgebra) -> bool {
    let g = s.algebra();
    let desc = series(g, SeriesKind::Descending);
    if desc.class != Some(3) {
        return false;
    }
    let Ok(step) = reduce(s, desc.term(2)) else { return false };
    if !step.reduced.algebra().is_abelian() {
        return false;
    }
    let ops: Vec<Matrix> = outer_operators(&step).into_iter().filter(|o| !o.is_zero()).collect();
    if ops.len() != 2 {
        return false;
    }
    let Ok(space) = SymplecticVectorSpace::nondegenerate(step.reduced.form()) else { return false };
    let Some(sm) = q6_shape_matrix(&space, &ops[0], &ops[1]) else { return false };
    matches!(q6_analyze(&sm), Ok(a) if matches!(a.invariant_lagrangian, Q6Lagrangian::CertifiedNone { .. }))
}

/// Constructive routes in order: two-step nilpotent, filiform, one-dimensional central
/// reduction to an abelian algebra, three-step of dimension at most eight, search; then a
/// rank certificate, or unresolved. Every returned ideal is re-verified.
pub fn lagrangian_ideal(s: &SymplecticLieAlgebra, budget: usize) -> LagrangianIdealResult {
    let g = s.algebra();
    let n = s.dim();
    let verify = |l: &Subspace| s.is_lagrangian(l) && is_ideal(g, l);
    let desc = series(g, SeriesKind::Descending);
    let class = desc.class;
    let nilpotent = desc.terms.last().is_some_and(Subspace::is_zero);
    if nilpotent && class.is_some_and(|c| c <= 2) {
        let l = extend_to_maximal_isotropic(s.form(), desc.term(1));
        if verify(&l) {
            return LagrangianIdealResult::Found { ideal: l, route: "two_step", unique: false };
        }
    }
    if nilpotent && n >= 4 && n % 2 == 0 && class == Some(n - 1) {
        let l = desc.term(n / 2 - 1).clone();
        if verify(&l) {
            return LagrangianIdealResult::Found { ideal: l, route: "filiform", unique: true };
        }
    }
    if nilpotent {
        for z in center(g).basis() {
            let h = Subspace::span(n, core::slice::from_ref(z));
            let Ok(step) = reduce(s, &h) else { continue };
            if !step.reduced.algebra().is_abelian() {
                continue;
            }
            if let Some(l) = lift_through_central(s, &h) {
                return LagrangianIdealResult::Found { ideal: l, route: "one_dim_central", unique: false };
            }
        }
        if class == Some(3) && n <= 8 {
            if let Some(l) = lift_through_central(s, desc.term(2)) {
                return LagrangianIdealResult::Found { ideal: l, route: "three_step", unique: false };
            }
        }
    }
    let rb = symplectic_rank_bounds(s, budget);
    if rb.lower == n / 2 && verify(&rb.lower_witness) {
        return LagrangianIdealResult::Found { ideal: rb.lower_witness, route: "search", unique: false };
    }
    match rb.upper {
        Some(u) if 2 * u < n => {
            let mut certificate = rb.upper_certificate.clone();
            if det_s_corroboration(s) {
                certificate.push_str("+detS");
            }
            LagrangianIdealResult::CertifiedNone { certificate, rank_upper: u }
        }
        _ => LagrangianIdealResult::Unresolved { rank_lower: rb.lower, rank_upper: rb.upper },
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LagrangianSubalgebraResult {
    Found { subalgebra: Subspace, route: &'static str },
    Unresolved,
}

/// Greedy abelian Lagrangian `L` with `j <= L <= {v in j^perp : [v, j] = 0}`.
pub fn abelian_lagrangian_over(s: &SymplecticLieAlgebra, j: &Subspace) -> Option<Subspace> {
    let g = s.algebra();
    let k = centralizer(g, j).intersection(&s.perp(j));
    let mut l = j.clone();
    for v in k.basis() {
        if l.contains(v) {
            continue;
        }
        let cand = l.with_vectors(core::slice::from_ref(v));
        if s.is_isotropic(&cand) && is_abelian_subspace(g, &cand) {
            l = cand;
        }
    }
    (s.is_lagrangian(&l) && is_abelian_subspace(g, &l)).then_some(l)
}

/// Greedy Lagrangian subalgebra `L` with `j <= L <= j^perp`, adding basis vectors of
/// `j^perp` while isotropy and closure under brackets hold.
pub fn lagrangian_subalgebra_over(s: &SymplecticLieAlgebra, j: &Subspace) -> Option<Subspace> {
    let g = s.algebra();
    let mut l = j.clone();
    for v in s.perp(j).basis() {
        if l.contains(v) {
            continue;
        }
        let cand = l.with_vectors(core::slice::from_ref(v));
        if s.is_isotropic(&cand) && is_subalgebra(g, &cand) {
            l = cand;
        }
    }
    (s.is_lagrangian(&l) && is_subalgebra(g, &l)).then_some(l)
}

/// Lagrangian subalgebra of `h + a` with `a = [g, g]` abelian of dimension four split into
/// two invariant planes `<e1, e2>`, `<e3, e4>` on which `h = a^perp` acts by rotations:
/// `<H, X, Y>` with `H = f5 + b f6`, `X = e1 + t e3`, `Y = [H, X]`. Needs `|w12 / w34|` to be
/// a rational square.
pub fn irreducible6_lagrangian_subalgebra(s: &SymplecticLieAlgebra) -> Option<Subspace> {
    let g = s.algebra();
    if g.dim() != 6 {
        return None;
    }
    let a = Subspace::coordinate(6, &[0, 1, 2, 3]);
    if series(g, SeriesKind::Descending).term(1) != &a || !is_abelian_subspace(g, &a) {
        return None;
    }
    let h = s.perp(&a);
    if h.dim() != 2 || !h.intersection(&a).is_zero() {
        return None;
    }
    let e = |i| unit_vec(6, i);
    // lifts of e5, e6 into h
    let frame = Frame::new(6, {
        let mut v = h.basis().to_vec();
        v.extend(a.basis().iter().cloned());
        v
    })
    .ok()?;
    let lift = |i: usize| {
        let c = frame.coords(&e(i)).expect("frame");
        combine(6, &c[..2], h.basis())
    };
    let (f5, f6) = (lift(4), lift(5));
    let w12 = s.omega(&e(0), &e(1));
    let w34 = s.omega(&e(2), &e(3));
    if w12.is_zero() || w34.is_zero() {
        return None;
    }
    let ratio = &w12 / &w34;
    let b = if ratio.is_positive() { -Q::one() } else { Q::one() };
    let t = rational_sqrt(&ratio.abs())?;
    let hh: Vector = f5.iter().zip(&f6).map(|(x, y)| x + &b * y).collect();
    let mut x = e(0);
    x[2] = t;
    let y = g.bracket(&hh, &x);
    let l = Subspace::span(6, &[hh, x, y]);
    (l.dim() == 3 && s.is_lagrangian(&l) && is_subalgebra(g, &l)).then_some(l)
}

/// Routes in order: abelian Lagrangian over a maximal isotropic ideal, any subalgebra over
/// it, lift through a complete reduction sequence, the six-dimensional irreducible
/// construction.
pub fn lagrangian_subalgebra(s: &SymplecticLieAlgebra, budget: usize) -> LagrangianSubalgebraResult {
    let g = s.algebra();
    let verify = |l: &Subspace| s.is_lagrangian(l) && is_subalgebra(g, l);
    if s.dim() == 0 {
        return LagrangianSubalgebraResult::Found { subalgebra: Subspace::zero(0), route: "trivial" };
    }
    if let Some(j) = isotropic_ideal_candidates(s, budget).first() {
        if let Some(l) = abelian_lagrangian_over(s, j) {
            if verify(&l) {
                return LagrangianSubalgebraResult::Found { subalgebra: l, route: "abelian_over_ideal" };
            }
        }
        if let Some(l) = lagrangian_subalgebra_over(s, j) {
            return LagrangianSubalgebraResult::Found { subalgebra: l, route: "over_ideal" };
        }
    }
    if let Ok(base) = irreducible_base(s, Strategy::CentralFirst, budget) {
        if base.status == BaseStatus::Irreducible {
            let bl = if base.base.dim() == 0 {
                Some(Subspace::zero(0))
            } else {
                irreducible6_lagrangian_subalgebra(&base.base)
            };
            if let Some(mut l) = bl {
                let mut ok = true;
                for step in base.sequence.steps.iter().rev() {
                    match transfer_isotropic(step, &l, Transfer::Lift) {
                        Ok(x) => l = x,
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && verify(&l) {
                    return LagrangianSubalgebraResult::Found { subalgebra: l, route: "reduction_lift" };
                }
            }
        }
    }
    if let Some(l) = irreducible6_lagrangian_subalgebra(s) {
        return LagrangianSubalgebraResult::Found { subalgebra: l, route: "irreducible6" };
    }
    LagrangianSubalgebraResult::Unresolved
}

/// Dimension relations for a Lagrangian subalgebra `l` of `h + a`, `a = [g, g]`, `h = a^perp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub m: usize,
    pub k: usize,
    pub dim_l: usize,
    pub dim_b: usize,
    pub dim_i: usize,
    pub dim_h_cap_l: usize,
    pub relations: [bool; 5],
    /// For `m = 2k`: `l = i + b` with `i`, `b` Lagrangian in `h`, `a` and `[i, b] <= b`.
    pub split: Option<bool>,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.relations.iter().all(|&r| r) && self.split != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationError {
    NotProductForm,
    NotLagrangianSubalgebra,
}

pub fn lagrangian_relations_check(s: &SymplecticLieAlgebra, l: &Subspace) -> Result<RelationReport, RelationError> {
    let g = s.algebra();
    let n = s.dim();
    let a = series(g, SeriesKind::Descending).term(1).clone();
    let h = s.perp(&a);
    if !is_abelian_subspace(g, &a) || !h.intersection(&a).is_zero() || h.dim() + a.dim() != n || a.dim() % 2 != 0 || h.dim() % 2 != 0 {
        return Err(RelationError::NotProductForm);
    }
    if !s.is_lagrangian(l) || !is_subalgebra(g, l) {
        return Err(RelationError::NotLagrangianSubalgebra);
    }
    let (m, k) = (a.dim() / 2, h.dim() / 2);
    let b = l.intersection(&a);
    // projection to h along a
    let frame = Frame::new(n, {
        let mut v = h.basis().to_vec();
        v.extend(a.basis().iter().cloned());
        v
    })
    .expect("h + a = g");
    let proj: Vec<Vector> = l
        .basis()
        .iter()
        .map(|v| {
            let c = frame.coords(v).expect("frame");
            combine(n, &c[..h.dim()], h.basis())
        })
        .collect();
    let i = Subspace::span(n, &proj);
    let hl = h.intersection(l);
    let (dl, db, di, dhl) = (l.dim(), b.dim(), i.dim(), hl.dim());
    let relations = [
        dl == m + k,
        m >= db && db >= 2 * k,
        2 * m >= db + 2 * di && di + db == m + k,
        k >= dhl && dhl + m >= k + db,
        2 * k >= dhl + di,
    ];
    let split = (m == 2 * k).then(|| {
        s.is_lagrangian(&i.sum(&b))
            && i.sum(&b) == *l
            && i.dim() == k
            && b.dim() == m
            && b.contains_space(&bracket_span(g, &i, &b))
    });
    Ok(RelationReport { m, k, dim_l: dl, dim_b: db, dim_i: di, dim_h_cap_l: dhl, relations, split })
}

/// Replay of the non-existence argument for `g_{1, lambda_1, lambda_2, lambda_3}`: the
/// relations force `dim b in {2, 3}`, excluded by conditions i) and ii) on the characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleNoLagCertificate {
    pub allowed_dim_b: Vec<usize>,
    /// No permutation of `(0, 1, -1)` lies in the image of the character map.
    pub condition_i: bool,
    /// `lambda_i != +-lambda_j` for `i != j`.
    pub condition_ii: bool,
}

impl IrreducibleNoLagCertificate {
    pub fn holds(&self) -> bool {
        self.condition_i && self.condition_ii
    }
}

/// `lambda` is `3 x 2`: row `i` holds the values of `lambda_i` on a basis of `h`.
pub fn irreducible_no_lagrangian_certificate(lambda: &Matrix) -> Option<IrreducibleNoLagCertificate> {
    if lambda.rows() != 3 || lambda.cols() != 2 {
        return None;
    }
    let (m, k) = (3usize, 1usize);
    let allowed: Vec<usize> = (2 * k..=m).filter(|&db| db + 2 * (m + k - db) <= 2 * m).collect();
    let image = lambda.column_space();
    let mut condition_i = true;
    for p in [[0i64, 1, -1], [0, -1, 1], [1, 0, -1], [-1, 0, 1], [1, -1, 0], [-1, 1, 0]] {
        if image.contains(&p.iter().map(|&x| q(x)).collect::<Vec<_>>()) {
            condition_i = false;
        }
    }
    let rows: Vec<Vector> = (0..3).map(|i| lambda.row(i).to_vec()).collect();
    let neg = |v: &Vector| -> Vector { v.iter().map(|x| -x).collect() };
    let condition_ii = (0..3).all(|i| (i + 1..3).all(|j| rows[i] != rows[j] && rows[i] != neg(&rows[j])));
    Some(IrreducibleNoLagCertificate { allowed_dim_b: allowed, condition_i, condition_ii })
}

/// Textual summary of a rank certificate.
pub fn describe_bounds(rb: &RankBounds) -> String {
    match rb.upper {
        Some(u) => format!("{} <= rank <= {} ({})", rb.lower, u, rb.upper_certificate),
        None => format!("{} <= rank", rb.lower),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metab4() -> SymplecticLieAlgebra {
        // [H,X] = -Y, [H,Y] = X, [H,Z] = -Z on X, Y, Z, H
        let g = LieAlgebra::from_int_brackets(4, &[(0, 3, &[(1, 1)]), (1, 3, &[(0, -1)]), (2, 3, &[(2, 1)])]).unwrap();
        let w = SymplecticLieAlgebra::form_from_entries(4, &[(0, 1, q(1)), (2, 3, -q(1))]);
        SymplecticLieAlgebra::new(&g, &w).unwrap()
    }

    #[test]
    fn metabelian_rank_one() {
        let s = metab4();
        let rb = symplectic_rank_bounds(&s, 1000);
        assert_eq!((rb.lower, rb.upper), (1, Some(1)));
        assert_eq!(rb.lower_witness, Subspace::coordinate(4, &[2]));
        assert!(matches!(lagrangian_ideal(&s, 1000), LagrangianIdealResult::CertifiedNone { .. }));
    }

    #[test]
    fn abelian_all_coordinate_isotropic() {
        let g = LieAlgebra::abelian(4);
        let w = SymplecticLieAlgebra::form_from_entries(4, &[(0, 1, q(1)), (2, 3, q(1))]);
        let s = SymplecticLieAlgebra::new(&g, &w).unwrap();
        let found = isotropic_ideals_enumerate(&s, EnumMode::BasisAligned, 1000);
        // four lines and the planes <e1,e3>, <e1,e4>, <e2,e3>, <e2,e4>
        assert_eq!(found.len(), 8);
        let m = Subspace::full(4);
        let cert = escape_certificate(&g, &m, None).unwrap();
        assert_eq!(verify_no_abelian_escape(&g, &cert), Ok(true));
    }

    #[test]
    fn randomized_is_deterministic() {
        let s = metab4();
        let a = isotropic_ideals_enumerate(&s, EnumMode::Randomized { seed: 7 }, 50);
        let b = isotropic_ideals_enumerate(&s, EnumMode::Randomized { seed: 7 }, 50);
        assert_eq!(a, b);
    }
}

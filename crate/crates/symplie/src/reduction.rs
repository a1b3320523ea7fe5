//! Symplectic reduction `(g, omega) -> (j^perp / j, omegabar)` by isotropic ideals,
//! normal-reduction data, lifting and projection of isotropic subalgebras, and
//! reduction sequences.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::exactla::{combine, greedy_unit_complement, unit_vec, Frame, LinAlgError, Matrix, Subspace, Vector, Q};
use crate::liealg::{
    bracket_span, center, cohomology_space, is_derivation, is_ideal, series, Cochain, Connection, LieAlgebra,
    LieError, Representation, SeriesKind,
};
use crate::search;
use crate::symplectic::{isotropic_decomposition, IsotropicDecomposition, SymplecticError, SymplecticLieAlgebra};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionError {
    NotIsotropic,
    NotIdeal,
    /// `[j^perp, j] != 0`
    NotNormal,
    NotCentral,
    NotSubalgebra,
    DimensionMismatch { expected: usize, found: usize },
    /// Condition (*) or nesting fails for the ideal at this index.
    SequenceCondition { index: usize },
    /// A structural identity that must hold failed; names the identity.
    Identity(&'static str),
    Symplectic(SymplecticError),
    Lie(LieError),
}

impl fmt::Display for ReductionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionError::NotIsotropic => write!(f, "subspace is not isotropic"),
            ReductionError::NotIdeal => write!(f, "subspace is not an ideal"),
            ReductionError::NotNormal => write!(f, "ideal is not normal: [j^perp, j] != 0"),
            ReductionError::NotCentral => write!(f, "ideal is not central"),
            ReductionError::NotSubalgebra => write!(f, "subspace is not a subalgebra"),
            ReductionError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            ReductionError::SequenceCondition { index } => {
                write!(f, "ideal {index} is not an ideal of the previous orthogonal or not nested")
            }
            ReductionError::Identity(s) => write!(f, "identity violated: {s}"),
            ReductionError::Symplectic(e) => write!(f, "{e}"),
            ReductionError::Lie(e) => write!(f, "{e}"),
        }
    }
}

impl From<SymplecticError> for ReductionError {
    fn from(e: SymplecticError) -> Self {
        ReductionError::Symplectic(e)
    }
}

impl From<LieError> for ReductionError {
    fn from(e: LieError) -> Self {
        ReductionError::Lie(e)
    }
}

impl From<LinAlgError> for ReductionError {
    fn from(e: LinAlgError) -> Self {
        ReductionError::Lie(LieError::LinAlg(e))
    }
}

/// Most specific kind first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReductionKind {
    Lagrangian,
    Central,
    CodimOneNormal,
    Normal,
    Plain,
}

impl ReductionKind {
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Lagrangian => "lagrangian",
            ReductionKind::Central => "central",
            ReductionKind::CodimOneNormal => "codim1normal",
            ReductionKind::Normal => "normal",
            ReductionKind::Plain => "plain",
        }
    }

    pub fn is_normal(self) -> bool {
        self != ReductionKind::Plain
    }
}

pub fn is_normal_ideal(g: &LieAlgebra, s: &SymplecticLieAlgebra, j: &Subspace) -> bool {
    bracket_span(g, &s.perp(j), j).is_zero()
}

pub fn classify(s: &SymplecticLieAlgebra, j: &Subspace) -> ReductionKind {
    let g = s.algebra();
    let perp = s.perp(j);
    if perp == *j {
        ReductionKind::Lagrangian
    } else if center(g).contains_space(j) {
        ReductionKind::Central
    } else if !bracket_span(g, &perp, j).is_zero() {
        ReductionKind::Plain
    } else if j.dim() == 1 {
        ReductionKind::CodimOneNormal
    } else {
        ReductionKind::Normal
    }
}

/// One reduction step. The reduced algebra lives on the basis of `W` from the
/// isotropic decomposition `g = N + W + j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub parent: SymplecticLieAlgebra,
    pub ideal: Subspace,
    pub kind: ReductionKind,
    pub decomposition: IsotropicDecomposition,
    pub reduced: SymplecticLieAlgebra,
    /// Frame `W + j` of `j^perp`.
    frame: Frame,
}

impl ReductionStep {
    pub fn w_basis(&self) -> &[Vector] {
        self.decomposition.w.basis()
    }

    /// `W`-coordinates of the class of `v in j^perp`.
    pub fn project_vec(&self, v: &[Q]) -> Option<Vector> {
        let m = self.reduced.dim();
        self.frame.coords(v).map(|c| c[..m].to_vec())
    }

    /// The representative in `W` of reduced coordinates.
    pub fn section(&self, coords: &[Q]) -> Vector {
        combine(self.parent.dim(), coords, self.w_basis())
    }
}

pub fn reduce(s: &SymplecticLieAlgebra, j: &Subspace) -> Result<ReductionStep, ReductionError> {
    let g = s.algebra();
    if j.ambient() != s.dim() {
        return Err(ReductionError::DimensionMismatch { expected: s.dim(), found: j.ambient() });
    }
    if !s.is_isotropic(j) {
        return Err(ReductionError::NotIsotropic);
    }
    if !is_ideal(g, j) {
        return Err(ReductionError::NotIdeal);
    }
    let decomposition = isotropic_decomposition(s, j)?;
    let wb = decomposition.w.basis().to_vec();
    let m = wb.len();
    let mut fv = wb.clone();
    fv.extend(decomposition.j_basis.iter().cloned());
    let frame = Frame::new(s.dim(), fv)?;
    let mut bs = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let c = frame
                .coords(&g.bracket(&wb[a], &wb[b]))
                .ok_or(ReductionError::Identity("j^perp is a subalgebra"))?;
            bs.push((a, b, c[..m].to_vec()));
        }
    }
    let gbar = LieAlgebra::from_brackets(m, &bs)?;
    let reduced = SymplecticLieAlgebra::new(&gbar, &s.gram(&wb))?;
    Ok(ReductionStep {
        parent: s.clone(),
        ideal: j.clone(),
        kind: classify(s, j),
        decomposition,
        reduced,
        frame,
    })
}

/// `h = g / j^perp` with its induced flat connection and the pairing `omega_h(c_a, j_b) = omega(c_a, j_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientFlat {
    pub h: LieAlgebra,
    pub nabla: Connection,
    pub pairing: Matrix,
    /// Representatives in `g` of the basis of `h`.
    pub complement: Vec<Vector>,
    pub j_basis: Vec<Vector>,
}

/// Quotient flat structure for a normal ideal, using unit vectors as a complement of `j^perp`.
pub fn quotient_flat_structure(s: &SymplecticLieAlgebra, j: &Subspace) -> Result<QuotientFlat, ReductionError> {
    let n = s.dim();
    let perp = s.perp(j);
    let complement: Vec<Vector> = greedy_unit_complement(&perp).into_iter().map(|i| unit_vec(n, i)).collect();
    flat_structure_with(s, j, complement, j.basis().to_vec())
}

fn flat_structure_with(
    s: &SymplecticLieAlgebra,
    j: &Subspace,
    complement: Vec<Vector>,
    j_basis: Vec<Vector>,
) -> Result<QuotientFlat, ReductionError> {
    let g = s.algebra();
    if !is_ideal(g, j) {
        return Err(ReductionError::NotIdeal);
    }
    let perp = s.perp(j);
    if !bracket_span(g, &perp, j).is_zero() {
        return Err(ReductionError::NotNormal);
    }
    let h = g.quotient(&perp, &complement)?;
    let k = complement.len();
    let pairing = s.gram_between(&complement, &j_basis);
    let pt_inv = pairing.transpose().inverse().map_err(|_| ReductionError::Identity("omega_h non-degenerate"))?;
    let nabla = Connection::from_fn(k, |a, b| {
        let rhs: Vector = j_basis
            .iter()
            .map(|jm| -s.omega(&complement[b], &g.bracket(&complement[a], jm)))
            .collect();
        pt_inv.mul_vec(&rhs)
    });
    // one-cocycle property of omega_h for the coadjoint action on j*
    for a in 0..k {
        for b in a + 1..k {
            let (u, v) = (&complement[a], &complement[b]);
            for jm in &j_basis {
                let x = -s.omega(v, &g.bracket(u, jm)) + s.omega(u, &g.bracket(v, jm)) - s.omega(&g.bracket(u, v), jm);
                if !x.is_zero() {
                    return Err(ReductionError::Identity("omega_h is a one-cocycle"));
                }
            }
        }
    }
    if !nabla.is_torsion_free(&h) || !nabla.is_flat(&h) {
        return Err(ReductionError::Identity("induced connection is flat and torsion-free"));
    }
    Ok(QuotientFlat { h, nabla, pairing, complement, j_basis })
}

/// Data of a normal reduction read off the frame `N + W + j`; `h` is identified with
/// `N` and `omega(n_l, j_m) = delta_lm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalReductionData {
    pub flat: QuotientFlat,
    /// `phi_{n_l}` on `gbar`, one per `n_l`.
    pub phi: Vec<Matrix>,
    /// `j`-valued two-cocycle on `gbar`.
    pub alpha: Cochain,
    /// `lambda_{n_l}`, `j`-valued one-cochains on `gbar`.
    pub lambda: Vec<Cochain>,
    /// `gbar`-valued two-form on `h`.
    pub mu: Cochain,
    pub central: bool,
}

pub fn normal_reduction_data(step: &ReductionStep) -> Result<NormalReductionData, ReductionError> {
    let s = &step.parent;
    let g = s.algebra();
    let dec = &step.decomposition;
    if !step.kind.is_normal() {
        return Err(ReductionError::NotNormal);
    }
    let k = dec.n_basis.len();
    let m = step.reduced.dim();
    let flat = flat_structure_with(s, &dec.j, dec.n_basis.clone(), dec.j_basis.clone())?;
    let full = Frame::new(s.dim(), dec.full_basis())?;
    let coords = |v: &Vector| full.coords(v).expect("frame of g");
    let wb = step.w_basis();
    let split = |c: &Vector| (c[..k].to_vec(), c[k..k + m].to_vec(), c[k + m..].to_vec());

    let mut phi = Vec::with_capacity(k);
    let mut lambda = Vec::with_capacity(k);
    for nl in &dec.n_basis {
        let mut p = Matrix::zeros(m, m);
        let mut lam = Vec::with_capacity(m * k);
        for (a, wa) in wb.iter().enumerate() {
            let (cn, cw, cj) = split(&coords(&g.bracket(nl, wa)));
            if cn.iter().any(|x| !x.is_zero()) {
                return Err(ReductionError::Identity("[N, W] lies in j^perp"));
            }
            p.set_col(a, &cw);
            lam.extend(cj);
        }
        if !is_derivation(step.reduced.algebra(), &p)? {
            return Err(ReductionError::Identity("phi_n is a derivation"));
        }
        phi.push(p);
        lambda.push(Cochain::from_vector(1, m, k, lam)?);
    }
    let alpha = Cochain::from_fn(2, m, k, |c| split(&coords(&g.bracket(&wb[c[0]], &wb[c[1]]))).2);
    let mu = Cochain::from_fn(2, k, m, |c| split(&coords(&g.bracket(&dec.n_basis[c[0]], &dec.n_basis[c[1]]))).1);

    let wbar = step.reduced.form();
    let om = |u: &[Q], v: &[Q]| wbar.bilinear(u, v);
    let e = |a: usize| unit_vec(m, a);
    // first identity: omega(alpha(u, v), n) = -(omegabar(phi_n u, v) + omegabar(u, phi_n v))
    for (l, p) in phi.iter().enumerate() {
        for a in 0..m {
            for b in a + 1..m {
                let lhs = -alpha.at_sorted(&[a, b])[l].clone();
                let rhs = -(om(&p.col(a), &e(b)) + om(&e(a), &p.col(b)));
                if lhs != rhs {
                    return Err(ReductionError::Identity("omega_h(alpha(u,v), n) = -omegabar_phi_n(u,v)"));
                }
            }
        }
    }
    // second identity: omegabar(mu(n, n'), u) = omega(lambda_n(u), n') + omega(n, lambda_n'(u))
    for l in 0..k {
        for p in l + 1..k {
            let mv = mu.at_sorted(&[l, p]).to_vec();
            for a in 0..m {
                let lhs = om(&mv, &e(a));
                let rhs = -lambda[l].at_sorted(&[a])[p].clone() + lambda[p].at_sorted(&[a])[l].clone();
                if lhs != rhs {
                    return Err(ReductionError::Identity("omegabar(mu(n,n'), u) relation"));
                }
            }
        }
    }
    let central = step.kind == ReductionKind::Central || center(g).contains_space(&dec.j);
    if central {
        if !flat.h.is_abelian() || flat.nabla.matrices().iter().any(|x| !x.is_zero()) {
            return Err(ReductionError::Identity("central reduction has abelian h and zero connection"));
        }
        let gb = step.reduced.algebra();
        for (l, pl) in phi.iter().enumerate() {
            for (p, pp) in phi.iter().enumerate() {
                for a in 0..m {
                    for b in a + 1..m {
                        let br = gb.bracket_basis(a, b);
                        let lhs = -lambda[p].eval1(&br)[l].clone();
                        let pq = pl.mul(pp);
                        let rhs = -(om(&pq.col(a), &e(b))
                            + om(&pp.col(a), &pl.col(b))
                            + om(&pl.col(a), &pp.col(b))
                            + om(&e(a), &pq.col(b)));
                        if lhs != rhs {
                            return Err(ReductionError::Identity("central relation for lambda on brackets"));
                        }
                    }
                }
            }
        }
        if gb.is_abelian() {
            for (l, pl) in phi.iter().enumerate() {
                for pp in &phi[l..] {
                    if !pl.commutator(pp).is_zero() {
                        return Err(ReductionError::Identity("phi_N is abelian"));
                    }
                    let pq = pl.mul(pp);
                    for a in 0..m {
                        for b in 0..m {
                            let x = om(&pq.col(a), &e(b))
                                + om(&pl.col(a), &pp.col(b))
                                + om(&pp.col(a), &pl.col(b))
                                + om(&e(a), &pq.col(b));
                            if !x.is_zero() {
                                return Err(ReductionError::Identity("quadratic relation on phi_N"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(NormalReductionData { flat, phi, alpha, lambda, mu, central })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transfer {
    Lift,
    Project,
}

/// Lift: preimage in `j^perp` of a subspace of the reduced algebra (in `W`-coordinates).
/// Project: `(a cap j^perp + j) / j` in `W`-coordinates.
pub fn transfer_isotropic(step: &ReductionStep, sub: &Subspace, direction: Transfer) -> Result<Subspace, ReductionError> {
    match direction {
        Transfer::Lift => {
            let red = &step.reduced;
            if sub.ambient() != red.dim() {
                return Err(ReductionError::DimensionMismatch { expected: red.dim(), found: sub.ambient() });
            }
            if !red.is_isotropic(sub) {
                return Err(ReductionError::NotIsotropic);
            }
            if !is_subalgebra(red.algebra(), sub) {
                return Err(ReductionError::NotSubalgebra);
            }
            let lifted: Vec<Vector> = sub.basis().iter().map(|c| step.section(c)).collect();
            Ok(step.ideal.with_vectors(&lifted))
        }
        Transfer::Project => {
            let s = &step.parent;
            if sub.ambient() != s.dim() {
                return Err(ReductionError::DimensionMismatch { expected: s.dim(), found: sub.ambient() });
            }
            if !s.is_isotropic(sub) {
                return Err(ReductionError::NotIsotropic);
            }
            if !is_subalgebra(s.algebra(), sub) {
                return Err(ReductionError::NotSubalgebra);
            }
            let cut = sub.intersection(&step.decomposition.j_perp);
            let vs: Vec<Vector> =
                cut.basis().iter().map(|v| step.project_vec(v).expect("inside j^perp")).collect();
            Ok(Subspace::span(step.reduced.dim(), &vs))
        }
    }
}

/// Whether the lift of an isotropic ideal of the reduced algebra is an ideal of the parent,
/// decided by `phi_n`-invariance for each `n in N`.
pub fn lift_is_ideal(step: &ReductionStep, data: &NormalReductionData, sub: &Subspace) -> bool {
    data.phi.iter().all(|p| sub.is_invariant(p)) && is_ideal(step.reduced.algebra(), sub)
}

fn is_subalgebra(g: &LieAlgebra, s: &Subspace) -> bool {
    s.contains_space(&bracket_span(g, s, s))
}

/// `(dim perp - dim a) / 2` for isotropic `a`.
pub fn corank_of(s: &SymplecticLieAlgebra, a: &Subspace) -> usize {
    (s.perp(a).dim() - a.dim()) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionSequence {
    pub steps: Vec<ReductionStep>,
    /// `j_1 in j_2 in ...` in the coordinates of the original algebra.
    pub nested_ideals: Vec<Subspace>,
    /// Basis of each level `j_i^perp / j_i` as vectors of the original algebra (level 0 is the unit basis).
    pub embeddings: Vec<Vec<Vector>>,
}

impl ReductionSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn final_algebra<'a>(&'a self, start: &'a SymplecticLieAlgebra) -> &'a SymplecticLieAlgebra {
        self.steps.last().map(|st| &st.reduced).unwrap_or(start)
    }
}

fn level_coords(embedding: &[Vector], ideal: &Subspace, v: &[Q], ambient: usize) -> Option<Vector> {
    let mut fv = embedding.to_vec();
    fv.extend(ideal.basis().iter().cloned());
    let f = Frame::new(ambient, fv).ok()?;
    f.coords(v).map(|c| c[..embedding.len()].to_vec())
}

/// Reduces along nested isotropic subalgebras `j_1 in j_2 in ...` of the original algebra.
pub fn run_reduction_sequence(s: &SymplecticLieAlgebra, ideals: &[Subspace]) -> Result<ReductionSequence, ReductionError> {
    let n = s.dim();
    let g = s.algebra();
    let mut seq = ReductionSequence {
        steps: Vec::new(),
        nested_ideals: Vec::new(),
        embeddings: vec![(0..n).map(|i| unit_vec(n, i)).collect()],
    };
    let mut prev = Subspace::zero(n);
    let mut prev_perp = Subspace::full(n);
    let mut cur = s.clone();
    for (index, j) in ideals.iter().enumerate() {
        if j.ambient() != n
            || !j.contains_space(&prev)
            || !prev_perp.contains_space(j)
            || !s.is_isotropic(j)
            || !j.contains_space(&bracket_span(g, &prev_perp, j))
        {
            return Err(ReductionError::SequenceCondition { index });
        }
        let emb = seq.embeddings.last().expect("level").clone();
        let proj: Vec<Vector> = j
            .basis()
            .iter()
            .map(|v| level_coords(&emb, &prev, v, n).ok_or(ReductionError::SequenceCondition { index }))
            .collect::<Result<_, _>>()?;
        let jbar = Subspace::span(cur.dim(), &proj);
        let step = reduce(&cur, &jbar)?;
        let next_emb: Vec<Vector> = step.w_basis().iter().map(|c| combine(n, c, &emb)).collect();
        prev_perp = s.perp(j);
        prev = j.clone();
        cur = step.reduced.clone();
        seq.steps.push(step);
        seq.nested_ideals.push(j.clone());
        seq.embeddings.push(next_emb);
    }
    Ok(seq)
}

/// The sequence `i, i + j_1 cap i^perp, ..., i + j_l cap i^perp` induced by an isotropic ideal `i`.
pub fn induced_reduction_sequence(s: &SymplecticLieAlgebra, ideals: &[Subspace], i: &Subspace) -> Vec<Subspace> {
    let ip = s.perp(i);
    let mut out = vec![i.clone()];
    out.extend(ideals.iter().map(|j| i.sum(&j.intersection(&ip))));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Strategy {
    CentralFirst,
    AnyIsotropic,
    GreedyMax,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::CentralFirst, Strategy::AnyIsotropic, Strategy::GreedyMax];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::CentralFirst => "central",
            Strategy::AnyIsotropic => "any",
            Strategy::GreedyMax => "greedy",
        }
    }

    pub fn parse(s: &str) -> Option<Strategy> {
        match s {
            "central" | "central-first" => Some(Strategy::CentralFirst),
            "any" | "any-isotropic" => Some(Strategy::AnyIsotropic),
            "greedy" | "greedy-max" => Some(Strategy::GreedyMax),
            _ => None,
        }
    }

    /// Picks from candidates sorted in canonical order (largest dimension first).
    fn pick<'a>(self, g: &LieAlgebra, cands: &'a [Subspace]) -> Option<&'a Subspace> {
        match self {
            Strategy::CentralFirst => {
                let z = center(g);
                cands.iter().find(|c| z.contains_space(c)).or_else(|| cands.first())
            }
            Strategy::AnyIsotropic => cands.last(),
            Strategy::GreedyMax => cands.first(),
        }
    }
}

/// Isomorphism invariants compared across strategies in place of isomorphism testing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub dim: usize,
    pub lower_central: Vec<usize>,
    pub derived: Vec<usize>,
    pub rank_lower: usize,
    pub rank_upper: Option<usize>,
    pub b1: usize,
    pub b2: usize,
}

pub fn fingerprint(s: &SymplecticLieAlgebra, budget: usize) -> Fingerprint {
    let g = s.algebra();
    let rep = Representation::trivial(g, 1);
    let h = |d| cohomology_space(&rep, d).map(|c| c.h_dim).unwrap_or(0);
    let rb = search::symplectic_rank_bounds(s, budget);
    Fingerprint {
        dim: g.dim(),
        lower_central: series(g, SeriesKind::Descending).dims(),
        derived: series(g, SeriesKind::Derived).dims(),
        rank_lower: rb.lower,
        rank_upper: rb.upper,
        b1: if g.dim() == 0 { 0 } else { h(1) },
        b2: if g.dim() < 2 { 0 } else { h(2) },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseStatus {
    /// Trivial, or certified to have symplectic rank zero.
    Irreducible,
    /// The search found no candidate but could not certify rank zero.
    Unresolved,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleBase {
    pub status: BaseStatus,
    pub base: SymplecticLieAlgebra,
    pub sequence: ReductionSequence,
    pub fingerprint: Fingerprint,
    pub certificate: String,
}

/// Repeatedly reduces by a candidate isotropic ideal chosen by `strategy` until the
/// trivial algebra or a certified irreducible one is reached.
pub fn irreducible_base(s: &SymplecticLieAlgebra, strategy: Strategy, budget: usize) -> Result<IrreducibleBase, ReductionError> {
    let n = s.dim();
    let mut ideals: Vec<Subspace> = Vec::new();
    let mut cur = s.clone();
    let mut emb: Vec<Vector> = (0..n).map(|i| unit_vec(n, i)).collect();
    let mut prev = Subspace::zero(n);
    loop {
        if cur.dim() == 0 {
            let sequence = run_reduction_sequence(s, &ideals)?;
            return Ok(IrreducibleBase {
                status: BaseStatus::Irreducible,
                fingerprint: fingerprint(&cur, budget),
                base: cur,
                sequence,
                certificate: String::from("trivial"),
            });
        }
        let cands = search::isotropic_ideal_candidates(&cur, budget);
        let Some(jbar) = strategy.pick(cur.algebra(), &cands) else {
            let rb = search::symplectic_rank_bounds(&cur, budget);
            let (status, certificate) = if rb.upper == Some(0) {
                (BaseStatus::Irreducible, rb.upper_certificate.clone())
            } else {
                (BaseStatus::Unresolved, String::from("none"))
            };
            let sequence = run_reduction_sequence(s, &ideals)?;
            return Ok(IrreducibleBase { status, fingerprint: fingerprint(&cur, budget), base: cur, sequence, certificate });
        };
        let step = reduce(&cur, jbar)?;
        let lifted: Vec<Vector> = jbar.basis().iter().map(|c| combine(n, c, &emb)).collect();
        let j = prev.with_vectors(&lifted);
        emb = step.w_basis().iter().map(|c| combine(n, c, &emb)).collect();
        ideals.push(j.clone());
        prev = j;
        cur = step.reduced;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthBound {
    /// Shortest complete sequence to the trivial algebra among those explored.
    pub upper: Option<usize>,
    /// `upper` is the symplectic length.
    pub exact: bool,
    pub completely_reducible: bool,
}

/// Breadth-first search over reductions by candidate isotropic ideals.
pub fn symplectic_length_upper(s: &SymplecticLieAlgebra, budget: usize) -> LengthBound {
    if s.dim() == 0 {
        return LengthBound { upper: Some(0), exact: true, completely_reducible: true };
    }
    let mut frontier = vec![s.clone()];
    let mut explored = 0usize;
    let mut depth = 0usize;
    while !frontier.is_empty() && explored < budget {
        depth += 1;
        let mut next = Vec::new();
        for a in &frontier {
            for j in search::isotropic_ideal_candidates(a, budget) {
                explored += 1;
                let Ok(step) = reduce(a, &j) else { continue };
                if step.reduced.dim() == 0 {
                    let exact = depth == 1
                        || (depth == 2 && search::symplectic_rank_bounds(s, budget).upper.is_some_and(|u| 2 * u < s.dim()));
                    return LengthBound { upper: Some(depth), exact, completely_reducible: true };
                }
                if !next.contains(&step.reduced) {
                    next.push(step.reduced);
                }
                if explored >= budget {
                    break;
                }
            }
        }
        frontier = next;
    }
    LengthBound { upper: None, exact: false, completely_reducible: false }
}

pub fn is_completely_reducible(s: &SymplecticLieAlgebra, budget: usize) -> bool {
    symplectic_length_upper(s, budget).completely_reducible
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    fn h3r() -> SymplecticLieAlgebra {
        let g = LieAlgebra::from_int_brackets(4, &[(0, 1, &[(2, 1)])]).unwrap();
        let w = SymplecticLieAlgebra::form_from_entries(4, &[(0, 3, q(1)), (1, 2, q(1))]);
        SymplecticLieAlgebra::new(&g, &w).unwrap()
    }

    #[test]
    fn central_line_reduction() {
        let s = h3r();
        let j = Subspace::coordinate(4, &[2]);
        let st = reduce(&s, &j).unwrap();
        assert_eq!(st.kind, ReductionKind::Central);
        assert_eq!(st.reduced.dim(), 2);
        assert!(st.reduced.algebra().is_abelian());
        let d = normal_reduction_data(&st).unwrap();
        assert!(d.central);
        assert_eq!(d.phi.len(), 1);
    }

    #[test]
    fn zero_ideal_reduces_to_itself() {
        let s = h3r();
        let st = reduce(&s, &Subspace::zero(4)).unwrap();
        assert_eq!(st.reduced, s);
        let lifted = transfer_isotropic(&st, &Subspace::zero(4), Transfer::Lift).unwrap();
        assert!(lifted.is_zero());
    }

    #[test]
    fn sequence_condition_reports_index() {
        let s = h3r();
        // e1 is not an ideal
        let bad = Subspace::coordinate(4, &[0]);
        assert_eq!(
            run_reduction_sequence(&s, &[Subspace::coordinate(4, &[2]), bad]),
            Err(ReductionError::SequenceCondition { index: 1 })
        );
    }
}

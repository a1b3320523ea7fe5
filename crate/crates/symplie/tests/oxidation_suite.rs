mod common;

use common::*;
use proptest::prelude::*;
use symplie::catalog::build;
use symplie::exactla::{q, Matrix, Q};
use symplie::liealg::{coboundary_matrix, derivation_algebra, validate_jacobi, Cochain, Representation};
use symplie::oxidation::*;
use symplie::symplectic::SymplecticLieAlgebra;

/// Symplectic bases of dimension at most six.
fn bases() -> Vec<SymplecticLieAlgebra> {
    let mut v = Vec::new();
    for m in 1..=3 {
        v.push(SymplecticLieAlgebra::new(&symplie::liealg::LieAlgebra::abelian(2 * m), &standard_form(m)).unwrap());
    }
    for n in ["heis3r", "filiform4", "h3h3", "fdim_metab", "cs6", "irr6", "filiform6"] {
        v.push(build(n, &[]).unwrap().algebra);
    }
    v
}

/// `c1 D_k1 + c2 D_k2 + A` with `D_k` basis derivations and `A` a derivation preserving
/// `omegabar`, the sparse part keeping the obstruction class small.
fn derivation(base: &SymplecticLieAlgebra, sparse: &[(usize, i64)], spc: &[i64]) -> Matrix {
    let n = base.dim();
    let der = derivation_algebra(base.algebra());
    let w = base.form();
    // phi^T w + w phi = 0 as linear conditions on the row-major entries of phi
    let rows: Vec<Vec<Q>> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut r = vec![q(0); n * n];
            for k in 0..n {
                r[k * n + i] += w[(k, j)].clone();
                r[k * n + j] += w[(i, k)].clone();
            }
            r
        })
        .collect();
    let sp = Matrix::from_rows(n * n, &rows).unwrap().kernel();
    let spder = sp.intersection(&der);
    let mut v = vec![q(0); n * n];
    for &(k, c) in sparse {
        let b = &der.basis()[k % der.dim()];
        for (x, y) in v.iter_mut().zip(b) {
            *x += q(c) * y;
        }
    }
    for (i, b) in spder.basis().iter().enumerate() {
        let c = q(spc[i % spc.len()]);
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    Matrix::from_data(n, n, v)
}

fn closed_one_forms(base: &SymplecticLieAlgebra) -> Vec<Vec<Q>> {
    let rep = Representation::trivial(base.algebra(), 1);
    coboundary_matrix(&rep, 1).unwrap().kernel().basis().to_vec()
}

/// Admissible data `(gbar, omegabar, phi, lambda)` when the obstruction class vanishes.
fn admissible(idx: usize, sparse: &[(usize, i64)], spc: &[i64], lcoef: &[i64]) -> Option<OxidationData> {
    let pool = bases();
    let base = &pool[idx % pool.len()];
    let n = base.dim();
    let phi = derivation(base, sparse, spc);
    let ob = oxidation_obstruction(base, &phi).ok()?;
    let mut lambda = ob.lambda?.into_vector();
    for (c, z) in lcoef.iter().zip(closed_one_forms(base)) {
        for (l, x) in lambda.iter_mut().zip(&z) {
            *l += q(*c) * x;
        }
    }
    let alpha = symplie::liealg::form_derive_unchecked(&Cochain::from_skew_matrix(base.form()), &phi);
    Some(OxidationData {
        base: base.algebra().clone(),
        omega_bar: Some(base.form().clone()),
        phi,
        alpha,
        lambda: Cochain::from_vector(1, n, 1, lambda).unwrap(),
    })
}

type Case = (usize, Vec<(usize, i64)>, Vec<i64>, Vec<i64>);

fn case() -> impl Strategy<Value = Case> {
    (0usize..10, proptest::collection::vec((0usize..64, small()), 0..=2), vec_strategy(6), vec_strategy(4))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, max_global_rejects: 5_000, ..ProptestConfig::default() })]

    #[test]
    fn oxidation_round_trip((idx, sp, spc, lc) in case()) {
        let d = admissible(idx, &sp, &spc, &lc);
        prop_assume!(d.is_some());
        let d = d.unwrap();
        let s = symplectic_oxidation(&d).unwrap();
        let (xi, h) = oxidation_axes(s.dim());
        let r = recover_oxidation_data(&s, &h, &xi).unwrap();
        prop_assert_eq!(&r.data, &d);
        let units: Vec<Vec<Q>> = (0..s.dim()).map(|i| symplie::exactla::unit_vec(s.dim(), i)).collect();
        prop_assert_eq!(r.basis, units);
    }

    #[test]
    fn jacobi_iff_cobound_under_perturbation((idx, sp, spc, lc) in case(), pert in vec_strategy(6)) {
        let d = admissible(idx, &sp, &spc, &lc);
        prop_assume!(d.is_some());
        let mut d = d.unwrap();
        let n = d.base.dim();
        let mut lam = d.lambda.clone().into_vector();
        for (i, p) in pert.iter().enumerate().take(n) {
            lam[i] += q(*p);
        }
        d.lambda = Cochain::from_vector(1, n, 1, lam).unwrap();
        let jacobi = validate_jacobi(&oxidation_bracket(&d).unwrap()).is_empty();
        prop_assert_eq!(jacobi, cobound_witness(&d).is_none());
    }
}

#[test]
fn perturbations_exercise_both_directions() {
    let mut kept = 0;
    let mut broken = 0;
    for idx in 0..10 {
        let Some(d) = admissible(idx, &[(idx, 1)], &[1, 0, -1], &[1]) else { continue };
        for k in 0..d.base.dim() {
            let mut e = d.clone();
            let mut lam = e.lambda.clone().into_vector();
            lam[k] += q(1);
            e.lambda = Cochain::from_vector(1, d.base.dim(), 1, lam).unwrap();
            let jacobi = validate_jacobi(&oxidation_bracket(&e).unwrap()).is_empty();
            assert_eq!(jacobi, cobound_witness(&e).is_none());
            if jacobi {
                kept += 1;
            } else {
                broken += 1;
            }
        }
    }
    assert!(kept > 0 && broken > 0, "kept {kept}, broken {broken}");
}

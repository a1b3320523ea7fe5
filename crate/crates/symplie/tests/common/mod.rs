#![allow(dead_code)]

use proptest::prelude::*;
use symplie::exactla::{q, Matrix, Q};
use symplie::liealg::{Cochain, LieAlgebra};

pub fn standard_form(m: usize) -> Matrix {
    // e_i paired with e_{m+i}
    let mut w = Matrix::zeros(2 * m, 2 * m);
    for i in 0..m {
        w[(i, m + i)] = q(1);
        w[(m + i, i)] = q(-1);
    }
    w
}

pub fn small() -> impl Strategy<Value = i64> {
    -2i64..=2
}

pub fn matrix_from(rows: usize, cols: usize, v: &[i64]) -> Matrix {
    Matrix::from_fn(rows, cols, |i, j| q(v[i * cols + j]))
}

/// `[[I, S], [0, I]] [[I, 0], [T, I]]` with symmetric `S`, `T` built from `a`, `b`.
pub fn symplectic_matrix(m: usize, a: &[i64], b: &[i64]) -> Matrix {
    let sym = |v: &[i64]| Matrix::from_fn(m, m, |i, j| q(v[i.min(j) * m + i.max(j)]));
    let (s, t) = (sym(a), sym(b));
    let n = 2 * m;
    let up = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            q(1)
        } else if i < m && j >= m {
            s[(i, j - m)].clone()
        } else {
            q(0)
        }
    });
    let low = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            q(1)
        } else if i >= m && j < m {
            t[(i - m, j)].clone()
        } else {
            q(0)
        }
    });
    up.mul(&low)
}

/// Nilpotent endomorphism of the standard space with `omega_{phi, phi} = 0`: either
/// `[[A, S], [0, -A^T]]` (A strictly upper, S symmetric, so `phi` is infinitesimally
/// symplectic) or `[[0, B], [0, 0]]` (square zero with isotropic image), conjugated by a
/// symplectic matrix.
pub fn nilpotent_beta_zero(m: usize, family: bool, entries: &[i64], conj_a: &[i64], conj_b: &[i64]) -> Matrix {
    let n = 2 * m;
    let e = |i: usize, j: usize| q(entries[i * m + j]);
    let core = if family {
        Matrix::from_fn(n, n, |i, j| {
            if i < m && j < m {
                if i < j { e(i, j) } else { q(0) }
            } else if i < m && j >= m {
                let (a, b) = (i.min(j - m), i.max(j - m));
                e(b, a)
            } else if i >= m && j >= m {
                let (r, c) = (i - m, j - m);
                if c < r { -e(c, r) } else { q(0) }
            } else {
                q(0)
            }
        })
    } else {
        Matrix::from_fn(n, n, |i, j| if i < m && j >= m { e(i, j - m) } else { q(0) })
    };
    let p = symplectic_matrix(m, conj_a, conj_b);
    p.mul(&core).mul(&p.inverse().unwrap())
}

pub fn vec_strategy(len: usize) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(small(), len)
}

pub fn cochain_at(c: &Cochain, idx: &[usize]) -> Q {
    c.at_sorted(idx)[0].clone()
}

pub fn heisenberg() -> LieAlgebra {
    LieAlgebra::from_int_brackets(3, &[(0, 1, &[(2, 1)])]).unwrap()
}

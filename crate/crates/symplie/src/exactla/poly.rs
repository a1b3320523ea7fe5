//! Univariate polynomials over `Q`, enough to split operators with squarefree
//! characteristic polynomial into their rational primary components.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Matrix, Q};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn new(mut c: Vec<Q>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn one() -> Poly {
        Poly(vec![Q::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Q {
        self.0.last().cloned().unwrap_or_else(Q::zero)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let l = self.lead().recip();
        Poly(self.0.iter().map(|c| c * &l).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * Q::from_integer(BigInt::from(i))).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(Vec::new());
        }
        let mut c = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Quotient and remainder.
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.0.len() - 1;
        let mut r = self.0.clone();
        if r.len() < d.0.len() {
            return (Poly(Vec::new()), Poly::new(r));
        }
        let mut qv = vec![Q::zero(); r.len() - dd];
        let l = d.lead();
        for k in (0..qv.len()).rev() {
            let c = &r[k + dd] / &l;
            if !c.is_zero() {
                for (j, b) in d.0.iter().enumerate() {
                    r[k + j] -= &c * b;
                }
            }
            qv[k] = c;
        }
        r.truncate(dd);
        (Poly::new(qv), Poly::new(r))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// `p(M)` by Horner's scheme.
    pub fn eval_matrix(&self, m: &Matrix) -> Matrix {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.0.iter().rev() {
            acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Integer primitive multiple with positive leading coefficient.
    fn primitive(&self) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in &self.0 {
            l = l.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self.0.iter().map(|c| (c * Q::from_integer(l.clone())).to_integer()).collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = g.gcd(c);
        }
        if g.is_zero() {
            return ints;
        }
        if ints.last().is_some_and(Signed::is_negative) {
            g = -g;
        }
        for c in ints.iter_mut() {
            *c = &*c / &g;
        }
        ints
    }
}

/// Characteristic polynomial `det(t I - M)` by the Faddeev-LeVerrier recursion.
pub fn char_poly(m: &Matrix) -> Poly {
    let n = m.rows();
    let mut c = vec![Q::zero(); n + 1];
    c[n] = Q::one();
    let mut mk = Matrix::zeros(n, n);
    let id = Matrix::identity(n);
    for k in 1..=n {
        mk = m.mul(&mk).add(&id.scale(&c[n - k + 1]));
        let t = m.mul(&mk).trace();
        c[n - k] = -t / Q::from_integer(BigInt::from(k as i64));
    }
    Poly::new(c)
}

const DIVISOR_LIMIT: u64 = 1_000_000_000_000;
const KRONECKER_BUDGET: usize = 400_000;

fn positive_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > DIVISOR_LIMIT {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    Some(small)
}

/// Monic irreducible factors over `Q` of a squarefree polynomial, or `None` when
/// the search exceeds its budget.
pub fn factor_squarefree(p: &Poly) -> Option<Vec<Poly>> {
    let mut rest = p.monic();
    let mut out = Vec::new();
    // linear factors
    loop {
        match rest.degree() {
            None | Some(0) => return Some(out),
            _ => {}
        }
        if rest.0[0].is_zero() {
            out.push(Poly::new(vec![Q::zero(), Q::one()]));
            rest = rest.divmod(&out[out.len() - 1]).0;
            continue;
        }
        let ints = rest.primitive();
        let a0 = positive_divisors(&ints[0])?;
        let an = positive_divisors(ints.last().expect("nonempty"))?;
        let mut found = None;
        'search: for num in &a0 {
            for den in &an {
                for s in [1i64, -1] {
                    let r = Q::new(num * BigInt::from(s), den.clone());
                    if rest.eval(&r).is_zero() {
                        found = Some(r);
                        break 'search;
                    }
                }
            }
        }
        match found {
            Some(r) => {
                let f = Poly::new(vec![-r, Q::one()]);
                rest = rest.divmod(&f).0;
                out.push(f);
            }
            None => break,
        }
    }
    // no rational roots remain: split by Kronecker's method
    let mut stack = vec![rest];
    while let Some(f) = stack.pop() {
        let d = f.degree().expect("nonzero");
        if d <= 3 {
            out.push(f);
            continue;
        }
        match kronecker_split(&f)? {
            Some((g, h)) => {
                stack.push(g);
                stack.push(h);
            }
            None => out.push(f),
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| super::cmp_vec(&a.0, &b.0)));
    Some(out)
}

/// Looks for a factor of degree `2..=deg/2` with integer coefficients.
fn kronecker_split(f: &Poly) -> Option<Option<(Poly, Poly)>> {
    let ints = f.primitive();
    let fi = Poly::new(ints.iter().map(|c| Q::from_integer(c.clone())).collect());
    let d = fi.degree().expect("nonzero");
    let mut budget = KRONECKER_BUDGET;
    for e in 2..=d / 2 {
        // pick e + 1 evaluation points with few divisors
        let mut pts: Vec<(i64, Vec<BigInt>)> = Vec::new();
        for x in (0i64..25).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) }) {
            let val = fi.eval(&Q::from_integer(BigInt::from(x)));
            if val.is_zero() {
                continue;
            }
            let divs = positive_divisors(&val.to_integer())?;
            pts.push((x, divs));
        }
        pts.sort_by_key(|(_, d)| d.len());
        pts.truncate(e + 1);
        if pts.len() < e + 1 {
            return None;
        }
        let choices: Vec<Vec<BigInt>> = pts
            .iter()
            .map(|(_, ds)| ds.iter().flat_map(|x| [x.clone(), -x.clone()]).collect())
            .collect();
        let mut idx = vec![0usize; e + 1];
        loop {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            let xs: Vec<Q> = pts.iter().map(|(x, _)| Q::from_integer(BigInt::from(*x))).collect();
            let ys: Vec<Q> = idx.iter().zip(&choices).map(|(&i, c)| Q::from_integer(c[i].clone())).collect();
            let g = interpolate(&xs, &ys);
            if g.degree() == Some(e) && g.0.iter().all(|c| c.is_integer()) {
                let (qu, r) = fi.divmod(&g);
                if r.is_zero() {
                    return Some(Some((g.monic(), qu.monic())));
                }
            }
            let mut k = 0;
            loop {
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
                if k == idx.len() {
                    break;
                }
            }
            if k == idx.len() {
                break;
            }
        }
    }
    Some(None)
}

fn interpolate(xs: &[Q], ys: &[Q]) -> Poly {
    let mut acc = Poly(Vec::new());
    for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
        let mut basis = Poly::one();
        let mut denom = Q::one();
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                basis = basis.mul(&Poly::new(vec![-xj.clone(), Q::one()]));
                denom *= xi - xj;
            }
        }
        let scale = yi / denom;
        let term = Poly::new(basis.0.iter().map(|c| c * &scale).collect());
        let len = acc.0.len().max(term.0.len());
        let mut sum = vec![Q::zero(); len];
        for (k, c) in acc.0.iter().enumerate() {
            sum[k] += c;
        }
        for (k, c) in term.0.iter().enumerate() {
            sum[k] += c;
        }
        acc = Poly::new(sum);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| q(x)).collect())
    }

    #[test]
    fn char_poly_of_rotation() {
        let m = Matrix::from_i64(2, 2, &[0, 1, -1, 0]);
        assert_eq!(char_poly(&m), p(&[1, 0, 1]));
    }

    #[test]
    fn factors_product_of_quadratics() {
        // (t^2 + 1)(t^2 + 4)(t - 3)
        let f = p(&[1, 0, 1]).mul(&p(&[4, 0, 1])).mul(&p(&[-3, 1]));
        let fs = factor_squarefree(&f).unwrap();
        assert_eq!(fs, vec![p(&[-3, 1]), p(&[1, 0, 1]), p(&[4, 0, 1])]);
    }

    #[test]
    fn quartic_irreducible_stays_whole() {
        let f = p(&[-2, 0, 0, 0, 1]);
        assert_eq!(factor_squarefree(&f).unwrap(), vec![f]);
    }

    #[test]
    fn squarefree_detection() {
        assert!(p(&[1, 0, 1]).is_squarefree());
        assert!(!p(&[0, 0, 1]).is_squarefree());
    }
}

//! Resultants of integer polynomials.
//!
//! The sign convention is that of the Sylvester matrix with the coefficients
//! of the first argument in the top rows, so that
//! `Res(p, q) = lc(p)^deg q * prod q(alpha)` over the roots `alpha` of `p`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::Poly;

type IntPoly = Poly<BigInt>;

/// Resultant via the subresultant pseudo-remainder sequence.
pub fn resultant(p: &IntPoly, q: &IntPoly) -> BigInt {
    assert!(!p.is_zero() && !q.is_zero(), "resultant of the zero polynomial");
    let (mut a, mut b) = (p.clone(), q.clone());
    let (da, db) = (a.degree(), b.degree());
    if da == 0 {
        return num_traits::pow(a.lead(), db);
    }
    if db == 0 {
        return num_traits::pow(b.lead(), da);
    }
    let ca = a.content();
    let cb = b.content();
    a = a.map(|c| c / &ca);
    b = b.map(|c| c / &cb);
    let t = num_traits::pow(ca, db) * num_traits::pow(cb, da);
    let mut s = BigInt::one();
    if da < db {
        std::mem::swap(&mut a, &mut b);
        if da % 2 == 1 && db % 2 == 1 {
            s = -s;
        }
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let delta = a.degree() - b.degree();
        if a.degree() % 2 == 1 && b.degree() % 2 == 1 {
            s = -s;
        }
        let r = a.pseudo_rem(&b);
        if r.is_zero() {
            return BigInt::zero();
        }
        let divisor = &g * num_traits::pow(h.clone(), delta);
        a = b;
        b = r.map(|c| c / &divisor);
        g = a.lead();
        h = if delta == 0 { h } else { num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1) };
        if b.degree() == 0 {
            break;
        }
    }
    let da = a.degree();
    let hb = num_traits::pow(b.lead(), da) / num_traits::pow(h, da - 1);
    s * t * hb
}

/// Sylvester matrix with `p` in the top `deg q` rows.
pub fn sylvester_matrix(p: &IntPoly, q: &IntPoly) -> Vec<Vec<BigInt>> {
    let (m, n) = (p.degree(), q.degree());
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (poly, count) in [(p, n), (q, m)] {
        let d = poly.degree();
        for r in 0..count {
            let mut row = vec![BigInt::zero(); size];
            for k in 0..=d {
                row[r + k] = poly.coeff(d - k);
            }
            rows.push(row);
        }
    }
    rows
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant as the Sylvester determinant.
pub fn sylvester_resultant(p: &IntPoly, q: &IntPoly) -> BigInt {
    if p.degree() == 0 && q.degree() == 0 {
        return BigInt::one();
    }
    determinant(sylvester_matrix(p, q))
}

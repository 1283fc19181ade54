//! LLL reduction of integer coefficient vectors under a symmetric positive
//! definite Gram form.
//!
//! Generic over the [`Field`] used for the Gram-Schmidt data: exact
//! [`BigRational`](num_rational::BigRational) for certified work, `f64` for
//! quick screening.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::scalar::Field;

/// LLL state: integer basis rows and the Gram matrix of the ambient form.
struct Lll<'a, F: Field> {
    basis: Vec<Vec<BigInt>>,
    gram: &'a [Vec<F>],
    mu: Vec<Vec<F>>,
    norms: Vec<F>,
}

impl<'a, F: Field> Lll<'a, F> {
    fn inner(&self, u: &[BigInt], v: &[BigInt]) -> F {
        let mut acc = F::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let mut row = F::zero();
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    row = row + self.gram[i][j].clone() * F::from_integer(vj);
                }
            }
            acc = acc + F::from_integer(ui) * row;
        }
        acc
    }

    fn gso(&mut self) {
        let n = self.basis.len();
        self.mu = vec![vec![F::zero(); n]; n];
        self.norms = vec![F::zero(); n];
        for i in 0..n {
            for j in 0..i {
                let mut v = self.inner(&self.basis[i], &self.basis[j]);
                for k in 0..j {
                    v = v - self.mu[j][k].clone() * self.mu[i][k].clone() * self.norms[k].clone();
                }
                self.mu[i][j] = v / self.norms[j].clone();
            }
            let mut b = self.inner(&self.basis[i], &self.basis[i]);
            for k in 0..i {
                b = b - self.mu[i][k].clone() * self.mu[i][k].clone() * self.norms[k].clone();
            }
            self.norms[i] = b;
        }
    }

    fn size_reduce(&mut self, k: usize) {
        for j in (0..k).rev() {
            let r = self.mu[k][j].round_to_integer();
            if r.is_zero() {
                continue;
            }
            let bj = self.basis[j].clone();
            for (x, y) in self.basis[k].iter_mut().zip(&bj) {
                *x -= &r * y;
            }
            let rf = F::from_integer(&r);
            for l in 0..j {
                self.mu[k][l] = self.mu[k][l].clone() - rf.clone() * self.mu[j][l].clone();
            }
            self.mu[k][j] = self.mu[k][j].clone() - rf;
        }
    }

    fn run(mut self, delta: F) -> Vec<Vec<BigInt>> {
        let n = self.basis.len();
        if n <= 1 {
            return self.basis;
        }
        self.gso();
        let mut k = 1;
        while k < n {
            self.size_reduce(k);
            let m = self.mu[k][k - 1].clone();
            let lovasz = (delta.clone() - m.clone() * m) * self.norms[k - 1].clone();
            if self.norms[k] >= lovasz {
                k += 1;
            } else {
                self.basis.swap(k, k - 1);
                self.gso();
                k = if k > 1 { k - 1 } else { 1 };
            }
        }
        self.basis
    }
}

/// Reduces `basis` (rows of integer coordinates) under the form `gram`.
pub fn lll_with_gram<F: Field>(basis: Vec<Vec<BigInt>>, gram: &[Vec<F>], delta: F) -> Vec<Vec<BigInt>> {
    Lll { basis, gram, mu: Vec::new(), norms: Vec::new() }.run(delta)
}

/// Reduces the unit basis of `Z^n` under `gram`.
pub fn lll_gram<F: Field>(gram: &[Vec<F>], delta: F) -> Vec<Vec<BigInt>> {
    let n = gram.len();
    let basis = (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    lll_with_gram(basis, gram, delta)
}

/// Reduces integer lattice rows under the standard dot product.
pub fn lll_rows<F: Field>(rows: Vec<Vec<BigInt>>, delta: F) -> Vec<Vec<BigInt>> {
    let dim = rows.first().map_or(0, |r| r.len());
    let gram: Vec<Vec<F>> =
        (0..dim).map(|i| (0..dim).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    lll_with_gram(rows, &gram, delta)
}

/// Quadratic form value `v^T G v`.
pub fn form_value<F: Field>(gram: &[Vec<F>], v: &[BigInt]) -> F {
    Lll { basis: Vec::new(), gram, mu: Vec::new(), norms: Vec::new() }.inner(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn reduces_classic_example() {
        let rows = vec![ints(&[1, 1, 1]), ints(&[-1, 0, 2]), ints(&[3, 5, 6])];
        let red = lll_rows(rows, q(3, 4));
        assert_eq!(red[0], ints(&[0, 1, 0]));
        assert_eq!(red[1], ints(&[1, 0, 1]));
        let n2: i64 = red[2].iter().map(|x| i64::try_from(x * x).unwrap()).sum();
        assert_eq!(n2, 5);
    }

    #[test]
    fn float_and_exact_agree_on_small_lattice() {
        let rows = vec![ints(&[201, 37]), ints(&[1648, 297])];
        let a = lll_rows(rows.clone(), q(3, 4));
        let b = lll_rows(rows, 0.75f64);
        assert_eq!(a, b);
        let n: BigRational = a[0].iter().map(|x| BigRational::from_integer(x * x)).sum();
        assert!(n <= q(2 * 2, 1) * q(500, 1));
    }

    #[test]
    fn lovasz_condition_holds() {
        let gram = vec![vec![q(2, 1), q(1, 2)], vec![q(1, 2), q(4, 3)]];
        let red = lll_gram(&gram, q(3, 4));
        let n0 = form_value(&gram, &red[0]);
        let n1 = form_value(&gram, &red[1]);
        assert!(n0 <= n1 * q(2, 1));
    }
}

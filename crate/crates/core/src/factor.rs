//! Factorization over the integers: squarefree decomposition, Cantor-Zassenhaus
//! modulo a good prime, Hensel lifting and subset recombination.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::Poly;

type IntPoly = Poly<BigInt>;

/// `content * prod f_i^{m_i}` with primitive irreducible `f_i` of positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, usize)>,
}

impl Factorization {
    /// Multiplies the factorization back out.
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }

    /// True when the input was a single irreducible primitive polynomial.
    pub fn is_irreducible_primitive(&self) -> bool {
        self.content.abs().is_one() && self.factors.len() == 1 && self.factors[0].1 == 1
    }
}

/// Complete factorization over `Z`, with factors ordered by degree, then by
/// coefficients from the constant term up.
pub fn factor(p: &IntPoly) -> Factorization {
    assert!(!p.is_zero(), "factor of the zero polynomial");
    let mut content = p.content();
    if p.lead().is_negative() {
        content = -content;
    }
    let mut factors = Vec::new();
    for (s, m) in p.squarefree_decomposition() {
        for g in factor_squarefree(&s) {
            factors.push((g, m));
        }
    }
    factors.sort_by(|a, b| poly_order(&a.0, &b.0).then(a.1.cmp(&b.1)));
    Factorization { content, factors }
}

/// True when `p` is irreducible over `Z` with content 1.
pub fn is_irreducible(p: &IntPoly) -> bool {
    p.degree() >= 1 && factor(p).is_irreducible_primitive()
}

/// Deterministic polynomial order: degree, then coefficients from the top
/// down compared by absolute value, positive before negative.
pub fn poly_order(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
    let key = |c: &BigInt| (c.abs(), c.is_negative());
    a.degree().cmp(&b.degree()).then_with(|| a.coeffs().iter().rev().map(key).cmp(b.coeffs().iter().rev().map(key)))
}

/// Irreducible factors of a primitive squarefree polynomial with positive
/// leading coefficient.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let f = f.primitive_part();
    if f.degree() <= 1 {
        return vec![f];
    }
    if f.coeff(0).is_zero() {
        let rest = f.div_exact(&IntPoly::x()).expect("x divides");
        let mut out = vec![IntPoly::x()];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    let Some((p, modular)) = choose_prime(&f) else {
        return vec![f];
    };
    if modular.len() == 1 {
        return vec![f];
    }
    let bound = mignotte_bound(&f);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    while modulus <= &bound * 2 {
        modulus = &modulus * &modulus;
    }
    let lifted = hensel_lift_all(&f, &modular, p, &modulus);
    recombine(&f, lifted, &modulus)
}

/// Coefficient bound for factors of `f` scaled by `lc(f)`.
fn mignotte_bound(f: &IntPoly) -> BigInt {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    f.lead().abs() * (BigInt::one() << f.degree()) * norm
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Picks the prime (among the first few good ones) giving the fewest modular
/// factors. Returns the monic modular factors.
fn choose_prime(f: &IntPoly) -> Option<(u64, Vec<Vec<u64>>)> {
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    let mut cand = 101u64;
    while tried < 5 && cand < 100_000 {
        cand += 2;
        if !is_prime(cand) {
            continue;
        }
        let p = cand;
        let fp = zp::reduce(f, p);
        if fp.len() != f.degree() + 1 {
            continue;
        }
        let d = zp::derivative(&fp, p);
        if zp::gcd(&fp, &d, p).len() != 1 {
            continue;
        }
        tried += 1;
        let facs = zp::factor_monic(&zp::monic(&fp, p), p);
        if best.as_ref().is_none_or(|b| facs.len() < b.1.len()) {
            best = Some((p, facs));
        }
        if best.as_ref().is_some_and(|b| b.1.len() == 1) {
            break;
        }
    }
    best
}

fn sym_mod(a: &BigInt, m: &BigInt) -> BigInt {
    let r = a.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn reduce_mod(f: &IntPoly, m: &BigInt) -> IntPoly {
    f.map(|c| c.mod_floor(m))
}

/// Division by a monic polynomial over `Z/m`.
fn divrem_monic_mod(a: &IntPoly, b: &IntPoly, m: &BigInt) -> (IntPoly, IntPoly) {
    debug_assert!(b.lead().is_one());
    if a.degree() < b.degree() || a.is_zero() {
        return (IntPoly::zero(), reduce_mod(a, m));
    }
    let db = b.degree();
    let mut r: Vec<BigInt> = a.coeffs().iter().map(|c| c.mod_floor(m)).collect();
    let mut q = vec![BigInt::zero(); a.degree() - db + 1];
    for k in (0..q.len()).rev() {
        let top = r[k + db].clone();
        if top.is_zero() {
            continue;
        }
        for (j, bc) in b.coeffs().iter().enumerate() {
            r[k + j] = (&r[k + j] - &top * bc).mod_floor(m);
        }
        q[k] = top;
    }
    (Poly::new(q), Poly::new(r))
}

fn mul_mod(a: &IntPoly, b: &IntPoly, m: &BigInt) -> IntPoly {
    reduce_mod(&(a * b), m)
}

/// One quadratic Hensel step: from `f = g h (mod m)` to `(mod m^2)`, with `h`
/// monic and `s g + t h = 1 (mod m)`.
fn hensel_step(
    f: &IntPoly,
    g: &IntPoly,
    h: &IntPoly,
    s: &IntPoly,
    t: &IntPoly,
    m: &BigInt,
) -> (IntPoly, IntPoly, IntPoly, IntPoly) {
    let m2 = m * m;
    let e = reduce_mod(&(f - &(g * h)), &m2);
    let (q, r) = divrem_monic_mod(&mul_mod(s, &e, &m2), h, &m2);
    let g2 = reduce_mod(&(&(g + &(t * &e)) + &(&q * g)), &m2);
    let h2 = reduce_mod(&(h + &r), &m2);
    let b = reduce_mod(&(&(&(s * &g2) + &(t * &h2)) - &IntPoly::constant(BigInt::one())), &m2);
    let (c, d) = divrem_monic_mod(&mul_mod(s, &b, &m2), &h2, &m2);
    let s2 = reduce_mod(&(s - &d), &m2);
    let t2 = reduce_mod(&(&(t - &(t * &b)) - &(&c * &g2)), &m2);
    (g2, h2, s2, t2)
}

/// Lifts the monic modular factors of `f` to monic factors modulo `modulus`
/// (a power `p^(2^j)`), so that `f = lc(f) prod h_i (mod modulus)`.
fn hensel_lift_all(f: &IntPoly, modular: &[Vec<u64>], p: u64, modulus: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let pb = BigInt::from(p);
    for (i, h0) in modular.iter().enumerate() {
        if i + 1 == modular.len() {
            // remaining cofactor: make monic modulo `modulus`
            let inv = rest.lead().modinv(modulus).expect("lead coprime to p");
            out.push(rest.map(|c| (c * &inv).mod_floor(modulus)));
            break;
        }
        // g carries the leading coefficient of `rest`
        let others: Vec<u64> = modular[i + 1..].iter().fold(vec![1u64], |acc, x| zp::mul(&acc, x, p));
        let lc = rest.lead().mod_floor(&pb).to_u64().unwrap();
        let g0 = zp::scale(&others, lc, p);
        let (gcd, s0, t0) = zp::ext_gcd(&g0, h0, p);
        debug_assert_eq!(gcd, vec![1]);
        let lift = |v: &Vec<u64>| IntPoly::new(v.iter().map(|&c| BigInt::from(c)).collect());
        let (mut g, mut h, mut s, mut t) = (lift(&g0), lift(h0), lift(&s0), lift(&t0));
        let mut m = pb.clone();
        while m < *modulus {
            let (g2, h2, s2, t2) = hensel_step(&rest, &g, &h, &s, &t, &m);
            g = g2;
            h = h2;
            s = s2;
            t = t2;
            m = &m * &m;
        }
        out.push(h);
        // rest becomes the integer cofactor approximated by g; keep working
        // modulo `modulus` with its symmetric representative
        rest = g.map(|c| sym_mod(c, modulus));
    }
    out
}

/// Zassenhaus subset recombination.
fn recombine(f: &IntPoly, mut lifted: Vec<IntPoly>, modulus: &BigInt) -> Vec<IntPoly> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let lc = f.lead();
            let mut g = IntPoly::constant(lc.clone());
            for &i in &subset {
                g = mul_mod(&g, &lifted[i], modulus);
            }
            let g = g.map(|c| sym_mod(c, modulus)).primitive_part();
            if let Some(q) = f.div_exact(&g) {
                out.push(g);
                f = q.primitive_part();
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.degree() > 0 {
        out.push(f.primitive_part());
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Dense polynomials over `Z/p`, `p < 2^31`, coefficients low to high.
mod zp {
    use super::*;

    pub type P = Vec<u64>;

    pub fn trim(mut a: P) -> P {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn reduce(f: &IntPoly, p: u64) -> P {
        let pb = BigInt::from(p);
        trim(f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        r
    }

    pub fn scale(a: &P, c: u64, p: u64) -> P {
        trim(a.iter().map(|x| x * c % p).collect())
    }

    pub fn monic(a: &P, p: u64) -> P {
        let l = *a.last().expect("nonzero");
        scale(a, inv(l, p), p)
    }

    pub fn sub(a: &P, b: &P, p: u64) -> P {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + p - b.get(i).unwrap_or(&0)) % p).collect())
    }

    pub fn mul(a: &P, b: &P, p: u64) -> P {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(out)
    }

    pub fn divrem(a: &P, b: &P, p: u64) -> (P, P) {
        assert!(!b.is_empty(), "division by zero mod p");
        if a.len() < b.len() {
            return (Vec::new(), a.clone());
        }
        let db = b.len() - 1;
        let il = inv(b[db], p);
        let mut r = a.clone();
        let mut q = vec![0u64; a.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db] * il % p;
            if c == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * y % p) % p;
            }
            q[k] = c;
        }
        (trim(q), trim(r))
    }

    pub fn rem(a: &P, b: &P, p: u64) -> P {
        divrem(a, b, p).1
    }

    pub fn gcd(a: &P, b: &P, p: u64) -> P {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            monic(&a, p)
        }
    }

    /// `(g, s, t)` with `s a + t b = g` monic.
    pub fn ext_gcd(a: &P, b: &P, p: u64) -> (P, P, P) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            let t2 = sub(&t0, &mul(&q, &t1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        let l = inv(*r0.last().expect("nonzero gcd"), p);
        (scale(&r0, l, p), scale(&s0, l, p), scale(&t0, l, p))
    }

    pub fn derivative(a: &P, p: u64) -> P {
        trim(a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect())
    }

    pub fn powmod(base: &P, e: &BigUint, m: &P, p: u64) -> P {
        let mut result = vec![1u64];
        let b = rem(base, m, p);
        for i in (0..e.bits()).rev() {
            result = rem(&mul(&result, &result, p), m, p);
            if e.bit(i) {
                result = rem(&mul(&result, &b, p), m, p);
            }
        }
        result
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn ddf(f: &P, p: u64) -> Vec<(P, usize)> {
        let mut out = Vec::new();
        let mut f = f.clone();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let pe = BigUint::from(p);
        let mut i = 1;
        while f.len() > 2 * i {
            h = powmod(&h, &pe, &f, p);
            let g = gcd(&sub(&h, &x, p), &f, p);
            if g.len() > 1 {
                out.push((g.clone(), i));
                f = divrem(&f, &g, p).0;
                h = rem(&h, &f, p);
            }
            i += 1;
        }
        if f.len() > 1 {
            let d = f.len() - 1;
            out.push((f, d));
        }
        out
    }

    /// Equal-degree splitting (Cantor-Zassenhaus, odd `p`).
    fn edf(f: &P, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<P> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.clone()];
        }
        let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: P = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
            if a.len() < 2 {
                continue;
            }
            let b = sub(&powmod(&a, &e, f, p), &vec![1u64], p);
            let g = gcd(&b, f, p);
            if g.len() > 1 && g.len() < f.len() {
                let h = divrem(f, &g, p).0;
                let mut out = edf(&g, d, p, rng);
                out.extend(edf(&monic(&h, p), d, p, rng));
                return out;
            }
        }
    }

    /// Monic irreducible factors of a monic squarefree polynomial, sorted.
    pub fn factor_monic(f: &P, p: u64) -> Vec<P> {
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d69_7464 ^ p);
        let mut out = Vec::new();
        for (g, d) in ddf(f, p) {
            out.extend(edf(&g, d, p, &mut rng));
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPoly {
        Poly::parse(s).unwrap()
    }

    fn factors_of(s: &str) -> Vec<IntPoly> {
        factor(&p(s)).factors.into_iter().map(|(f, _)| f).collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(factors_of("x^2-x"), vec![p("x"), p("x-1")]);
        assert_eq!(factors_of("6x^2-5x+1"), vec![p("2x-1"), p("3x-1")]);
        assert_eq!(factors_of("3x^2-1"), vec![p("3x^2-1")]);
        assert!(is_irreducible(&p("3x^2-1")));
        assert!(!is_irreducible(&p("6x^2-2")));
    }

    #[test]
    fn content_and_multiplicity() {
        let f = p("-12x^3+12x^2-3x");
        let fa = factor(&f);
        assert_eq!(fa.content, BigInt::from(-3));
        assert_eq!(fa.factors, vec![(p("x"), 1), (p("2x-1"), 2)]);
        assert_eq!(fa.expand(), f);
    }

    #[test]
    fn swinnerton_dyer_like_recombination() {
        // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime
        assert!(is_irreducible(&p("x^4-10x^2+1")));
        let f = p("x^4-10x^2+1") * p("x^2-2") * p("3x+5");
        let fa = factor(&f);
        assert_eq!(fa.factors.len(), 3);
        assert_eq!(fa.expand(), f);
    }

    #[test]
    fn paper_polynomials_are_irreducible() {
        for s in [
            "7x^3+7x^2-1",
            "57x^6+81x^5+6x^4-32x^3-9x^2+3x+1",
            "x^8+172x^7-440x^6+377x^5-82x^4-47x^3+21x^2+x-1",
            "x^7+8760x^6-13342x^5+8388x^4-2784x^3+514x^2-50x+2",
        ] {
            assert!(is_irreducible(&p(s)), "{s}");
        }
    }

    #[test]
    fn product_of_many_linears() {
        let mut f = IntPoly::constant(BigInt::one());
        for k in 1..=7 {
            f = &f * &p(&format!("{k}x-{}", k + 1));
        }
        let fa = factor(&f);
        assert_eq!(fa.factors.len(), 7);
        assert_eq!(fa.expand(), f);
    }
}

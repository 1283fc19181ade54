use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use mitd::ball::Ball;
use mitd::bounds::{
    alpha_star, cover_max_gap, cover_min_gap, default_grid, ell_alpha, envelope, reflected_cover, CoverSystem,
};
use mitd::cheb::{
    certify_attainment, filter_factors, gram_matrix, optimize_weights_with, CriticalCheck, LpOptions, WeightedProduct,
};
use mitd::factor::factor;
use mitd::padic::{attainment_obstruction, critical_witness, product_of_poly, WitnessVerdict};
use mitd::resultant::resultant;
use mitd::robinson::{enumerate, enumerate_brute_force, SearchCell};
use mitd::roots::{count_roots_in, count_roots_with_multiplicity, eval_ball, isolate_roots, root_span, RatInterval};
use mitd::special::{delta_n, minimal_farey_interval, pell_solutions};
use mitd::{fixtures, ObstructionValue, Poly};

type IntPoly = Poly<BigInt>;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn p(s: &str) -> IntPoly {
    Poly::parse(s).unwrap()
}

fn small_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    (prop::collection::vec(-5i64..=5, 0..max_deg), prop::sample::select(vec![-3i64, -2, -1, 1, 2, 3])).prop_map(
        |(mut c, lead)| {
            c.push(lead);
            IntPoly::from_i64s(&c)
        },
    )
}

/// Products of `a x - b` with small `a > 0`.
fn split_poly(max_deg: usize) -> impl Strategy<Value = (IntPoly, Vec<(i64, i64)>)> {
    prop::collection::vec((1i64..=4, -6i64..=6), 1..=max_deg).prop_map(|roots| {
        let poly = roots.iter().fold(IntPoly::from_i64s(&[1]), |acc, (a, b)| &acc * &IntPoly::from_i64s(&[-b, *a]));
        (poly, roots)
    })
}

fn interval_strategy() -> impl Strategy<Value = RatInterval> {
    (-40i64..40, 1i64..40, 1i64..=16).prop_map(|(n, w, d)| RatInterval::new(rat(n, d), rat(n + w, d)).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resultant_antisymmetry(a in small_poly(4), b in small_poly(4)) {
        let sign = if a.degree() * b.degree() % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        prop_assert_eq!(resultant(&a, &b), sign * resultant(&b, &a));
    }

    #[test]
    fn resultant_product_formula(a in small_poly(4), (q, roots) in split_poly(4)) {
        // |Res(p, q)| = |lc q|^deg p * prod |p(b_j / a_j)|
        let lc = BigRational::from_integer(q.lead().abs());
        let mut rhs = num_traits::pow(lc, a.degree());
        for (x, y) in &roots {
            rhs *= a.eval_rational(&rat(*y, *x)).abs();
        }
        prop_assert_eq!(BigRational::from_integer(resultant(&a, &q).abs()), rhs);
    }

    #[test]
    fn factor_recombines(parts in prop::collection::vec(small_poly(3), 1..4)) {
        let prod = parts.iter().fold(IntPoly::from_i64s(&[1]), |acc, f| &acc * f);
        let f = factor(&prod);
        let back = f.factors.iter().fold(IntPoly::constant(f.content.clone()), |acc, (g, m)| &acc * &g.pow(*m as u32));
        prop_assert_eq!(back, prod);
    }

    #[test]
    fn eval_ball_contains_exact_value(a in small_poly(7), n in -50i64..50, d in 1i64..20) {
        let x = rat(n, d);
        let b = eval_ball(&a, &Ball::from_rational(&x, 64));
        prop_assert!(b.contains_rational(&a.eval_rational(&x)));
    }

    #[test]
    fn count_matches_isolation(a in small_poly(6), i in interval_strategy()) {
        let a = a.squarefree_part();
        let inside = isolate_roots(&a)
            .iter()
            .filter(|r| r.side_of(&i.lo) >= 0 && r.side_of(&i.hi) <= 0)
            .count();
        prop_assert_eq!(count_roots_in(&a, &i).unwrap(), inside);
    }

    #[test]
    fn root_span_nests(ks in prop::collection::vec(2i64..30, 1..3), shift in -3i64..3) {
        // product of x^2 - k translated by `shift`
        let q = ks.iter().fold(IntPoly::from_i64s(&[1]), |acc, k| &acc * &IntPoly::from_i64s(&[-k, 0, 1]));
        let q = q.translate(&BigInt::from(shift));
        let mut prev: Option<Ball> = None;
        for bits in [8, 16, 32, 64] {
            let s = root_span(&q, bits).unwrap();
            if let Some(p) = &prev {
                prop_assert!(s.lower() >= p.lower() && s.upper() <= p.upper());
            }
            prev = Some(s);
        }
    }

    #[test]
    fn minimal_farey_invariants(k in -5i64..5, d in 1i64..60, a in 0i64..60, w in 1i64..60) {
        prop_assume!(a + w <= d);
        let i = RatInterval::new(rat(k * d + a, d), rat(k * d + a + w, d)).unwrap();
        let f = minimal_farey_interval(&i).unwrap();
        prop_assert_eq!(&f.b2 * &f.c1 - &f.b1 * &f.c2, BigInt::one());
        prop_assert!(f.left() <= i.lo && i.hi <= f.right());
        prop_assert!(i.contains(&f.mediant()));
    }

    #[test]
    fn cover_gaps_translate(k in -5i64..5) {
        let half = rat(1, 2);
        let recs = fixtures::table1_48_records().unwrap();
        let cover = CoverSystem::from_records(&recs).unwrap();
        let moved = cover.translate(&BigInt::from(k));
        prop_assert_eq!(cover_max_gap(&cover, &half).unwrap().value, cover_max_gap(&moved, &half).unwrap().value);
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn gram_matrix_positive_definite(i in interval_strategy(), k in 1usize..6) {
        // exact LDL^T: every pivot is positive
        let mut m = gram_matrix(&i, k);
        let n = m.len();
        for r in 0..n {
            for c in 0..n {
                prop_assert_eq!(&m[r][c], &m[c][r]);
            }
        }
        for j in 0..n {
            let pivot = m[j][j].clone();
            prop_assert!(pivot.is_positive());
            for r in j + 1..n {
                let f = &m[r][j] / &pivot;
                for c in j..n {
                    let v = &f * &m[j][c];
                    m[r][c] -= v;
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn obstruction_order_matches_floats(a in 1u32..200, d in 1u32..9, b in 1u32..200, e in 1u32..9) {
        let x = ObstructionValue::new(BigInt::from(a), d).unwrap();
        let y = ObstructionValue::new(BigInt::from(b), e).unwrap();
        let (fx, fy) = ((a as f64).powf(-1.0 / d as f64), (b as f64).powf(-1.0 / e as f64));
        if (fx - fy).abs() > 1e-12 {
            prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
        }
        prop_assert_eq!(x.cmp(&y), y.cmp(&x).reverse());
        prop_assert_eq!(x == y, (a as u64).pow(e) == (b as u64).pow(d));
    }
}

#[test]
fn enumerate_matches_brute_force() {
    for d in 1..=2 {
        for a in 1..=5 {
            let i0 = RatInterval::from_ints(-1, 1, 1, 1);
            let cell = SearchCell::new(d, a, i0.clone()).unwrap();
            let found = enumerate(&cell);
            assert_eq!(found, enumerate_brute_force(&cell), "d={d} a={a}");
            for q in &found {
                assert_eq!(count_roots_with_multiplicity(q, &i0).unwrap(), q.degree());
                let sf = q.squarefree_part();
                assert_eq!(count_roots_in(&sf, &i0).unwrap(), sf.degree());
            }
        }
    }
}

#[test]
fn published_rows_have_all_roots_in_their_intervals() {
    let pad = rat(1, 1000);
    for row in fixtures::table1_48() {
        let i = RatInterval::new(&row.interval.lo - &pad, &row.interval.hi + &pad).unwrap();
        assert_eq!(count_roots_with_multiplicity(&row.poly, &i).unwrap(), row.poly.degree(), "{}", row.poly);
    }
    for row in fixtures::table3() {
        let r = mitd::roots::root_range(&row.poly, 32).unwrap();
        let i = RatInterval::new(&r.lo - &pad, &r.hi + &pad).unwrap();
        assert_eq!(count_roots_with_multiplicity(&row.poly, &i).unwrap(), row.poly.degree(), "{}", row.poly);
    }
}

#[test]
fn envelope_monotone_and_consistent() {
    let data = fixtures::shipped_envelope_data(20).unwrap();
    let values: Vec<ObstructionValue> = data.records.iter().map(|r| r.value.clone()).collect();
    let mut grid = default_grid(&values);
    grid.extend(["0.3", "0.45", "1.1", "1.25"].iter().map(|s| mitd::scalar::parse_rational(s).unwrap()));
    let pts = envelope(&grid, &data);
    for w in pts.windows(2) {
        for (a, b) in [(&w[0].lminus_hi, &w[1].lminus_hi), (&w[0].lplus_hi, &w[1].lplus_hi)] {
            if let (Some(a), Some(b)) = (a, b) {
                assert!(a <= b, "upper bounds must not decrease at t = {}", w[1].t);
            }
        }
    }
    for pt in &pts {
        if let (Some(a), Some(b)) = (&pt.lminus_hi, &pt.lplus_hi) {
            assert!(a <= b);
        }
        if let (Some(a), Some(b)) = (&pt.lminus_lo, &pt.lplus_lo) {
            assert!(a <= b);
        }
        for (lo, hi) in [(&pt.lminus_lo, &pt.lminus_hi), (&pt.lplus_lo, &pt.lplus_hi)] {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                assert!(lo <= hi, "empty enclosure at t = {}", pt.t);
            }
        }
    }
}

#[test]
fn ell_alpha_jumps_across_alpha_star() {
    let a = alpha_star();
    let step = rat(1, 1000);
    let below = ell_alpha(&(a.lower_rational() - &step)).unwrap();
    let above = ell_alpha(&(a.upper_rational() + &step)).unwrap();
    let five = rat(5, 1);
    assert!(below.upper_rational() * below.upper_rational() <= five);
    assert!(above.lower_rational() * above.lower_rational() >= five);
}

#[test]
fn cover_min_gap_translates() {
    let products = fixtures::table2_certified().unwrap();
    let cover = reflected_cover(&products).unwrap();
    let half = rat(1, 2);
    let m = cover_min_gap(&cover, &half).unwrap().value;
    for k in [-2, 1, 3] {
        assert_eq!(cover_min_gap(&cover.translate(&BigInt::from(k)), &half).unwrap().value, m);
    }
}

fn perturbed(prod: &WeightedProduct, i: usize) -> WeightedProduct {
    let bump = rat(1, 1000);
    let total = BigRational::one() + &bump;
    let factors = prod
        .factors()
        .iter()
        .enumerate()
        .map(|(j, (f, a))| (f.clone(), if j == i { (a + &bump) / &total } else { a / &total }))
        .collect();
    WeightedProduct::new(factors).unwrap()
}

#[test]
fn perturbed_weights_break_certificates() {
    let unit = RatInterval::from_ints(0, 1, 1, 1);
    let base = WeightedProduct::new(vec![(p("x"), rat(1, 2)), (p("x-1"), rat(1, 2))]).unwrap();
    let mut cases = vec![(base, unit, p("2x-1"))];
    for f in fixtures::table5().unwrap().into_iter().chain(fixtures::table2().unwrap().into_iter().take(3)) {
        cases.push((f.product, f.interval, f.obstruction));
    }
    for (prod, i, q) in cases {
        let m = ObstructionValue::of_poly(&q).unwrap();
        let c = certify_attainment(&prod, &i, &q).unwrap();
        assert_eq!(c.sup_value, m);
        // with Q's root at an endpoint, F = log m there for any weights
        if c.certificate.critical == CriticalCheck::EndpointRoot {
            continue;
        }
        for k in 0..prod.factors().len() {
            if prod.factors()[k].1.is_zero() {
                continue;
            }
            assert!(certify_attainment(&perturbed(&prod, k), &i, &q).is_err(), "factor {k} on {i}");
        }
    }
}

#[test]
fn filter_factors_idempotent_and_order_free() {
    let cands: Vec<IntPoly> =
        ["x", "x-1", "x^2-x-1", "2x-1", "x^2-2", "x^2-3x+1", "3x-1", "x+1", "x^2-x+1"].iter().map(|s| p(s)).collect();
    let q = p("2x-1");
    let once = filter_factors(&cands, &q);
    assert_eq!(filter_factors(&once, &q), once);
    let mut rev = cands.clone();
    rev.reverse();
    let mut a = once.clone();
    let mut b = filter_factors(&rev, &q);
    a.sort_by(mitd::factor::poly_order);
    b.sort_by(mitd::factor::poly_order);
    assert_eq!(a, b);
}

#[test]
fn lp_objective_approaches_the_true_sup() {
    // min over weights of sup ln|x^a (x-1)^(1-a)| on [0,1] is -ln 2
    let unit = RatInterval::from_ints(0, 1, 1, 1);
    let factors = [p("x"), p("x-1")];
    let target = -std::f64::consts::LN_2;
    let mut last_gap = f64::INFINITY;
    for n in [25, 100, 400] {
        let opts = LpOptions { samples_per_factor: n, ..LpOptions::default() };
        let (obj, _) = optimize_weights_with(&factors, &unit, Some(&p("2x-1")), &opts).unwrap();
        let gap = (obj - target).abs();
        assert!(gap <= last_gap + 1e-12, "n = {n}: {obj}");
        last_gap = gap;
    }
    assert!(last_gap < 1e-6);
}

#[test]
fn pell_solutions_satisfy_norm_equation() {
    for s in ["x^2-3x+1", "x^2-x-1", "x^2-2", "x^2-4x+1", "x^2-5x+5"] {
        let q = p(s);
        for (b, c) in pell_solutions(&q, 30).unwrap() {
            let n = &b * &b + q.coeff(1) * &b * &c + q.coeff(0) * &c * &c;
            assert!(n.abs().is_one());
            let v = q.eval_rational(&BigRational::new(b, c.clone())) * BigRational::from_integer(&c * &c);
            assert!(v.abs().is_one());
        }
    }
}

#[test]
fn p_n_shape() {
    for n in 2..=6 {
        let d = delta_n(n).unwrap();
        assert!(d.shape_certified, "n = {n}");
        assert!(d.alpha.lower() > d.beta.upper());
    }
}

#[test]
fn attainment_on_published_rows_and_linear() {
    for row in fixtures::table1_48() {
        attainment_obstruction(&row.poly).unwrap();
    }
    for n in 2..=30 {
        assert!(attainment_obstruction(&IntPoly::from_i64s(&[-1, n])).unwrap().is_consistent());
    }
}

#[test]
fn attainment_status_under_translation() {
    for s in ["7x^3+4x^2-2x-1", "7x^3-7x^2+1", "4x^2-2x-1", "3x-1", "9x^2-9x+1"] {
        let q = p(s);
        let status = attainment_obstruction(&q).unwrap().status;
        for c in -3..=3 {
            let moved = q.translate(&BigInt::from(c));
            assert_eq!(attainment_obstruction(&moved).unwrap().status, status, "{s} shifted by {c}");
        }
    }
}

#[test]
fn critical_witness_agrees_with_certified_sup() {
    let unit = RatInterval::from_ints(0, 1, 1, 1);
    let q = p("2x-1");
    let r = product_of_poly(&(&q * &p("x^2-x").pow(2))).unwrap();
    assert_eq!(critical_witness(&r, &q, &unit).unwrap(), WitnessVerdict::Critical);
    let prod = WeightedProduct::from_exponents(vec![(p("x"), BigInt::one()), (p("x-1"), BigInt::one())]).unwrap();
    let c = certify_attainment(&prod, &unit, &q).unwrap();
    assert!(c.sup_value >= ObstructionValue::of_poly(&q).unwrap());
}

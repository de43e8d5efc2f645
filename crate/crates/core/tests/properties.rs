use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use cuboidchar::charpoly::{
    build_qpq, coefficient_equation, newton_upper_coeffs, qpq_coeffs, transform_q, unimodular_pair,
    TransitionMatrix,
};
use cuboidchar::cuboid::{ratios_of, residuals};
use cuboidchar::exactpoly::{GaussInt, MultiPoly, UQuot};
use cuboidchar::expansion::{derive_complex_remainder, derive_real_remainder};
use cuboidchar::region::{classify, covering_theorems, in_linear, in_subregion, RegionClass};
use cuboidchar::roots::{complex_roots, integer_roots, solve_quartic_u, UniPoly};
use cuboidchar::scan::{scan_to_writer, RegionFilter, ScanConfig};
use cuboidchar::verify::check_site_pair;

type IntPoly = MultiPoly<BigInt>;

const VARS: [&str; 2] = ["x", "y"];

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(b(n), b(d))
}

fn small_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec((-9i64..=9, 0u32..4, 0u32..4), 0..6).prop_map(|terms| {
        let ex: Vec<[u32; 2]> = terms.iter().map(|t| [t.1, t.2]).collect();
        let spec: Vec<(i64, &[u32])> = terms.iter().zip(&ex).map(|(t, e)| (t.0, &e[..])).collect();
        IntPoly::from_i64_terms(&VARS, &spec).unwrap()
    })
}

fn coprime_pair(max: i64) -> impl Strategy<Value = (i64, i64)> {
    (1..=max, 1..=max).prop_filter("coprime", |(a, c)| a.gcd(c) == 1)
}

fn eval_xy(p: &IntPoly, x: i64, y: i64) -> BigInt {
    let env: HashMap<&str, BigInt> = [("x", b(x)), ("y", b(y))].into_iter().collect();
    p.eval_with(&env, Clone::clone).unwrap()
}

fn gauss_vec() -> impl Strategy<Value = Vec<GaussInt>> {
    prop::collection::vec((-20i64..=20, -20i64..=20), 0..10)
        .prop_map(|v| v.into_iter().map(|(r, i)| GaussInt::new(b(r), b(i))).collect())
}

/// Coefficient list of the product of two coefficient lists.
fn convolve(a: &[GaussInt], c: &[GaussInt]) -> Vec<GaussInt> {
    if a.is_empty() || c.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussInt::zero(); a.len() + c.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in c.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn poly_ring_axioms(a in small_poly(), c in small_poly(), d in small_poly()) {
        prop_assert_eq!(&a + &c, &c + &a);
        prop_assert_eq!(&a * &c, &c * &a);
        prop_assert_eq!(&(&a * &c) * &d, &a * &(&c * &d));
        prop_assert_eq!(&a * &(&c + &d), &(&a * &c) + &(&a * &d));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(-&(-&a), a);
    }

    #[test]
    fn poly_eval_is_homomorphism(a in small_poly(), c in small_poly(), x in -6i64..=6, y in -6i64..=6) {
        prop_assert_eq!(eval_xy(&(&a * &c), x, y), eval_xy(&a, x, y) * eval_xy(&c, x, y));
        prop_assert_eq!(eval_xy(&(&a + &c), x, y), eval_xy(&a, x, y) + eval_xy(&c, x, y));
    }

    #[test]
    fn substitute_then_eval(a in small_poly(), r in small_poly(), x in -5i64..=5, y in -5i64..=5) {
        let s = a.substitute("x", &r).unwrap();
        let env: HashMap<&str, BigInt> = [("x", eval_xy(&r, x, y)), ("y", b(y))].into_iter().collect();
        prop_assert_eq!(eval_xy(&s, x, y), a.eval_with(&env, Clone::clone).unwrap());
    }

    #[test]
    fn uquot_reduce_idempotent_and_multiplicative(v in gauss_vec(), w in gauss_vec()) {
        let r = UQuot::reduce(v.clone());
        prop_assert_eq!(UQuot::reduce(r.coeffs().to_vec()), r.clone());
        let s = UQuot::reduce(w.clone());
        prop_assert_eq!(UQuot::reduce(convolve(&v, &w)), r * s);
    }

    #[test]
    fn unimodular_completion((a12, a22) in coprime_pair(500)) {
        let (a11, a21) = unimodular_pair(&b(a12), &b(a22)).unwrap();
        prop_assert!(&a11 * b(a22) - &a21 * b(a12) == BigInt::one());
        prop_assert!(!a21.is_negative() && a21 < b(a22));
        prop_assert!(TransitionMatrix::for_ratio(a12, a22).is_ok());
    }

    #[test]
    fn transition_preserves_coprimality((a12, a22) in coprime_pair(60), (p, q) in coprime_pair(1000)) {
        let m = TransitionMatrix::for_ratio(a12, a22).unwrap();
        let (pt, qt) = m.to_new(&b(p), &b(q));
        prop_assert!(pt.gcd(&qt).is_one());
        prop_assert_eq!(m.to_old(&pt, &qt), (b(p), b(q)));
        let inv = m.inverse();
        prop_assert_eq!(inv.to_old(&b(p), &b(q)), (pt, qt));
    }

    #[test]
    fn coefficient_equation_matches_direct((a12, a22) in coprime_pair(100)) {
        let ce = coefficient_equation(&b(a12), &b(a22)).unwrap().to_univariate("C").unwrap();
        prop_assert_eq!(ce, qpq_coeffs(&b(a12), &b(a22)).to_vec());
    }

    #[test]
    fn region_implications(p in 1u64..2_000_000, q in 1u64..2_000_000) {
        let (bp, bq) = (BigInt::from(p), BigInt::from(q));
        if in_subregion(&bp, &bq) {
            prop_assert!(in_linear(&bp, &bq));
            prop_assert!(!covering_theorems(&bp, &bq).is_empty());
            prop_assert_eq!(classify(&bp, &bq), RegionClass::ExcludedSubregion);
        }
        let class = classify(&bp, &bq);
        prop_assert_eq!(class == RegionClass::OutsideLinear, !in_linear(&bp, &bq));
        prop_assert_eq!(class == RegionClass::Bisector, p == q && in_linear(&bp, &bq));
    }

    #[test]
    fn strip_near_bisector(q in 97u64..5_000_000) {
        // pt = -1 always lies in the strip; pt = +1 does from q = 97
        let bq = BigInt::from(q);
        prop_assert!(in_subregion(&(&bq - 1), &bq));
        prop_assert!(in_subregion(&(&bq + 1), &bq));
    }

    #[test]
    fn integer_roots_of_constructed_even_poly(
        roots in prop::collection::btree_set(1i64..60, 0..3),
        shifts in prop::collection::vec(1i64..40, 0..3),
    ) {
        let mut f = UniPoly::from_i64(&[1]);
        for r in &roots {
            f = mul(&f, &UniPoly::from_i64(&[-r * r, 0, 1]));
        }
        for s in &shifts {
            f = mul(&f, &UniPoly::from_i64(&[*s, 0, 1]));
        }
        prop_assume!(f.degree().unwrap_or(0) > 0);
        let mut expect: Vec<BigInt> = roots.iter().flat_map(|r| [b(-r), b(*r)]).collect();
        expect.sort();
        let mut got = integer_roots(&f).unwrap();
        got.sort();
        prop_assert_eq!(got, expect);
    }
}

fn mul(f: &UniPoly, g: &UniPoly) -> UniPoly {
    let mut out = vec![BigInt::zero(); f.coeffs().len() + g.coeffs().len() - 1];
    for (i, x) in f.coeffs().iter().enumerate() {
        for (j, y) in g.coeffs().iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    UniPoly::new(out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn transformed_poly_is_even_and_consistent(
        (a12, a22) in coprime_pair(12),
        t in -4i64..=4, pt in -4i64..=4, qt in -4i64..=4,
    ) {
        let m = TransitionMatrix::for_ratio(a12, a22).unwrap();
        let tq = transform_q(&m);
        prop_assert!(tq.terms().all(|(mon, _)| mon.0[0] % 2 == 0));
        let (p, q) = m.to_old(&b(pt), &b(qt));
        let lhs = tq
            .eval_with(&[("t", b(t)), ("pt", b(pt)), ("qt", b(qt))].into_iter().collect(), Clone::clone)
            .unwrap();
        let rhs = build_qpq()
            .eval_with(&[("t", b(t)), ("p", p), ("q", q)].into_iter().collect(), Clone::clone)
            .unwrap();
        prop_assert_eq!(lhs, rhs);
        let n = newton_upper_coeffs(&b(a12), &b(a22)).unwrap();
        for (j, k, c) in n.nodes() {
            prop_assert_eq!(&tq.coefficient_of(&[j, 0, k]).unwrap(), c);
        }
    }

    #[test]
    fn integer_roots_match_divisor_search((p, q) in coprime_pair(6)) {
        // integer roots of a monic polynomial divide the constant term
        let f = UniPoly::qpq(&b(p), &b(q));
        let c0 = f.coeffs()[0].abs();
        let mut expect = Vec::new();
        for d in divisors(&c0) {
            for s in [d.clone(), -d] {
                if f.eval(&s).is_zero() {
                    expect.push(s);
                }
            }
        }
        expect.sort();
        let mut got = integer_roots(&f).unwrap();
        got.sort();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn root_sum_and_product((p, q) in coprime_pair(9)) {
        let f = UniPoly::qpq(&b(p), &b(q));
        let roots = complex_roots(&f, 128).unwrap();
        let mut sum = num_complex::Complex64::new(0.0, 0.0);
        let mut prod = num_complex::Complex64::new(1.0, 0.0);
        let mut count = 0;
        for r in &roots {
            let z = r.center.to_complex_f64();
            for _ in 0..r.multiplicity {
                sum += z;
                prod *= z;
                count += 1;
            }
        }
        prop_assert_eq!(count, 10);
        let scale: f64 = roots.iter().map(|r| r.center.to_complex_f64().norm()).fold(1.0, f64::max);
        prop_assert!(sum.norm() <= 1e-9 * scale);
        let target = -((p as f64).powi(10) * (q as f64).powi(10));
        prop_assert!((prod.re - target).abs() <= 1e-9 * target.abs());
        prop_assert!(prod.im.abs() <= 1e-9 * target.abs());
    }

    #[test]
    fn cuboid_identity_block(
        a in (-50i64..=50, 1i64..=20), c in (-50i64..=50, 1i64..=20),
        u in (-50i64..=50, 1i64..=20), z in (-50i64..=50, 1i64..=20),
    ) {
        let r = ratios_of(&rat(a.0, a.1), &rat(c.0, c.1), &rat(u.0, u.1), &rat(z.0, z.1)).unwrap();
        let res = residuals(&r);
        prop_assert!(res[0].is_zero());
        prop_assert!(res[1].is_zero());
    }

    #[test]
    fn real_expansion_identity(pt in -6i64..=6, qt in 1i64..2000, c in (-10_000i64..=10_000, 1i64..=50)) {
        let e = derive_real_remainder().unwrap();
        let (l, r) = e.identity_sides(&b(pt), &b(qt), &rat(c.0, c.1));
        prop_assert_eq!(l, r);
    }

    #[test]
    fn complex_expansion_identity(
        pt in -6i64..=6, qt in 97i64..2000, re in -500.0f64..500.0, im in -500.0f64..500.0, k in 0usize..4,
    ) {
        let e = derive_complex_remainder().unwrap();
        let u = solve_quartic_u(128).unwrap();
        let res = e.identity_residual(u.all()[k], pt, qt, (re, im));
        prop_assert!(res < 1e-15, "residual {}", res);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn site_bijection_in_regime(a in 1i64..=6, neg in any::<bool>(), mult in 97i64..=300) {
        let u = solve_quartic_u(128).unwrap();
        let pt = if neg { -a } else { a };
        let s = check_site_pair(pt, mult * a, &u, 128).unwrap();
        prop_assert!(s.bijection && s.disjoint && s.axis, "{:?}", s);
        prop_assert!(s.max_remainder_real < s.real_bound);
        prop_assert!(s.max_remainder_complex < s.complex_bound);
    }

    #[test]
    fn scan_output_independent_of_jobs(q_min in 1u64..20, span in 0u64..8, jobs in 2usize..5) {
        let cfg = |jobs| ScanConfig {
            q_min,
            q_max: q_min + span,
            region: RegionFilter::Linear,
            jobs,
            ..ScanConfig::default()
        };
        let (mut one, mut many) = (Vec::new(), Vec::new());
        let s1 = scan_to_writer(&cfg(1), &mut one).unwrap();
        let s2 = scan_to_writer(&cfg(jobs), &mut many).unwrap();
        prop_assert_eq!(one, many);
        prop_assert_eq!(s1.records, s2.records);
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    let mut m = n.clone();
    let mut d = b(2);
    while &d * &d <= m {
        let mut e = 0;
        while (&m % &d).is_zero() {
            m /= &d;
            e += 1;
        }
        if e > 0 {
            factors.push((d.clone(), e));
        }
        d += 1;
    }
    if m > BigInt::one() {
        factors.push((m, 1));
    }
    let mut out = vec![BigInt::one()];
    for (f, e) in factors {
        let mut next = Vec::new();
        for x in &out {
            let mut pw = BigInt::one();
            for _ in 0..=e {
                next.push(x * &pw);
                pw *= &f;
            }
        }
        out = next;
    }
    out
}

#[test]
fn quartic_vieta() {
    let u = solve_quartic_u(256).unwrap();
    let r: Vec<num_complex::Complex64> = u.all().iter().map(|x| x.to_complex_f64()).collect();
    let e1: num_complex::Complex64 = r.iter().sum();
    let mut e2 = num_complex::Complex64::new(0.0, 0.0);
    let mut e3 = num_complex::Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in i + 1..4 {
            e2 += r[i] * r[j];
            for k in j + 1..4 {
                e3 += r[i] * r[j] * r[k];
            }
        }
    }
    let e4: num_complex::Complex64 = r.iter().product();
    let near =
        |z: num_complex::Complex64, re: f64, im: f64| (z.re - re).abs() < 1e-12 && (z.im - im).abs() < 1e-12;
    assert!(near(e1, 0.0, 0.0));
    assert!(near(e2, 8.0, 0.0));
    assert!(near(e3, 0.0, 12.0));
    assert!(near(e4, -4.0, 0.0));
}

//! The characteristic polynomial family, unimodular changes of the parameter
//! lattice, and the Newton-polygon node coefficients along its upper edge.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactpoly::{MultiPoly, PolyError};

pub type IntPoly = MultiPoly<BigInt>;

/// Variable names of `Q_pq(t)`.
pub const QPQ_VARS: [&str; 3] = ["t", "p", "q"];
/// Variable names of the transformed polynomial, `pt`/`qt` standing for the
/// new lattice coordinates.
pub const QT_VARS: [&str; 3] = ["t", "pt", "qt"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharPolyError {
    #[error("entries must be positive, got ({0}, {1})")]
    NonPositive(BigInt, BigInt),
    #[error("entries ({0}, {1}) are not coprime")]
    NotCoprime(BigInt, BigInt),
    #[error("determinant is {0}, expected 1")]
    Determinant(BigInt),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// `Q_pq(t)` in the variables `(t, p, q)`, assembled from its factored
/// coefficients.
pub fn build_qpq() -> IntPoly {
    let v = |name| IntPoly::var(&QPQ_VARS, name).expect("known variable");
    let c = |n: i64| IntPoly::constant(&QPQ_VARS, int(n));
    let (t, p, q) = (v("t"), v("p"), v("q"));
    let p2 = p.pow(2);
    let q2 = q.pow(2);
    let mono = |a: i64, pe: u32, qe: u32| &c(a) * &(&p.pow(pe) * &q.pow(qe));

    let c8 = &(&(&c(2) * &q2) + &p2) * &(&(&c(3) * &q2) - &(&c(2) * &p2));
    let c6 = [
        mono(1, 0, 8),
        mono(10, 2, 6),
        mono(4, 4, 4),
        mono(-14, 6, 2),
        mono(1, 8, 0),
    ]
    .iter()
    .fold(IntPoly::zero(&QPQ_VARS), |acc, x| &acc + x);
    let inner4 = [
        mono(1, 0, 8),
        mono(-14, 2, 6),
        mono(4, 4, 4),
        mono(10, 6, 2),
        mono(1, 8, 0),
    ]
    .iter()
    .fold(IntPoly::zero(&QPQ_VARS), |acc, x| &acc + x);
    let c4 = -&(&(&p2 * &q2) * &inner4);
    let c2 = -&(&(&p.pow(6) * &q.pow(6)) * &(&(&q2 + &(&c(2) * &p2)) * &(&(&c(3) * &p2) - &(&c(2) * &q2))));
    let c0 = -&(&q.pow(10) * &p.pow(10));

    [
        (t.pow(10), c(1)),
        (t.pow(8), c8),
        (t.pow(6), c6),
        (t.pow(4), c4),
        (t.pow(2), c2),
        (c(1), c0),
    ]
    .iter()
    .fold(IntPoly::zero(&QPQ_VARS), |acc, (tp, k)| &acc + &(tp * k))
}

/// Integer 2x2 matrix with unit determinant, mapping the new coordinates to
/// the old ones: `p = a11 pt + a12 qt`, `q = a21 pt + a22 qt`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub a11: BigInt,
    pub a12: BigInt,
    pub a21: BigInt,
    pub a22: BigInt,
}

impl TransitionMatrix {
    pub fn new(a11: i64, a12: i64, a21: i64, a22: i64) -> Result<Self, CharPolyError> {
        Self::from_big(int(a11), int(a12), int(a21), int(a22))
    }

    pub fn from_big(a11: BigInt, a12: BigInt, a21: BigInt, a22: BigInt) -> Result<Self, CharPolyError> {
        let det = &a11 * &a22 - &a21 * &a12;
        if !det.is_one() {
            return Err(CharPolyError::Determinant(det));
        }
        Ok(Self { a11, a12, a21, a22 })
    }

    /// The matrix whose second column is `(a12, a22)`, completed canonically.
    pub fn for_ratio(a12: i64, a22: i64) -> Result<Self, CharPolyError> {
        let (a11, a21) = unimodular_pair(&int(a12), &int(a22))?;
        Self::from_big(a11, int(a12), a21, int(a22))
    }

    /// The matrix selecting the bisector direction: `p = pt + qt`, `q = qt`.
    pub fn bisector() -> Self {
        Self::new(1, 1, 0, 1).expect("unit determinant")
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1).expect("unit determinant")
    }

    /// `(pt, qt)` from `(p, q)`, using the inverse matrix.
    pub fn to_new(&self, p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
        (&self.a22 * p - &self.a12 * q, -(&self.a21 * p) + &self.a11 * q)
    }

    /// `(p, q)` from `(pt, qt)`.
    pub fn to_old(&self, pt: &BigInt, qt: &BigInt) -> (BigInt, BigInt) {
        (&self.a11 * pt + &self.a12 * qt, &self.a21 * pt + &self.a22 * qt)
    }

    pub fn inverse(&self) -> Self {
        Self {
            a11: self.a22.clone(),
            a12: -self.a12.clone(),
            a21: -self.a21.clone(),
            a22: self.a11.clone(),
        }
    }
}

/// Completes `(a12, a22)` to a unimodular matrix: returns `(a11, a21)` with
/// `a11 a22 - a21 a12 = 1` and `0 <= a21 < a22`.
pub fn unimodular_pair(a12: &BigInt, a22: &BigInt) -> Result<(BigInt, BigInt), CharPolyError> {
    if !a12.is_positive() || !a22.is_positive() {
        return Err(CharPolyError::NonPositive(a12.clone(), a22.clone()));
    }
    let eg = a12.extended_gcd(a22);
    if !eg.gcd.is_one() {
        return Err(CharPolyError::NotCoprime(a12.clone(), a22.clone()));
    }
    // eg.x * a12 + eg.y * a22 = 1, so a11 = y, a21 = -x is one solution;
    // the others differ by (a12, a22) multiples.
    let a21 = (-eg.x).mod_floor(a22);
    let a11 = (BigInt::one() + &a21 * a12) / a22;
    Ok((a11, a21))
}

/// Substitutes `p = a11 pt + a12 qt`, `q = a21 pt + a22 qt` into `Q_pq`.
pub fn transform_q(m: &TransitionMatrix) -> IntPoly {
    transform_poly(&build_qpq(), m)
}

pub(crate) fn transform_poly(q: &IntPoly, m: &TransitionMatrix) -> IntPoly {
    let v = |name| IntPoly::var(&QT_VARS, name).expect("known variable");
    let (pt, qt) = (v("pt"), v("qt"));
    let k = |x: &BigInt| IntPoly::constant(&QT_VARS, x.clone());
    let p_new = &(&k(&m.a11) * &pt) + &(&k(&m.a12) * &qt);
    let q_new = &(&k(&m.a21) * &pt) + &(&k(&m.a22) * &qt);
    // Rename first so the two substitutions do not interfere.
    let renamed = q
        .with_vars(&QPQ_VARS)
        .expect("Q uses t, p, q")
        .substitute("p", &IntPoly::var(&["p_old"], "p_old").expect("var"))
        .and_then(|x| x.substitute("q", &IntPoly::var(&["q_old"], "q_old").expect("var")))
        .expect("known variables");
    renamed
        .substitute("p_old", &p_new)
        .and_then(|x| x.substitute("q_old", &q_new))
        .and_then(|x| x.with_vars(&QT_VARS))
        .expect("substitution into known variables")
}

/// Coefficients of the six nodes `t^(10-2k) qt^(4k)` on the upper edge of the
/// Newton polygon of the transformed polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonUpperCoeffs {
    pub a10_0: BigInt,
    pub a8_4: BigInt,
    pub a6_8: BigInt,
    pub a4_12: BigInt,
    pub a2_16: BigInt,
    pub a0_20: BigInt,
}

impl NewtonUpperCoeffs {
    /// `(t exponent, qt exponent, coefficient)` for each node, highest `t` first.
    pub fn nodes(&self) -> [(u32, u32, &BigInt); 6] {
        [
            (10, 0, &self.a10_0),
            (8, 4, &self.a8_4),
            (6, 8, &self.a6_8),
            (4, 12, &self.a4_12),
            (2, 16, &self.a2_16),
            (0, 20, &self.a0_20),
        ]
    }
}

/// Closed-form node coefficients for the direction `p/q -> a12/a22`.
pub fn newton_upper_coeffs(a12: &BigInt, a22: &BigInt) -> Result<NewtonUpperCoeffs, CharPolyError> {
    unimodular_pair(a12, a22)?;
    let x = |k: u32| num_traits::pow(a12.clone(), k as usize);
    let y = |k: u32| num_traits::pow(a22.clone(), k as usize);
    Ok(NewtonUpperCoeffs {
        a10_0: BigInt::one(),
        a8_4: int(6) * y(4) - int(2) * x(4) - x(2) * y(2),
        a6_8: int(10) * x(2) * y(6) + x(8) + y(8) + int(4) * x(4) * y(4) - int(14) * x(6) * y(2),
        a4_12: int(14) * x(4) * y(8)
            - int(4) * x(6) * y(6)
            - x(2) * y(10)
            - int(10) * x(8) * y(4)
            - x(10) * y(2),
        a2_16: x(8) * y(8) - int(6) * x(10) * y(6) + int(2) * x(6) * y(10),
        a0_20: -(x(10) * y(10)),
    })
}

/// Exponent of the leading growth `t ~ C qt^alpha`; the upper edge has slope
/// `-2` for every direction.
pub const EXPANSION_EXPONENT: u32 = 2;

/// Leading-coefficient equation in the variable `C`.
pub fn coefficient_equation(a12: &BigInt, a22: &BigInt) -> Result<IntPoly, CharPolyError> {
    let n = newton_upper_coeffs(a12, a22)?;
    let mut coeffs = vec![BigInt::zero(); 11];
    for (j, _, c) in n.nodes() {
        coeffs[j as usize] = c.clone();
    }
    Ok(IntPoly::from_univariate("C", &coeffs))
}

/// `Q_pq(t)` specialized at integer `p, q`, ascending coefficients in `t`.
pub fn specialize_qpq(p: &BigInt, q: &BigInt) -> Vec<BigInt> {
    qpq_coeffs(p, q).to_vec()
}

/// Direct evaluation of the eleven coefficients of `Q_pq(t)`; used on the
/// scan hot path instead of generic polynomial evaluation.
pub fn qpq_coeffs(p: &BigInt, q: &BigInt) -> [BigInt; 11] {
    let p2 = p * p;
    let q2 = q * q;
    let p4 = &p2 * &p2;
    let q4 = &q2 * &q2;
    let p6 = &p4 * &p2;
    let q6 = &q4 * &q2;
    let p8 = &p4 * &p4;
    let q8 = &q4 * &q4;
    let c8 = (int(2) * &q2 + &p2) * (int(3) * &q2 - int(2) * &p2);
    let c6 = &q8 + int(10) * &p2 * &q6 + int(4) * &p4 * &q4 - int(14) * &p6 * &q2 + &p8;
    let c4 = -(&p2 * &q2) * (&q8 - int(14) * &p2 * &q6 + int(4) * &p4 * &q4 + int(10) * &p6 * &q2 + &p8);
    let c2 = -(&p6 * &q6) * (&q2 + int(2) * &p2) * (int(3) * &p2 - int(2) * &q2);
    let c0 = -(&p8 * &p2 * &q8 * &q2);
    let z = BigInt::zero;
    [c0, z(), c2, z(), c4, z(), c6, z(), c8, z(), BigInt::one()]
}

/// The transformed polynomial specialized at integer `(pt, qt)` for the
/// bisector matrix, ascending coefficients in `t`.
pub fn specialize_bisector(pt: &BigInt, qt: &BigInt) -> Vec<BigInt> {
    let (p, q) = TransitionMatrix::bisector().to_old(pt, qt);
    specialize_qpq(&p, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn b(n: i64) -> BigInt {
        int(n)
    }

    fn eval_int(p: &IntPoly, env: &[(&str, i64)]) -> BigInt {
        let env: HashMap<&str, BigInt> = env.iter().map(|(k, v)| (*k, b(*v))).collect();
        p.eval_with(&env, Clone::clone).unwrap()
    }

    #[test]
    fn qpq_at_unit_parameters() {
        let q = build_qpq();
        let one = q
            .substitute("p", &IntPoly::constant(&["t"], b(1)))
            .unwrap()
            .substitute("q", &IntPoly::constant(&["t"], b(1)))
            .unwrap();
        let expect = IntPoly::from_i64_terms(
            &["t"],
            &[
                (1, &[10]),
                (3, &[8]),
                (2, &[6]),
                (-2, &[4]),
                (-3, &[2]),
                (-1, &[0]),
            ],
        )
        .unwrap();
        assert_eq!(one, expect);
    }

    #[test]
    fn qpq_at_p_zero() {
        let q = build_qpq();
        let s = q
            .substitute("p", &IntPoly::constant(&["t"], b(0)))
            .unwrap()
            .substitute("q", &IntPoly::constant(&["t"], b(1)))
            .unwrap();
        let expect = IntPoly::from_i64_terms(&["t"], &[(1, &[10]), (6, &[8]), (1, &[6])]).unwrap();
        assert_eq!(s, expect);
    }

    #[test]
    fn t8_coefficient_at_1_2() {
        let c = specialize_qpq(&b(1), &b(2));
        assert_eq!(c[8], b(90));
    }

    #[test]
    fn direct_coefficients_match_symbolic() {
        let q = build_qpq();
        for (p, qq) in [(1, 2), (3, 7), (-4, 5), (0, 3)] {
            let c = specialize_qpq(&b(p), &b(qq));
            for k in 0..=10u32 {
                let sym = q.coefficient_in("t", k).unwrap();
                assert_eq!(eval_int(&sym, &[("t", 0), ("p", p), ("q", qq)]), c[k as usize]);
            }
        }
    }

    #[test]
    fn constant_term() {
        let q = build_qpq();
        let c0 = q.coefficient_in("t", 0).unwrap();
        let expect = IntPoly::from_i64_terms(&QPQ_VARS, &[(-1, &[0, 10, 10])]).unwrap();
        assert_eq!(c0, expect);
    }

    #[test]
    fn unimodular_examples() {
        assert_eq!(unimodular_pair(&b(1), &b(1)).unwrap(), (b(1), b(0)));
        assert_eq!(unimodular_pair(&b(3), &b(2)).unwrap(), (b(2), b(1)));
        assert_eq!(unimodular_pair(&b(1), &b(5)).unwrap(), (b(1), b(4)));
        assert!(matches!(
            unimodular_pair(&b(4), &b(6)),
            Err(CharPolyError::NotCoprime(..))
        ));
        assert!(matches!(
            unimodular_pair(&b(0), &b(1)),
            Err(CharPolyError::NonPositive(..))
        ));
    }

    #[test]
    fn transition_rejects_bad_determinant() {
        assert!(matches!(
            TransitionMatrix::new(1, 1, 1, 1),
            Err(CharPolyError::Determinant(_))
        ));
    }

    #[test]
    fn identity_transform_is_noop() {
        let q = build_qpq();
        let t = transform_q(&TransitionMatrix::identity());
        let renamed = t
            .substitute("pt", &IntPoly::var(&["p"], "p").unwrap())
            .unwrap()
            .substitute("qt", &IntPoly::var(&["q"], "q").unwrap())
            .unwrap();
        assert_eq!(renamed, q);
    }

    #[test]
    fn newton_coeffs_examples() {
        let n = newton_upper_coeffs(&b(1), &b(1)).unwrap();
        assert_eq!(
            [n.a10_0, n.a8_4, n.a6_8, n.a4_12, n.a2_16, n.a0_20],
            [b(1), b(3), b(2), b(-2), b(-3), b(-1)]
        );
        let n = newton_upper_coeffs(&b(2), &b(1)).unwrap();
        assert_eq!(n.a0_20, b(-1024));
    }

    #[test]
    fn coefficient_equation_at_one_factors() {
        let ce = coefficient_equation(&b(1), &b(1)).unwrap();
        let c = |k| IntPoly::constant(&["C"], b(k));
        let x = IntPoly::var(&["C"], "C").unwrap();
        let f = &(&(&x - &c(1)) * &(&x + &c(1))) * &(&x.pow(2) + &c(1)).pow(4);
        assert_eq!(ce, f);
    }
}

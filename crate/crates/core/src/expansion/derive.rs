use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ExpansionError;
use crate::charpoly::{transform_q, IntPoly, TransitionMatrix};
use crate::exactpoly::{gauss, gauss_to_rat, rat_to_gauss, GaussInt, GaussRat, MultiPoly, UQuot};
use crate::hp::{BigFloat, HpComplex};

/// Variables of both remainder equations.
pub const REMAINDER_VARS: [&str; 3] = ["pt", "c", "z"];

pub type UGauss = UQuot<GaussInt>;
pub type UPoly = MultiPoly<UGauss>;

/// The remainder equation along the real expansion
/// `t = qt^2 + 5 pt qt + 10 pt^2 + c / qt`, `z = 1 / qt`.
#[derive(Clone, Debug)]
pub struct RealRemainderEq {
    /// Normalized equation `R(pt, c, z) = 0`.
    pub r: IntPoly,
    /// `R_raw = normalizer * R`.
    pub normalizer: BigRational,
    /// Power of `qt` cleared before shifting (the weighted degree).
    pub weight: u32,
    /// Power of `z` divided out after clearing.
    pub z_shift: u32,
    /// Coefficient of `c` in `R`.
    pub c_coefficient: BigInt,
    /// Coefficient of `pt^3` in `R`.
    pub p3_coefficient: BigInt,
    /// `R - p3_coefficient pt^3 - c_coefficient c`.
    pub f: IntPoly,
}

/// The remainder equation along the complex expansion
/// `t = i qt^2 + u pt qt - (u + i u^2) pt^2 / 2 + c / qt`, with `u` a root
/// of the quartic, as a polynomial over the quartic's quotient ring.
#[derive(Clone, Debug)]
pub struct ComplexRemainderEq {
    /// Normalized equation `S(pt, c, z) = 0`.
    pub s: UPoly,
    /// `S = normalizer * R_raw` in the quotient ring.
    pub normalizer: UQuot<GaussRat>,
    /// Common denominator cleared in the normalization.
    pub multiplier: BigInt,
    pub weight: u32,
    pub z_shift: u32,
    /// Degree in `t`; the expansion's factor `1/2` contributes `2^t_degree`.
    pub t_degree: u32,
    /// Coefficient of `pt^6` in `S`.
    pub p6_block: UGauss,
    /// Minus the coefficient of `pt^3 c` in `S`, written as the right side.
    pub rhs_coefficient: BigInt,
    /// `S - p6_block pt^6 + rhs_coefficient pt^3 c`.
    pub phi: UPoly,
}

fn bisector_q() -> IntPoly {
    transform_q(&TransitionMatrix::bisector())
}

/// Groups the transformed polynomial's terms by the power of `t` and
/// rewrites each as `coeff * pt^k * z^(weight - 2j - l)`.
fn cleared_blocks<C: crate::exactpoly::Coeff>(
    q: &IntPoly,
    lift: impl Fn(&BigInt, u32) -> C,
) -> (u32, BTreeMap<u32, MultiPoly<C>>) {
    let weight = q.terms().map(|(m, _)| 2 * m.0[0] + m.0[2]).max().unwrap_or(0);
    let mut blocks: BTreeMap<u32, MultiPoly<C>> = BTreeMap::new();
    for (m, a) in q.terms() {
        let (j, k, l) = (m.0[0], m.0[1], m.0[2]);
        blocks
            .entry(j)
            .or_insert_with(|| MultiPoly::zero(&REMAINDER_VARS))
            .add_term(vec![k, 0, weight - 2 * j - l], lift(a, j));
    }
    (weight, blocks)
}

fn combine<C: crate::exactpoly::Coeff>(
    blocks: &BTreeMap<u32, MultiPoly<C>>,
    t: &MultiPoly<C>,
) -> MultiPoly<C> {
    let mut out = MultiPoly::zero(&REMAINDER_VARS);
    let mut power = MultiPoly::constant(&REMAINDER_VARS, C::one());
    let mut current = 0;
    for (&j, b) in blocks {
        while current < j {
            power = &power * t;
            current += 1;
        }
        out = &out + &(b * &power);
    }
    out
}

pub fn derive_real_remainder() -> Result<RealRemainderEq, ExpansionError> {
    let q = bisector_q();
    let int = |n: i64| BigInt::from(n);
    let t = IntPoly::from_i64_terms(
        &REMAINDER_VARS,
        &[
            (1, &[0, 0, 0]),
            (5, &[1, 0, 1]),
            (10, &[2, 0, 2]),
            (1, &[0, 1, 3]),
        ],
    )?;
    let (weight, blocks) = cleared_blocks(&q, |a, _| a.clone());
    let raw = combine(&blocks, &t);
    let z_shift = raw.min_degree_in("z")?;
    let raw = raw.shift_down("z", z_shift)?;

    let kappa = raw.coefficient_of(&[0, 1, 0])?;
    if kappa.is_zero() {
        return Err(ExpansionError::Normalization(
            "no term linear in c without z".into(),
        ));
    }
    let normalizer = BigRational::new(kappa, int(32));
    let r = raw.try_map_coeffs(|a| {
        let v = BigRational::from(a.clone()) / &normalizer;
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(ExpansionError::Normalization("non-integral coefficient".into()))
        }
    })?;
    let c_coefficient = r.coefficient_of(&[0, 1, 0])?;
    let p3_coefficient = r.coefficient_of(&[3, 0, 0])?;
    let extracted = IntPoly::from_terms(
        &REMAINDER_VARS,
        [
            (vec![3, 0, 0], p3_coefficient.clone()),
            (vec![0, 1, 0], c_coefficient.clone()),
        ],
    )?;
    let f = &r - &extracted;
    Ok(RealRemainderEq {
        r,
        normalizer,
        weight,
        z_shift,
        c_coefficient,
        p3_coefficient,
        f,
    })
}

impl RealRemainderEq {
    /// `f` with `pt = 0`.
    pub fn f_at_zero_pt(&self) -> IntPoly {
        self.f
            .substitute("pt", &IntPoly::constant(&["c", "z"], BigInt::zero()))
            .expect("pt is a variable of f")
    }

    /// Both sides of the defining identity at integer `(pt, qt)` and rational
    /// `c`: the transformed polynomial at the expansion point, and
    /// `normalizer * qt^(weight - z_shift) * R(pt, c, 1/qt)`.
    pub fn identity_sides(&self, pt: &BigInt, qt: &BigInt, c: &BigRational) -> (BigRational, BigRational) {
        let pr = BigRational::from(pt.clone());
        let qr = BigRational::from(qt.clone());
        let t = &qr * &qr
            + BigRational::from_integer(5.into()) * &pr * &qr
            + BigRational::from_integer(10.into()) * &pr * &pr
            + c / &qr;
        let q = bisector_q();
        let lhs = q
            .eval_with(
                &[("t", t), ("pt", pr.clone()), ("qt", qr.clone())]
                    .into_iter()
                    .collect(),
                |a| BigRational::from(a.clone()),
            )
            .expect("all variables assigned");
        let z = BigRational::one() / &qr;
        let rv = self
            .r
            .eval_with(
                &[("pt", pr), ("c", c.clone()), ("z", z)].into_iter().collect(),
                |a| BigRational::from(a.clone()),
            )
            .expect("all variables assigned");
        let rhs = &self.normalizer * num_traits::pow(qr, (self.weight - self.z_shift) as usize) * rv;
        (lhs, rhs)
    }
}

fn uq_int(c0: (i64, i64), c1: (i64, i64), c2: (i64, i64), c3: (i64, i64)) -> UGauss {
    UQuot::new(
        gauss(c0.0, c0.1),
        gauss(c1.0, c1.1),
        gauss(c2.0, c2.1),
        gauss(c3.0, c3.1),
    )
}

fn uq_to_rat(x: &UGauss) -> UQuot<GaussRat> {
    x.map(gauss_to_rat)
}

pub fn derive_complex_remainder() -> Result<ComplexRemainderEq, ExpansionError> {
    let q = bisector_q();
    let t_degree = q.degree_in("t")?;
    let z0 = (0, 0);
    let one = |c: UGauss, e: [u32; 3]| (e.to_vec(), c);
    // 2i + 2u pt z - (u + i u^2) pt^2 z^2 + 2c z^3
    let t = UPoly::from_terms(
        &REMAINDER_VARS,
        [
            one(uq_int((0, 2), z0, z0, z0), [0, 0, 0]),
            one(uq_int(z0, (2, 0), z0, z0), [1, 0, 1]),
            one(uq_int(z0, (-1, 0), (0, -1), z0), [2, 0, 2]),
            one(uq_int((2, 0), z0, z0, z0), [0, 1, 3]),
        ],
    )?;
    let (weight, blocks) = cleared_blocks(&q, |a, j| {
        UQuot::scalar(GaussInt::new(a << (t_degree - j) as usize, BigInt::zero()))
    });
    let raw = combine(&blocks, &t);
    let z_shift = raw.min_degree_in("z")?;
    let raw = raw.shift_down("z", z_shift)?;

    let kappa = raw.coefficient_of(&[3, 1, 0])?;
    let kinv = uq_to_rat(&kappa)
        .inverse()
        .ok_or_else(|| ExpansionError::Normalization("pt^3 c coefficient is not invertible".into()))?;
    let scaled = raw.map_coeffs(|a| uq_to_rat(a) * -kinv.clone());
    let multiplier = scaled.terms().fold(BigInt::one(), |l, (_, c)| {
        c.coeffs()
            .iter()
            .fold(l, |l, g| l.lcm(g.re.denom()).lcm(g.im.denom()))
    });
    let mrat = GaussRat::new(BigRational::from(multiplier.clone()), BigRational::zero());
    let s = scaled.try_map_coeffs(|a| {
        let v = a.scale(&mrat);
        let c = v.coeffs();
        match (
            rat_to_gauss(&c[0]),
            rat_to_gauss(&c[1]),
            rat_to_gauss(&c[2]),
            rat_to_gauss(&c[3]),
        ) {
            (Some(a), Some(b), Some(c), Some(d)) => Ok(UQuot::new(a, b, c, d)),
            _ => Err(ExpansionError::Normalization("non-integral coefficient".into())),
        }
    })?;
    let normalizer = -kinv.scale(&mrat);

    let p6_block = s.coefficient_of(&[6, 0, 0])?;
    let rhs = -s.coefficient_of(&[3, 1, 0])?;
    let rc = rhs.coeffs();
    if !(rc[1].re.is_zero() && rc[1].im.is_zero())
        || !(rc[2].re.is_zero() && rc[2].im.is_zero())
        || !(rc[3].re.is_zero() && rc[3].im.is_zero())
        || !rc[0].im.is_zero()
    {
        return Err(ExpansionError::Normalization(
            "right side is not an integer".into(),
        ));
    }
    let rhs_coefficient = rc[0].re.clone();
    let extracted = UPoly::from_terms(
        &REMAINDER_VARS,
        [(vec![6, 0, 0], p6_block.clone()), (vec![3, 1, 0], -rhs.clone())],
    )?;
    let phi = &s - &extracted;
    Ok(ComplexRemainderEq {
        s,
        normalizer,
        multiplier,
        weight,
        z_shift,
        t_degree,
        p6_block,
        rhs_coefficient,
        phi,
    })
}

/// Value of a quotient-ring element at a numeric root `u`.
pub fn uq_eval(x: &UGauss, u: &HpComplex) -> HpComplex {
    let prec = u.prec();
    let mut acc = HpComplex::zero(prec);
    for c in x.coeffs().iter().rev() {
        acc = acc * u.clone()
            + HpComplex::new(
                BigFloat::from_bigint(&c.re, prec),
                BigFloat::from_bigint(&c.im, prec),
            );
    }
    acc
}

pub fn uq_rat_eval(x: &UQuot<GaussRat>, u: &HpComplex) -> HpComplex {
    let prec = u.prec();
    let mut acc = HpComplex::zero(prec);
    for c in x.coeffs().iter().rev() {
        acc = acc * u.clone()
            + HpComplex::new(
                BigFloat::from_rational(&c.re, prec),
                BigFloat::from_rational(&c.im, prec),
            );
    }
    acc
}

/// Numeric evaluation of a remainder polynomial at `u` and `(pt, c, z)`.
pub fn eval_upoly(p: &UPoly, u: &HpComplex, pt: &HpComplex, c: &HpComplex, z: &HpComplex) -> HpComplex {
    let prec = u.prec();
    let mut acc = HpComplex::zero(prec);
    let pw = |x: &HpComplex, k: u32| {
        let mut r = HpComplex::from_real(BigFloat::from_i64(1, prec));
        for _ in 0..k {
            r = r * x.clone();
        }
        r
    };
    for (m, a) in p.terms() {
        acc = acc + uq_eval(a, u) * pw(pt, m.0[0]) * pw(c, m.0[1]) * pw(z, m.0[2]);
    }
    acc
}

impl ComplexRemainderEq {
    /// `phi` with `pt = 0`.
    pub fn phi_at_zero_pt(&self) -> UPoly {
        self.phi
            .substitute("pt", &UPoly::zero(&["c", "z"]))
            .expect("pt is a variable of phi")
    }

    /// Relative difference between the transformed polynomial at the
    /// expansion point and `qt^(weight - z_shift) 2^-t_degree S / normalizer`,
    /// evaluated numerically at root `u`.
    pub fn identity_residual(&self, u: &HpComplex, pt: i64, qt: i64, c: (f64, f64)) -> f64 {
        let prec = u.prec();
        let k = |n: i64| HpComplex::from_real(BigFloat::from_i64(n, prec));
        let (p, qq) = (k(pt), k(qt));
        let cc = HpComplex::from_f64(c.0, c.1, prec);
        let i = HpComplex::i(prec);
        let t = i.clone() * qq.clone() * qq.clone() + u.clone() * p.clone() * qq.clone()
            - (u.clone() + i * u.clone() * u.clone())
                * p.clone()
                * p.clone()
                * HpComplex::from_f64(0.5, 0.0, prec)
            + cc.clone() / qq.clone();
        let q = bisector_q();
        let mut lhs = HpComplex::zero(prec);
        for (m, a) in q.terms() {
            let mut term = HpComplex::from_real(BigFloat::from_bigint(a, prec));
            for _ in 0..m.0[0] {
                term = term * t.clone();
            }
            let big = |b: i64, e: u32| {
                HpComplex::from_real(BigFloat::from_bigint(
                    &num_traits::pow(BigInt::from(b), e as usize),
                    prec,
                ))
            };
            term = term * big(pt, m.0[1]) * big(qt, m.0[2]);
            lhs = lhs + term;
        }
        let z = HpComplex::from_real(BigFloat::from_i64(1, prec)) / qq.clone();
        let sv = eval_upoly(&self.s, u, &p, &cc, &z);
        let mut scale = HpComplex::from_real(BigFloat::from_i64(1, prec));
        for _ in 0..self.weight - self.z_shift {
            scale = scale * qq.clone();
        }
        let rhs = scale.mul_pow2(-i64::from(self.t_degree)) * sv / uq_rat_eval(&self.normalizer, u);
        let diff = (lhs.clone() - rhs).abs().to_f64();
        diff / lhs.abs().to_f64().max(f64::MIN_POSITIVE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::solve_quartic_u;

    #[test]
    fn real_normalization_constants() {
        let e = derive_real_remainder().unwrap();
        assert_eq!(e.c_coefficient, BigInt::from(32));
        assert_eq!(e.p3_coefficient, BigInt::from(1216));
        assert_eq!(e.weight, 20);
        assert_eq!(e.z_shift, 3);
        assert!(e.f.coefficient_of(&[3, 0, 0]).unwrap().is_zero());
    }

    #[test]
    fn real_identity_is_exact() {
        let e = derive_real_remainder().unwrap();
        for (pt, qt, c) in [(1, 97, (-37, 2)), (-2, 300, (11, 3)), (3, 1000, (-500, 7))] {
            let c = BigRational::new(c.0.into(), c.1.into());
            let (l, r) = e.identity_sides(&pt.into(), &qt.into(), &c);
            assert_eq!(l, r);
        }
    }

    #[test]
    fn real_value_at_sample_point() {
        // R(1, -1, 0) from the normal form
        let e = derive_real_remainder().unwrap();
        let at = |p: &IntPoly| {
            p.eval_with(
                &[
                    ("pt", BigInt::from(1)),
                    ("c", BigInt::from(-1)),
                    ("z", BigInt::zero()),
                ]
                .into_iter()
                .collect(),
                Clone::clone,
            )
            .unwrap()
        };
        assert_eq!(at(&e.r), BigInt::from(1216 - 32) + at(&e.f));
    }

    #[test]
    fn complex_constants() {
        let e = derive_complex_remainder().unwrap();
        assert_eq!(e.rhs_coefficient, BigInt::from(352256));
        assert_eq!(
            e.p6_block,
            uq_int((0, 212992), (-598016, 0), (0, -446464), (110592, 0))
        );
        assert_eq!(e.z_shift, 6);
        assert!(e.phi.coefficient_of(&[0, 2, 0]).unwrap().is_zero());
    }

    #[test]
    fn complex_normalizer_closed_form() {
        // -(u^3 - 12 i u^2 + 36 u - 57 i) / 16
        let e = derive_complex_remainder().unwrap();
        let r = |n: i64| BigRational::new(n.into(), 16.into());
        let z = BigRational::zero;
        let expect = UQuot::new(
            GaussRat::new(z(), r(57)),
            GaussRat::new(r(-36), z()),
            GaussRat::new(z(), r(12)),
            GaussRat::new(r(-1), z()),
        );
        assert_eq!(e.normalizer, expect);
        assert_eq!(e.multiplier, BigInt::from(352256));
    }

    #[test]
    fn complex_identity_numeric() {
        let e = derive_complex_remainder().unwrap();
        let us = solve_quartic_u(128).unwrap();
        for u in us.all() {
            for (pt, qt, c) in [(1, 97, (10.0, -20.0)), (-3, 400, (-100.0, 5.0))] {
                let res = e.identity_residual(u, pt, qt, c);
                assert!(res < 1e-15, "residual {res}");
            }
        }
    }
}

//! From a root `t` of `Q_pq` to the edges and diagonals of a cuboid.

use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::charpoly::qpq_coeffs;
use crate::hp::BigFloat;
use crate::roots::{isolate_real_roots, refine_root, UniPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CuboidError {
    #[error("p, q and t must be positive")]
    NonPositive,
    #[error("alpha * upsilon = +-1, z is undefined")]
    Singular,
    #[error("a ratio has a zero denominator")]
    ZeroDenominator,
    #[error("cuboid equations {0:?} fail")]
    NotCuboid(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub p: BigInt,
    pub q: BigInt,
    pub t: BigInt,
}

impl Triple {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, t: impl Into<BigInt>) -> Self {
        Self {
            p: p.into(),
            q: q.into(),
            t: t.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// `alpha = p^2/t, beta = pq/t`.
    One,
    /// `alpha = pq/t, beta = p^2/t`.
    Two,
}

impl Variant {
    pub const BOTH: [Variant; 2] = [Variant::One, Variant::Two];

    pub fn number(self) -> u8 {
        match self {
            Variant::One => 1,
            Variant::Two => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub is_root: bool,
    pub coprime: bool,
    pub distinct: bool,
    pub t_gt_p2: bool,
    pub t_gt_pq: bool,
    pub t_gt_q2: bool,
    pub product: bool,
}

impl Conditions {
    pub fn inequalities(&self) -> [bool; 4] {
        [self.t_gt_p2, self.t_gt_pq, self.t_gt_q2, self.product]
    }

    /// Every premise holds, so a cuboid is expected.
    pub fn all(&self) -> bool {
        self.is_root && self.coprime && self.distinct && self.inequalities().iter().all(|&b| b)
    }
}

pub fn eval_qpq(p: &BigInt, q: &BigInt, t: &BigInt) -> BigInt {
    UniPoly::new(qpq_coeffs(p, q).to_vec()).eval(t)
}

pub fn check_conditions(tr: &Triple) -> Result<Conditions, CuboidError> {
    let Triple { p, q, t } = tr;
    if !p.is_positive() || !q.is_positive() || !t.is_positive() {
        return Err(CuboidError::NonPositive);
    }
    Ok(Conditions {
        is_root: eval_qpq(p, q, t).is_zero(),
        coprime: p.gcd(q).is_one(),
        distinct: p != q,
        t_gt_p2: t > &(p * p),
        t_gt_pq: t > &(p * q),
        t_gt_q2: t > &(q * q),
        product: (p * p + t) * (p * q + t) > BigInt::from(2) * t * t,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalTriple {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub upsilon: BigRational,
    pub variant: Variant,
}

pub fn abv(tr: &Triple, variant: Variant) -> Result<RationalTriple, CuboidError> {
    if !tr.t.is_positive() {
        return Err(CuboidError::NonPositive);
    }
    let r = |n: BigInt| BigRational::new(n, tr.t.clone());
    let (pp, pq) = (r(&tr.p * &tr.p), r(&tr.p * &tr.q));
    let (alpha, beta) = match variant {
        Variant::One => (pp, pq),
        Variant::Two => (pq, pp),
    };
    Ok(RationalTriple {
        alpha,
        beta,
        upsilon: r(&tr.q * &tr.q),
        variant,
    })
}

/// Arithmetic shared by exact rationals and [`BigFloat`].
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
    fn lift(n: i64, like: &Self) -> Self;
    fn is_zero_value(&self) -> bool;
}

impl Scalar for BigRational {
    fn lift(n: i64, _: &Self) -> Self {
        BigRational::from_integer(n.into())
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

impl Scalar for BigFloat {
    fn lift(n: i64, like: &Self) -> Self {
        BigFloat::from_i64(n, like.prec())
    }

    fn is_zero_value(&self) -> bool {
        self.is_zero()
    }
}

fn sq<T: Scalar>(x: &T) -> T {
    x.clone() * x.clone()
}

pub fn z_of<T: Scalar>(alpha: &T, beta: &T, upsilon: &T) -> Result<T, CuboidError> {
    let one = T::lift(1, alpha);
    let den = T::lift(2, alpha) * (one.clone() + sq(beta)) * (one.clone() - sq(alpha) * sq(upsilon));
    if den.is_zero_value() {
        return Err(CuboidError::Singular);
    }
    let num = (one.clone() + sq(upsilon)) * (one.clone() - sq(beta)) * (one + sq(alpha));
    Ok(num / den)
}

pub fn z_value(rt: &RationalTriple) -> Result<BigRational, CuboidError> {
    z_of(&rt.alpha, &rt.beta, &rt.upsilon)
}

/// `x1/L, x2/L, x3/L, d1/L, d2/L, d3/L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratios<T> {
    pub x1: T,
    pub x2: T,
    pub x3: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

impl<T: Clone> Ratios<T> {
    pub fn to_array(&self) -> [T; 6] {
        [
            self.x1.clone(),
            self.x2.clone(),
            self.x3.clone(),
            self.d1.clone(),
            self.d2.clone(),
            self.d3.clone(),
        ]
    }
}

pub fn ratios_of<T: Scalar>(alpha: &T, beta: &T, upsilon: &T, z: &T) -> Result<Ratios<T>, CuboidError> {
    let one = T::lift(1, upsilon);
    let two = T::lift(2, upsilon);
    let pu = one.clone() + sq(upsilon);
    let mu = one.clone() - sq(upsilon);
    let pz = one.clone() + sq(z);
    let den = pu.clone() * pz.clone();
    if pu.is_zero_value() || den.is_zero_value() {
        return Err(CuboidError::ZeroDenominator);
    }
    Ok(Ratios {
        x1: two.clone() * upsilon.clone() / pu.clone(),
        d1: mu.clone() / pu.clone(),
        x2: two.clone() * z.clone() * mu.clone() / den.clone(),
        x3: mu.clone() * (one.clone() - sq(z)) / den.clone(),
        d2: (den.clone() + two.clone() * z.clone() * mu) / den.clone() * beta.clone(),
        d3: two * (sq(upsilon) * sq(z) + one) / den * alpha.clone(),
    })
}

pub fn ratios(rt: &RationalTriple, z: &BigRational) -> Result<Ratios<BigRational>, CuboidError> {
    ratios_of(&rt.alpha, &rt.beta, &rt.upsilon, z)
}

/// Left minus right side of the four cuboid equations, with `L = 1`.
pub fn residuals<T: Scalar>(r: &Ratios<T>) -> [T; 4] {
    let one = T::lift(1, &r.x1);
    [
        sq(&r.x1) + sq(&r.x2) + sq(&r.x3) - one,
        sq(&r.x2) + sq(&r.x3) - sq(&r.d1),
        sq(&r.x3) + sq(&r.x1) - sq(&r.d2),
        sq(&r.x1) + sq(&r.x2) - sq(&r.d3),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cuboid {
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub x1: BigInt,
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub x2: BigInt,
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub x3: BigInt,
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub d1: BigInt,
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub d2: BigInt,
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub d3: BigInt,
    #[serde(rename = "L", serialize_with = "crate::bigjson::ser")]
    pub l: BigInt,
}

impl Cuboid {
    /// Which of the four cuboid equations hold.
    pub fn equations(&self) -> [bool; 4] {
        let s = |x: &BigInt| x * x;
        [
            s(&self.x1) + s(&self.x2) + s(&self.x3) == s(&self.l),
            s(&self.x2) + s(&self.x3) == s(&self.d1),
            s(&self.x3) + s(&self.x1) == s(&self.d2),
            s(&self.x1) + s(&self.x2) == s(&self.d3),
        ]
    }
}

/// Integer cuboid scaled by the least common denominator, before the
/// equations are checked. Entries are absolute values; `negative` marks
/// ratios that came out negative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scaled {
    pub cuboid: Cuboid,
    pub negative: [bool; 6],
}

pub fn scale(r: &Ratios<BigRational>) -> Scaled {
    let arr = r.to_array();
    let l = arr.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = arr
        .iter()
        .map(|x| (x * BigRational::from(l.clone())).to_integer())
        .collect();
    let negative = std::array::from_fn(|k| ints[k].is_negative());
    let a = |k: usize| ints[k].abs();
    Scaled {
        cuboid: Cuboid {
            x1: a(0),
            x2: a(1),
            x3: a(2),
            d1: a(3),
            d2: a(4),
            d3: a(5),
            l,
        },
        negative,
    }
}

/// Scales the ratios to integers and keeps the result only if all four
/// cuboid equations hold.
pub fn assemble(r: &Ratios<BigRational>) -> Result<Scaled, CuboidError> {
    let s = scale(r);
    let failed: Vec<usize> = s
        .cuboid
        .equations()
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(k, _)| k + 1)
        .collect();
    if failed.is_empty() {
        Ok(s)
    } else {
        Err(CuboidError::NotCuboid(failed))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VariantOutcome {
    pub variant: u8,
    pub cuboid: Option<Scaled>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Attempt {
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub p: BigInt,
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub q: BigInt,
    #[serde(serialize_with = "crate::bigjson::ser")]
    pub t: BigInt,
    pub conditions: Conditions,
    pub variants: Vec<VariantOutcome>,
}

impl Attempt {
    /// A cuboid was produced by at least one variant.
    pub fn hit(&self) -> bool {
        self.variants.iter().any(|v| v.cuboid.is_some())
    }
}

fn run_variant(tr: &Triple, v: Variant) -> Result<Scaled, CuboidError> {
    let rt = abv(tr, v)?;
    let z = z_value(&rt)?;
    assemble(&ratios(&rt, &z)?)
}

/// Conditions and both construction variants for one triple.
pub fn attempt(tr: &Triple) -> Result<Attempt, CuboidError> {
    let conditions = check_conditions(tr)?;
    let variants = Variant::BOTH
        .iter()
        .map(|&v| match run_variant(tr, v) {
            Ok(s) => VariantOutcome {
                variant: v.number(),
                cuboid: Some(s),
                error: None,
            },
            Err(e) => VariantOutcome {
                variant: v.number(),
                cuboid: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(Attempt {
        p: tr.p.clone(),
        q: tr.q.clone(),
        t: tr.t.clone(),
        conditions,
        variants,
    })
}

/// Positive real roots of `Q_pq` to `bits` bits.
pub fn positive_real_roots(p: &BigInt, q: &BigInt, bits: u32) -> Vec<BigFloat> {
    let f = UniPoly::new(qpq_coeffs(p, q).to_vec());
    let Ok(ivs) = isolate_real_roots(&f) else {
        return Vec::new();
    };
    ivs.iter()
        .filter(|iv| iv.hi.is_positive())
        .filter_map(|iv| refine_root(&f, iv, bits + 8).ok())
        .filter(|iv| iv.midpoint().is_positive())
        .map(|iv| BigFloat::from_rational(&iv.midpoint(), bits))
        .collect()
}

/// Largest of the four residuals for a real, non-integer `t`, evaluated in
/// `bits`-bit floating point. Small values mean the last two cuboid
/// equations are satisfied off the integer lattice.
pub fn float_residual(p: &BigInt, q: &BigInt, t: &BigFloat, v: Variant) -> Result<f64, CuboidError> {
    let prec = t.prec();
    let f = |n: BigInt| BigFloat::from_bigint(&n, prec) / t.clone();
    let (pp, pq) = (f(p * p), f(p * q));
    let (alpha, beta) = match v {
        Variant::One => (pp, pq),
        Variant::Two => (pq, pp),
    };
    let upsilon = f(q * q);
    let z = z_of(&alpha, &beta, &upsilon)?;
    let r = ratios_of(&alpha, &beta, &upsilon, &z)?;
    let scale = r
        .to_array()
        .iter()
        .map(|x| x.abs().to_f64())
        .fold(1.0f64, f64::max);
    Ok(residuals(&r)
        .iter()
        .map(|x| x.abs().to_f64())
        .fold(0.0f64, f64::max)
        / (scale * scale))
}

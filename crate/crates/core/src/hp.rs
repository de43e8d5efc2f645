//! Binary floating point with arbitrary precision, enough for the root
//! certification work: the four field operations, square roots and exact
//! conversion to rationals. Rounding is to nearest.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `mant * 2^exp`, with `mant` holding at most `prec` bits.
#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bits(n: &BigInt) -> u64 {
    n.magnitude().bits()
}

fn shift_round(m: &BigInt, s: u64) -> BigInt {
    // round half away from zero
    let half = BigInt::one() << (s - 1);
    let mag = (m.abs() + half) >> s;
    if m.is_negative() {
        -mag
    } else {
        mag
    }
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        Self {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        Self { mant, exp, prec }.normalized()
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::from_parts(n.clone(), 0, prec)
    }

    pub fn from_i64(n: i64, prec: u32) -> Self {
        Self::from_parts(BigInt::from(n), 0, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero(prec);
        }
        let b = x.to_bits();
        let sign = if b >> 63 == 0 { 1i64 } else { -1 };
        let e = ((b >> 52) & 0x7ff) as i64;
        let frac = b & 0x000f_ffff_ffff_ffff;
        let (m, e) = if e == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), e - 1075)
        };
        Self::from_parts(BigInt::from(m) * sign, e, prec)
    }

    /// Nearest value to a rational at the given precision.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let num = r.numer();
        let den = r.denom();
        let k = i64::from(prec) + 2 + bits(den) as i64 - bits(num) as i64;
        let k = k.max(0);
        let q = (num << k as usize) / den;
        Self::from_parts(q, -k, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self {
            mant: self.mant.clone(),
            exp: self.exp,
            prec,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let b = bits(&self.mant);
        if b > u64::from(self.prec) {
            let s = b - u64::from(self.prec);
            self.mant = shift_round(&self.mant, s);
            self.exp += s as i64;
        }
        // strip trailing zero bits so equal values compare structurally
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Position of the leading bit: `|x|` lies in `[2^(m-1), 2^m)`.
    pub fn magnitude_exp(&self) -> i64 {
        self.exp + bits(&self.mant) as i64
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant);
        let (m, e) = if b > 64 {
            let s = b - 64;
            (shift_round(&self.mant, s), self.exp + s as i64)
        } else {
            (self.mant.clone(), self.exp)
        };
        let f = m.to_f64().unwrap_or(f64::NAN);
        ldexp(f, e)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of a negative number");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * u64::from(self.prec) + 4;
        let b = bits(&self.mant);
        let mut k = want.saturating_sub(b) as i64;
        if (self.exp - k) % 2 != 0 {
            k += 1;
        }
        let m = &self.mant << k as usize;
        let r = m.sqrt();
        Self::from_parts(r, (self.exp - k) / 2, self.prec)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let r = self.to_rational();
        let neg = r.is_negative();
        let r = r.abs();
        // find e10 with 10^e10 <= r < 10^(e10+1)
        let approx = self.abs().to_f64().log10().floor() as i64;
        let mut e10 = approx;
        let ten = BigRational::from_integer(10.into());
        let pow10 = |e: i64| -> BigRational {
            if e >= 0 {
                num_traits::pow(ten.clone(), e as usize)
            } else {
                num_traits::pow(ten.clone(), (-e) as usize).recip()
            }
        };
        while pow10(e10) > r {
            e10 -= 1;
        }
        while pow10(e10 + 1) <= r {
            e10 += 1;
        }
        let scaled = r * pow10(digits as i64 - 1 - e10);
        let int = (scaled + BigRational::new(1.into(), 2.into()))
            .floor()
            .to_integer();
        let mut s = int.to_string();
        if s.len() > digits {
            s.truncate(digits);
            e10 += 1;
        }
        let (head, tail) = s.split_at(1);
        let tail = tail.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(head);
        if !tail.is_empty() {
            out.push('.');
            out.push_str(tail);
        }
        if e10 != 0 {
            out.push_str(&format!("e{e10}"));
        }
        out
    }
}

fn ldexp(mut f: f64, mut e: i64) -> f64 {
    while e > 1000 {
        f *= 2f64.powi(1000);
        e -= 1000;
        if f.is_infinite() {
            return f;
        }
    }
    while e < -1000 {
        f *= 2f64.powi(-1000);
        e += 1000;
        if f == 0.0 {
            return f;
        }
    }
    f * 2f64.powi(e as i32)
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl BigFloat {
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        let d = self.clone() - other.clone();
        d.mant.sign().cmp(&Sign::NoSign)
    }

    pub fn max(self, other: Self) -> Self {
        if self.cmp_value(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Add for BigFloat {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return rhs.with_prec(prec);
        }
        if rhs.is_zero() {
            return self.with_prec(prec);
        }
        let (hi, lo) = if self.magnitude_exp() >= rhs.magnitude_exp() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if hi.magnitude_exp() > lo.magnitude_exp() + i64::from(prec) + 4 {
            // lo is below half an ulp of hi
            return hi.with_prec(prec);
        }
        let e = hi.exp.min(lo.exp);
        let a = &hi.mant << (hi.exp - e) as usize;
        let b = &lo.mant << (lo.exp - e) as usize;
        Self::from_parts(a + b, e, prec)
    }
}

impl Sub for BigFloat {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for BigFloat {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Mul for BigFloat {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        Self::from_parts(self.mant * rhs.mant, self.exp + rhs.exp, prec)
    }
}

impl Div for BigFloat {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return Self::zero(prec);
        }
        let k = (i64::from(prec) + 2 + bits(&rhs.mant) as i64 - bits(&self.mant) as i64).max(0);
        let q = (&self.mant << k as usize) / &rhs.mant;
        Self::from_parts(q, self.exp - k - rhs.exp, prec)
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

/// Complex number with [`BigFloat`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl HpComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn from_real(re: BigFloat) -> Self {
        let prec = re.prec();
        Self::new(re, BigFloat::zero(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Self::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
    }

    pub fn i(prec: u32) -> Self {
        Self::new(BigFloat::zero(prec), BigFloat::from_i64(1, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        Self::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self::new(self.re.mul_pow2(k), self.im.mul_pow2(k))
    }

    /// Principal square root (non-negative real part).
    pub fn sqrt(&self) -> Self {
        let prec = self.prec();
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let a = ((r + self.re.clone()).mul_pow2(-1)).sqrt();
            let b = self.im.clone() / a.mul_pow2(1);
            Self::new(a, b)
        } else {
            let mut b = ((r - self.re.clone()).mul_pow2(-1)).sqrt();
            if self.im.is_negative() {
                b = -b;
            }
            let a = if self.im.is_zero() {
                BigFloat::zero(prec)
            } else {
                self.im.clone() / b.mul_pow2(1)
            };
            Self::new(a, b)
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_complex_f64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Exact Gaussian-rational value.
    pub fn to_rational(&self) -> (BigRational, BigRational) {
        (self.re.to_rational(), self.im.to_rational())
    }
}

impl Add for HpComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for HpComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for HpComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for HpComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Self::new(re, im)
    }
}

impl Div for HpComplex {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = rhs.norm_sqr();
        let num = self * rhs.conj();
        Self::new(num.re / d.clone(), num.im / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_f64() {
        let p = 100;
        let a = BigFloat::from_f64(1.5, p);
        let b = BigFloat::from_f64(-0.25, p);
        assert_eq!((a.clone() + b.clone()).to_f64(), 1.25);
        assert_eq!((a.clone() * b.clone()).to_f64(), -0.375);
        assert_eq!((a / b).to_f64(), -6.0);
    }

    #[test]
    fn sqrt_two_to_many_digits() {
        let two = BigFloat::from_i64(2, 200);
        let r = two.sqrt();
        assert!(r
            .to_decimal(40)
            .starts_with("1.4142135623730950488016887242096980785"));
        let err = (r.clone() * r - BigFloat::from_i64(2, 200)).abs();
        assert!(err.is_zero() || err.magnitude_exp() < -195);
    }

    #[test]
    fn rational_roundtrip() {
        let r = BigRational::new(1.into(), 3.into());
        let x = BigFloat::from_rational(&r, 128);
        let back = x.to_rational();
        let diff = (back - r).abs();
        assert!(diff < BigRational::new(1.into(), BigInt::one() << 128usize));
    }

    #[test]
    fn complex_sqrt_branches() {
        let z = HpComplex::from_f64(-4.0, 0.0, 80);
        let r = z.sqrt();
        assert_eq!(r.to_f64_pair(), (0.0, 2.0));
        let w = HpComplex::from_f64(3.0, -4.0, 80).sqrt();
        let (re, im) = w.to_f64_pair();
        assert!((re - 2.0).abs() < 1e-15 && (im + 1.0).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(BigFloat::from_f64(0.5, 64).to_decimal(5), "5e-1");
        assert_eq!(BigFloat::from_i64(-1234, 64).to_decimal(3), "-1.23e3");
        assert_eq!(BigFloat::from_i64(9999, 64).to_decimal(2), "1e4");
    }

    #[test]
    fn tiny_addend_is_absorbed() {
        let big = BigFloat::from_i64(1, 53);
        let tiny = BigFloat::from_f64(1e-300, 53);
        assert_eq!((big.clone() + tiny).to_f64(), 1.0);
    }
}

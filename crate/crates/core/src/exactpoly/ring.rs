//! Coefficient domains for [`MultiPoly`](super::MultiPoly).
//!
//! Three exact domains are used: rational integers, Gaussian integers and the
//! quotient ring `Z[i][u] / (u^4 + 8u^2 - 12iu - 4)`. Promotion between them is
//! always explicit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Gaussian integer `re + i*im`.
pub type GaussInt = Complex<BigInt>;
/// Gaussian rational `re + i*im`.
pub type GaussRat = Complex<BigRational>;

/// A commutative ring usable as polynomial coefficient.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_bigint(n: BigInt) -> Self;

    /// Single whitespace-free token used by the text format.
    fn to_token(&self) -> String;

    fn parse_token(s: &str) -> Option<Self>;
}

/// Rings containing a square root of minus one.
pub trait ImaginaryUnit {
    fn imag_unit() -> Self;
}

impl Coeff for BigInt {
    fn from_bigint(n: BigInt) -> Self {
        n
    }

    fn to_token(&self) -> String {
        self.to_string()
    }

    fn parse_token(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl Coeff for BigRational {
    fn from_bigint(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }

    fn to_token(&self) -> String {
        self.to_string()
    }

    fn parse_token(s: &str) -> Option<Self> {
        s.parse().ok()
    }
}

impl<T> Coeff for Complex<T>
where
    T: Coeff + num_traits::Num,
{
    fn from_bigint(n: BigInt) -> Self {
        Complex::new(T::from_bigint(n), T::zero())
    }

    fn to_token(&self) -> String {
        format!("{},{}", self.re.to_token(), self.im.to_token())
    }

    fn parse_token(s: &str) -> Option<Self> {
        let (re, im) = s.split_once(',')?;
        Some(Complex::new(T::parse_token(re)?, T::parse_token(im)?))
    }
}

impl<T: Clone + num_traits::Num> ImaginaryUnit for Complex<T> {
    fn imag_unit() -> Self {
        Complex::i()
    }
}

/// Element `c0 + c1 u + c2 u^2 + c3 u^3` of the ring generated by a root `u`
/// of `u^4 + 8u^2 - 12iu - 4`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UQuot<C> {
    c: [C; 4],
}

impl<C: Coeff + ImaginaryUnit> UQuot<C> {
    pub fn new(c0: C, c1: C, c2: C, c3: C) -> Self {
        Self { c: [c0, c1, c2, c3] }
    }

    pub fn scalar(c: C) -> Self {
        Self::new(c, C::zero(), C::zero(), C::zero())
    }

    /// The generator `u`.
    pub fn u() -> Self {
        Self::new(C::zero(), C::one(), C::zero(), C::zero())
    }

    pub fn coeffs(&self) -> &[C; 4] {
        &self.c
    }

    /// Reduces a coefficient vector of arbitrary length in `u` using
    /// `u^4 = -8u^2 + 12iu + 4`.
    pub fn reduce(mut v: Vec<C>) -> Self {
        let i = C::imag_unit();
        while v.len() > 4 {
            let top = v.pop().expect("len > 4");
            if top.is_zero() {
                continue;
            }
            let k = v.len() - 4;
            // top * u^(k+4) = top * u^k * (-8u^2 + 12iu + 4)
            v[k] = v[k].clone() + top.clone() * C::from_bigint(BigInt::from(4));
            v[k + 1] = v[k + 1].clone() + top.clone() * i.clone() * C::from_bigint(BigInt::from(12));
            v[k + 2] = v[k + 2].clone() - top * C::from_bigint(BigInt::from(8));
        }
        v.resize(4, C::zero());
        let mut it = v.into_iter();
        let c0 = it.next().unwrap();
        let c1 = it.next().unwrap();
        let c2 = it.next().unwrap();
        let c3 = it.next().unwrap();
        Self::new(c0, c1, c2, c3)
    }

    pub fn scale(&self, k: &C) -> Self {
        Self {
            c: self.c.clone().map(|x| x * k.clone()),
        }
    }

    pub fn map<D: Coeff + ImaginaryUnit>(&self, f: impl Fn(&C) -> D) -> UQuot<D> {
        UQuot::new(f(&self.c[0]), f(&self.c[1]), f(&self.c[2]), f(&self.c[3]))
    }
}

impl UQuot<GaussRat> {
    /// Multiplicative inverse, or `None` for zero. The defining quartic is
    /// irreducible over `Q(i)`, so every nonzero element is invertible.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // Column j of the multiplication matrix is self * u^j.
        let mut cols = Vec::with_capacity(4);
        let mut cur = self.clone();
        for _ in 0..4 {
            cols.push(cur.clone());
            cur = cur * UQuot::u();
        }
        let mut m: Vec<Vec<GaussRat>> = (0..4)
            .map(|r| {
                let mut row: Vec<GaussRat> = (0..4).map(|c| cols[c].c[r].clone()).collect();
                row.push(if r == 0 { GaussRat::one() } else { GaussRat::zero() });
                row
            })
            .collect();
        for col in 0..4 {
            let pivot = (col..4).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, pivot);
            let inv = gauss_rat_inv(&m[col][col]);
            for x in &mut m[col][col..] {
                *x = x.clone() * inv.clone();
            }
            let pivot_row = m[col].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let factor = row[col].clone();
                    for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x = x.clone() - p.clone() * factor.clone();
                    }
                }
            }
        }
        Some(UQuot::new(
            m[0][4].clone(),
            m[1][4].clone(),
            m[2][4].clone(),
            m[3][4].clone(),
        ))
    }
}

pub(crate) fn gauss_rat_inv(z: &GaussRat) -> GaussRat {
    let n = z.norm_sqr();
    Complex::new(z.re.clone() / n.clone(), -z.im.clone() / n)
}

impl<C: Coeff + ImaginaryUnit> Add for UQuot<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let [a0, a1, a2, a3] = self.c;
        let [b0, b1, b2, b3] = rhs.c;
        Self::new(a0 + b0, a1 + b1, a2 + b2, a3 + b3)
    }
}

impl<C: Coeff + ImaginaryUnit> Sub for UQuot<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coeff + ImaginaryUnit> Neg for UQuot<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            c: self.c.map(|x| -x),
        }
    }
}

impl<C: Coeff + ImaginaryUnit> Mul for UQuot<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut v = vec![C::zero(); 7];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self::reduce(v)
    }
}

impl<C: Coeff + ImaginaryUnit> Zero for UQuot<C> {
    fn zero() -> Self {
        Self::scalar(C::zero())
    }
    fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }
}

impl<C: Coeff + ImaginaryUnit> One for UQuot<C> {
    fn one() -> Self {
        Self::scalar(C::one())
    }
}

impl<C: Coeff + ImaginaryUnit> Coeff for UQuot<C> {
    fn from_bigint(n: BigInt) -> Self {
        Self::scalar(C::from_bigint(n))
    }

    fn to_token(&self) -> String {
        self.c.iter().map(Coeff::to_token).collect::<Vec<_>>().join("|")
    }

    fn parse_token(s: &str) -> Option<Self> {
        let parts: Vec<&str> = s.split('|').collect();
        if parts.len() != 4 {
            return None;
        }
        Some(Self::new(
            C::parse_token(parts[0])?,
            C::parse_token(parts[1])?,
            C::parse_token(parts[2])?,
            C::parse_token(parts[3])?,
        ))
    }
}

impl<C: Coeff + ImaginaryUnit> ImaginaryUnit for UQuot<C> {
    fn imag_unit() -> Self {
        Self::scalar(C::imag_unit())
    }
}

impl<C: fmt::Debug> fmt::Debug for UQuot<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?}) + ({:?})u + ({:?})u^2 + ({:?})u^3",
            self.c[0], self.c[1], self.c[2], self.c[3]
        )
    }
}

/// Gaussian integer from machine integers.
pub fn gauss(re: i64, im: i64) -> GaussInt {
    Complex::new(BigInt::from(re), BigInt::from(im))
}

/// Promotes a Gaussian integer to a Gaussian rational.
pub fn gauss_to_rat(z: &GaussInt) -> GaussRat {
    Complex::new(
        BigRational::from_integer(z.re.clone()),
        BigRational::from_integer(z.im.clone()),
    )
}

/// Demotes a Gaussian rational with integral parts, `None` otherwise.
pub fn rat_to_gauss(z: &GaussRat) -> Option<GaussInt> {
    if z.re.is_integer() && z.im.is_integer() {
        Some(Complex::new(z.re.to_integer(), z.im.to_integer()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type U = UQuot<GaussInt>;

    fn uq(c: [(i64, i64); 4]) -> U {
        U::new(
            gauss(c[0].0, c[0].1),
            gauss(c[1].0, c[1].1),
            gauss(c[2].0, c[2].1),
            gauss(c[3].0, c[3].1),
        )
    }

    #[test]
    fn u_times_u_cubed_reduces_once() {
        let u = U::u();
        let u3 = u.clone() * u.clone() * u.clone();
        assert_eq!(u * u3, uq([(4, 0), (0, 12), (-8, 0), (0, 0)]));
    }

    #[test]
    fn quartic_relation_vanishes() {
        let u = U::u();
        let u2 = u.clone() * u.clone();
        let u4 = u2.clone() * u2.clone();
        let i = U::imag_unit();
        let r = u4 + u2.scale(&gauss(8, 0)) - i * u.scale(&gauss(12, 0)) - U::from_bigint(4.into());
        assert!(r.is_zero());
    }

    #[test]
    fn reduce_is_identity_on_reduced() {
        let a = uq([(1, 2), (-3, 0), (0, 5), (7, -7)]);
        let again = U::reduce(a.coeffs().to_vec());
        assert_eq!(a, again);
    }

    #[test]
    fn inverse_roundtrip() {
        let a = uq([(3, 0), (-4, 0), (0, 0), (-1, 0)]).map(gauss_to_rat);
        let inv = a.inverse().unwrap();
        assert_eq!(a * inv, UQuot::one());
        assert!(UQuot::<GaussRat>::zero().inverse().is_none());
    }

    #[test]
    fn token_roundtrip() {
        let a = uq([(1, -2), (0, 0), (5, 0), (0, -1)]);
        assert_eq!(a.to_token(), "1,-2|0,0|5,0|0,-1");
        assert_eq!(U::parse_token(&a.to_token()), Some(a));
    }
}

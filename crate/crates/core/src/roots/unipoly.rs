use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::charpoly;

/// Univariate polynomial with integer coefficients, ascending order, no
/// trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigInt>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `Q_pq(t)` at integer `p, q`.
    pub fn qpq(p: &BigInt, q: &BigInt) -> Self {
        Self::new(charpoly::qpq_coeffs(p, q).to_vec())
    }

    /// The bisector-transformed polynomial at integer `(pt, qt)`.
    pub fn bisector(pt: &BigInt, qt: &BigInt) -> Self {
        Self::new(charpoly::specialize_bisector(pt, qt))
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from(c.clone())
        })
    }

    /// Sign of the value at `x`, computed on the homogenized form so no
    /// rational normalization is needed.
    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        // sum c_j a^j b^(d-j), accumulated from the top coefficient down
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        // acc = b^d * f(a / b) with b > 0
        sign(&acc)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigInt::from(j))
                .collect(),
        )
    }

    /// `h` with `self(t) = h(t^2)`, if the polynomial is even.
    pub fn even_to_s(&self) -> Option<Self> {
        self.is_even()
            .then(|| Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs.iter().map(|c| BigRational::from(c.clone())).collect()
    }

    /// Primitive integer polynomial proportional to rational coefficients.
    pub fn from_rational(coeffs: &[BigRational]) -> Self {
        let l = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        Self::new(
            coeffs
                .iter()
                .map(|c| (c * BigRational::from(l.clone())).to_integer())
                .collect(),
        )
        .primitive()
    }

    /// Power-of-two bound `2^k` strictly above the modulus of every root.
    pub fn root_bound_exp(&self) -> u64 {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let n = self.coeffs.len() - 1;
        // Cauchy: 1 + max |c_j / c_n|
        let max = self.coeffs[..n].iter().map(|c| c.abs()).max().unwrap_or_default();
        let q = max.div_ceil(&lead) + BigInt::one();
        q.bits()
    }
}

pub(crate) fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Dense polynomial arithmetic over the rationals, enough for gcds and the
/// squarefree decomposition.
pub(crate) mod ratpoly {
    use num_rational::BigRational;
    use num_traits::Zero;

    pub type RPoly = Vec<BigRational>;

    pub fn trim(mut a: RPoly) -> RPoly {
        while a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
        a
    }

    pub fn derivative(a: &RPoly) -> RPoly {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| c * BigRational::from_integer(j.into()))
                .collect(),
        )
    }

    pub fn sub(a: &RPoly, b: &RPoly) -> RPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|i| {
                    a.get(i).cloned().unwrap_or_else(BigRational::zero)
                        - b.get(i).cloned().unwrap_or_else(BigRational::zero)
                })
                .collect(),
        )
    }

    pub fn monic(a: &RPoly) -> RPoly {
        match a.last() {
            Some(l) => a.iter().map(|c| c / l).collect(),
            None => Vec::new(),
        }
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divmod(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
        let mut r = trim(a.clone());
        let db = b.len() - 1;
        let lb = b.last().expect("nonzero divisor").clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        while r.len() >= b.len() {
            let k = r.len() - b.len();
            let f = r.last().expect("nonempty") / &lb;
            for (i, c) in b.iter().enumerate() {
                r[k + i] -= &f * c;
            }
            q[k] = f;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn gcd(a: &RPoly, b: &RPoly) -> RPoly {
        let (mut x, mut y) = (trim(a.clone()), trim(b.clone()));
        while !y.is_empty() {
            let (_, r) = divmod(&x, &y);
            x = y;
            y = r;
        }
        monic(&x)
    }

    /// Yun's algorithm: `(factor, multiplicity)` with pairwise coprime monic
    /// squarefree factors whose product with multiplicities is `a` up to a
    /// constant.
    pub fn squarefree_decomposition(a: &RPoly) -> Vec<(RPoly, u32)> {
        let a = monic(a);
        let da = derivative(&a);
        let g = gcd(&a, &da);
        let (mut b, _) = divmod(&a, &g);
        let (c, _) = divmod(&da, &g);
        let mut d = sub(&c, &derivative(&b));
        let mut out = Vec::new();
        let mut i = 1;
        while b.len() > 1 {
            let f = gcd(&b, &d);
            let (nb, _) = divmod(&b, &f);
            let (nc, _) = divmod(&d, &f);
            if f.len() > 1 {
                out.push((f, i));
            }
            b = nb;
            d = sub(&nc, &derivative(&b));
            i += 1;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::ratpoly::*;
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn eval_and_sign() {
        let q11 = UniPoly::qpq(&1.into(), &1.into());
        assert_eq!(q11.coeffs().len(), 11);
        // (t^2 - 1)(t^2 + 1)^4 at t = 2
        assert_eq!(q11.eval(&2.into()), BigInt::from(3 * 625));
        assert_eq!(q11.eval(&1.into()), BigInt::zero());
        let x = BigRational::new(3.into(), 2.into());
        assert!(q11.eval_rat(&x) > BigRational::zero());
        assert_eq!(q11.sign_at(&x), 1);
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        assert_eq!(p.sign_at(&BigRational::new(7.into(), 5.into())), -1);
        assert_eq!(p.sign_at(&BigRational::new(3.into(), 2.into())), 1);
    }

    #[test]
    fn even_reduction() {
        let q11 = UniPoly::qpq(&1.into(), &1.into());
        let h = q11.even_to_s().unwrap();
        assert_eq!(h, UniPoly::from_i64(&[-1, -3, -2, 2, 3, 1]));
        assert!(UniPoly::from_i64(&[1, 1]).even_to_s().is_none());
    }

    #[test]
    fn yun_multiplicities() {
        // (x-1)(x+1)(x^2+1)^4 in s: (s-1)(s+1)^4
        let h = UniPoly::from_i64(&[-1, -3, -2, 2, 3, 1]).to_rational();
        let d = squarefree_decomposition(&h);
        assert_eq!(d.len(), 2);
        assert_eq!(d[0], (vec![r(-1), r(1)], 1));
        assert_eq!(d[1], (vec![r(1), r(1)], 4));
    }

    #[test]
    fn primitive_part() {
        let p = UniPoly::from_i64(&[4, -6, -2]).primitive();
        assert_eq!(p, UniPoly::from_i64(&[-2, 3, 1]));
    }

    #[test]
    fn root_bound_covers_roots() {
        let p = UniPoly::from_i64(&[-100, 0, 1]);
        assert!(1u64 << p.root_bound_exp() > 10);
    }
}

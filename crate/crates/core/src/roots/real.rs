use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::unipoly::{ratpoly, sign, UniPoly};
use super::RootError;

/// Isolating interval for one real root. Either a single exact point
/// (`lo == hi`), or an open interval on which the squarefree part changes
/// sign exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RootInterval {
    pub fn point(x: BigRational) -> Self {
        Self { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        if self.is_exact() {
            x == &self.lo
        } else {
            &self.lo < x && x < &self.hi
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Squarefree part `f / gcd(f, f')` as a primitive integer polynomial.
pub fn squarefree_part(f: &UniPoly) -> UniPoly {
    let a = f.to_rational();
    let g = ratpoly::gcd(&a, &f.derivative().to_rational());
    let (q, _) = ratpoly::divmod(&a, &g);
    UniPoly::from_rational(&q)
}

/// Sturm sequence of a squarefree polynomial, kept with integer coefficients
/// by positive rescaling of each remainder.
pub struct SturmChain {
    polys: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(g: &UniPoly) -> Self {
        let mut polys = vec![g.clone(), g.derivative().primitive()];
        loop {
            let n = polys.len();
            let r = pseudo_rem(&polys[n - 2], &polys[n - 1]);
            if r.is_zero() {
                break;
            }
            let g = r.content();
            polys.push(UniPoly::new(r.coeffs().iter().map(|c| -(c / &g)).collect()));
        }
        Self { polys }
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        count_variations(self.polys.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_infinity(&self) -> usize {
        count_variations(self.polys.iter().map(|p| p.leading().map_or(0, sign)))
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// Remainder of `|lc(b)|^k a` by `b`, which has the sign of the true
/// remainder.
fn pseudo_rem(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let lb = b.leading().expect("nonzero divisor").abs();
    let db = b.degree().expect("nonzero");
    let mut r: Vec<BigInt> = a.coeffs().to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let lr = r.last().expect("nonempty").clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        // lc(b) * lr cancels the top term after scaling by |lc(b)|
        let f = if b.leading().expect("nonzero").is_negative() {
            -lr
        } else {
            lr
        };
        for (i, c) in b.coeffs().iter().enumerate() {
            r[k + i] -= &f * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    UniPoly::new(r)
}

fn two() -> BigRational {
    BigRational::from_integer(2.into())
}

/// Disjoint isolating intervals for all real roots, in increasing order.
pub fn isolate_real_roots(f: &UniPoly) -> Result<Vec<RootInterval>, RootError> {
    if f.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let g = squarefree_part(f);
    if g.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let chain = SturmChain::new(&g);
    let b = BigRational::from_integer(BigInt::one() << g.root_bound_exp());
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b.clone(), None)];
    while let Some((lo, hi, known)) = stack.pop() {
        let n = known.unwrap_or_else(|| chain.count(&lo, &hi));
        match n {
            0 => {}
            1 => out.push(finish(&g, &chain, lo, hi)),
            _ => {
                let mid = (&lo + &hi) / two();
                let left = chain.count(&lo, &mid);
                stack.push((mid.clone(), hi, Some(n - left)));
                stack.push((lo, mid, Some(left)));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    Ok(out)
}

/// Turns `(lo, hi]` holding one root into a [`RootInterval`].
fn finish(g: &UniPoly, chain: &SturmChain, mut lo: BigRational, mut hi: BigRational) -> RootInterval {
    loop {
        if g.sign_at(&hi) == 0 {
            return RootInterval::point(hi);
        }
        if g.sign_at(&lo) != 0 {
            return RootInterval { lo, hi };
        }
        // lo is a neighbouring root; move away from it
        let mid = (&lo + &hi) / two();
        if chain.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Shrinks an isolating interval to width at most `2^-bits` by bisection
/// with exact sign evaluation.
pub fn refine_root(f: &UniPoly, iv: &RootInterval, bits: u32) -> Result<RootInterval, RootError> {
    if iv.is_exact() {
        return Ok(iv.clone());
    }
    let g = squarefree_part(f);
    let target = BigRational::new(BigInt::one(), BigInt::one() << bits);
    refine_with(&g, iv, |w| w <= &target)
}

pub(crate) fn refine_with(
    g: &UniPoly,
    iv: &RootInterval,
    done: impl Fn(&BigRational) -> bool,
) -> Result<RootInterval, RootError> {
    let (mut lo, mut hi) = (iv.lo.clone(), iv.hi.clone());
    let slo = g.sign_at(&lo);
    let shi = g.sign_at(&hi);
    if slo == 0 {
        return Ok(RootInterval::point(lo));
    }
    if shi == 0 {
        return Ok(RootInterval::point(hi));
    }
    if slo == shi {
        return Err(RootError::NoSignChange);
    }
    while !done(&(&hi - &lo)) {
        let mid = (&lo + &hi) / two();
        match g.sign_at(&mid) {
            0 => return Ok(RootInterval::point(mid)),
            s if s == slo => lo = mid,
            _ => hi = mid,
        }
    }
    Ok(RootInterval { lo, hi })
}

/// All integer roots, ascending.
pub fn integer_roots(f: &UniPoly) -> Result<Vec<BigInt>, RootError> {
    if f.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if let Some(h) = f.even_to_s().filter(|h| h.degree() < f.degree()) {
        let candidates = match single_positive_integer_root(&h) {
            Some(s) => s.into_iter().collect(),
            None => match guided_positive_integer_roots(&h) {
                Some(v) => v,
                None => integer_roots(&h)?,
            },
        };
        let mut out = Vec::new();
        for s in candidates {
            if s.is_negative() {
                continue;
            }
            let r = s.sqrt();
            if &r * &r == s {
                if !r.is_zero() {
                    out.push(-r.clone());
                }
                out.push(r);
            }
        }
        out.sort();
        return Ok(out);
    }
    let g = squarefree_part(f);
    let one = BigRational::one();
    let mut out = Vec::new();
    for iv in isolate_real_roots(&g)? {
        let iv = refine_with(&g, &iv, |w| w < &one)?;
        if iv.is_exact() {
            if iv.lo.is_integer() {
                out.push(iv.lo.to_integer());
            }
            continue;
        }
        // at most one integer lies strictly inside an interval shorter than 1
        let c = iv.lo.floor().to_integer() + BigInt::one();
        if BigRational::from(c.clone()) < iv.hi && g.eval(&c).is_zero() {
            out.push(c);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Sign changes in the coefficient sequence, an upper bound on the number
/// of positive roots with the same parity.
pub fn descartes_variations(f: &UniPoly) -> usize {
    count_variations(f.coeffs().iter().map(sign))
}

/// Bound on the moduli of all roots: `2 max_k |c_{n-k} / c_n|^{1/k}`.
pub fn root_modulus_bound(f: &UniPoly) -> BigInt {
    let c = f.coeffs();
    let n = c.len() - 1;
    let lead = c[n].abs();
    let m = (1..=n)
        .map(|k| {
            let r = num_integer::Integer::div_ceil(&c[n - k].abs(), &lead);
            r.nth_root(k as u32) + BigInt::one()
        })
        .max()
        .unwrap_or_else(BigInt::one);
    m * 2
}

/// When Descartes' rule guarantees exactly one positive root, decides by
/// exact bisection over the integers whether that root is an integer.
/// `None` means the rule does not apply.
fn single_positive_integer_root(h: &UniPoly) -> Option<Option<BigInt>> {
    let s0 = sign(&h.eval(&BigInt::zero()));
    if s0 == 0 || descartes_variations(h) != 1 {
        return None;
    }
    let mut lo = BigInt::zero();
    let mut hi = root_modulus_bound(h);
    let shi = sign(&h.eval(&hi));
    if shi != -s0 {
        return None;
    }
    let one = BigInt::one();
    while &hi - &lo > one {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        match sign(&h.eval(&mid)) {
            0 => return Some(Some(mid)),
            v if v == s0 => lo = mid,
            _ => hi = mid,
        }
    }
    Some(None)
}

/// Integer bisection for a root in `(lo, hi]` when `h(lo)` and `h(hi)`
/// have opposite signs and `(lo, hi]` holds exactly one root.
fn integer_in_bracket(h: &UniPoly, mut lo: BigInt, mut hi: BigInt) -> Option<Option<BigInt>> {
    let slo = sign(&h.eval(&lo));
    let shi = sign(&h.eval(&hi));
    if shi == 0 {
        return Some(Some(hi));
    }
    if slo == 0 || slo == shi {
        return None;
    }
    let one = BigInt::one();
    while &hi - &lo > one {
        let mid: BigInt = (&lo + &hi) >> 1u32;
        match sign(&h.eval(&mid)) {
            0 => return Some(Some(mid)),
            v if v == slo => lo = mid,
            _ => hi = mid,
        }
    }
    Some(None)
}

/// Positive integer roots located from floating-point guesses. Every guess
/// is widened to an integer bracket whose root count is checked exactly
/// against a Sturm count of all positive roots; `None` if the guesses do
/// not account for every root.
fn guided_positive_integer_roots(h: &UniPoly) -> Option<Vec<BigInt>> {
    use num_traits::FromPrimitive;
    let zero = BigRational::zero();
    if h.eval(&BigInt::zero()).is_zero() {
        return None;
    }
    let chain = SturmChain::new(h);
    let total = chain
        .variations_at(&zero)
        .checked_sub(chain.variations_at_infinity())?;
    if total == 0 {
        return Some(Vec::new());
    }
    let mut brackets: Vec<(BigInt, BigInt)> = super::complex::approximate_roots_f64(h)
        .into_iter()
        .filter(|z| z.re > 0.0 && z.im.abs() <= 1e-6 * z.norm())
        .map(|z| {
            let d = (1e-9 * z.re).max(1.0);
            let lo = BigInt::from_f64((z.re - d).floor())
                .unwrap_or_default()
                .max(BigInt::zero());
            let hi = BigInt::from_f64((z.re + d).ceil()).unwrap_or_default();
            (lo, hi)
        })
        .collect();
    brackets.sort();
    let mut merged: Vec<(BigInt, BigInt)> = Vec::new();
    for (lo, hi) in brackets {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.clone().max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    let counts: Vec<usize> = merged
        .iter()
        .map(|(lo, hi)| chain.count(&BigRational::from(lo.clone()), &BigRational::from(hi.clone())))
        .collect();
    if counts.iter().sum::<usize>() != total {
        return None;
    }
    let mut out = Vec::new();
    for ((lo, hi), n) in merged.into_iter().zip(counts) {
        if n == 0 {
            continue;
        }
        if &hi - &lo <= BigInt::from(64) {
            let mut k = lo + 1;
            while k <= hi {
                if h.eval(&k).is_zero() {
                    out.push(k.clone());
                }
                k += 1;
            }
        } else if n == 1 {
            out.extend(integer_in_bracket(h, lo, hi)?);
        } else {
            return None;
        }
    }
    Some(out)
}

/// Number of distinct real roots, for callers that only need a count.
pub fn count_real_roots(f: &UniPoly) -> Result<usize, RootError> {
    Ok(isolate_real_roots(f)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn q(p: i64, q: i64) -> UniPoly {
        UniPoly::qpq(&p.into(), &q.into())
    }

    #[test]
    fn q11_isolation() {
        let ivs = isolate_real_roots(&q(1, 1)).unwrap();
        assert_eq!(ivs.len(), 2);
        assert!(ivs[0].contains(&rat(-1, 1)) || ivs[0].lo == rat(-1, 1));
        let r = refine_root(&q(1, 1), &ivs[1], 40).unwrap();
        assert_eq!(r, RootInterval::point(rat(1, 1)));
    }

    #[test]
    fn sqrt_two() {
        let f = UniPoly::from_i64(&[-2, 0, 1]);
        let ivs = isolate_real_roots(&f).unwrap();
        assert_eq!(ivs.len(), 2);
        let r = refine_root(&f, &ivs[1], 60).unwrap();
        assert!(r.width() <= rat(1, 1) / BigRational::from(BigInt::one() << 60u32));
        let (lo, hi) = r.to_f64();
        assert!(lo <= std::f64::consts::SQRT_2 + 1e-15 && hi >= std::f64::consts::SQRT_2 - 1e-15);
    }

    #[test]
    fn bisector_real_root_site() {
        // pt = 1, qt = 100
        let f = UniPoly::bisector(&1.into(), &100.into());
        let pos: Vec<_> = isolate_real_roots(&f)
            .unwrap()
            .into_iter()
            .filter(|iv| iv.lo >= BigRational::zero())
            .collect();
        assert_eq!(pos.len(), 1);
        let r = refine_root(&f, &pos[0], 20).unwrap();
        assert!(r.lo > rat(1050926, 100) && r.hi < rat(10510, 1));
    }

    #[test]
    fn bisector_negative_pt() {
        let f = UniPoly::bisector(&(-1).into(), &200.into());
        let pos: Vec<_> = isolate_real_roots(&f)
            .unwrap()
            .into_iter()
            .filter(|iv| iv.lo >= BigRational::zero())
            .collect();
        assert_eq!(pos.len(), 1);
        let r = refine_root(&f, &pos[0], 80).unwrap();
        assert!(r.lo > rat(39010, 1) && r.hi < rat(3901037, 100));
    }

    #[test]
    fn integer_root_examples() {
        assert_eq!(
            integer_roots(&q(1, 1)).unwrap(),
            vec![BigInt::from(-1), BigInt::from(1)]
        );
        assert!(integer_roots(&q(1, 2)).unwrap().is_empty());
        assert_eq!(
            integer_roots(&UniPoly::from_i64(&[4, -4, 1])).unwrap(),
            vec![BigInt::from(2)]
        );
        assert_eq!(
            integer_roots(&UniPoly::from_i64(&[0, -6, 1, 1])).unwrap(),
            vec![BigInt::from(-3), BigInt::from(0), BigInt::from(2)]
        );
        // (t^2 - 49)(t^2 + 3)(t^2 + 5): one positive root in s = t^2
        let f = UniPoly::from_i64(&[-735, 0, -377, 0, -41, 0, 1]);
        assert_eq!(
            integer_roots(&f).unwrap(),
            vec![BigInt::from(-7), BigInt::from(7)]
        );
        // (t^2 - 4)(t^2 - 9)(t^2 - 10): three positive roots in s
        let f = UniPoly::from_i64(&[-360, 0, 166, 0, -23, 0, 1]);
        assert_eq!(
            integer_roots(&f).unwrap(),
            vec![
                BigInt::from(-3),
                BigInt::from(-2),
                BigInt::from(2),
                BigInt::from(3)
            ]
        );
        let h = f.even_to_s().unwrap();
        assert_eq!(
            guided_positive_integer_roots(&h),
            Some(vec![BigInt::from(4), BigInt::from(9), BigInt::from(10)])
        );
        // (t^2 - 50)(t^2 + 1)
        let f = UniPoly::from_i64(&[-50, 0, -49, 0, 1]);
        assert!(integer_roots(&f).unwrap().is_empty());
    }

    #[test]
    fn fast_path_matches_sturm() {
        for (a, b) in [(2, 3), (5, 7), (1, 40), (40, 1), (97, 98), (7, 300)] {
            let f = q(a, b);
            let h = f.even_to_s().unwrap();
            let fast = single_positive_integer_root(&h);
            let slow: Vec<BigInt> = {
                let g = squarefree_part(&h);
                isolate_real_roots(&g)
                    .unwrap()
                    .iter()
                    .filter(|iv| iv.hi.is_positive())
                    .filter_map(|iv| refine_with(&g, iv, |w| w < &BigRational::one()).ok())
                    .filter_map(|iv| {
                        let c = iv.lo.floor().to_integer() + BigInt::one();
                        (BigRational::from(c.clone()) < iv.hi || iv.is_exact()).then_some(c)
                    })
                    .filter(|c| h.eval(c).is_zero())
                    .collect()
            };
            if let Some(r) = fast {
                assert_eq!(r.into_iter().collect::<Vec<_>>(), slow);
            }
            let guided = guided_positive_integer_roots(&h).expect("guesses cover every root");
            assert_eq!(guided, slow);
        }
    }

    #[test]
    fn modulus_bound_holds() {
        let f = q(3, 5);
        let b = BigRational::from(root_modulus_bound(&f));
        for iv in isolate_real_roots(&f).unwrap() {
            let iv = refine_root(&f, &iv, 4).unwrap();
            assert!(iv.midpoint().abs() < b);
        }
    }

    #[test]
    fn no_sign_change_is_an_error() {
        let f = UniPoly::from_i64(&[-2, 0, 1]);
        let iv = RootInterval {
            lo: rat(2, 1),
            hi: rat(3, 1),
        };
        assert_eq!(refine_root(&f, &iv, 10), Err(RootError::NoSignChange));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            isolate_real_roots(&UniPoly::new(vec![])),
            Err(RootError::ZeroPolynomial)
        );
    }
}

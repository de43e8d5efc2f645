use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::real::RootInterval;
use super::unipoly::{ratpoly, UniPoly};
use super::RootError;
use crate::hp::{BigFloat, HpComplex};

pub const DEFAULT_BITS: u32 = 128;
pub const MAX_BITS: u32 = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Real,
    Complex,
}

impl RootKind {
    pub fn as_str(self) -> &'static str {
        match self {
            RootKind::Real => "real",
            RootKind::Complex => "complex",
        }
    }
}

/// A root approximation together with a disk that provably contains exactly
/// one distinct root of the polynomial.
#[derive(Clone, Debug)]
pub struct CertifiedRoot {
    pub center: HpComplex,
    pub radius: BigFloat,
    pub kind: RootKind,
    pub multiplicity: u32,
    /// Isolating interval, present for real roots.
    pub interval: Option<RootInterval>,
}

impl CertifiedRoot {
    /// Representative of a `t, -t` pair: positive imaginary part, or real
    /// and non-negative.
    pub fn is_upper(&self) -> bool {
        match self.center.im.signum() {
            1 => true,
            0 => !self.center.re.is_negative(),
            _ => false,
        }
    }

    pub fn center_rational(&self) -> (BigRational, BigRational) {
        self.center.to_rational()
    }

    /// Exact test of `|center - (x + iy)| < radius`.
    pub fn disk_contains(&self, x: &BigRational, y: &BigRational) -> bool {
        let (cx, cy) = self.center_rational();
        let r = self.radius.to_rational();
        let dx = cx - x;
        let dy = cy - y;
        &dx * &dx + &dy * &dy < &r * &r
    }
}

/// Certified approximations of all distinct complex roots with their
/// multiplicities. Precision doubles on certification failure up to
/// [`MAX_BITS`].
pub fn complex_roots(f: &UniPoly, bits: u32) -> Result<Vec<CertifiedRoot>, RootError> {
    if f.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut b = bits.max(64);
    loop {
        match try_roots(f, b) {
            Err(RootError::Precision { .. }) if b < MAX_BITS => b = (2 * b).min(MAX_BITS),
            r => return r,
        }
    }
}

/// The roots with `is_upper`, in the order returned.
pub fn upper_roots(roots: &[CertifiedRoot]) -> Vec<&CertifiedRoot> {
    roots.iter().filter(|r| r.is_upper()).collect()
}

fn try_roots(f: &UniPoly, bits: u32) -> Result<Vec<CertifiedRoot>, RootError> {
    let mut out = match f.even_to_s().filter(|h| h.degree() < f.degree()) {
        Some(h) => {
            let disks = certified_disks(&h, bits)?;
            let mut out = Vec::new();
            for d in &disks {
                out.extend(map_to_t(d, bits)?);
            }
            out
        }
        None => certified_disks(f, bits)?
            .iter()
            .map(|d| disk_root(d, bits))
            .collect(),
    };
    check_disjoint(&out, bits)?;
    out.sort_by(|a, b| {
        let ka = a.center.to_f64_pair();
        let kb = b.center.to_f64_pair();
        kb.1.total_cmp(&ka.1).then(kb.0.total_cmp(&ka.0))
    });
    Ok(out)
}

/// Disk `|z - (x + iy)|^2 <= rsq` holding exactly one root of a squarefree
/// factor of multiplicity `mult`.
#[derive(Clone, Debug)]
pub(crate) struct Disk {
    pub x: BigRational,
    pub y: BigRational,
    pub rsq: BigRational,
    pub real: bool,
    pub mult: u32,
}

pub(crate) fn certified_disks(f: &UniPoly, bits: u32) -> Result<Vec<Disk>, RootError> {
    let mut disks = Vec::new();
    for (factor, mult) in ratpoly::squarefree_decomposition(&f.to_rational()) {
        let g = UniPoly::from_rational(&factor);
        for z in approximate_roots(&g, bits)? {
            disks.push(certify(&g, z, mult, bits)?);
        }
    }
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            if !disks_separated(&disks[i], &disks[j]) {
                return Err(RootError::Precision { bits });
            }
        }
    }
    Ok(disks)
}

fn certify(g: &UniPoly, z: HpComplex, mult: u32, bits: u32) -> Result<Disk, RootError> {
    let snap = {
        let tol = z.norm_sqr().mul_pow2(-i64::from(bits));
        z.im.clone() * z.im.clone() <= tol
    };
    let (x, y) = z.to_rational();
    let y = if snap { BigRational::zero() } else { y };
    let d = BigInt::from(g.degree().expect("nonconstant"));
    let (gz, gpz, den) = eval_scaled(g, &x, &y);
    if gz.re.is_zero() && gz.im.is_zero() {
        return Ok(Disk {
            x,
            y,
            rsq: BigRational::zero(),
            real: snap,
            mult,
        });
    }
    let gp_norm = &gpz.re * &gpz.re + &gpz.im * &gpz.im;
    if gp_norm.is_zero() {
        return Err(RootError::Precision { bits });
    }
    // |g/g'| = |G| / (|G'| den), disk radius d |g/g'|
    let g_norm = &gz.re * &gz.re + &gz.im * &gz.im;
    let rsq = BigRational::new(&d * &d * g_norm, gp_norm * &den * &den);
    let real = if snap {
        true
    } else if &y * &y > rsq {
        false
    } else {
        return Err(RootError::Precision { bits });
    };
    Ok(Disk {
        x,
        y,
        rsq,
        real,
        mult,
    })
}

/// `(den^d g(z), den^(d-1) g'(z), den)` for `z = x + iy`, with `den` the
/// common denominator, all in Gaussian integers.
fn eval_scaled(g: &UniPoly, x: &BigRational, y: &BigRational) -> (Complex<BigInt>, Complex<BigInt>, BigInt) {
    let den = x.denom().lcm(y.denom());
    let zx = (x * BigRational::from(den.clone())).to_integer();
    let zy = (y * BigRational::from(den.clone())).to_integer();
    let z = Complex::new(zx, zy);
    let c = g.coeffs();
    let d = c.len() - 1;
    let mut acc = Complex::new(BigInt::zero(), BigInt::zero());
    let mut dacc = Complex::new(BigInt::zero(), BigInt::zero());
    let mut dpow = BigInt::one();
    for (k, cj) in c.iter().enumerate().rev() {
        // value: sum c_j z^j den^(d-j); derivative: sum j c_j z^(j-1) den^(d-j)
        if k < d {
            dacc = dacc * &z + Complex::new(BigInt::from(k + 1) * &c[k + 1] * &dpow / &den, BigInt::zero());
        }
        acc = acc * &z + Complex::new(cj * &dpow, BigInt::zero());
        dpow *= &den;
    }
    (acc, dacc, den)
}

fn disks_separated(a: &Disk, b: &Disk) -> bool {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    let dist = &dx * &dx + &dy * &dy;
    // r_a + r_b < D  <=>  2 r_a r_b < D^2 - r_a^2 - r_b^2 with the right side positive
    let rhs = dist - &a.rsq - &b.rsq;
    rhs.is_positive() && BigRational::from_integer(4.into()) * &a.rsq * &b.rsq < &rhs * &rhs
}

/// Upper bound for `sqrt(r)` as a dyadic float.
pub(crate) fn sqrt_upper(r: &BigRational) -> BigFloat {
    if r.is_zero() {
        return BigFloat::zero(64);
    }
    let mut s = BigFloat::from_rational(r, 96).sqrt();
    loop {
        let sr = s.to_rational();
        if &(&sr * &sr) >= r {
            return s;
        }
        s = s.clone() + s.mul_pow2(-80);
    }
}

fn disk_root(d: &Disk, bits: u32) -> CertifiedRoot {
    let prec = bits + 32;
    let center = HpComplex::new(
        BigFloat::from_rational(&d.x, prec),
        BigFloat::from_rational(&d.y, prec),
    );
    let radius = sqrt_upper(&d.rsq);
    let interval = d.real.then(|| {
        let r = radius.to_rational();
        if r.is_zero() {
            RootInterval::point(d.x.clone())
        } else {
            RootInterval {
                lo: &d.x - &r,
                hi: &d.x + &r,
            }
        }
    });
    CertifiedRoot {
        center,
        radius,
        kind: if d.real { RootKind::Real } else { RootKind::Complex },
        multiplicity: d.mult,
        interval,
    }
}

/// The pair `t, -t` with `t^2` in the disk.
fn map_to_t(d: &Disk, bits: u32) -> Result<Vec<CertifiedRoot>, RootError> {
    let prec = bits + 32;
    if d.x.is_zero() && d.y.is_zero() && d.rsq.is_zero() {
        return Ok(vec![CertifiedRoot {
            center: HpComplex::zero(prec),
            radius: BigFloat::zero(64),
            kind: RootKind::Real,
            multiplicity: 2 * d.mult,
            interval: Some(RootInterval::point(BigRational::zero())),
        }]);
    }
    let rho = sqrt_upper(&d.rsq).to_rational();
    let s0 = HpComplex::new(
        BigFloat::from_rational(&d.x, prec),
        BigFloat::from_rational(&d.y, prec),
    );
    let mut t0 = s0.sqrt();
    if t0.im.is_negative() || (t0.im.is_zero() && t0.re.is_negative()) {
        t0 = -t0;
    }
    let kind = if d.real {
        if (&d.x - &rho).is_positive() {
            t0.im = BigFloat::zero(prec);
            RootKind::Real
        } else if (&d.x + &rho).is_negative() {
            t0.re = BigFloat::zero(prec);
            RootKind::Complex
        } else {
            return Err(RootError::Precision { bits });
        }
    } else {
        RootKind::Complex
    };
    let t0 = t0.with_prec(prec);
    // |sqrt(sigma) - t0| <= min(sqrt(rho), rho / (2|t0| - sqrt(rho))), plus
    // the rounding error of t0 itself
    let tabs = t0.abs();
    let sq = sqrt_upper(&rho).to_rational();
    let tabs_r = tabs.to_rational();
    let two = BigRational::from_integer(2.into());
    let lower_abs =
        &tabs_r * (BigRational::one() - BigRational::new(BigInt::one(), BigInt::one() << (prec - 8)));
    let denom = &two * &lower_abs - &sq;
    let mut delta = sq.clone();
    if denom.is_positive() {
        let alt = &rho / &denom;
        if alt < delta {
            delta = alt;
        }
    }
    let rounding = &tabs_r * BigRational::new(BigInt::one(), BigInt::one() << (prec - 8));
    let delta = delta + rounding;
    if delta >= lower_abs {
        return Err(RootError::Precision { bits });
    }
    let radius = sqrt_upper(&(&delta * &delta));
    let (cx, _) = t0.to_rational();
    let interval = (kind == RootKind::Real).then(|| {
        let r = radius.to_rational();
        RootInterval {
            lo: &cx - &r,
            hi: &cx + &r,
        }
    });
    let up = CertifiedRoot {
        center: t0.clone(),
        radius: radius.clone(),
        kind,
        multiplicity: d.mult,
        interval: interval.clone(),
    };
    let down = CertifiedRoot {
        center: -t0,
        radius,
        kind,
        multiplicity: d.mult,
        interval: interval.map(|iv| RootInterval {
            lo: -iv.hi,
            hi: -iv.lo,
        }),
    };
    Ok(vec![up, down])
}

fn check_disjoint(roots: &[CertifiedRoot], bits: u32) -> Result<(), RootError> {
    let disks: Vec<Disk> = roots
        .iter()
        .map(|r| {
            let (x, y) = r.center_rational();
            let rr = r.radius.to_rational();
            Disk {
                x,
                y,
                rsq: &rr * &rr,
                real: r.kind == RootKind::Real,
                mult: r.multiplicity,
            }
        })
        .collect();
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            if !disks_separated(&disks[i], &disks[j]) {
                return Err(RootError::Precision { bits });
            }
        }
    }
    Ok(())
}

/// Simultaneous approximation of all roots of a squarefree polynomial:
/// a double-precision pass followed by high-precision polishing.
pub(crate) fn approximate_roots(g: &UniPoly, bits: u32) -> Result<Vec<HpComplex>, RootError> {
    let n = g.degree().expect("nonzero");
    let prec = bits + 32;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let r = BigRational::new(-g.coeffs()[0].clone(), g.coeffs()[1].clone());
        return Ok(vec![HpComplex::from_real(BigFloat::from_rational(&r, prec))]);
    }
    let (scaled, k) = scaled_f64(g);
    let start = aberth_f64(&scaled);
    let coeffs: Vec<BigFloat> = g
        .coeffs()
        .iter()
        .map(|c| BigFloat::from_bigint(c, prec))
        .collect();
    let mut z: Vec<HpComplex> = start
        .iter()
        .map(|w| HpComplex::from_f64(w.re, w.im, prec).mul_pow2(k))
        .collect();
    for _ in 0..80 {
        let mut done = true;
        for i in 0..n {
            let (p, dp) = horner(&coeffs, &z[i], prec);
            if p.is_zero() {
                continue;
            }
            if dp.is_zero() {
                return Err(RootError::Precision { bits });
            }
            let w = p / dp;
            let mut s = HpComplex::zero(prec);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = z[i].clone() - zj.clone();
                    if diff.is_zero() {
                        return Err(RootError::Precision { bits });
                    }
                    s = s + HpComplex::from_real(BigFloat::from_i64(1, prec)) / diff;
                }
            }
            let denom = HpComplex::from_real(BigFloat::from_i64(1, prec)) - w.clone() * s;
            let corr = if denom.is_zero() { w } else { w / denom };
            let small = corr.norm_sqr() <= z[i].norm_sqr().mul_pow2(-2 * i64::from(bits + 8));
            if !small {
                done = false;
            }
            z[i] = z[i].clone() - corr;
        }
        if done {
            return Ok(z.into_iter().map(|w| w.with_prec(bits + 16)).collect());
        }
    }
    Err(RootError::Precision { bits })
}

/// Double-precision approximations of all roots, without certification.
pub(crate) fn approximate_roots_f64(g: &UniPoly) -> Vec<Complex64> {
    match g.degree() {
        None | Some(0) => Vec::new(),
        Some(_) => {
            let (scaled, k) = scaled_f64(g);
            let s = 2f64.powi(k as i32);
            aberth_f64(&scaled).into_iter().map(|z| z * s).collect()
        }
    }
}

fn horner(c: &[BigFloat], z: &HpComplex, prec: u32) -> (HpComplex, HpComplex) {
    let mut p = HpComplex::zero(prec);
    let mut dp = HpComplex::zero(prec);
    for cj in c.iter().rev() {
        dp = dp * z.clone() + p.clone();
        p = p * z.clone() + HpComplex::from_real(cj.clone());
    }
    (p, dp)
}

/// Coefficients of `g(2^k x)` scaled into double range, and `k` chosen so
/// that the roots in `x` have modulus near one.
fn scaled_f64(g: &UniPoly) -> (Vec<Complex64>, i64) {
    let c = g.coeffs();
    let n = c.len() - 1;
    let bn = c[n].bits() as i64;
    let k = (0..n)
        .filter(|&j| !c[j].is_zero())
        .map(|j| (c[j].bits() as i64 - bn).div_euclid((n - j) as i64))
        .max()
        .unwrap_or(0);
    let e = (0..=n)
        .filter(|&j| !c[j].is_zero())
        .map(|j| c[j].bits() as i64 + k * j as i64)
        .max()
        .unwrap_or(0);
    let scaled = c
        .iter()
        .enumerate()
        .map(|(j, cj)| {
            let v = BigFloat::from_bigint(cj, 64).mul_pow2(k * j as i64 - e).to_f64();
            Complex64::new(v, 0.0)
        })
        .collect();
    (scaled, k)
}

fn aberth_f64(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n];
    let bound = (0..n)
        .map(|j| (c[j] / lead).norm().powf(1.0 / (n - j) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let r0 = bound;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(r0, th)
        })
        .collect();
    for _ in 0..2000 {
        let mut maxrel = 0.0f64;
        for i in 0..n {
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for cj in c.iter().rev() {
                dp = dp * z[i] + p;
                p = p * z[i] + cj;
            }
            if p.norm() == 0.0 {
                continue;
            }
            let w = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let corr = w / (Complex64::new(1.0, 0.0) - w * s);
            if corr.is_finite() {
                z[i] -= corr;
                maxrel = maxrel.max(corr.norm() / z[i].norm().max(1e-300));
            }
        }
        if maxrel < 1e-14 {
            break;
        }
    }
    z
}

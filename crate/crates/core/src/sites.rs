//! The five sites that hold the upper-half-plane roots along the bisector
//! direction: one real interval around `qt^2 + 5 pt qt + 10 pt^2` and four
//! disks around `i qt^2 + u pt qt - (u + i u^2) pt^2 / 2`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::hp::{BigFloat, HpComplex};
use crate::roots::{
    complex_roots, upper_roots, CertifiedRoot, QuarticRoots, RootError, RootKind, UniPoly, MAX_BITS,
};

/// Interval half-width numerator: sites have width `74 |pt|^3 / qt`.
pub const REAL_WIDTH: i64 = 74;
/// Disk radius numerator: `51 |pt|^3 / qt`.
pub const DISK_RADIUS: i64 = 51;
/// Regime: `qt >= 97 |pt|`.
pub const REGIME: i64 = 97;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SiteError {
    #[error("qt must be positive")]
    NonPositiveQ,
    #[error("qt >= 97|pt| does not hold")]
    RegimeNotSatisfied,
    #[error("membership undecided at the current precision")]
    Undecided,
    #[error(transparent)]
    Root(#[from] RootError),
}

/// Open interval `(lower, upper)`, or the single point `lower == upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSite {
    pub lower: BigRational,
    pub upper: BigRational,
    /// `qt^2 + 5 pt qt + 10 pt^2`, the closed end of the interval.
    pub anchor: BigRational,
}

impl RealSite {
    pub fn is_point(&self) -> bool {
        self.lower == self.upper
    }

    pub fn half_width(&self) -> BigRational {
        &self.upper - &self.lower
    }
}

#[derive(Clone, Debug)]
pub struct ComplexSite {
    pub u_index: usize,
    pub center: HpComplex,
    pub radius: BigRational,
}

#[derive(Clone, Debug)]
pub struct SiteSet {
    pub p_tilde: BigInt,
    pub q_tilde: BigInt,
    pub real: RealSite,
    pub complex: [ComplexSite; 4],
    pub regime_ok: bool,
}

fn rat(n: &BigInt) -> BigRational {
    BigRational::from(n.clone())
}

fn rat_i(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn regime_ok(pt: &BigInt, qt: &BigInt) -> bool {
    qt >= &(BigInt::from(REGIME) * pt.abs())
}

pub fn build_sites(pt: &BigInt, qt: &BigInt, u: &QuarticRoots) -> Result<SiteSet, SiteError> {
    if !qt.is_positive() {
        return Err(SiteError::NonPositiveQ);
    }
    let (p, q) = (rat(pt), rat(qt));
    let anchor = &q * &q + rat_i(5) * &p * &q + rat_i(10) * &p * &p;
    let a3 = rat(&pt.abs()).pow(3);
    let width = rat_i(REAL_WIDTH) * &a3 / &q;
    let real = if pt.is_positive() {
        RealSite {
            lower: &anchor - &width,
            upper: anchor.clone(),
            anchor,
        }
    } else if pt.is_negative() {
        RealSite {
            lower: anchor.clone(),
            upper: &anchor + &width,
            anchor,
        }
    } else {
        RealSite {
            lower: anchor.clone(),
            upper: anchor.clone(),
            anchor,
        }
    };
    let radius = rat_i(DISK_RADIUS) * &a3 / &q;
    let prec = u.u2.prec();
    let bf = |n: &BigInt| HpComplex::from_real(BigFloat::from_bigint(n, prec));
    let i = HpComplex::i(prec);
    let center = |ui: &HpComplex| {
        let lin = ui.clone() * bf(pt) * bf(qt);
        let quad = (ui.clone() + i.clone() * ui.clone() * ui.clone()) * bf(&(pt * pt));
        i.clone() * bf(&(qt * qt)) + lin - quad.mul_pow2(-1)
    };
    let complex = [2, 3, 4, 5].map(|k| ComplexSite {
        u_index: k,
        center: center(u.get(k).expect("index 2..=5")),
        radius: radius.clone(),
    });
    Ok(SiteSet {
        p_tilde: pt.clone(),
        q_tilde: qt.clone(),
        real,
        complex,
        regime_ok: regime_ok(pt, qt),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub a: usize,
    pub b: usize,
    pub distance: f64,
    pub radii_sum: f64,
    pub margin: f64,
    /// Lower bound on the distance valid in the whole regime.
    pub regime_bound: f64,
    /// The `qt`-dependent lower bound, reported for information.
    pub asymptotic_bound: f64,
    pub regime_bound_holds: bool,
    pub asymptotic_bound_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DisjointReport {
    pub pairs: Vec<PairCheck>,
    pub pass: bool,
}

impl DisjointReport {
    pub fn min_margin(&self) -> f64 {
        self.pairs.iter().map(|p| p.margin).fold(f64::INFINITY, f64::min)
    }
}

fn dist(a: &HpComplex, b: &HpComplex) -> f64 {
    (a.clone() - b.clone()).abs().to_f64()
}

/// Pairwise distances between the sites. The interval is treated as the
/// disk of radius `74 |pt|^3 / qt` around its closed end. Passing requires
/// positive margins and the two regime-wide distance bounds.
pub fn check_disjoint(s: &SiteSet) -> Result<DisjointReport, SiteError> {
    if !s.regime_ok || s.p_tilde.is_zero() {
        return Err(SiteError::RegimeNotSatisfied);
    }
    let a = s.p_tilde.abs().to_f64().unwrap_or(f64::NAN);
    let q = s.q_tilde.to_f64().unwrap_or(f64::NAN);
    let prec = s.complex[0].center.prec();
    let anchor = HpComplex::from_real(BigFloat::from_rational(&s.real.anchor, prec));
    let r1 = to_f64(&s.real.half_width());
    let mut pairs = Vec::new();
    for c in &s.complex {
        let d = dist(&anchor, &c.center);
        let rs = r1 + to_f64(&c.radius);
        let regime_bound = 12480.0 * a * a;
        let asymptotic_bound = 1.4 * (q - 2.5 * a).powi(2) - 21.75 * a * a;
        pairs.push(PairCheck {
            a: 1,
            b: c.u_index,
            distance: d,
            radii_sum: rs,
            margin: d - rs,
            regime_bound,
            asymptotic_bound,
            regime_bound_holds: d >= regime_bound,
            asymptotic_bound_holds: d >= asymptotic_bound,
        });
    }
    for i in 0..4 {
        for j in i + 1..4 {
            let (ci, cj) = (&s.complex[i], &s.complex[j]);
            let d = dist(&ci.center, &cj.center);
            let rs = to_f64(&(&ci.radius + &cj.radius));
            let regime_bound = 87.0 * a * a;
            let asymptotic_bound = 0.98 * a * q - 8.0 * a * a;
            pairs.push(PairCheck {
                a: ci.u_index,
                b: cj.u_index,
                distance: d,
                radii_sum: rs,
                margin: d - rs,
                regime_bound,
                asymptotic_bound,
                regime_bound_holds: d >= regime_bound,
                asymptotic_bound_holds: d >= asymptotic_bound,
            });
        }
    }
    let pass = pairs.iter().all(|p| p.margin > 0.0 && p.regime_bound_holds);
    Ok(DisjointReport { pairs, pass })
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisCheck {
    pub u_index: usize,
    pub im_center: f64,
    pub radius: f64,
    pub margin: f64,
    /// `9013 |pt|^2`, valid in the whole regime.
    pub regime_bound: f64,
    /// `(qt - 2|pt|)^2 - 12 |pt|^2`.
    pub asymptotic_bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisReport {
    pub sites: Vec<AxisCheck>,
    pub min_margin: f64,
    pub pass: bool,
}

/// Distance of each disk from the real axis. For `pt = 0` the complex site
/// is the point `i qt^2` and the margin is `qt^2`.
pub fn check_real_axis_separation(s: &SiteSet) -> Result<AxisReport, SiteError> {
    if !s.regime_ok {
        return Err(SiteError::RegimeNotSatisfied);
    }
    let a = s.p_tilde.abs().to_f64().unwrap_or(f64::NAN);
    let q = s.q_tilde.to_f64().unwrap_or(f64::NAN);
    let sites: Vec<AxisCheck> = s
        .complex
        .iter()
        .map(|c| {
            let im = c.center.im.to_f64();
            let r = to_f64(&c.radius);
            AxisCheck {
                u_index: c.u_index,
                im_center: im,
                radius: r,
                margin: im - r,
                regime_bound: 9013.0 * a * a,
                asymptotic_bound: (q - 2.0 * a).powi(2) - 12.0 * a * a,
            }
        })
        .collect();
    let min_margin = sites.iter().map(|x| x.margin).fold(f64::INFINITY, f64::min);
    let pass = sites
        .iter()
        .all(|x| x.margin > 0.0 && x.im_center >= x.regime_bound && x.radius < a * a.max(1.0));
    Ok(AxisReport {
        sites,
        min_margin,
        pass,
    })
}

/// Index of the root assigned to each site: `real`, then `complex[k]` for
/// `u_index = k + 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub real: Option<usize>,
    pub complex: [Option<usize>; 4],
    /// Upper-half-plane roots that fell in no site.
    pub unassigned: Vec<usize>,
}

impl Assignment {
    pub fn is_bijection(&self) -> bool {
        self.real.is_some() && self.complex.iter().all(Option::is_some) && self.unassigned.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Membership {
    In,
    Out,
    Unknown,
}

fn in_real_site(root: &CertifiedRoot, site: &RealSite) -> Membership {
    if root.kind != RootKind::Real {
        return Membership::Out;
    }
    let Some(iv) = &root.interval else {
        return Membership::Unknown;
    };
    if site.is_point() {
        // the point is itself a root, so an isolating interval around it
        // holds exactly that root
        return if iv.contains(&site.lower) {
            Membership::In
        } else {
            Membership::Out
        };
    }
    if iv.lo >= site.lower && iv.hi <= site.upper {
        if iv.lo > site.lower && iv.hi < site.upper {
            Membership::In
        } else {
            Membership::Unknown
        }
    } else if iv.hi <= site.lower || iv.lo >= site.upper {
        Membership::Out
    } else {
        Membership::Unknown
    }
}

fn in_disk(root: &CertifiedRoot, site: &ComplexSite) -> Membership {
    let d = dist(&root.center, &site.center);
    let r = root.radius.to_f64();
    let big_r = to_f64(&site.radius);
    // slack for the floating evaluation of the distance
    let eps = 1e-12 * (1.0 + root.center.abs().to_f64());
    if big_r.is_zero() {
        return if d <= r + eps && root.multiplicity > 1 {
            Membership::In
        } else if d > r + eps {
            Membership::Out
        } else {
            Membership::Unknown
        };
    }
    if d + r + eps < big_r {
        Membership::In
    } else if d - r - eps >= big_r {
        Membership::Out
    } else {
        Membership::Unknown
    }
}

/// Places each upper-half-plane root into a site. Complex roots are paired
/// with the nearest disk center.
pub fn locate(roots: &[CertifiedRoot], s: &SiteSet) -> Result<Assignment, SiteError> {
    let upper: Vec<(usize, &CertifiedRoot)> =
        roots.iter().enumerate().filter(|(_, r)| r.is_upper()).collect();
    let mut out = Assignment {
        real: None,
        complex: [None; 4],
        unassigned: Vec::new(),
    };
    for (idx, root) in upper {
        match in_real_site(root, &s.real) {
            Membership::In => {
                if out.real.replace(idx).is_some() {
                    out.unassigned.push(idx);
                }
                continue;
            }
            Membership::Unknown => return Err(SiteError::Undecided),
            Membership::Out => {}
        }
        let (k, _) = s
            .complex
            .iter()
            .enumerate()
            .map(|(k, c)| (k, dist(&root.center, &c.center)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("four sites");
        match in_disk(root, &s.complex[k]) {
            Membership::In => {
                if out.complex[k].replace(idx).is_some() {
                    out.unassigned.push(idx);
                }
            }
            Membership::Out => out.unassigned.push(idx),
            Membership::Unknown => return Err(SiteError::Undecided),
        }
    }
    Ok(out)
}

/// Distances of the assigned roots from the closed end of the interval and
/// from the disk centers.
#[derive(Clone, Debug, Serialize)]
pub struct Remainders {
    pub real: f64,
    pub complex: [f64; 4],
    pub real_bound: f64,
    pub complex_bound: f64,
}

pub fn remainders(roots: &[CertifiedRoot], s: &SiteSet, a: &Assignment) -> Option<Remainders> {
    let prec = s.complex[0].center.prec();
    let anchor = HpComplex::from_real(BigFloat::from_rational(&s.real.anchor, prec));
    let real = dist(&roots[a.real?].center, &anchor);
    let mut complex = [0.0; 4];
    for k in 0..4 {
        complex[k] = dist(&roots[a.complex[k]?].center, &s.complex[k].center);
    }
    let a3 = s.p_tilde.abs().pow(3);
    let q = rat(&s.q_tilde);
    Some(Remainders {
        real,
        complex,
        real_bound: to_f64(&(rat_i(REAL_WIDTH) * rat(&a3) / &q)),
        complex_bound: to_f64(&(rat_i(DISK_RADIUS) * rat(&a3) / q)),
    })
}

/// Roots of the bisector polynomial at `(pt, qt)` placed into the sites,
/// with precision raised until every membership is decided.
pub fn locate_certified(
    pt: &BigInt,
    qt: &BigInt,
    u: &QuarticRoots,
    bits: u32,
) -> Result<(Vec<CertifiedRoot>, SiteSet, Assignment), SiteError> {
    let sites = build_sites(pt, qt, u)?;
    let f = UniPoly::bisector(pt, qt);
    let mut b = bits;
    loop {
        let roots = complex_roots(&f, b)?;
        match locate(&roots, &sites) {
            Err(SiteError::Undecided) if b < MAX_BITS => b = (2 * b).min(MAX_BITS),
            Ok(a) => return Ok((roots, sites, a)),
            Err(e) => return Err(e),
        }
    }
}

/// Count of upper-half-plane roots, for diagnostics.
pub fn upper_count(roots: &[CertifiedRoot]) -> usize {
    upper_roots(roots).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::solve_quartic_u;

    fn u() -> QuarticRoots {
        solve_quartic_u(128).unwrap()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn degenerate_points() {
        let s = build_sites(&b(0), &b(5), &u()).unwrap();
        assert!(s.real.is_point());
        assert_eq!(s.real.lower, rat_i(25));
        for c in &s.complex {
            assert_eq!(c.center.to_f64_pair(), (0.0, 25.0));
            assert!(c.radius.is_zero());
        }
        let ax = check_real_axis_separation(&s).unwrap();
        assert_eq!(ax.min_margin, 25.0);
    }

    #[test]
    fn interval_at_sample() {
        let s = build_sites(&b(1), &b(100), &u()).unwrap();
        assert_eq!(s.real.lower, BigRational::new(b(1050926), b(100)));
        assert_eq!(s.real.upper, rat_i(10510));
        let c2 = &s.complex[0];
        assert_eq!(c2.radius, BigRational::new(b(51), b(100)));
        let (re, im) = c2.center.to_f64_pair();
        // u2 = i v: i 10^4 + 100 i v - (i v - i v^2)/2
        let v = 0.4863801704f64;
        assert!(re.abs() < 1e-20);
        assert!((im - (10000.0 + 100.0 * v - (v - v * v) / 2.0)).abs() < 1e-6);
    }

    #[test]
    fn disjoint_at_regime_boundary() {
        for (p, q) in [(1, 97), (-3, 291), (2, 194)] {
            let s = build_sites(&b(p), &b(q), &u()).unwrap();
            let d = check_disjoint(&s).unwrap();
            assert!(d.pass, "{p} {q}: {d:?}");
            let a = check_real_axis_separation(&s).unwrap();
            assert!(a.pass, "{p} {q}: {a:?}");
        }
        let s = build_sites(&b(1), &b(97), &u()).unwrap();
        let a = check_real_axis_separation(&s).unwrap();
        assert!(a.min_margin >= 9012.0);
    }

    #[test]
    fn outside_regime_rejected() {
        let s = build_sites(&b(2), &b(100), &u()).unwrap();
        assert!(!s.regime_ok);
        assert_eq!(check_disjoint(&s).unwrap_err(), SiteError::RegimeNotSatisfied);
    }

    #[test]
    fn bijection_samples() {
        let u = u();
        for (p, q) in [(1, 100), (-1, 97), (5, 485), (-7, 2000)] {
            let (roots, s, a) = locate_certified(&b(p), &b(q), &u, 128).unwrap();
            assert!(a.is_bijection(), "{p} {q}: {a:?}");
            let r = remainders(&roots, &s, &a).unwrap();
            assert!(r.real < r.real_bound);
            assert!(r.complex.iter().all(|&x| x < r.complex_bound));
        }
    }

    #[test]
    fn degenerate_location() {
        let u = u();
        let (roots, _, a) = locate_certified(&b(0), &b(7), &u, 128).unwrap();
        assert!(a.real.is_some());
        assert_eq!(roots[a.real.unwrap()].center.to_f64_pair(), (49.0, 0.0));
        let k = a.complex.iter().flatten().next().copied().unwrap();
        assert_eq!(roots[k].multiplicity, 4);
        assert_eq!(roots[k].center.to_f64_pair(), (0.0, 49.0));
    }
}

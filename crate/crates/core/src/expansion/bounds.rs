use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::derive::{uq_eval, ComplexRemainderEq, RealRemainderEq, UPoly};
use crate::exactpoly::MultiPoly;
use crate::hp::HpComplex;
use crate::roots::QuarticRoots;
use num_bigint::BigInt;

/// `|f| < 1142 |pt|^3` on the real domain.
pub const REAL_BOUND: u64 = 1142;
/// Half-width of the `c` interval in units of `|pt|^3`.
pub const REAL_C_EXTENT: u64 = 74;
/// Radius of the `c` disk in units of `|pt|^3`.
pub const DISK_RADIUS: u64 = 51;
/// `|z| <= 1 / (97 |pt|)`.
pub const Z_DENOM: u64 = 97;
/// `|phi(u2, ...)| <= 1174818 |pt|^6`.
pub const PHI_U2_BOUND: u64 = 1174818;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Bound on the full left side for each root index, in units of `|pt|^6`.
pub fn lhs_bound(u_index: usize) -> Option<u64> {
    match u_index {
        2 => Some(1189840),
        3 => Some(16504669),
        4 | 5 => Some(2513770),
        _ => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub suite: &'static str,
    pub u_index: Option<usize>,
    pub p_tilde: i64,
    pub sampled_max: f64,
    pub limit: f64,
    pub margin: f64,
    pub samples: usize,
    pub seed: u64,
    /// Which function was bounded: `f`, `phi`, or `lhs`.
    pub quantity: &'static str,
    /// Termwise over-estimate on the whole domain.
    pub envelope: f64,
}

impl BoundReport {
    pub fn passed(&self) -> bool {
        self.margin > 0.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RoucheReport {
    pub suite: &'static str,
    pub u_index: usize,
    pub p_tilde: i64,
    pub rhs_modulus: f64,
    pub limit: f64,
    pub ratio: f64,
    pub sampled_ratio: Option<f64>,
}

impl RoucheReport {
    pub fn passed(&self) -> bool {
        self.ratio > 1.0 && self.sampled_ratio.is_none_or(|r| r > 1.0)
    }
}

/// Polynomial in `(pt, c, z)` with double coefficients, for fast sampling.
#[derive(Clone, Debug)]
pub struct SamplePoly {
    terms: Vec<(Complex64, [u32; 3])>,
    max_exp: [u32; 3],
}

impl SamplePoly {
    pub fn from_int(p: &MultiPoly<BigInt>) -> Self {
        use num_traits::ToPrimitive;
        Self::build(p.terms().map(|(m, c)| {
            (
                Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0),
                [m.0[0], m.0[1], m.0[2]],
            )
        }))
    }

    /// Coefficients evaluated at `u`.
    pub fn from_upoly(p: &UPoly, u: &HpComplex) -> Self {
        Self::build(
            p.terms()
                .map(|(m, c)| (uq_eval(c, u).to_complex_f64(), [m.0[0], m.0[1], m.0[2]])),
        )
    }

    fn build(terms: impl Iterator<Item = (Complex64, [u32; 3])>) -> Self {
        let terms: Vec<_> = terms.collect();
        let mut max_exp = [0; 3];
        for (_, e) in &terms {
            for i in 0..3 {
                max_exp[i] = max_exp[i].max(e[i]);
            }
        }
        Self { terms, max_exp }
    }

    pub fn eval(&self, pt: f64, c: Complex64, z: f64) -> Complex64 {
        let pw = |x: Complex64, n: u32| {
            let mut v = Vec::with_capacity(n as usize + 1);
            v.push(Complex64::new(1.0, 0.0));
            for k in 1..=n as usize {
                v.push(v[k - 1] * x);
            }
            v
        };
        let pp = pw(Complex64::new(pt, 0.0), self.max_exp[0]);
        let cp = pw(c, self.max_exp[1]);
        let zp = pw(Complex64::new(z, 0.0), self.max_exp[2]);
        self.terms
            .iter()
            .map(|(a, e)| a * pp[e[0] as usize] * cp[e[1] as usize] * zp[e[2] as usize])
            .sum()
    }

    /// `sum |a| |pt|^i cmax^j zmax^k`.
    pub fn envelope(&self, pt: f64, cmax: f64, zmax: f64) -> f64 {
        self.terms
            .iter()
            .map(|(a, e)| {
                a.norm() * pt.abs().powi(e[0] as i32) * cmax.powi(e[1] as i32) * zmax.powi(e[2] as i32)
            })
            .sum()
    }
}

/// Sampling domain for `c`.
#[derive(Clone, Copy, Debug)]
enum Domain {
    /// Closed real interval.
    Interval(f64, f64),
    /// Closed disk around zero.
    Disk(f64),
}

fn mix(seed: u64, parts: &[i64]) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &p in parts {
        h = (h ^ p as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    h
}

/// Grid points (a quarter of the budget, including the domain boundary and
/// `z = +-zmax`) and seeded random points, in batches of fixed size so the
/// result does not depend on the thread count.
fn sample_max(
    poly: &SamplePoly,
    pt: f64,
    dom: Domain,
    zmax: f64,
    samples: usize,
    seed: u64,
    tag: &[i64],
) -> f64 {
    let grid_n = ((samples / 4) as f64).sqrt().floor().max(2.0) as usize;
    let mut grid = Vec::with_capacity(grid_n * grid_n);
    for i in 0..grid_n {
        let z = -zmax + 2.0 * zmax * i as f64 / (grid_n - 1) as f64;
        for j in 0..grid_n {
            let s = j as f64 / (grid_n - 1) as f64;
            let c = match dom {
                Domain::Interval(lo, hi) => Complex64::new(lo + (hi - lo) * s, 0.0),
                Domain::Disk(r) => Complex64::from_polar(r, 2.0 * std::f64::consts::PI * s),
            };
            grid.push((c, z));
        }
    }
    let grid_max = grid
        .par_iter()
        .map(|&(c, z)| poly.eval(pt, c, z).norm())
        .reduce(|| 0.0, f64::max);
    let rest = samples.saturating_sub(grid.len());
    const BATCH: usize = 512;
    let batches = rest.div_ceil(BATCH);
    let rand_max = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut parts = tag.to_vec();
            parts.push(b as i64);
            let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, &parts));
            let n = BATCH.min(rest - b * BATCH);
            let mut m = 0.0f64;
            for _ in 0..n {
                let z = if rng.gen_bool(0.25) {
                    if rng.gen_bool(0.5) {
                        zmax
                    } else {
                        -zmax
                    }
                } else {
                    rng.gen_range(-zmax..=zmax)
                };
                let c = match dom {
                    Domain::Interval(lo, hi) => Complex64::new(rng.gen_range(lo..=hi), 0.0),
                    Domain::Disk(r) => {
                        let rad = if rng.gen_bool(0.5) {
                            r
                        } else {
                            r * rng.gen::<f64>().sqrt()
                        };
                        Complex64::from_polar(rad, rng.gen_range(0.0..std::f64::consts::TAU))
                    }
                };
                m = m.max(poly.eval(pt, c, z).norm());
            }
            m
        })
        .reduce(|| 0.0, f64::max);
    grid_max.max(rand_max)
}

/// Samples `|f|` over `c` in the closed interval between 0 and
/// `-74 pt^3` and `|z| <= 1/(97|pt|)`.
pub fn bound_f(eq: &RealRemainderEq, p_tilde: i64, samples: usize, seed: u64) -> BoundReport {
    assert!(p_tilde != 0, "pt must be nonzero");
    let a = p_tilde.unsigned_abs() as f64;
    let ext = REAL_C_EXTENT as f64 * a.powi(3);
    let dom = if p_tilde > 0 {
        Domain::Interval(-ext, 0.0)
    } else {
        Domain::Interval(0.0, ext)
    };
    let zmax = 1.0 / (Z_DENOM as f64 * a);
    let poly = SamplePoly::from_int(&eq.f);
    let sampled_max = sample_max(&poly, p_tilde as f64, dom, zmax, samples, seed, &[0, 0, p_tilde]);
    let limit = REAL_BOUND as f64 * a.powi(3);
    BoundReport {
        suite: "bounds",
        u_index: None,
        p_tilde,
        sampled_max,
        limit,
        margin: limit - sampled_max,
        samples,
        seed,
        quantity: "f",
        envelope: poly.envelope(p_tilde as f64, ext, zmax),
    }
}

/// The full left side `p6_block(u) pt^6 + phi(u, pt, c, z)`.
pub fn lhs_poly(eq: &ComplexRemainderEq) -> UPoly {
    let block = UPoly::from_terms(
        &super::derive::REMAINDER_VARS,
        [(vec![6, 0, 0], eq.p6_block.clone())],
    )
    .expect("three variables");
    &eq.phi + &block
}

/// Samples the modulus of the left side at root `u_index` over the disk
/// `|c| <= 51 |pt|^3` and `|z| <= 1/(97|pt|)`.
pub fn bound_phi(
    eq: &ComplexRemainderEq,
    u: &QuarticRoots,
    u_index: usize,
    p_tilde: i64,
    samples: usize,
    seed: u64,
) -> Option<BoundReport> {
    let bound = lhs_bound(u_index)?;
    let poly = SamplePoly::from_upoly(&lhs_poly(eq), u.get(u_index)?);
    Some(disk_report(&poly, "lhs", bound, u_index, p_tilde, samples, seed))
}

/// Samples `|phi(u2, ...)|` alone.
pub fn bound_phi_alone(
    eq: &ComplexRemainderEq,
    u: &QuarticRoots,
    p_tilde: i64,
    samples: usize,
    seed: u64,
) -> BoundReport {
    let poly = SamplePoly::from_upoly(&eq.phi, &u.u2);
    disk_report(&poly, "phi", PHI_U2_BOUND, 2, p_tilde, samples, seed)
}

fn disk_report(
    poly: &SamplePoly,
    quantity: &'static str,
    bound: u64,
    u_index: usize,
    p_tilde: i64,
    samples: usize,
    seed: u64,
) -> BoundReport {
    assert!(p_tilde != 0, "pt must be nonzero");
    let a = p_tilde.unsigned_abs() as f64;
    let r = DISK_RADIUS as f64 * a.powi(3);
    let zmax = 1.0 / (Z_DENOM as f64 * a);
    let qtag = if quantity == "phi" { 1 } else { 2 };
    let sampled_max = sample_max(
        poly,
        p_tilde as f64,
        Domain::Disk(r),
        zmax,
        samples,
        seed,
        &[qtag, u_index as i64, p_tilde],
    );
    let limit = bound as f64 * a.powi(6);
    BoundReport {
        suite: "bounds",
        u_index: Some(u_index),
        p_tilde,
        sampled_max,
        limit,
        margin: limit - sampled_max,
        samples,
        seed,
        quantity,
        envelope: poly.envelope(p_tilde as f64, r, zmax),
    }
}

/// Modulus of the right side `rhs_coefficient pt^3 c` on the disk boundary
/// against the left-side bound. The ratio does not depend on `pt`.
pub fn rouche_check(
    eq: &ComplexRemainderEq,
    u_index: usize,
    p_tilde: i64,
    sampled: Option<&BoundReport>,
) -> Option<RoucheReport> {
    use num_traits::ToPrimitive;
    let bound = lhs_bound(u_index)?;
    let a6 = (p_tilde.unsigned_abs() as f64).powi(6);
    let rhs = (&eq.rhs_coefficient * BigInt::from(DISK_RADIUS)).to_f64()?;
    Some(RoucheReport {
        suite: "rouche",
        u_index,
        p_tilde,
        rhs_modulus: rhs,
        limit: bound as f64,
        ratio: rhs / bound as f64,
        sampled_ratio: sampled.map(|r| rhs * a6 / r.sampled_max),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expansion::{derive_complex_remainder, derive_real_remainder};
    use crate::roots::solve_quartic_u;

    #[test]
    fn rhs_modulus_constant() {
        assert_eq!(352256u64 * DISK_RADIUS, 17965056);
    }

    #[test]
    fn f_vanishes_at_origin_of_c_z() {
        let eq = derive_real_remainder().unwrap();
        let p = SamplePoly::from_int(&eq.f);
        assert_eq!(p.eval(1.0, Complex64::new(0.0, 0.0), 0.0).norm(), 0.0);
    }

    #[test]
    fn small_sample_bounds() {
        let eq = derive_real_remainder().unwrap();
        let r = bound_f(&eq, -2, 2000, 1);
        assert!(r.passed(), "{r:?}");
        assert!(r.sampled_max < 9136.0);
        let ceq = derive_complex_remainder().unwrap();
        let u = solve_quartic_u(128).unwrap();
        for k in 2..=5 {
            let r = bound_phi(&ceq, &u, k, 1, 2000, 1).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let eq = derive_real_remainder().unwrap();
        let a = bound_f(&eq, 1, 3000, 9);
        let b = bound_f(&eq, 1, 3000, 9);
        assert_eq!(a.sampled_max.to_bits(), b.sampled_max.to_bits());
    }

    #[test]
    fn rouche_ratios() {
        let ceq = derive_complex_remainder().unwrap();
        let r = rouche_check(&ceq, 2, 1, None).unwrap();
        assert!((r.ratio - 15.10).abs() < 0.01);
        let r = rouche_check(&ceq, 3, 1, None).unwrap();
        assert!((r.ratio - 1.088).abs() < 0.001);
        let r = rouche_check(&ceq, 5, -4, None).unwrap();
        assert!((r.ratio - 7.147).abs() < 0.001);
    }
}

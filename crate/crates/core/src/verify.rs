//! Sampled and exhaustive checks that report one JSON line per case.

use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::expansion::{
    bound_f, bound_phi, bound_phi_alone, derive_complex_remainder, derive_real_remainder, rouche_check,
    ExpansionError,
};
use crate::region::RegionClass;
use crate::roots::{solve_quartic_u, QuarticRoots, RootError};
use crate::scan::{records_for_q, RegionFilter};
use crate::sites::{check_disjoint, check_real_axis_separation, locate_certified, remainders, SiteError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Sites,
    Bounds,
    Rouche,
    Theorems,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sites" => Ok(Suite::Sites),
            "bounds" => Ok(Suite::Bounds),
            "rouche" => Ok(Suite::Rouche),
            "theorems" => Ok(Suite::Theorems),
            _ => Err(format!("unknown suite {s:?}")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Site(#[from] SiteError),
    #[error("thread pool: {0}")]
    Pool(String),
}

#[derive(Clone, Debug)]
pub struct VerifyParams {
    /// Sample pairs for `sites`, points per report for `bounds` and `rouche`.
    pub samples: usize,
    pub seed: u64,
    pub bits: u32,
    pub q_max: u64,
    pub jobs: usize,
    pub p_tildes: Vec<i64>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            samples: 200,
            seed: crate::expansion::DEFAULT_SEED,
            bits: crate::roots::DEFAULT_BITS,
            q_max: 2000,
            jobs: 1,
            p_tildes: vec![1, -1, 2, -2, 5, -5],
        }
    }
}

/// One report line and whether it passed.
#[derive(Clone, Debug)]
pub struct Line {
    pub json: Value,
    pub pass: bool,
}

impl Line {
    fn of<T: Serialize>(v: &T, pass: bool) -> Self {
        Self {
            json: serde_json::to_value(v).expect("serializable report"),
            pass,
        }
    }
}

pub fn run_suite(suite: Suite, params: &VerifyParams) -> Result<Vec<Line>, VerifyError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.jobs.max(1))
        .build()
        .map_err(|e| VerifyError::Pool(e.to_string()))?;
    pool.install(|| match suite {
        Suite::Sites => sites_suite(params),
        Suite::Bounds => bounds_suite(params),
        Suite::Rouche => rouche_suite(params),
        Suite::Theorems => Ok(theorems_suite(params)),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SiteSample {
    pub suite: &'static str,
    pub p_tilde: i64,
    pub q_tilde: i64,
    pub bijection: bool,
    pub disjoint: bool,
    pub axis: bool,
    pub min_margin: f64,
    pub max_remainder_real: f64,
    pub real_bound: f64,
    pub max_remainder_complex: f64,
    pub complex_bound: f64,
    /// The `qt`-dependent distance bounds, informational.
    pub asymptotic_bounds_hold: bool,
    pub pass: bool,
}

/// Pairs with `1 <= |pt| <= 20` and `97|pt| <= qt <= 400|pt|`.
pub fn site_pairs(samples: usize, seed: u64) -> Vec<(i64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let a: i64 = rng.gen_range(1..=20);
            let pt = if rng.gen_bool(0.5) { a } else { -a };
            (pt, rng.gen_range(97 * a..=400 * a))
        })
        .collect()
}

pub fn check_site_pair(pt: i64, qt: i64, u: &QuarticRoots, bits: u32) -> Result<SiteSample, VerifyError> {
    let (bp, bq) = (BigInt::from(pt), BigInt::from(qt));
    let (roots, sites, a) = locate_certified(&bp, &bq, u, bits)?;
    let d = check_disjoint(&sites)?;
    let ax = check_real_axis_separation(&sites)?;
    let rem = remainders(&roots, &sites, &a);
    let (rr, rc, rb, cb) = match &rem {
        Some(r) => (
            r.real,
            r.complex.iter().copied().fold(0.0, f64::max),
            r.real_bound,
            r.complex_bound,
        ),
        None => (f64::NAN, f64::NAN, f64::NAN, f64::NAN),
    };
    let bijection = a.is_bijection();
    let pass = bijection && d.pass && ax.pass && rr < rb && rc < cb;
    Ok(SiteSample {
        suite: "sites",
        p_tilde: pt,
        q_tilde: qt,
        bijection,
        disjoint: d.pass,
        axis: ax.pass,
        min_margin: d.min_margin().min(ax.min_margin),
        max_remainder_real: rr,
        real_bound: rb,
        max_remainder_complex: rc,
        complex_bound: cb,
        asymptotic_bounds_hold: d.pairs.iter().all(|p| p.asymptotic_bound_holds),
        pass,
    })
}

fn sites_suite(params: &VerifyParams) -> Result<Vec<Line>, VerifyError> {
    let u = solve_quartic_u(params.bits)?;
    site_pairs(params.samples, params.seed)
        .par_iter()
        .map(|&(pt, qt)| {
            let s = check_site_pair(pt, qt, &u, params.bits)?;
            Ok(Line::of(&s, s.pass))
        })
        .collect()
}

fn bounds_suite(params: &VerifyParams) -> Result<Vec<Line>, VerifyError> {
    let real = derive_real_remainder()?;
    let complex = derive_complex_remainder()?;
    let u = solve_quartic_u(params.bits)?;
    let (n, seed) = (params.samples, params.seed);
    let mut out = Vec::new();
    for &pt in &params.p_tildes {
        let r = bound_f(&real, pt, n, seed);
        out.push(Line::of(&r, r.passed()));
        for k in 2..=5 {
            let r = bound_phi(&complex, &u, k, pt, n, seed).expect("index in range");
            out.push(Line::of(&r, r.passed()));
        }
        let r = bound_phi_alone(&complex, &u, pt, n, seed);
        out.push(Line::of(&r, r.passed()));
    }
    Ok(out)
}

fn rouche_suite(params: &VerifyParams) -> Result<Vec<Line>, VerifyError> {
    let complex = derive_complex_remainder()?;
    let u = solve_quartic_u(params.bits)?;
    Ok((2..=5)
        .map(|k| {
            let sampled = bound_phi(&complex, &u, k, 1, params.samples, params.seed);
            let r = rouche_check(&complex, k, 1, sampled.as_ref()).expect("index in range");
            Line::of(&r, r.passed())
        })
        .collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoremSummary {
    pub suite: &'static str,
    pub q_max: u64,
    pub points: u64,
    pub uncovered: u64,
    pub integer_root_points: u64,
    pub passing_conditions: u64,
    pub hits: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
struct Violation {
    suite: &'static str,
    p: u64,
    q: u64,
    covered: bool,
    integer_roots: usize,
    conditions_met: bool,
}

/// Every coprime pair in the strip for `q <= q_max`.
pub fn theorem_check(q_max: u64) -> (TheoremSummary, Vec<Line>) {
    let per_q: Vec<_> = (1..=q_max)
        .into_par_iter()
        .map(|q| records_for_q(q, RegionFilter::Subregion, false))
        .collect();
    let mut s = TheoremSummary {
        suite: "theorems",
        q_max,
        points: 0,
        uncovered: 0,
        integer_root_points: 0,
        passing_conditions: 0,
        hits: 0,
        pass: true,
    };
    let mut bad = Vec::new();
    for r in per_q.iter().flatten() {
        debug_assert_eq!(r.region, RegionClass::ExcludedSubregion);
        s.points += 1;
        let covered = !r.theorems_cover.is_empty();
        s.uncovered += u64::from(!covered);
        s.integer_root_points += u64::from(!r.integer_roots.is_empty());
        s.passing_conditions += u64::from(r.conditions_met);
        s.hits += u64::from(r.cuboid_hit);
        if !covered || r.conditions_met || r.cuboid_hit {
            let v = Violation {
                suite: "theorems",
                p: r.p,
                q: r.q,
                covered,
                integer_roots: r.integer_roots.len(),
                conditions_met: r.conditions_met,
            };
            bad.push(Line::of(&v, false));
        }
    }
    s.pass = s.uncovered == 0 && s.passing_conditions == 0 && s.hits == 0;
    (s, bad)
}

fn theorems_suite(params: &VerifyParams) -> Vec<Line> {
    let (s, mut lines) = theorem_check(params.q_max);
    lines.push(Line::of(&s, s.pass));
    lines
}

//! Where a parameter pair `(p, q)` sits: outside the cone `q/59 < p < 59q`,
//! on the bisector, in the strip next to the bisector that the asymptotic
//! sites rule out, or in the rest of the cone.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionClass {
    OutsideLinear,
    Bisector,
    ExcludedSubregion,
    RemainingLinear,
}

impl RegionClass {
    pub fn as_str(self) -> &'static str {
        match self {
            RegionClass::OutsideLinear => "outside_linear",
            RegionClass::Bisector => "bisector",
            RegionClass::ExcludedSubregion => "excluded_subregion",
            RegionClass::RemainingLinear => "remaining_linear",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Theorem {
    /// `pt != 0`, `qt >= 97|pt|`, `qt > 74|pt|^3`.
    #[serde(rename = "7.1")]
    Positive,
    /// `pt < 0`, `qt >= 97|pt|`.
    #[serde(rename = "8.1")]
    Negative,
}

impl Theorem {
    pub fn label(self) -> &'static str {
        match self {
            Theorem::Positive => "7.1",
            Theorem::Negative => "8.1",
        }
    }
}

fn b(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn in_linear(p: &BigInt, q: &BigInt) -> bool {
    q < &(b(59) * p) && p < &(b(59) * q)
}

/// Strip membership for `p != q`. Below the bisector `q - q/97 <= p`;
/// above it `p <= 98q/97` and `74 (p - q)^3 < q`.
pub fn in_subregion(p: &BigInt, q: &BigInt) -> bool {
    if p < q {
        b(97) * p >= b(96) * q
    } else if p > q {
        let d = p - q;
        b(97) * p <= b(98) * q && b(74) * &d * &d * &d < *q
    } else {
        false
    }
}

pub fn classify(p: &BigInt, q: &BigInt) -> RegionClass {
    if !in_linear(p, q) {
        RegionClass::OutsideLinear
    } else if p == q {
        RegionClass::Bisector
    } else if in_subregion(p, q) {
        RegionClass::ExcludedSubregion
    } else {
        RegionClass::RemainingLinear
    }
}

pub fn classify_u64(p: u64, q: u64) -> RegionClass {
    classify(&BigInt::from(p), &BigInt::from(q))
}

/// Coordinates along the bisector: `(pt, qt) = (p - q, q)`.
pub fn to_bisector(p: &BigInt, q: &BigInt) -> (BigInt, BigInt) {
    (p - q, q.clone())
}

pub fn from_bisector(pt: &BigInt, qt: &BigInt) -> (BigInt, BigInt) {
    (pt + qt, qt.clone())
}

fn regime(pt: &BigInt, qt: &BigInt) -> bool {
    qt >= &(b(97) * pt.abs())
}

pub fn theorem_71_applicable(pt: &BigInt, qt: &BigInt) -> bool {
    let a = pt.abs();
    !pt.is_zero() && regime(pt, qt) && qt > &(b(74) * &a * &a * &a)
}

pub fn theorem_81_applicable(pt: &BigInt, qt: &BigInt) -> bool {
    pt.is_negative() && regime(pt, qt)
}

/// Theorems whose hypotheses hold at the bisector coordinates of `(p, q)`.
pub fn covering_theorems(p: &BigInt, q: &BigInt) -> Vec<Theorem> {
    let (pt, qt) = to_bisector(p, q);
    let mut out = Vec::new();
    if theorem_71_applicable(&pt, &qt) {
        out.push(Theorem::Positive);
    }
    if theorem_81_applicable(&pt, &qt) {
        out.push(Theorem::Negative);
    }
    out
}

/// First point with `q <= q_max` that is in the strip but not covered, or
/// that violates the strip's containment in the cone.
pub fn find_uncovered(q_max: u64) -> Option<(u64, u64)> {
    for q in 1..=q_max {
        for p in 1..=2 * q + 1 {
            let (bp, bq) = (BigInt::from(p), BigInt::from(q));
            if !in_subregion(&bp, &bq) {
                continue;
            }
            if !in_linear(&bp, &bq) || covering_theorems(&bp, &bq).is_empty() {
                return Some((p, q));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: i64, q: i64) -> RegionClass {
        classify(&b(p), &b(q))
    }

    #[test]
    fn classify_examples() {
        assert_eq!(c(60, 1), RegionClass::OutsideLinear);
        assert_eq!(c(59, 1), RegionClass::OutsideLinear);
        assert_eq!(c(58, 1), RegionClass::RemainingLinear);
        assert_eq!(c(1, 59), RegionClass::OutsideLinear);
        assert_eq!(c(7, 7), RegionClass::Bisector);
        assert_eq!(c(970, 1000), RegionClass::RemainingLinear);
        assert_eq!(c(990, 1000), RegionClass::ExcludedSubregion);
    }

    #[test]
    fn strip_boundaries() {
        // below: 97p >= 96q, equality allowed
        assert_eq!(c(96, 97), RegionClass::ExcludedSubregion);
        assert_eq!(c(95, 97), RegionClass::RemainingLinear);
        // above, p - q = 1 needs 97p <= 98q, i.e. q >= 97
        assert_eq!(c(97, 96), RegionClass::RemainingLinear);
        assert_eq!(c(98, 97), RegionClass::ExcludedSubregion);
        // p - q = 2 needs 74 * 8 < q, strictly
        assert_eq!(c(594, 592), RegionClass::RemainingLinear);
        assert_eq!(c(595, 593), RegionClass::ExcludedSubregion);
        assert_eq!(c(196, 194), RegionClass::RemainingLinear);
        // p - q = 3 needs q > 74 * 27
        assert_eq!(c(2001, 1998), RegionClass::RemainingLinear);
        assert_eq!(c(2002, 1999), RegionClass::ExcludedSubregion);
    }

    #[test]
    fn theorem_examples() {
        assert!(theorem_71_applicable(&b(1), &b(97)));
        assert!(!theorem_71_applicable(&b(2), &b(500)));
        assert!(!theorem_71_applicable(&b(0), &b(500)));
        assert!(theorem_81_applicable(&b(-1), &b(97)));
        assert!(!theorem_81_applicable(&b(1), &b(1000)));
        assert!(!theorem_81_applicable(&b(-3), &b(200)));
    }

    #[test]
    fn bisector_map_roundtrip() {
        let (pt, qt) = to_bisector(&b(990), &b(1000));
        assert_eq!((pt.clone(), qt.clone()), (b(-10), b(1000)));
        assert_eq!(from_bisector(&pt, &qt), (b(990), b(1000)));
    }

    #[test]
    fn strip_is_covered() {
        assert_eq!(find_uncovered(300), None);
    }
}

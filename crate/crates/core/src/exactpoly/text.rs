//! Line-oriented text format.
//!
//! ```text
//! # vars: t pt qt
//! 1  10 0 0
//! 3  8 0 4
//! ```
//!
//! One term per line, coefficient token, two spaces, then the exponents
//! separated by single spaces. Terms are written in descending graded-lex
//! order so the output is byte-stable.

use std::fmt::Write as _;

use super::{Coeff, MultiPoly, PolyError};

const HEADER: &str = "# vars:";

pub fn to_text<C: Coeff>(p: &MultiPoly<C>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {}", HEADER, p.vars().join(" "));
    for (m, c) in p.terms().rev() {
        let exps: Vec<String> = m.0.iter().map(u32::to_string).collect();
        let _ = writeln!(s, "{}  {}", c.to_token(), exps.join(" "));
    }
    s
}

pub fn from_text<C: Coeff>(s: &str) -> Result<MultiPoly<C>, PolyError> {
    let mut lines = s.lines().enumerate();
    let (_, header) = lines.next().ok_or(PolyError::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let vars: Vec<&str> = header
        .strip_prefix(HEADER)
        .ok_or(PolyError::Parse {
            line: 1,
            msg: "missing `# vars:` header".into(),
        })?
        .split_whitespace()
        .collect();
    let mut terms = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: &str| PolyError::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let (coeff, exps) = line.split_once("  ").ok_or_else(|| err("expected two spaces"))?;
        let c = C::parse_token(coeff).ok_or_else(|| err("bad coefficient"))?;
        let e = exps
            .split(' ')
            .map(|x| x.parse::<u32>().map_err(|_| err("bad exponent")))
            .collect::<Result<Vec<_>, _>>()?;
        terms.push((e, c));
    }
    MultiPoly::from_terms(&vars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{gauss, GaussInt};
    use num_bigint::BigInt;

    #[test]
    fn integer_format() {
        let p =
            MultiPoly::<BigInt>::from_i64_terms(&["t", "q"], &[(-1, &[0, 2]), (3, &[2, 0]), (1, &[4, 0])])
                .unwrap();
        let s = to_text(&p);
        assert_eq!(s, "# vars: t q\n1  4 0\n3  2 0\n-1  0 2\n");
        assert_eq!(from_text::<BigInt>(&s).unwrap(), p);
    }

    #[test]
    fn gaussian_roundtrip() {
        let p = MultiPoly::<GaussInt>::from_terms(&["c"], [(vec![1], gauss(2, -3))]).unwrap();
        assert_eq!(from_text::<GaussInt>(&to_text(&p)).unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_line() {
        let e = from_text::<BigInt>("# vars: x\n1 2\n").unwrap_err();
        assert!(matches!(e, PolyError::Parse { line: 2, .. }));
        assert!(from_text::<BigInt>("x\n").is_err());
    }
}

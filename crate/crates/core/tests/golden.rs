use num_bigint::BigInt;

use cuboidchar::charpoly::{transform_q, IntPoly, TransitionMatrix};
use cuboidchar::exactpoly::{from_text, to_text};

const GOLDEN: &str = include_str!("golden/bisector_q.txt");

fn golden() -> IntPoly {
    from_text(GOLDEN).expect("golden file parses")
}

#[test]
fn bisector_polynomial_matches_golden_file() {
    let q = transform_q(&TransitionMatrix::bisector());
    assert_eq!(q, golden());
    assert_eq!(to_text(&q), GOLDEN);
}

#[test]
fn golden_term_count_and_markers() {
    let g = golden();
    assert_eq!(g.num_terms(), 48);
    assert_eq!(g.coefficient_of(&[6, 1, 7]).unwrap(), BigInt::from(-40));
    assert_eq!(g.coefficient_of(&[0, 0, 20]).unwrap(), BigInt::from(-1));
    assert_eq!(g.coefficient_of(&[10, 0, 0]).unwrap(), BigInt::from(1));
}

#[test]
fn identity_matrix_keeps_the_polynomial() {
    let q = transform_q(&TransitionMatrix::identity());
    let direct = cuboidchar::charpoly::build_qpq();
    assert_eq!(q.num_terms(), direct.num_terms());
    for (m, c) in direct.terms() {
        assert_eq!(&q.coefficient_of(&m.0).unwrap(), c);
    }
}

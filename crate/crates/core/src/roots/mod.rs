//! Root isolation and certified root approximation for integer polynomials,
//! and the auxiliary quartic in `u`.

mod complex;
mod quartic;
mod real;
mod unipoly;

pub use complex::{complex_roots, upper_roots, CertifiedRoot, RootKind, DEFAULT_BITS, MAX_BITS};
pub use quartic::{quartic_residual, solve_quartic_u, QuarticRoots};
pub use real::{
    count_real_roots, descartes_variations, integer_roots, isolate_real_roots, refine_root,
    root_modulus_bound, squarefree_part, RootInterval, SturmChain,
};
pub use unipoly::UniPoly;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
    #[error("interval does not bracket a sign change")]
    NoSignChange,
    #[error("roots could not be certified at {bits} bits")]
    Precision { bits: u32 },
}

//! Remainder equations of the two expansions along the bisector direction,
//! and sampled checks of their bound constants.

mod bounds;
mod derive;

pub use bounds::{
    bound_f, bound_phi, bound_phi_alone, lhs_bound, lhs_poly, rouche_check, BoundReport, RoucheReport,
    SamplePoly, DEFAULT_SAMPLES, DEFAULT_SEED, DISK_RADIUS, PHI_U2_BOUND, REAL_BOUND, REAL_C_EXTENT, Z_DENOM,
};
pub use derive::{
    derive_complex_remainder, derive_real_remainder, eval_upoly, uq_eval, uq_rat_eval, ComplexRemainderEq,
    RealRemainderEq, UGauss, UPoly, REMAINDER_VARS,
};

use thiserror::Error;

use crate::exactpoly::PolyError;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpansionError {
    #[error("cannot normalize the remainder equation: {0}")]
    Normalization(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

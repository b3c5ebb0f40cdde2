//! Brute-force ground truth: Buchberger's algorithm and colengths from ranks
//! of multiplication maps.

mod buchberger;
mod rank;

use thiserror::Error;

use crate::poly::PolyError;

pub use buchberger::{buchberger, is_groebner, s_polynomial, GroebnerCertificate};
pub use rank::{
    colength_by_rank, colength_dense, length_for_pair, length_rank, Block, GradedRankPlan,
    MAX_RATIONAL_BOX,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

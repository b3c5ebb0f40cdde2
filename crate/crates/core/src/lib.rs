//! Exact computations for pairs `(x^M, y^N, (x^a y^b (x^u + y^v)^c)^K)` in
//! two variables: Gröbner bases, colengths, F-signature values and their
//! limits, with brute-force oracles for cross-checking.

pub mod arith;
pub mod closed_basis;
pub mod fsig;
pub mod lengths;
pub mod mutation;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod sweep;
pub mod verify;

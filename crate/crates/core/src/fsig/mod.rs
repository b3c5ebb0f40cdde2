//! F-signature values of `x^a y^b (x^u + y^v)^c` at a fixed prime, their
//! limits as the prime grows, log canonical thresholds and normalized volumes.

mod limit;
mod piecewise;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::{is_prime, PrimeField};
use crate::closed_basis::IdealSpec;
use crate::lengths::{length_general, Characteristic, LengthError};
use crate::oracle::{length_for_pair, OracleError};

pub use limit::{
    limit_fsig_general, limit_fsig_general_with, limit_fsig_simple, limit_general_value,
    limit_general_value_with, limit_via_rational_exponents,
};
pub use piecewise::{
    PieceJson, PiecewiseError, PiecewiseFn, PiecewiseJson, Quadratic, CONVEXITY_TRIPLES,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsigError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid piecewise function: {0}")]
    Piecewise(Box<PiecewiseError>),
    #[error(transparent)]
    Length(#[from] LengthError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<PiecewiseError> for FsigError {
    fn from(e: PiecewiseError) -> Self {
        FsigError::Piecewise(Box::new(e))
    }
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A threshold value; `1/0` is `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Threshold {
    Finite(BigRational),
    Infinite,
}

impl Threshold {
    /// `1 / d`, infinite when `d = 0`.
    pub fn reciprocal(d: u64) -> Self {
        if d == 0 {
            Threshold::Infinite
        } else {
            Threshold::Finite(ratio(1, d))
        }
    }

    /// `n / d`, infinite when `d = 0`.
    pub fn quotient(n: BigRational, d: BigRational) -> Self {
        if d.is_zero() {
            Threshold::Infinite
        } else {
            Threshold::Finite(n / d)
        }
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Threshold::Finite(q) => Some(q),
            Threshold::Infinite => None,
        }
    }

    /// Whether `t` lies strictly below the threshold.
    pub fn exceeds(&self, t: &BigRational) -> bool {
        self.finite().is_none_or(|l| t < l)
    }
}

impl Ord for Threshold {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Threshold::Finite(a), Threshold::Finite(b)) => a.cmp(b),
            (Threshold::Finite(_), Threshold::Infinite) => Ordering::Less,
            (Threshold::Infinite, Threshold::Finite(_)) => Ordering::Greater,
            (Threshold::Infinite, Threshold::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Threshold {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(q) => write!(f, "{q}"),
            Threshold::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The log canonical threshold together with the values it is the minimum of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdInfo {
    pub lambda: Threshold,
    /// The threshold contributed by the exceptional divisor of the blowup.
    pub lambda_0: Threshold,
    /// `1/a`, `1/b`, `1/c` in that order.
    pub components: [Threshold; 3],
}

impl ThresholdInfo {
    fn from_parts(lambda_0: Threshold, components: [Threshold; 3]) -> Self {
        let lambda = components.iter().chain([&lambda_0]).min().unwrap().clone();
        Self {
            lambda,
            lambda_0,
            components,
        }
    }
}

fn check_sorted(a: u64, b: u64, c: u64) -> Result<(), FsigError> {
    if a >= b && b >= c {
        Ok(())
    } else {
        Err(FsigError::Domain(format!(
            "expected a >= b >= c, got ({a}, {b}, {c})"
        )))
    }
}

fn sorted_desc(a: u64, b: u64, c: u64) -> (u64, u64, u64) {
    let mut e = [a, b, c];
    e.sort_unstable_by(|x, y| y.cmp(x));
    (e[0], e[1], e[2])
}

/// Threshold of `x^a y^b (x+y)^c` for `a >= b >= c`, not all zero:
/// `min(1/a, 2/(a+b+c))`.
pub fn lct_simple(a: u64, b: u64, c: u64) -> Result<ThresholdInfo, FsigError> {
    check_sorted(a, b, c)?;
    if a == 0 {
        return Err(FsigError::Domain("a = b = c = 0 defines no divisor".into()));
    }
    Ok(ThresholdInfo::from_parts(
        Threshold::Finite(ratio(2, a + b + c)),
        [
            Threshold::reciprocal(a),
            Threshold::reciprocal(b),
            Threshold::reciprocal(c),
        ],
    ))
}

/// Threshold of `x^a y^b (x^u + y^v)^c` for `u, v, c >= 1`:
/// `min(1/a, 1/b, 1/c, (1/u + 1/v) / (a/u + b/v + c))`.
pub fn lct_general(a: u64, b: u64, c: u64, u: u64, v: u64) -> Result<ThresholdInfo, FsigError> {
    check_general_params(c, u, v)?;
    let num = ratio(1, u) + ratio(1, v);
    let den = ratio(a, u) + ratio(b, v) + rat(c as i64);
    Ok(ThresholdInfo::from_parts(
        Threshold::quotient(num, den),
        [
            Threshold::reciprocal(a),
            Threshold::reciprocal(b),
            Threshold::reciprocal(c),
        ],
    ))
}

pub(crate) fn check_general_params(c: u64, u: u64, v: u64) -> Result<(), FsigError> {
    if c == 0 || u == 0 || v == 0 {
        return Err(FsigError::Domain(format!(
            "need c, u, v >= 1, got c={c}, u={u}, v={v}"
        )));
    }
    Ok(())
}

/// F-signature of `x^a y^b` at `t`: `(1 - at)(1 - bt)` below `min(1/a, 1/b)`,
/// zero from there on. The same in every characteristic.
pub fn fsig_monomial(a: u64, b: u64, t: &BigRational) -> BigRational {
    let lambda = Threshold::reciprocal(a).min(Threshold::reciprocal(b));
    if !lambda.exceeds(t) {
        return BigRational::zero();
    }
    (BigRational::one() - rat(a as i64) * t) * (BigRational::one() - rat(b as i64) * t)
}

/// `psi_p(r/p)` for `x^a y^b (x+y)^c` in characteristic `p`, for
/// `0 <= r/p < min(1/a, 2/(a+b+c))`. The exponents are sorted first.
pub fn fsig_at_p(a: u64, b: u64, c: u64, p: u64, r: u64) -> Result<BigRational, FsigError> {
    if !is_prime(p) {
        return Err(FsigError::Domain(format!("{p} is not prime")));
    }
    let (a, b, c) = sorted_desc(a, b, c);
    let info = lct_simple(a, b, c)?;
    let t = ratio(r, p);
    if !info.lambda.exceeds(&t) {
        return Err(FsigError::HypothesisViolation(format!(
            "r/p = {t} is not below the threshold {}",
            info.lambda
        )));
    }
    let (s, r, p) = ((a + b + c) as i128, r as i128, p as i128);
    let numerator = if a >= b + c {
        p * p - s * r * p + (a * (b + c)) as i128 * r * r
    } else {
        p * p - s * r * p + (s * s * r * r).div_euclid(4)
    };
    Ok(BigRational::new(
        BigInt::from(numerator),
        BigInt::from(p * p),
    ))
}

/// `1 - l/p^2` where `l` is the closed-form colength of
/// `(x^p, y^p, (x^a y^b (x+y)^c)^r)`.
pub fn fsig_at_p_via_length(
    a: u64,
    b: u64,
    c: u64,
    p: u64,
    r: u64,
) -> Result<BigRational, FsigError> {
    let spec = IdealSpec {
        m: p,
        n: p,
        k: r,
        a,
        b,
        c,
    };
    let l = length_general(&spec, Characteristic::Prime(p))?.value;
    Ok(BigRational::one() - ratio(l, p * p))
}

/// `psi_p(r/p)` for `x^a y^b (x^u + y^v)^c` from the rank oracle over
/// `F_p`. No closed form is used, so any `u, v >= 1` is accepted.
pub fn fsig_empirical(
    a: u64,
    b: u64,
    c: u64,
    u: u64,
    v: u64,
    p: u64,
    r: u64,
) -> Result<BigRational, FsigError> {
    let field = PrimeField::new(p).map_err(|e| FsigError::Domain(e.to_string()))?;
    if u == 0 || v == 0 {
        return Err(FsigError::Domain("need u, v >= 1".into()));
    }
    let side = u32::try_from(p).map_err(|_| FsigError::Domain(format!("p = {p} is too large")))?;
    let l = length_for_pair(&field, side, side, (a, b, c), (u, v), r)?;
    Ok(BigRational::one() - ratio(l, p * p))
}

/// Limit F-signature of `x^{r1} y^{r2} (x+y)^{r3}` for rational
/// `r1 >= r2 >= r3 >= 0`.
pub fn limit_fsig_rational_exponents(
    r1: &BigRational,
    r2: &BigRational,
    r3: &BigRational,
) -> Result<BigRational, FsigError> {
    if r3.is_negative() || r2 < r3 || r1 < r2 {
        return Err(FsigError::Domain(format!(
            "expected r1 >= r2 >= r3 >= 0, got ({r1}, {r2}, {r3})"
        )));
    }
    let one = BigRational::one();
    let sum = r1 + r2 + r3;
    if *r1 >= one || sum >= rat(2) {
        return Ok(BigRational::zero());
    }
    let rest = r2 + r3;
    if *r1 >= rest {
        Ok((&one - r1) * (&one - rest))
    } else {
        let half = &one - sum / rat(2);
        Ok(&half * &half)
    }
}

/// Normalized volume of `(C^2, t div(x^a y^b (x+y)^c))` for `a >= b >= c`.
pub fn nvol_simple(a: u64, b: u64, c: u64, t: &BigRational) -> Result<BigRational, FsigError> {
    check_sorted(a, b, c)?;
    if t.is_negative() {
        return Err(FsigError::Domain(format!("t = {t} is negative")));
    }
    let threshold =
        Threshold::reciprocal(a).min(Threshold::quotient(rat(2), rat((a + b + c) as i64)));
    if !threshold.exceeds(t) {
        return Ok(BigRational::zero());
    }
    let one = BigRational::one();
    if a >= b + c {
        Ok(rat(4) * (&one - rat((b + c) as i64) * t) * (&one - rat(a as i64) * t))
    } else {
        let d = rat(2) - rat((a + b + c) as i64) * t;
        Ok(&d * &d)
    }
}

/// Whether a quarter of the normalized volume equals the limit F-signature at `t`.
pub fn corollary_b_check(a: u64, b: u64, c: u64, t: &BigRational) -> Result<bool, FsigError> {
    let nvol = nvol_simple(a, b, c, t)?;
    let psi = limit_fsig_simple(a, b, c)?;
    Ok(nvol / rat(4) == psi.eval(t))
}

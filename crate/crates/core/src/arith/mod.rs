//! Exact arithmetic: binomials, the binomial determinant, prime fields and
//! rational parsing.

pub mod field;
pub mod matrix;

use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub use field::{is_prime, primes_between, CoeffField, Field, PrimeField, Rationals};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain error: {0}")]
    Domain(String),
}

/// Rows of Pascal's triangle are cached up to this index; larger arguments use
/// the multiplicative formula instead of growing the table.
const PASCAL_CACHE_ROWS: usize = 512;

fn pascal() -> &'static RwLock<Vec<Vec<BigInt>>> {
    static TABLE: OnceLock<RwLock<Vec<Vec<BigInt>>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![vec![BigInt::one()]]))
}

/// Binomial coefficient with the convention `binom(n, k) = 0` for `k < 0` or
/// `k > n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    assert!(n >= 0, "binom: n must be nonnegative, got {n}");
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let (n, k) = (n as usize, k as usize);
    if n >= PASCAL_CACHE_ROWS {
        return binom_multiplicative(n as u64, k.min(n - k) as u64);
    }
    {
        let table = pascal().read().expect("pascal cache poisoned");
        if let Some(row) = table.get(n) {
            return row[k].clone();
        }
    }
    let mut table = pascal().write().expect("pascal cache poisoned");
    while table.len() <= n {
        let prev = table.last().unwrap();
        let mut row = Vec::with_capacity(prev.len() + 1);
        row.push(BigInt::one());
        for w in prev.windows(2) {
            row.push(&w[0] + &w[1]);
        }
        row.push(BigInt::one());
        table.push(row);
    }
    table[n][k].clone()
}

fn binom_multiplicative(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// `[C(n,0), ..., C(n,n)]` reduced mod `p`, by the additive recurrence.
pub fn binomial_row_mod(n: usize, p: u32) -> Vec<u32> {
    let mut row = vec![1u32 % p];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1 % p);
        for w in row.windows(2) {
            let s = w[0] + w[1];
            next.push(if s >= p { s - p } else { s });
        }
        next.push(1 % p);
        row = next;
    }
    row
}

fn check_det_domain(k: i64, a: i64, v: i64) -> Result<usize, ArithError> {
    if !(0 <= a && a <= k) || a + v < 0 {
        return Err(ArithError::Domain(format!(
            "binomial determinant needs 0 <= a <= k and a + v >= 0, got k={k}, a={a}, v={v}"
        )));
    }
    Ok((a + v + 1) as usize)
}

/// The `(a+v+1) x (a+v+1)` matrix with entries `C(k, a - i + j)`.
pub fn binomial_matrix(k: i64, a: i64, v: i64) -> Result<Vec<Vec<BigInt>>, ArithError> {
    let size = check_det_domain(k, a, v)?;
    Ok((0..size as i64)
        .map(|i| (0..size as i64).map(|j| binom(k, a - i + j)).collect())
        .collect())
}

/// Determinant of the binomial matrix by the product formula
/// `prod_i C(k+i, a+i) / prod_i C(k+v-i, a+v-i)`, `i = 0..=a+v`.
pub fn det_binomial_formula(k: i64, a: i64, v: i64) -> Result<BigRational, ArithError> {
    let size = check_det_domain(k, a, v)? as i64;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..size {
        num *= binom(k + i, a + i);
        den *= binom(k + v - i, a + v - i);
    }
    Ok(BigRational::new(num, den))
}

/// Determinant of the binomial matrix by fraction-free elimination.
pub fn det_binomial_naive(k: i64, a: i64, v: i64) -> Result<BigRational, ArithError> {
    let m = binomial_matrix(k, a, v)?;
    Ok(BigRational::from_integer(matrix::determinant(m)))
}

/// Parses `"n"`, `"p/q"` or a decimal such as `"-0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(format!("`{s}` is not a rational number"));
    let int = |t: &str| -> Result<BigInt, ArithError> {
        if t.is_empty() || t.starts_with('+') && t.len() == 1 {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    if let Some((n, d)) = s.split_once('/') {
        let d = int(d.trim())?;
        if d.is_zero() {
            return Err(ArithError::Parse(format!("`{s}` has zero denominator")));
        }
        return Ok(BigRational::new(int(n.trim())?, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mantissa: BigInt = format!("{digits}{frac}").parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let q = BigRational::new(mantissa, scale);
        return Ok(if negative { -q } else { q });
    }
    Ok(BigRational::from_integer(int(s)?))
}

/// Floor of `n / d` for `d > 0`, correct for negative `n`.
pub fn floor_div(n: i64, d: i64) -> i64 {
    n.div_euclid(d)
}

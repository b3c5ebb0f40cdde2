//! Coefficient fields: the rationals and prime fields `F_p` with `p < 2^31`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix;
use super::ArithError;

/// A field whose elements are plain values and whose operations live on the
/// field object. Prime fields carry their modulus at runtime, so element
/// arithmetic goes through `&self`.
#[allow(clippy::wrong_self_convention)]
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    /// 0 for the rationals, `p` for `F_p`.
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    /// Image of `num/den`; `None` when the denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem> {
        let den = self.from_bigint(q.denom());
        let inv = self.inv(&den)?;
        Some(self.mul(&self.from_bigint(q.numer()), &inv))
    }
    /// Whether `a` is displayed with a leading minus sign.
    fn is_negative(&self, _a: &Self::Elem) -> bool {
        false
    }
    fn render(&self, a: &Self::Elem) -> String;
    /// `[C(n,0), ..., C(n,n)]` as field elements.
    fn binomial_row(&self, n: usize) -> Vec<Self::Elem> {
        (0..=n as i64)
            .map(|j| self.from_bigint(&super::binom(n as i64, j)))
            .collect()
    }
    /// Rank of a dense matrix given as rows of equal length.
    fn rank(&self, rows: Vec<Vec<Self::Elem>>) -> usize {
        matrix::rank_generic(self, rows)
    }
}

/// The field of rationals with arbitrary-precision numerator and denominator.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn characteristic(&self) -> u64 {
        0
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn is_negative(&self, a: &BigRational) -> bool {
        a.is_negative()
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
    fn rank(&self, rows: Vec<Vec<BigRational>>) -> usize {
        matrix::rank_rational(rows)
    }
}

/// The prime field `F_p`. Elements are canonical representatives in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

/// Largest admissible modulus (exclusive); keeps products inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if !(2..MAX_MODULUS).contains(&p) || !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(Self { p: p as u32 })
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn pow(&self, base: u32, mut exp: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u64;
        let mut b = base as u64 % p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * b % p;
            }
            b = b * b % p;
            exp >>= 1;
        }
        acc as u32
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + self.p as u64 - *b as u64;
        (s % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - *a
        }
    }
    fn inv(&self, a: &u32) -> Option<u32> {
        (*a != 0).then(|| self.pow(*a, self.p as u64 - 2))
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce_i64(n)
    }
    fn from_bigint(&self, n: &BigInt) -> u32 {
        let r = n.mod_floor(&BigInt::from(self.p));
        r.to_u32().expect("residue fits in u32")
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
    fn binomial_row(&self, n: usize) -> Vec<u32> {
        super::binomial_row_mod(n, self.p)
    }
    fn rank(&self, rows: Vec<Vec<u32>>) -> usize {
        matrix::rank_mod_p(rows, self.p)
    }
}

/// Deterministic primality test for `n < 2^31` by trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in the inclusive range `[lo, hi]`.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

/// Runtime choice of coefficient field, as named on the command line:
/// `q` for the rationals or `p=<prime>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoeffField {
    Rationals,
    Prime(PrimeField),
}

impl CoeffField {
    pub fn characteristic(&self) -> u64 {
        match self {
            CoeffField::Rationals => 0,
            CoeffField::Prime(f) => f.characteristic(),
        }
    }
}

impl fmt::Display for CoeffField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffField::Rationals => write!(f, "q"),
            CoeffField::Prime(fp) => write!(f, "p={}", fp.modulus()),
        }
    }
}

impl FromStr for CoeffField {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(CoeffField::Rationals);
        }
        let digits = s
            .strip_prefix("p=")
            .or_else(|| s.strip_prefix("P="))
            .unwrap_or(s);
        let p: u64 = digits
            .parse()
            .map_err(|_| ArithError::Parse(format!("field `{s}`: expected `q` or `p=<prime>`")))?;
        Ok(CoeffField::Prime(PrimeField::new(p)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites_and_large_moduli() {
        assert!(PrimeField::new(31).is_ok());
        assert!(PrimeField::new(2).is_ok());
        assert_eq!(PrimeField::new(1), Err(ArithError::NotPrime(1)));
        assert_eq!(PrimeField::new(91), Err(ArithError::NotPrime(91)));
        assert!(PrimeField::new(2_147_483_647).is_ok());
        assert!(PrimeField::new(4_294_967_291).is_err());
    }

    #[test]
    fn prime_field_arithmetic_is_canonical() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.neg(&0), 0);
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.inv(&0), None);
        let q = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert_eq!(f.from_rational(&q), None);
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.from_rational(&half), Some(4));
    }

    #[test]
    fn large_prime_multiplication_does_not_overflow() {
        let f = PrimeField::new(2_147_483_647).unwrap();
        let a = f.modulus() - 1;
        assert_eq!(f.mul(&a, &a), 1);
    }

    #[test]
    fn coeff_field_parses_cli_forms() {
        assert_eq!("q".parse::<CoeffField>().unwrap(), CoeffField::Rationals);
        assert_eq!(
            "p=31".parse::<CoeffField>().unwrap(),
            CoeffField::Prime(PrimeField::new(31).unwrap())
        );
        assert!("p=32".parse::<CoeffField>().is_err());
        assert!("x".parse::<CoeffField>().is_err());
    }

    #[test]
    fn primes_between_matches_known_list() {
        assert_eq!(primes_between(30, 50), vec![31, 37, 41, 43, 47]);
        assert_eq!(primes_between(300, 310), vec![307]);
    }
}

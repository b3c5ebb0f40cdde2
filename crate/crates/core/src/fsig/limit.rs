use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::mutation::{guard, Mutation};

use super::{
    check_general_params, check_sorted, lct_general, lct_simple, limit_fsig_rational_exponents,
    rat, FsigError, PiecewiseFn, Quadratic,
};

fn big(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Limit F-signature function of `x^a y^b (x+y)^c` for `a >= b >= c`, not all
/// zero: `(1-at)(1-(b+c)t)` when `a >= b+c`, else `(1 - (a+b+c)t/2)^2`, up to
/// the threshold.
pub fn limit_fsig_simple(a: u64, b: u64, c: u64) -> Result<PiecewiseFn, FsigError> {
    check_sorted(a, b, c)?;
    let info = lct_simple(a, b, c)?;
    let lambda = info
        .lambda
        .finite()
        .expect("a >= 1 gives a finite threshold")
        .clone();
    let one = BigRational::one();
    let piece = if a >= b + c {
        Quadratic::product((one.clone(), -rat(a as i64)), (one, -rat((b + c) as i64)))
    } else {
        let half = (
            one,
            -BigRational::new(BigInt::from(a + b + c), BigInt::from(2)),
        );
        Quadratic::product(half.clone(), half)
    };
    Ok(PiecewiseFn::new(
        vec![BigRational::zero(), lambda],
        vec![piece],
    )?)
}

/// The exponents as integers, with the products the case conditions use.
#[derive(Clone, Copy)]
struct General {
    a: i128,
    b: i128,
    c: i128,
    u: i128,
    v: i128,
}

impl General {
    fn new(a: u64, b: u64, c: u64, u: u64, v: u64) -> Self {
        Self {
            a: a as i128,
            b: b as i128,
            c: c as i128,
            u: u as i128,
            v: v as i128,
        }
    }

    /// The three case conditions as `alpha t + beta >= 0`.
    fn conditions(&self) -> [(i128, i128); 3] {
        let Self { a, b, c, u, v } = *self;
        [
            (a * v - b * u - c * u * v, u - v),
            (b * u - a * v - c * u * v, v - u),
            (c * u * v - a * v - b * u, u + v - 2 * u * v),
        ]
    }

    /// Index of the case that applies at `t`; `3` is the fallback case.
    fn case_at(&self, t: &BigRational, mutation: Option<Mutation>) -> usize {
        let sites = [
            Mutation::GeneralCase1,
            Mutation::GeneralCase2,
            Mutation::GeneralCase3,
        ];
        self.conditions()
            .iter()
            .zip(sites)
            .position(|(&(alpha, beta), site)| {
                guard(
                    big(alpha) * t + big(beta) >= BigRational::zero(),
                    site,
                    mutation,
                )
            })
            .unwrap_or(3)
    }

    fn piece(&self, case: usize) -> Quadratic {
        let Self { a, b, c, u, v } = *self;
        let one = BigRational::one();
        match case {
            0 => Quadratic::product((one.clone(), big(-a)), (one, big(-(b + c * v)))),
            1 => Quadratic::product((one.clone(), big(-b)), (one, big(-(a + c * u)))),
            2 => Quadratic::product((one, big(-c)), (big(u + v - u * v), big(-(a * v + b * u)))),
            _ => {
                let s = a * v + b * u + c * u * v;
                let w = u + v;
                let scale = BigRational::new(BigInt::one(), BigInt::from(4 * u * v));
                Quadratic::new(
                    big(w * w) * &scale,
                    big(-2 * w * s) * &scale,
                    big(s * s) * &scale,
                )
            }
        }
    }
}

/// Limit F-signature function of `x^a y^b (x^u + y^v)^c` for `u, v, c >= 1`.
///
/// Breakpoints are the roots of the case conditions inside `(0, lambda)`,
/// plus `0` and `lambda`. An `Err` means the resulting function failed
/// validation, which only a mutated case condition can cause.
pub fn limit_fsig_general(
    a: u64,
    b: u64,
    c: u64,
    u: u64,
    v: u64,
) -> Result<PiecewiseFn, FsigError> {
    limit_fsig_general_with(a, b, c, u, v, None)
}

pub fn limit_fsig_general_with(
    a: u64,
    b: u64,
    c: u64,
    u: u64,
    v: u64,
    mutation: Option<Mutation>,
) -> Result<PiecewiseFn, FsigError> {
    let info = lct_general(a, b, c, u, v)?;
    let lambda = info
        .lambda
        .finite()
        .expect("c >= 1 gives a finite threshold")
        .clone();
    let g = General::new(a, b, c, u, v);
    let mut points = vec![BigRational::zero(), lambda.clone()];
    for (alpha, beta) in g.conditions() {
        if alpha != 0 {
            let root = BigRational::new(BigInt::from(-beta), BigInt::from(alpha));
            if root.is_positive() && root < lambda {
                points.push(root);
            }
        }
    }
    points.sort();
    points.dedup();
    let two = rat(2);
    let pieces = points
        .windows(2)
        .map(|w| g.piece(g.case_at(&((&w[0] + &w[1]) / &two), mutation)))
        .collect();
    Ok(PiecewiseFn::new(points, pieces)?)
}

/// The limit F-signature at one point, choosing the case at `t` directly.
pub fn limit_general_value(
    a: u64,
    b: u64,
    c: u64,
    u: u64,
    v: u64,
    t: &BigRational,
) -> Result<BigRational, FsigError> {
    limit_general_value_with(a, b, c, u, v, t, None)
}

pub fn limit_general_value_with(
    a: u64,
    b: u64,
    c: u64,
    u: u64,
    v: u64,
    t: &BigRational,
    mutation: Option<Mutation>,
) -> Result<BigRational, FsigError> {
    if t.is_negative() {
        return Err(FsigError::Domain(format!("t = {t} is negative")));
    }
    let info = lct_general(a, b, c, u, v)?;
    if !info.lambda.exceeds(t) {
        return Ok(BigRational::zero());
    }
    let g = General::new(a, b, c, u, v);
    Ok(g.piece(g.case_at(t, mutation)).eval(t))
}

/// The same limit through the degree `uv` cover `x -> x^u, y -> y^v`:
/// `uv` times the limit for `x^{(at+u-1)/u} y^{(bt+v-1)/v} (x+y)^{ct}`.
pub fn limit_via_rational_exponents(
    a: u64,
    b: u64,
    c: u64,
    u: u64,
    v: u64,
    t: &BigRational,
) -> Result<BigRational, FsigError> {
    check_general_params(c, u, v)?;
    if t.is_negative() {
        return Err(FsigError::Domain(format!("t = {t} is negative")));
    }
    let (a, b, c, u, v) = (
        rat(a as i64),
        rat(b as i64),
        rat(c as i64),
        rat(u as i64),
        rat(v as i64),
    );
    let one = BigRational::one();
    let mut r = [(&a * t + &u - &one) / &u, (&b * t + &v - &one) / &v, &c * t];
    r.sort_by(|x, y| y.cmp(x));
    Ok(&u * &v * limit_fsig_rational_exponents(&r[0], &r[1], &r[2])?)
}

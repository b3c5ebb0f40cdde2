//! Closed-form colengths of `(x^m, y^n, (x+y)^k)` and
//! `(x^M, y^M, (x^a y^b (x+y)^c)^K)`, plus the oracle route for comparison.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::{floor_div, Field};
use crate::closed_basis::IdealSpec;
use crate::mutation::{guard, Mutation};
use crate::oracle::{length_for_pair, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LengthError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Characteristic {
    Zero,
    Prime(u64),
}

impl Characteristic {
    pub fn of<F: Field>(field: &F) -> Self {
        match field.characteristic() {
            0 => Characteristic::Zero,
            p => Characteristic::Prime(p),
        }
    }

    pub fn prime(self) -> Option<u64> {
        match self {
            Characteristic::Zero => None,
            Characteristic::Prime(p) => Some(p),
        }
    }
}

impl fmt::Display for Characteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Characteristic::Zero => write!(f, "0"),
            Characteristic::Prime(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Route {
    SimpleFormula,
    GeneralFormula,
    WlpFormula,
    Oracle,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::SimpleFormula => "formula",
            Route::GeneralFormula => "formula",
            Route::WlpFormula => "wlp",
            Route::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseTag {
    A,
    B,
    C,
    D,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub condition: String,
    pub holds: bool,
}

impl HypothesisCheck {
    fn new(condition: impl Into<String>, holds: bool) -> Self {
        Self {
            condition: condition.into(),
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LengthResult {
    pub value: u64,
    pub route: Route,
    /// `None` for the oracle route.
    pub case_tag: Option<CaseTag>,
    pub hypotheses: Vec<HypothesisCheck>,
}

fn require(checks: &[HypothesisCheck]) -> Result<(), LengthError> {
    match checks.iter().find(|c| !c.holds) {
        Some(c) => Err(LengthError::HypothesisViolation(c.condition.clone())),
        None => Ok(()),
    }
}

fn nonnegative(v: i128, what: &str) -> Result<u64, LengthError> {
    u64::try_from(v).map_err(|_| LengthError::Domain(format!("{what} evaluated to {v}")))
}

/// Colength of `(x^beta, y^eta) + (x^{beta-1-t} y^{alpha-beta+1+2t} : t < beta)`
/// for `alpha >= beta`.
pub fn staircase_colength(alpha: u64, beta: u64, eta: u64) -> Result<u64, LengthError> {
    if alpha < beta {
        return Err(LengthError::Domain(format!(
            "staircase needs alpha >= beta, got alpha={alpha}, beta={beta}"
        )));
    }
    let (al, be, et) = (alpha as i128, beta as i128, eta as i128);
    let v = if be + et <= al {
        be * et
    } else if al + be <= et {
        be * al
    } else {
        be * et - (be + et - al).pow(2) / 4
    };
    nonnegative(v, "staircase colength")
}

/// Colength of `(x^m, y^n, (x+y)^k)`. In characteristic `p` this needs
/// `min(m+k, m+n, n+k) <= p`.
pub fn length_simple(
    k: u64,
    m: u64,
    n: u64,
    ch: Characteristic,
) -> Result<LengthResult, LengthError> {
    length_simple_with(k, m, n, ch, None)
}

pub fn length_simple_with(
    k: u64,
    m: u64,
    n: u64,
    ch: Characteristic,
    mutation: Option<Mutation>,
) -> Result<LengthResult, LengthError> {
    let mut hypotheses = Vec::new();
    if let Some(p) = ch.prime() {
        let lo = (m + k).min(m + n).min(n + k);
        hypotheses.push(HypothesisCheck::new(
            format!("min(m+k, m+n, n+k) = {lo} <= p = {p}"),
            lo <= p,
        ));
    }
    require(&hypotheses)?;
    let (ki, mi, ni) = (k as i128, m as i128, n as i128);
    let conds = [
        guard(n >= k + m, Mutation::SimpleCaseA, mutation),
        guard(k >= m + n, Mutation::SimpleCaseB, mutation),
        guard(m >= n + k, Mutation::SimpleCaseC, mutation),
    ];
    let values = [ki * mi, mi * ni, ki * ni];
    let (tag, v) = match conds.iter().position(|&c| c) {
        Some(0) => (CaseTag::A, values[0]),
        Some(1) => (CaseTag::B, values[1]),
        Some(_) => (CaseTag::C, values[2]),
        None => (
            CaseTag::D,
            ki * ni + ki * mi + ni * mi - (ki + ni + mi).pow(2) / 4,
        ),
    };
    if mutation.is_none() {
        for (c, val) in conds.iter().zip(values) {
            assert!(
                !c || val == v,
                "overlapping cases disagree at (k,m,n)=({k},{m},{n})"
            );
        }
    }
    Ok(LengthResult {
        value: nonnegative(v, "simple length")?,
        route: Route::SimpleFormula,
        case_tag: Some(tag),
        hypotheses,
    })
}

/// Colength of `(x^m, y^n, x^a y^b g)` from the colength `inner` of
/// `(x^{m-a'}, y^{n-b'}, g)`, with `a' = min(a, m)`, `b' = min(b, n)`: the
/// rows `y^j, j < b'` contribute `m` boxes each, the remaining rows `a'` each,
/// and the shifted inner staircase the rest.
pub fn length_shift(m: u64, n: u64, a: u64, b: u64, inner: u64) -> u64 {
    if a >= m || b >= n {
        return m * n;
    }
    m * b + (n - b) * a + inner
}

/// Colength of `(x^M, y^M, (x^a y^b (x+y)^c)^K)` with `aK, bK <= M`.
///
/// In characteristic `p` this needs
/// `min(M+(c-a)K, M+(c-b)K, 2M-(a+b)K) <= p`. When `M = p` the exponents `a`
/// and `c` may be exchanged (a linear change of coordinates fixes
/// `(x^p, y^p)`), so `c <= a` is arranged first.
pub fn length_general(spec: &IdealSpec, ch: Characteristic) -> Result<LengthResult, LengthError> {
    if spec.n != spec.m {
        return Err(LengthError::Domain(format!(
            "closed form needs N = M (got M={}, N={}); use the oracle route",
            spec.m, spec.n
        )));
    }
    let (mm, kk) = (spec.m as i128, spec.k as i128);
    let (mut a, b, mut c) = (spec.a as i128, spec.b as i128, spec.c as i128);
    let mut hypotheses = Vec::new();
    if ch.prime() == Some(spec.m) && c > a {
        std::mem::swap(&mut a, &mut c);
        hypotheses.push(HypothesisCheck::new(
            format!("M = p: exchanged a and c to get (a,b,c) = ({a},{b},{c})"),
            true,
        ));
    }
    hypotheses.push(HypothesisCheck::new(
        format!("aK = {} <= M = {mm}", a * kk),
        a * kk <= mm,
    ));
    hypotheses.push(HypothesisCheck::new(
        format!("bK = {} <= M = {mm}", b * kk),
        b * kk <= mm,
    ));
    if let Some(p) = ch.prime() {
        let lo = (mm + (c - a) * kk)
            .min(mm + (c - b) * kk)
            .min(2 * mm - (a + b) * kk);
        hypotheses.push(HypothesisCheck::new(
            format!("min(M+(c-a)K, M+(c-b)K, 2M-(a+b)K) = {lo} <= p = {p}"),
            lo <= p as i128,
        ));
    }
    require(&hypotheses)?;
    let s = a + b + c;
    let conds = [a >= b + c, s * kk >= 2 * mm, b >= a + c];
    let values = [
        s * kk * mm - a * (b + c) * kk * kk,
        mm * mm,
        s * kk * mm - b * (a + c) * kk * kk,
    ];
    let (tag, v) = match conds.iter().position(|&c| c) {
        Some(0) => (CaseTag::A, values[0]),
        Some(1) => (CaseTag::B, values[1]),
        Some(_) => (CaseTag::C, values[2]),
        None => (CaseTag::D, s * kk * mm - (s * s * kk * kk) / 4),
    };
    for (c, val) in conds.iter().zip(values) {
        assert!(!c || val == v, "overlapping cases disagree at {spec:?}");
    }
    Ok(LengthResult {
        value: nonnegative(v, "general length")?,
        route: Route::GeneralFormula,
        case_tag: Some(tag),
        hypotheses,
    })
}

fn choose2(n: i64) -> i64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// Colength of `(x^m, y^n, (x+y)^k)` through the socle-middle degree of
/// `K[x,y,z]/(x^m, y^n, z^k)`, valid when that algebra has the weak Lefschetz
/// property. In characteristic `p` this needs `m, n <= p - k` as given
/// (unsorted); in characteristic zero the condition is vacuous.
pub fn length_wlp(k: u64, m: u64, n: u64, ch: Characteristic) -> Result<LengthResult, LengthError> {
    let mut hypotheses = Vec::new();
    if let Some(p) = ch.prime() {
        let bound = p as i128 - k as i128;
        hypotheses.push(HypothesisCheck::new(
            format!("m = {m} <= p - k = {bound}"),
            (m as i128) <= bound,
        ));
        hypotheses.push(HypothesisCheck::new(
            format!("n = {n} <= p - k = {bound}"),
            (n as i128) <= bound,
        ));
    }
    require(&hypotheses)?;
    let mut d = [k as i64, m as i64, n as i64];
    d.sort_unstable_by(|x, y| y.cmp(x));
    let t = d[0] + d[1] + d[2] - 3;
    let (tag, v) = if 2 * d[0] <= t + 1 {
        let h = floor_div(t, 2);
        let total = choose2(h + 2) - d.iter().map(|&di| choose2(h - di + 2)).sum::<i64>();
        (CaseTag::A, total)
    } else {
        (CaseTag::B, d[1] * d[2])
    };
    Ok(LengthResult {
        value: nonnegative(v as i128, "WLP length")?,
        route: Route::WlpFormula,
        case_tag: Some(tag),
        hypotheses,
    })
}

/// The same colength from the rank oracle over `field`.
pub fn length_oracle<F: Field>(field: &F, spec: &IdealSpec) -> Result<LengthResult, LengthError> {
    let to_u32 = |v: u64| {
        u32::try_from(v).map_err(|_| LengthError::Domain(format!("box side {v} is too large")))
    };
    let value = length_for_pair(
        field,
        to_u32(spec.m)?,
        to_u32(spec.n)?,
        (spec.a, spec.b, spec.c),
        (1, 1),
        spec.k,
    )?;
    Ok(LengthResult {
        value,
        route: Route::Oracle,
        case_tag: None,
        hypotheses: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PrimeField, Rationals};
    use crate::poly::Monomial;
    use crate::poly::MonomialIdeal;

    const Q: Characteristic = Characteristic::Zero;

    fn spec(m: u64, k: u64, a: u64, b: u64, c: u64) -> IdealSpec {
        IdealSpec {
            m,
            n: m,
            k,
            a,
            b,
            c,
        }
    }

    fn staircase_by_boxes(alpha: u64, beta: u64, eta: u64) -> u64 {
        let mut gens = vec![Monomial::new(beta as u32, 0), Monomial::new(0, eta as u32)];
        for t in 0..beta {
            gens.push(Monomial::new(
                (beta - 1 - t) as u32,
                (alpha - beta + 1 + 2 * t) as u32,
            ));
        }
        MonomialIdeal::new(gens).staircase_count().unwrap()
    }

    #[test]
    fn staircase_examples() {
        assert_eq!(staircase_colength(5, 2, 3).unwrap(), 6);
        assert_eq!(staircase_colength(3, 2, 2).unwrap(), 4);
        assert_eq!(staircase_colength(2, 2, 2).unwrap(), 3);
        assert!(staircase_colength(1, 2, 2).is_err());
        for alpha in 0..12 {
            for beta in 0..=alpha {
                for eta in 0..12 {
                    assert_eq!(
                        staircase_colength(alpha, beta, eta).unwrap(),
                        staircase_by_boxes(alpha, beta, eta),
                        "({alpha},{beta},{eta})"
                    );
                }
            }
        }
    }

    #[test]
    fn simple_examples() {
        let r = length_simple(3, 2, 2, Q).unwrap();
        assert_eq!((r.value, r.case_tag), (4, Some(CaseTag::D)));
        assert_eq!(length_simple(2, 2, 2, Q).unwrap().value, 3);
        let r = length_simple(1, 1, 2, Q).unwrap();
        assert_eq!((r.value, r.case_tag), (1, Some(CaseTag::A)));
        assert!(matches!(
            length_simple(5, 5, 5, Characteristic::Prime(7)),
            Err(LengthError::HypothesisViolation(_))
        ));
    }

    #[test]
    fn simple_is_symmetric() {
        for k in 0..10 {
            for m in 0..10 {
                for n in 0..10 {
                    let v = length_simple(k, m, n, Q).unwrap().value;
                    for (x, y, z) in [(k, n, m), (m, k, n), (m, n, k), (n, k, m), (n, m, k)] {
                        assert_eq!(length_simple(x, y, z, Q).unwrap().value, v);
                    }
                }
            }
        }
    }

    #[test]
    fn shift_examples() {
        assert_eq!(length_shift(5, 5, 0, 0, 13), 13);
        assert_eq!(length_shift(4, 6, 4, 1, 99), 24);
        assert_eq!(length_shift(5, 5, 1, 1, 4), 13);
        // Unequal sides: (x^5, y^3, x^2 y (x+y)) has colength 5 + 2*2 + 2 = 11.
        let inner = length_simple(1, 3, 2, Q).unwrap().value;
        assert_eq!(length_shift(5, 3, 2, 1, inner), 11);
        let direct = length_oracle(
            &Rationals,
            &IdealSpec {
                m: 5,
                n: 3,
                k: 1,
                a: 2,
                b: 1,
                c: 1,
            },
        )
        .unwrap();
        assert_eq!(direct.value, 11);
    }

    #[test]
    fn general_examples() {
        let r = length_general(&spec(5, 1, 1, 1, 1), Q).unwrap();
        assert_eq!((r.value, r.case_tag), (13, Some(CaseTag::D)));
        let r = length_general(&spec(5, 2, 2, 0, 0), Q).unwrap();
        assert_eq!((r.value, r.case_tag), (20, Some(CaseTag::A)));
        let r = length_general(&spec(3, 3, 1, 1, 1), Q).unwrap();
        assert_eq!((r.value, r.case_tag), (9, Some(CaseTag::B)));
        assert!(length_general(
            &IdealSpec {
                m: 5,
                n: 4,
                k: 1,
                a: 1,
                b: 1,
                c: 1
            },
            Q
        )
        .is_err());
        assert!(length_general(&spec(3, 2, 2, 0, 0), Q).is_err());
    }

    #[test]
    fn general_at_m_equals_p_exchanges_a_and_c() {
        // (x^7, y^7, (x+y)^3) over F_7: (x+y)^7 = x^7 + y^7 makes it
        // equivalent to (x^7, y^7, x^3), colength 21.
        let p7 = Characteristic::Prime(7);
        let r = length_general(&spec(7, 3, 0, 0, 1), p7).unwrap();
        assert_eq!(r.value, 21);
        let f7 = PrimeField::new(7).unwrap();
        assert_eq!(length_oracle(&f7, &spec(7, 3, 0, 0, 1)).unwrap().value, 21);
        // Over the rationals the same ideal has colength 3*7 - 2 = 19.
        assert_eq!(length_general(&spec(7, 3, 0, 0, 1), Q).unwrap().value, 19);
    }

    #[test]
    fn general_equals_shift_of_simple() {
        for m in 1..=12u64 {
            for k in 1..=4u64 {
                for a in 0..=3u64 {
                    for b in 0..=3u64 {
                        for c in 0..=3u64 {
                            if a * k > m || b * k > m {
                                continue;
                            }
                            let g = length_general(&spec(m, k, a, b, c), Q).unwrap().value;
                            let inner =
                                length_simple(c * k, m - a * k, m - b * k, Q).unwrap().value;
                            assert_eq!(g, length_shift(m, m, a * k, b * k, inner));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wlp_examples() {
        let p31 = Characteristic::Prime(31);
        let r = length_wlp(3, 2, 2, p31).unwrap();
        assert_eq!((r.value, r.case_tag), (4, Some(CaseTag::B)));
        let r = length_wlp(2, 2, 2, p31).unwrap();
        assert_eq!((r.value, r.case_tag), (3, Some(CaseTag::A)));
        assert_eq!(
            length_wlp(1, 1, 1, Characteristic::Prime(7)).unwrap().value,
            1
        );
        assert!(length_wlp(5, 3, 1, Characteristic::Prime(7)).is_err());
    }

    #[test]
    fn mutation_changes_some_value() {
        for mutation in [
            Mutation::SimpleCaseA,
            Mutation::SimpleCaseB,
            Mutation::SimpleCaseC,
        ] {
            let differs = (0..8).any(|k| {
                (0..8).any(|m| {
                    (0..8).any(|n| {
                        let honest = length_simple(k, m, n, Q).unwrap().value;
                        length_simple_with(k, m, n, Q, Some(mutation)).map(|r| r.value)
                            != Ok(honest)
                    })
                })
            });
            assert!(differs, "{mutation} is invisible");
        }
    }
}

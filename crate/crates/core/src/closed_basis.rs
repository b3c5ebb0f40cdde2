//! Explicit Gröbner bases for `(x^M, y^N, (x^a y^b (x+y)^c)^K)`.
//!
//! The building blocks are two families attached to `(x^m, y^n, (x+y)^k)`:
//! `f_odd`/`f_even` (with `f_recursive` as an independent evaluation of the
//! defining recursion) for `m <= k`, and `g_family` for `k < m`. The general
//! ideal reuses them after factoring out `x^{aK} y^{bK}`.

use serde::Serialize;
use thiserror::Error;

use crate::arith::{binom, Field};
use crate::poly::{Monomial, MonomialIdeal, Poly, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero in the field: {0}")]
    DivisionByZero(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Parameters of `(x^M, y^N, (x^a y^b (x+y)^c)^K)`. Field names are lower
/// case; `m`, `n`, `k` are the capital `M`, `N`, `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IdealSpec {
    pub m: u64,
    pub n: u64,
    pub k: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl IdealSpec {
    /// `(x^m, y^n, (x+y)^k)`.
    pub const fn simple(k: u64, m: u64, n: u64) -> Self {
        Self {
            m,
            n,
            k,
            a: 0,
            b: 0,
            c: 1,
        }
    }

    /// Which of the three basis shapes applies, tested in order.
    pub fn case(&self) -> BasisCase {
        let (ak, bk, ck) = (self.a * self.k, self.b * self.k, self.c * self.k);
        if ak >= self.m || bk >= self.n {
            BasisCase::PurePowers
        } else if ak + ck >= self.m {
            BasisCase::Truncated
        } else {
            BasisCase::Swapped
        }
    }

    /// The reduced `(k, m)` pair after factoring out `x^{aK} y^{bK}`:
    /// `(cK, M - aK)`. Only meaningful when `aK < M`.
    fn reduced(&self) -> (u64, u64) {
        (self.c * self.k, self.m - self.a * self.k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasisCase {
    /// `aK >= M` or `bK >= N`: the ideal is `(x^M, y^N)`.
    PurePowers,
    /// `(a+c)K >= M`: generators `x^M, y^N, H_t`.
    Truncated,
    /// `(a+c)K < M`: generators `x^M, y^N, f^K, L_t`.
    Swapped,
}

/// A generating set together with the minimal generators of its leading-term
/// ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    pub generators: Vec<Poly<F>>,
    pub lt_ideal: MonomialIdeal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedBasis<F: Field> {
    pub case: BasisCase,
    pub basis: GroebnerBasis<F>,
}

fn characteristic_bound<F: Field>(field: &F, lhs: i128, what: &str) -> Result<(), BasisError> {
    let p = field.characteristic();
    if p > 0 && lhs > p as i128 {
        return Err(BasisError::HypothesisViolation(format!(
            "{what} = {lhs} exceeds the characteristic {p}"
        )));
    }
    Ok(())
}

/// `m + k <= p` in characteristic `p`; vacuous in characteristic zero.
pub fn check_simple_hypothesis<F: Field>(field: &F, k: u64, m: u64) -> Result<(), BasisError> {
    characteristic_bound(field, m as i128 + k as i128, "m + k")
}

/// `M + (c - a)K <= p` in characteristic `p`; vacuous in characteristic zero.
pub fn check_general_hypothesis<F: Field>(field: &F, spec: &IdealSpec) -> Result<(), BasisError> {
    let lhs = spec.m as i128 + (spec.c as i128 - spec.a as i128) * spec.k as i128;
    characteristic_bound(field, lhs, "M + (c - a)K")
}

/// `prod(nums) / prod(dens)` in the field.
fn ratio<F: Field>(
    field: &F,
    nums: impl IntoIterator<Item = i64>,
    dens: impl IntoIterator<Item = i64>,
    context: &str,
) -> Result<F::Elem, BasisError> {
    let num = nums
        .into_iter()
        .fold(field.one(), |acc, v| field.mul(&acc, &field.from_i64(v)));
    let den = dens
        .into_iter()
        .fold(field.one(), |acc, v| field.mul(&acc, &field.from_i64(v)));
    let inv = field
        .inv(&den)
        .ok_or_else(|| BasisError::DivisionByZero(context.to_string()))?;
    Ok(field.mul(&num, &inv))
}

fn bin<F: Field>(field: &F, n: i64, k: i64) -> F::Elem {
    field.from_bigint(&binom(n, k))
}

fn mono(i: i64, j: i64) -> Monomial {
    debug_assert!(i >= 0 && j >= 0, "negative exponent ({i}, {j})");
    Monomial::new(i as u32, j as u32)
}

/// `sign * prod_{l=1}^{t}(m-j-l) / prod_{l=1}^{t}(m-l) * C(k+t, j)`.
fn odd_coefficient<F: Field>(
    field: &F,
    t: i64,
    k: i64,
    m: i64,
    j: i64,
) -> Result<F::Elem, BasisError> {
    let r = ratio(
        field,
        (1..=t).map(|l| m - j - l),
        (1..=t).map(|l| m - l),
        "odd-family coefficient",
    )?;
    Ok(field.mul(&r, &bin(field, k + t, j)))
}

fn check_odd_range(t: u64, k: u64, m: u64) -> Result<(), BasisError> {
    if !(t < m && m <= k) {
        return Err(BasisError::Domain(format!(
            "odd family needs 0 <= t < m <= k, got t={t}, k={k}, m={m}"
        )));
    }
    Ok(())
}

/// Closed form of `f_{2t+1}` for `(x^m, y^n, (x+y)^k)` with `m <= k`:
/// `sum_{j<m-t} [prod_{l=1}^t (m-j-l) / prod_{l=1}^t (m-l)] C(k+t, j) x^j y^{k-j+t}`.
pub fn f_odd<F: Field>(field: &F, t: u64, k: u64, m: u64) -> Result<Poly<F>, BasisError> {
    check_odd_range(t, k, m)?;
    check_simple_hypothesis(field, k, m)?;
    let (t, k, m) = (t as i64, k as i64, m as i64);
    let mut terms = Vec::new();
    for j in 0..m - t {
        terms.push((mono(j, k - j + t), odd_coefficient(field, t, k, m, j)?));
    }
    Ok(Poly::from_terms(field, terms))
}

/// Closed form of `f_{2t}`, `1 <= t < m <= k`:
/// `sum_{j<m-t} [prod_{l=2}^t (m-j-l) / prod_{l=1}^{t-1} (m-l)] C(k+t-1, j) x^{j+1} y^{k-j+t-1}`.
pub fn f_even<F: Field>(field: &F, t: u64, k: u64, m: u64) -> Result<Poly<F>, BasisError> {
    if t == 0 {
        return Err(BasisError::Domain("even family starts at t = 1".into()));
    }
    check_odd_range(t, k, m)?;
    check_simple_hypothesis(field, k, m)?;
    let (t, k, m) = (t as i64, k as i64, m as i64);
    let mut terms = Vec::new();
    for j in 0..m - t {
        let r = ratio(
            field,
            (2..=t).map(|l| m - j - l),
            (1..t).map(|l| m - l),
            "even-family coefficient",
        )?;
        let c = field.mul(&r, &bin(field, k + t - 1, j));
        terms.push((mono(j + 1, k - j + t - 1), c));
    }
    Ok(Poly::from_terms(field, terms))
}

/// `f_s` for `1 <= s < 2m` by running the defining recursion from
/// `f_1 = (x+y)^k` truncated below `x^m` and `f_2 = x f_1 - C(k, m-1) x^m y^{k-m+1}`.
pub fn f_recursive<F: Field>(field: &F, s: u64, k: u64, m: u64) -> Result<Poly<F>, BasisError> {
    if !(1 <= s && s < 2 * m && m <= k) {
        return Err(BasisError::Domain(format!(
            "recursion needs 1 <= s < 2m and m <= k, got s={s}, k={k}, m={m}"
        )));
    }
    check_simple_hypothesis(field, k, m)?;
    let x = Poly::x(field);
    let y = Poly::y(field);
    let f1 = Poly::power_xy(field, 0, 0, 1, 1, 1, k)?.truncate_x(m as u32);
    if s == 1 {
        return Ok(f1);
    }
    let correction = Poly::term(
        field,
        Monomial::new(m as u32, (k - m + 1) as u32),
        bin(field, k as i64, m as i64 - 1),
    );
    let f2 = x.try_mul(&f1)?.try_sub(&correction)?;
    // (odd, even) = (f_{2t-1}, f_{2t}), advanced one t at a time.
    let (mut odd, mut even) = (f1, f2);
    let (k, m) = (k as i64, m as i64);
    let mut t = 1i64;
    loop {
        if s as i64 == 2 * t {
            return Ok(even);
        }
        let c_odd = ratio(field, [k + 2 * t - m], [m - t], "odd recursion step")?;
        let next_odd = y.try_mul(&odd)?.try_sub(&even.scalar_mul(&c_odd))?;
        if s as i64 == 2 * t + 1 {
            return Ok(next_odd);
        }
        let c1 = ratio(
            field,
            [k + 2 * t - m + 1],
            [k + t - m + 1],
            "even recursion step",
        )?;
        let c2 = ratio(
            field,
            [t, k + t],
            [k + t - m + 1, m - t],
            "even recursion step",
        )?;
        let next_even = x
            .try_mul(&next_odd)?
            .scalar_mul(&c1)
            .try_sub(&y.try_mul(&even)?.scalar_mul(&c2))?;
        odd = next_odd;
        even = next_even;
        t += 1;
    }
}

/// `g_t` for `(x^m, y^n, (x+y)^k)` with `t < k < m`, by its expanded double sum
/// `sum_i (sum_{j=i}^{k-1-t} (-1)^{m-j-t} [prod (k-j-l) / prod (k-l)] C(m+t, j) C(j, i)) x^i y^{m-i+t}`.
pub fn g_family<F: Field>(field: &F, t: u64, k: u64, m: u64) -> Result<Poly<F>, BasisError> {
    if !(t < k && k < m) {
        return Err(BasisError::Domain(format!(
            "g family needs 0 <= t < k < m, got t={t}, k={k}, m={m}"
        )));
    }
    check_simple_hypothesis(field, k, m)?;
    swapped_double_sum(field, t as i64, k as i64, m as i64, 0, 0)
}

/// `g_t` computed as the image under `x -> x+y, y -> -y` of the odd family of
/// `(x^k, y^n, (x+y)^m)`.
pub fn g_family_via_phi<F: Field>(
    field: &F,
    t: u64,
    k: u64,
    m: u64,
) -> Result<Poly<F>, BasisError> {
    if !(t < k && k < m) {
        return Err(BasisError::Domain(format!(
            "g family needs 0 <= t < k < m, got t={t}, k={k}, m={m}"
        )));
    }
    Ok(f_odd(field, t, m, k)?.substitute_phi())
}

/// The double sum of `g_t(k, m)` multiplied by `x^{sx} y^{sy}`.
fn swapped_double_sum<F: Field>(
    field: &F,
    t: i64,
    k: i64,
    m: i64,
    sx: i64,
    sy: i64,
) -> Result<Poly<F>, BasisError> {
    let top = k - 1 - t;
    // Inner coefficients depend only on j; compute them once.
    let mut inner = Vec::with_capacity((top + 1) as usize);
    for j in 0..=top {
        let r = ratio(
            field,
            (1..=t).map(|l| k - j - l),
            (1..=t).map(|l| k - l),
            "g-family coefficient",
        )?;
        let mut c = field.mul(&r, &bin(field, m + t, j));
        if (m - j - t).rem_euclid(2) == 1 {
            c = field.neg(&c);
        }
        inner.push(c);
    }
    let mut terms = Vec::new();
    for i in 0..=top {
        let mut coeff = field.zero();
        for j in i..=top {
            let term = field.mul(&inner[j as usize], &bin(field, j, i));
            coeff = field.add(&coeff, &term);
        }
        terms.push((mono(i + sx, m - i + t + sy), coeff));
    }
    Ok(Poly::from_terms(field, terms))
}

/// `H_t` of the truncated case, `0 <= t < M - aK`:
/// `sum_{j<M-aK-t} prod_{l=1}^t ((M-aK-j-l)/(M-aK-l)) C(cK+t, j) x^{aK+j} y^{(b+c)K-j+t}`.
pub fn h_family<F: Field>(field: &F, t: u64, spec: &IdealSpec) -> Result<Poly<F>, BasisError> {
    if spec.case() != BasisCase::Truncated {
        return Err(BasisError::Domain(format!(
            "H_t requires aK < M, bK < N and (a+c)K >= M; {spec:?} is {:?}",
            spec.case()
        )));
    }
    let (_, reduced_m) = spec.reduced();
    if t >= reduced_m {
        return Err(BasisError::Domain(format!(
            "H_t needs t < M - aK = {reduced_m}, got t={t}"
        )));
    }
    check_general_hypothesis(field, spec)?;
    let (t, mm) = (t as i64, reduced_m as i64);
    let (ak, bk, ck) = (
        (spec.a * spec.k) as i64,
        (spec.b * spec.k) as i64,
        (spec.c * spec.k) as i64,
    );
    let mut terms = Vec::new();
    for j in 0..mm - t {
        let r = ratio(
            field,
            (1..=t).map(|l| mm - j - l),
            (1..=t).map(|l| mm - l),
            "H_t coefficient",
        )?;
        let c = field.mul(&r, &bin(field, ck + t, j));
        terms.push((mono(ak + j, bk + ck - j + t), c));
    }
    Ok(Poly::from_terms(field, terms))
}

/// `L_t` of the swapped case, `0 <= t < cK`: the `g_t` double sum for
/// `(k, m) = (cK, M - aK)` shifted by `x^{aK} y^{bK}`.
pub fn l_family<F: Field>(field: &F, t: u64, spec: &IdealSpec) -> Result<Poly<F>, BasisError> {
    if spec.case() != BasisCase::Swapped {
        return Err(BasisError::Domain(format!(
            "L_t requires aK < M, bK < N and (a+c)K < M; {spec:?} is {:?}",
            spec.case()
        )));
    }
    let (ck, reduced_m) = spec.reduced();
    if t >= ck {
        return Err(BasisError::Domain(format!(
            "L_t needs t < cK = {ck}, got t={t}"
        )));
    }
    check_general_hypothesis(field, spec)?;
    swapped_double_sum(
        field,
        t as i64,
        ck as i64,
        reduced_m as i64,
        (spec.a * spec.k) as i64,
        (spec.b * spec.k) as i64,
    )
}

/// The leading-term ideal predicted for `spec`, minimalized.
pub fn predicted_lt_ideal(spec: &IdealSpec) -> MonomialIdeal {
    let (mm, nn) = (spec.m as i64, spec.n as i64);
    let (ak, bk, ck) = (
        (spec.a * spec.k) as i64,
        (spec.b * spec.k) as i64,
        (spec.c * spec.k) as i64,
    );
    let mut gens = vec![mono(mm, 0), mono(0, nn)];
    match spec.case() {
        BasisCase::PurePowers => {}
        BasisCase::Truncated => {
            let s = ak + bk + ck;
            gens.extend((0..mm - ak).map(|t| mono(mm - t - 1, s - mm + 2 * t + 1)));
        }
        BasisCase::Swapped => {
            gens.push(mono(ak + ck, bk));
            gens.extend((0..ck).map(|t| mono(ak + ck - t - 1, mm + bk - ak - ck + 2 * t + 1)));
        }
    }
    MonomialIdeal::new(gens)
}

/// The explicit basis for `spec`. In characteristic `p` this requires
/// `M + (c - a)K <= p`.
pub fn closed_groebner<F: Field>(
    field: &F,
    spec: &IdealSpec,
) -> Result<ClosedBasis<F>, BasisError> {
    check_general_hypothesis(field, spec)?;
    let case = spec.case();
    let mut generators = vec![
        Poly::monomial(field, spec.m as u32, 0),
        Poly::monomial(field, 0, spec.n as u32),
    ];
    match case {
        BasisCase::PurePowers => {}
        BasisCase::Truncated => {
            for t in 0..spec.reduced().1 {
                generators.push(h_family(field, t, spec)?);
            }
        }
        BasisCase::Swapped => {
            generators.push(Poly::power_xy(field, spec.a, spec.b, spec.c, 1, 1, spec.k)?);
            for t in 0..spec.reduced().0 {
                generators.push(l_family(field, t, spec)?);
            }
        }
    }
    Ok(ClosedBasis {
        case,
        basis: GroebnerBasis {
            generators,
            lt_ideal: predicted_lt_ideal(spec),
        },
    })
}

/// The basis of `(x^m, y^n, (x+y)^k)`, guarded by `m + k <= p`.
pub fn closed_groebner_simple<F: Field>(
    field: &F,
    k: u64,
    m: u64,
    n: u64,
) -> Result<ClosedBasis<F>, BasisError> {
    check_simple_hypothesis(field, k, m)?;
    closed_groebner(field, &IdealSpec::simple(k, m, n))
}

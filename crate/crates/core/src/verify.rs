//! Grid cross-checks of every closed form against an independent route,
//! stopping each check at its first counterexample.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{Field, PrimeField, Rationals};
use crate::closed_basis::{closed_groebner, closed_groebner_simple, IdealSpec};
use crate::fsig::{
    corollary_b_check, fsig_at_p, fsig_empirical, lct_general, limit_fsig_general_with,
    limit_general_value_with, limit_via_rational_exponents,
};
use crate::lengths::{
    length_general, length_oracle, length_simple_with, length_wlp, Characteristic,
};
use crate::mutation::Mutation;
use crate::oracle::buchberger;
use crate::par::*;
use crate::poly::Poly;
use crate::sweep::{run_sweep, PairSpec, SweepConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Basis,
    Length,
    Fsig,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basis" => Ok(Suite::Basis),
            "length" => Ok(Suite::Length),
            "fsig" => Ok(Suite::Fsig),
            "all" => Ok(Suite::All),
            _ => Err(format!(
                "unknown suite `{s}`; expected basis, length, fsig or all"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub suite: Suite,
    /// Bound on `k, m, n` and on `M`.
    pub max_size: u64,
    pub primes: Vec<u64>,
    pub mutation: Option<Mutation>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub params: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    /// Cases compared; cases outside a hypothesis are skipped, not counted.
    pub cases: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.counterexample.is_none())
    }

    pub fn first_failure(&self) -> Option<(&'static str, &Counterexample)> {
        self.checks
            .iter()
            .find_map(|c| c.counterexample.as_ref().map(|ce| (c.name, ce)))
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.counterexample {
                None => writeln!(f, "PASS {} ({} cases)", c.name, c.cases)?,
                Some(ce) => {
                    writeln!(f, "FAIL {} at {}", c.name, ce.params)?;
                    writeln!(f, "  expected: {}", ce.expected)?;
                    writeln!(f, "  actual:   {}", ce.actual)?;
                }
            }
        }
        Ok(())
    }
}

enum Outcome {
    Skipped,
    Passed,
    Failed { expected: String, actual: String },
}

impl Outcome {
    fn compare<T: PartialEq + fmt::Display, E: fmt::Display>(
        expected: Result<T, E>,
        actual: Result<T, E>,
    ) -> Outcome {
        match (expected, actual) {
            (Ok(e), Ok(a)) if e == a => Outcome::Passed,
            (e, a) => Outcome::Failed {
                expected: show(e),
                actual: show(a),
            },
        }
    }
}

fn show<T: fmt::Display, E: fmt::Display>(r: Result<T, E>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => format!("error: {e}"),
    }
}

/// Runs `check` on every case and keeps the first failure in case order.
fn run_check<P, F>(name: &'static str, cases: Vec<P>, check: F) -> CheckReport
where
    P: fmt::Display + Sync,
    F: Fn(&P) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = cases.par_iter().map(&check).collect();
    let mut report = CheckReport {
        name,
        cases: 0,
        counterexample: None,
    };
    for (case, outcome) in cases.iter().zip(outcomes) {
        match outcome {
            Outcome::Skipped => {}
            Outcome::Passed => report.cases += 1,
            Outcome::Failed { expected, actual } => {
                report.cases += 1;
                report.counterexample = Some(Counterexample {
                    params: case.to_string(),
                    expected,
                    actual,
                });
                break;
            }
        }
    }
    report
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FieldChoice {
    Rationals,
    Prime(u64),
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Rationals => f.write_str("q"),
            FieldChoice::Prime(p) => write!(f, "p={p}"),
        }
    }
}

fn fields(primes: &[u64]) -> Vec<FieldChoice> {
    std::iter::once(FieldChoice::Rationals)
        .chain(primes.iter().map(|&p| FieldChoice::Prime(p)))
        .collect()
}

fn characteristic(field: FieldChoice) -> Characteristic {
    match field {
        FieldChoice::Rationals => Characteristic::Zero,
        FieldChoice::Prime(p) => Characteristic::Prime(p),
    }
}

/// Leading-term ideals of the closed basis and of Buchberger's output, or
/// `None` when the closed basis is outside its hypothesis.
fn lt_ideals<F: Field>(field: &F, spec: &IdealSpec, simple: bool) -> Option<(String, String)> {
    let closed = if simple {
        closed_groebner_simple(field, spec.k, spec.m, spec.n)
    } else {
        closed_groebner(field, spec)
    }
    .ok()?;
    let gens = [
        Poly::monomial(field, spec.m as u32, 0),
        Poly::monomial(field, 0, spec.n as u32),
        Poly::power_xy(field, spec.a, spec.b, spec.c, 1, 1, spec.k).ok()?,
    ];
    let oracle = match buchberger(&gens) {
        Ok(gb) => gb.lt_ideal.to_string(),
        Err(e) => format!("error: {e}"),
    };
    Some((oracle, closed.basis.lt_ideal.to_string()))
}

fn basis_outcome(field: FieldChoice, spec: &IdealSpec, simple: bool) -> Outcome {
    let pair = match field {
        FieldChoice::Rationals => lt_ideals(&Rationals, spec, simple),
        FieldChoice::Prime(p) => {
            lt_ideals(&PrimeField::new(p).expect("validated prime"), spec, simple)
        }
    };
    match pair {
        None => Outcome::Skipped,
        Some((expected, actual)) => Outcome::compare::<_, String>(Ok(expected), Ok(actual)),
    }
}

fn oracle_length(field: FieldChoice, spec: &IdealSpec) -> Result<u64, String> {
    let r = match field {
        FieldChoice::Rationals => length_oracle(&Rationals, spec),
        FieldChoice::Prime(p) => length_oracle(&PrimeField::new(p).expect("validated prime"), spec),
    };
    r.map(|l| l.value).map_err(|e| e.to_string())
}

struct SimpleCase {
    k: u64,
    m: u64,
    n: u64,
    field: FieldChoice,
}

struct GeneralCase {
    spec: IdealSpec,
    field: FieldChoice,
}

struct PerPrimeCase {
    a: u64,
    b: u64,
    c: u64,
    p: u64,
    r: u64,
}

struct LimitCase {
    spec: PairSpec,
    t: BigRational,
}

struct CorollaryCase {
    a: u64,
    b: u64,
    c: u64,
    t: BigRational,
}

impl fmt::Display for SimpleCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(k,m,n)=({},{},{}) field={}",
            self.k, self.m, self.n, self.field
        )
    }
}

impl fmt::Display for GeneralCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spec;
        write!(
            f,
            "(M,N,K,a,b,c)=({},{},{},{},{},{}) field={}",
            s.m, s.n, s.k, s.a, s.b, s.c, self.field
        )
    }
}

impl fmt::Display for PerPrimeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a,b,c)=({},{},{}) p={} r={}",
            self.a, self.b, self.c, self.p, self.r
        )
    }
}

impl fmt::Display for LimitCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} t={}", self.spec, self.t)
    }
}

impl fmt::Display for CorollaryCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a,b,c)=({},{},{}) t={}", self.a, self.b, self.c, self.t)
    }
}

fn simple_cases(max: u64, fields: &[FieldChoice]) -> Vec<SimpleCase> {
    let mut out = Vec::new();
    for &field in fields {
        for k in 1..=max {
            for m in 1..=max {
                for n in 1..=max {
                    out.push(SimpleCase { k, m, n, field });
                }
            }
        }
    }
    out
}

/// `M = N <= max`, `K <= min(4, max)`, `a, b, c <= 3`.
fn general_cases(max: u64, fields: &[FieldChoice]) -> Vec<GeneralCase> {
    let mut out = Vec::new();
    for &field in fields {
        for m in 1..=max {
            for k in 1..=max.min(4) {
                for a in 0..=3 {
                    for b in 0..=3 {
                        for c in 0..=3 {
                            let spec = IdealSpec {
                                m,
                                n: m,
                                k,
                                a,
                                b,
                                c,
                            };
                            out.push(GeneralCase { spec, field });
                        }
                    }
                }
            }
        }
    }
    out
}

fn basis_checks(config: &VerifyConfig) -> Vec<CheckReport> {
    let fields = fields(&config.primes);
    vec![
        run_check(
            "basis.simple",
            simple_cases(config.max_size, &fields),
            |c| basis_outcome(c.field, &IdealSpec::simple(c.k, c.m, c.n), true),
        ),
        run_check(
            "basis.general",
            general_cases(config.max_size, &fields),
            |c| basis_outcome(c.field, &c.spec, false),
        ),
    ]
}

fn length_checks(config: &VerifyConfig) -> Vec<CheckReport> {
    let fields = fields(&config.primes);
    let mutation = config.mutation;
    vec![
        run_check(
            "length.simple",
            simple_cases(config.max_size, &fields),
            |c| match length_simple_with(c.k, c.m, c.n, characteristic(c.field), mutation) {
                Err(crate::lengths::LengthError::HypothesisViolation(_)) => Outcome::Skipped,
                formula => Outcome::compare(
                    oracle_length(c.field, &IdealSpec::simple(c.k, c.m, c.n)),
                    formula.map(|l| l.value).map_err(|e| e.to_string()),
                ),
            },
        ),
        run_check(
            "length.wlp",
            simple_cases(config.max_size, &fields),
            |c| match length_wlp(c.k, c.m, c.n, characteristic(c.field)) {
                Err(crate::lengths::LengthError::HypothesisViolation(_)) => Outcome::Skipped,
                formula => Outcome::compare(
                    oracle_length(c.field, &IdealSpec::simple(c.k, c.m, c.n)),
                    formula.map(|l| l.value).map_err(|e| e.to_string()),
                ),
            },
        ),
        run_check(
            "length.general",
            general_cases(config.max_size, &fields),
            |c| match length_general(&c.spec, characteristic(c.field)) {
                Err(crate::lengths::LengthError::HypothesisViolation(_)) => Outcome::Skipped,
                formula => Outcome::compare(
                    oracle_length(c.field, &c.spec),
                    formula.map(|l| l.value).map_err(|e| e.to_string()),
                ),
            },
        ),
    ]
}

fn rational(n: u64, d: u64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Specs `x^a y^b (x^u + y^v)^c` with `a, b <= 3` and `c, u, v` in `1..=3`,
/// each with `t = i lambda / 12` for `i <= 14`.
fn limit_cases(max: u64) -> Vec<LimitCase> {
    let bound = max.min(3);
    let mut out = Vec::new();
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 1..=bound {
                for u in 1..=bound {
                    for v in 1..=bound {
                        let spec = PairSpec { a, b, c, u, v };
                        let lambda = lct_general(a, b, c, u, v)
                            .expect("c, u, v >= 1")
                            .lambda
                            .finite()
                            .cloned()
                            .expect("c >= 1 bounds the threshold");
                        for i in 0..=14 {
                            out.push(LimitCase {
                                spec,
                                t: &lambda * rational(i, 12),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn fsig_checks(config: &VerifyConfig) -> Vec<CheckReport> {
    let mutation = config.mutation;
    let bound = config.max_size.min(3);
    let mut small_primes: Vec<u64> = [7, 11]
        .into_iter()
        .chain(config.primes.iter().copied().filter(|&p| p <= 101))
        .collect();
    small_primes.sort_unstable();
    small_primes.dedup();
    let mut per_prime = Vec::new();
    for &p in &small_primes {
        for a in 0..=bound {
            for b in 0..=bound {
                for c in 0..=bound {
                    let mut r = 0;
                    while fsig_at_p(a, b, c, p, r).is_ok() {
                        per_prime.push(PerPrimeCase { a, b, c, p, r });
                        r += 1;
                    }
                }
            }
        }
    }
    let mut corollary = Vec::new();
    for a in 1..=config.max_size.min(4) {
        for b in 0..=a {
            for c in 0..=b {
                for i in 0..20 {
                    corollary.push(CorollaryCase {
                        a,
                        b,
                        c,
                        t: rational(i, 16),
                    });
                }
            }
        }
    }
    let mut reports = vec![
        run_check("fsig.per_prime", per_prime, |c| {
            Outcome::compare(
                fsig_empirical(c.a, c.b, c.c, 1, 1, c.p, c.r),
                fsig_at_p(c.a, c.b, c.c, c.p, c.r),
            )
        }),
        run_check("fsig.limit_general", limit_cases(config.max_size), |c| {
            let PairSpec { a, b, c: cc, u, v } = c.spec;
            let expected = limit_via_rational_exponents(a, b, cc, u, v, &c.t);
            let pointwise = limit_general_value_with(a, b, cc, u, v, &c.t, mutation);
            match Outcome::compare(expected.clone(), pointwise) {
                Outcome::Passed => {}
                failed => return failed,
            }
            let piecewise = limit_fsig_general_with(a, b, cc, u, v, mutation).map(|f| f.eval(&c.t));
            Outcome::compare(expected, piecewise)
        }),
        run_check("fsig.corollary_b", corollary, |c| {
            Outcome::compare::<bool, String>(
                Ok(true),
                corollary_b_check(c.a, c.b, c.c, &c.t).map_err(|e| e.to_string()),
            )
        }),
    ];
    let large: Vec<u64> = config.primes.iter().copied().filter(|&p| p >= 31).collect();
    if !large.is_empty() {
        let specs = [
            PairSpec::simple(1, 1, 1),
            PairSpec::simple(3, 1, 1),
            PairSpec {
                a: 1,
                b: 0,
                c: 1,
                u: 2,
                v: 3,
            },
        ];
        reports.push(convergence_check(&specs, &large));
    }
    reports
}

/// `|psi_p(floor(tp)/p) - psi(t)| <= 10/p` on a ten-point grid below the threshold.
pub fn convergence_check(specs: &[PairSpec], primes: &[u64]) -> CheckReport {
    let mut report = CheckReport {
        name: "fsig.convergence",
        cases: 0,
        counterexample: None,
    };
    for &spec in specs {
        let config = SweepConfig {
            spec,
            primes: primes.to_vec(),
            count: 10,
            interval: None,
        };
        match run_sweep(&config) {
            Err(e) => {
                report.counterexample = Some(Counterexample {
                    params: format!("{spec}"),
                    expected: "a sweep".into(),
                    actual: format!("error: {e}"),
                });
                return report;
            }
            Ok(rows) => {
                for row in rows {
                    report.cases += 1;
                    if !row.within_bound() {
                        report.counterexample = Some(Counterexample {
                            params: format!("{spec}, p={}, t={}, r={}", row.p, row.t, row.r),
                            expected: format!("|psi_p - psi| <= 10/{}", row.p),
                            actual: format!(
                                "|{} - {}| = {}",
                                row.psi_p, row.psi_limit, row.abs_diff
                            ),
                        });
                        return report;
                    }
                }
            }
        }
    }
    report
}

/// Runs the selected suites. Primes must already be validated.
pub fn run_verify(config: &VerifyConfig) -> VerifyReport {
    let mut checks = Vec::new();
    if config.suite.includes(Suite::Basis) {
        checks.extend(basis_checks(config));
    }
    if config.suite.includes(Suite::Length) {
        checks.extend(length_checks(config));
    }
    if config.suite.includes(Suite::Fsig) {
        checks.extend(fsig_checks(config));
    }
    VerifyReport { checks }
}

//! Tables of `psi_p(floor(tp)/p)` against the limit `psi(t)` over primes and
//! a grid of `t`, written as CSV or JSON.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arith::is_prime;
use crate::fsig::{
    fsig_at_p, fsig_empirical, lct_general, lct_simple, limit_fsig_general, limit_fsig_simple,
    FsigError, PiecewiseFn,
};
use crate::par::*;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Fsig(#[from] FsigError),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("json output failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("write failed: {0}")]
    Io(#[from] std::io::Error),
}

/// The polynomial `x^a y^b (x^u + y^v)^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PairSpec {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub u: u64,
    pub v: u64,
}

impl PairSpec {
    pub fn simple(a: u64, b: u64, c: u64) -> Self {
        Self {
            a,
            b,
            c,
            u: 1,
            v: 1,
        }
    }

    fn is_simple(&self) -> bool {
        self.u == 1 && self.v == 1
    }

    fn sorted(&self) -> (u64, u64, u64) {
        let mut e = [self.a, self.b, self.c];
        e.sort_unstable_by(|x, y| y.cmp(x));
        (e[0], e[1], e[2])
    }

    /// The limit function. `u = v = 1` uses the sorted two-case form, which
    /// also covers `c = 0`.
    pub fn limit(&self) -> Result<PiecewiseFn, FsigError> {
        if self.is_simple() {
            let (a, b, c) = self.sorted();
            limit_fsig_simple(a, b, c)
        } else {
            limit_fsig_general(self.a, self.b, self.c, self.u, self.v)
        }
    }

    pub fn lambda(&self) -> Result<BigRational, FsigError> {
        let info = if self.is_simple() {
            let (a, b, c) = self.sorted();
            lct_simple(a, b, c)?
        } else {
            lct_general(self.a, self.b, self.c, self.u, self.v)?
        };
        info.lambda
            .finite()
            .cloned()
            .ok_or_else(|| FsigError::Domain("threshold is infinite".into()))
    }

    /// `psi_p(r/p)`: the closed form when `u = v = 1`, otherwise the rank
    /// oracle with the weighted grading.
    pub fn psi_p(&self, p: u64, r: u64) -> Result<BigRational, FsigError> {
        if self.is_simple() {
            fsig_at_p(self.a, self.b, self.c, p, r)
        } else {
            fsig_empirical(self.a, self.b, self.c, self.u, self.v, p, r)
        }
    }
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(a,b,c,u,v)=({},{},{},{},{})",
            self.a, self.b, self.c, self.u, self.v
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("unknown format `{s}`; expected json or csv")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub spec: PairSpec,
    pub primes: Vec<u64>,
    /// Number of grid points `t_i = lo + i (hi - lo) / count`, `i < count`.
    pub count: usize,
    /// The grid interval; `None` means `[0, lambda)`.
    pub interval: Option<(BigRational, BigRational)>,
}

impl SweepConfig {
    /// Checks the primes and resolves the grid.
    pub fn grid(&self) -> Result<Vec<BigRational>, SweepError> {
        if self.primes.is_empty() {
            return Err(SweepError::Config("no primes given".into()));
        }
        if let Some(p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(SweepError::Config(format!("{p} is not prime")));
        }
        if self.count == 0 {
            return Err(SweepError::Config("grid needs at least one point".into()));
        }
        let lambda = self.spec.lambda()?;
        let (lo, hi) = self
            .interval
            .clone()
            .unwrap_or_else(|| (BigRational::zero(), lambda.clone()));
        if lo.is_negative() || lo >= hi || hi > lambda {
            return Err(SweepError::Config(format!(
                "interval [{lo}, {hi}] must satisfy 0 <= lo < hi <= lambda = {lambda}"
            )));
        }
        let step = (&hi - &lo) / BigRational::from_integer(BigInt::from(self.count));
        Ok((0..self.count)
            .map(|i| &lo + &step * BigRational::from_integer(BigInt::from(i)))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub p: u64,
    pub t: BigRational,
    pub r: u64,
    pub psi_p: BigRational,
    pub psi_limit: BigRational,
    pub abs_diff: BigRational,
}

impl SweepRow {
    pub fn r_over_p(&self) -> BigRational {
        BigRational::new(BigInt::from(self.r), BigInt::from(self.p))
    }

    /// Whether `|psi_p - psi| <= 10/p`.
    pub fn within_bound(&self) -> bool {
        self.abs_diff <= BigRational::new(BigInt::from(10), BigInt::from(self.p))
    }

    fn record(&self) -> SweepRecord {
        SweepRecord {
            p: self.p,
            t: self.t.to_string(),
            r: self.r,
            r_over_p: self.r_over_p().to_string(),
            psi_p: self.psi_p.to_string(),
            psi_limit: self.psi_limit.to_string(),
            abs_diff_decimal: decimal(&self.abs_diff, 12),
        }
    }
}

/// Serialized row; field order is the column order.
#[derive(Serialize)]
struct SweepRecord {
    p: u64,
    t: String,
    r: u64,
    r_over_p: String,
    psi_p: String,
    psi_limit: String,
    abs_diff_decimal: String,
}

#[derive(Serialize)]
struct SweepDocument {
    spec: PairSpec,
    lambda: String,
    rows: Vec<SweepRecord>,
}

/// `q` rounded to `digits` decimal places, halves away from zero.
pub fn decimal(q: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = q.abs() * BigRational::from_integer(scale.clone());
    let rounded = (scaled + BigRational::new(1.into(), 2.into()))
        .floor()
        .to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if q.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    let frac = frac.to_u64().unwrap_or(0);
    format!("{sign}{whole}.{frac:0width$}", width = digits as usize)
}

/// One row per prime and grid point, ordered by `p` then `t`.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>, SweepError> {
    let grid = config.grid()?;
    let limit = config.spec.limit()?;
    let mut primes = config.primes.clone();
    primes.sort_unstable();
    primes.dedup();
    let points: Vec<(u64, BigRational)> = primes
        .iter()
        .flat_map(|&p| grid.iter().map(move |t| (p, t.clone())))
        .collect();
    points
        .par_iter()
        .map(|(p, t)| {
            let r = (t * BigRational::from_integer(BigInt::from(*p)))
                .floor()
                .to_integer()
                .to_u64()
                .expect("t >= 0");
            let psi_p = config.spec.psi_p(*p, r)?;
            let psi_limit = limit.eval(t);
            let abs_diff = (&psi_p - &psi_limit).abs();
            Ok(SweepRow {
                p: *p,
                t: t.clone(),
                r,
                psi_p,
                psi_limit,
                abs_diff,
            })
        })
        .collect()
}

/// Writes `rows` in `format`. Both formats carry the same columns.
pub fn write_rows<W: Write>(
    out: W,
    config: &SweepConfig,
    rows: &[SweepRow],
    format: OutputFormat,
) -> Result<(), SweepError> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row.record())?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let doc = SweepDocument {
                spec: config.spec,
                lambda: config.spec.lambda()?.to_string(),
                rows: rows.iter().map(SweepRow::record).collect(),
            };
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

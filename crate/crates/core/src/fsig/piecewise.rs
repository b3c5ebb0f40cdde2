// Errors carry exact rationals for diagnostics; construction is off the hot path.
#![allow(clippy::result_large_err)]

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PiecewiseError {
    #[error("no breakpoints")]
    Empty,
    #[error("first breakpoint is {0}, not 0")]
    NotStartingAtZero(BigRational),
    #[error("breakpoints are not strictly increasing at {0}")]
    NotIncreasing(BigRational),
    #[error("{pieces} pieces for {breakpoints} breakpoints; expected one fewer piece")]
    PieceCount { pieces: usize, breakpoints: usize },
    #[error("pieces disagree at breakpoint {0}")]
    Discontinuous(BigRational),
    #[error("value at 0 is {0}, not 1")]
    NotOneAtZero(BigRational),
    #[error("value at lambda = {at} is {value}, not 0")]
    NonzeroAtLambda { at: BigRational, value: BigRational },
    #[error("increases between {0} and {1}")]
    Increasing(BigRational, BigRational),
    #[error("midpoint convexity fails between {0} and {1}")]
    NotConvex(BigRational, BigRational),
    #[error("lambda {lambda} differs from the last breakpoint {last}")]
    LambdaMismatch {
        lambda: BigRational,
        last: BigRational,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

/// `c0 + c1 t + c2 t^2` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadratic {
    pub coeffs: [BigRational; 3],
}

impl Quadratic {
    pub fn new(c0: BigRational, c1: BigRational, c2: BigRational) -> Self {
        Self {
            coeffs: [c0, c1, c2],
        }
    }

    pub fn zero() -> Self {
        Self::new(
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        )
    }

    /// `(p0 + p1 t)(q0 + q1 t)`.
    pub fn product(p: (BigRational, BigRational), q: (BigRational, BigRational)) -> Self {
        Self::new(&p.0 * &q.0, &p.0 * &q.1 + &p.1 * &q.0, &p.1 * &q.1)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let [c0, c1, c2] = &self.coeffs;
        c0 + t * (c1 + t * c2)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [c0, c1, c2] = &self.coeffs;
        write!(f, "{c0} + ({c1})*t + ({c2})*t^2")
    }
}

/// A continuous, non-increasing, convex function on `t >= 0` that is a
/// quadratic on each interval `[b_i, b_{i+1})` and zero from the last
/// breakpoint `lambda` on. Values for `t < 0` extend the first piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewiseFn {
    breakpoints: Vec<BigRational>,
    pieces: Vec<Quadratic>,
}

/// Number of grid points used for the monotonicity and convexity checks.
const SAMPLE_GRID: usize = 15;
/// Number of midpoint triples checked at construction.
pub const CONVEXITY_TRIPLES: usize = 100;

impl PiecewiseFn {
    /// Validates and builds the function. Adjacent identical pieces are merged.
    pub fn new(
        breakpoints: Vec<BigRational>,
        pieces: Vec<Quadratic>,
    ) -> Result<Self, PiecewiseError> {
        let first = breakpoints.first().ok_or(PiecewiseError::Empty)?;
        if !first.is_zero() {
            return Err(PiecewiseError::NotStartingAtZero(first.clone()));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(PiecewiseError::NotIncreasing(w[1].clone()));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(PiecewiseError::PieceCount {
                pieces: pieces.len(),
                breakpoints: breakpoints.len(),
            });
        }
        let mut bps = vec![breakpoints[0].clone()];
        let mut merged: Vec<Quadratic> = Vec::new();
        for (i, piece) in pieces.into_iter().enumerate() {
            if merged.last() == Some(&piece) {
                continue;
            }
            if i > 0 {
                bps.push(breakpoints[i].clone());
            }
            merged.push(piece);
        }
        bps.push(breakpoints.last().unwrap().clone());
        let f = Self {
            breakpoints: bps,
            pieces: merged,
        };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<(), PiecewiseError> {
        let at_zero = self.eval(&BigRational::zero());
        if !at_zero.is_one() {
            return Err(PiecewiseError::NotOneAtZero(at_zero));
        }
        for (i, at) in self.breakpoints.iter().enumerate().skip(1) {
            let left = self.pieces[i - 1].eval(at);
            let right = self
                .pieces
                .get(i)
                .map_or_else(BigRational::zero, |p| p.eval(at));
            if left != right {
                if i == self.pieces.len() {
                    return Err(PiecewiseError::NonzeroAtLambda {
                        at: at.clone(),
                        value: left,
                    });
                }
                return Err(PiecewiseError::Discontinuous(at.clone()));
            }
        }
        let mut grid = self.sample_grid();
        grid.extend(self.breakpoints.iter().cloned());
        grid.sort();
        grid.dedup();
        for w in grid.windows(2) {
            if self.eval(&w[0]) < self.eval(&w[1]) {
                return Err(PiecewiseError::Increasing(w[0].clone(), w[1].clone()));
            }
        }
        for (x, y) in self.convexity_pairs() {
            let two = BigRational::from_integer(BigInt::from(2));
            let mid = (&x + &y) / &two;
            if self.eval(&mid) * &two > self.eval(&x) + self.eval(&y) {
                return Err(PiecewiseError::NotConvex(x, y));
            }
        }
        Ok(())
    }

    /// Evenly spaced points covering `[0, 6 lambda / 5]`.
    fn sample_grid(&self) -> Vec<BigRational> {
        let top = self.lambda() * BigRational::new(6.into(), 5.into());
        let steps = BigRational::from_integer(BigInt::from(SAMPLE_GRID - 1));
        (0..SAMPLE_GRID)
            .map(|i| &top * BigRational::from_integer(BigInt::from(i)) / &steps)
            .collect()
    }

    /// The first `CONVEXITY_TRIPLES` pairs `x < y` of the sample grid; each
    /// pair with its midpoint is one triple.
    pub fn convexity_pairs(&self) -> Vec<(BigRational, BigRational)> {
        let grid = self.sample_grid();
        (0..grid.len())
            .flat_map(|i| (i + 1..grid.len()).map(move |j| (i, j)))
            .take(CONVEXITY_TRIPLES)
            .map(|(i, j)| (grid[i].clone(), grid[j].clone()))
            .collect()
    }

    pub fn breakpoints(&self) -> &[BigRational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Quadratic] {
        &self.pieces
    }

    /// The last breakpoint, where the function reaches zero.
    pub fn lambda(&self) -> &BigRational {
        self.breakpoints.last().unwrap()
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        if t >= self.lambda() {
            return BigRational::zero();
        }
        let idx = self.breakpoints[1..].partition_point(|b| b <= t);
        self.pieces[idx].eval(t)
    }

    pub fn to_json(&self) -> PiecewiseJson {
        PiecewiseJson {
            breakpoints: self.breakpoints.iter().map(ToString::to_string).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| PieceJson {
                    coeffs: p.coeffs.clone().map(|c| c.to_string()),
                })
                .collect(),
            lambda: self.lambda().to_string(),
        }
    }

    pub fn from_json(json: &PiecewiseJson) -> Result<Self, PiecewiseError> {
        let parse = |s: &str| parse_rational(s).map_err(|e| PiecewiseError::Parse(e.to_string()));
        let breakpoints = json
            .breakpoints
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let pieces = json
            .pieces
            .iter()
            .map(|p| {
                let [c0, c1, c2] = &p.coeffs;
                Ok(Quadratic::new(parse(c0)?, parse(c1)?, parse(c2)?))
            })
            .collect::<Result<Vec<_>, PiecewiseError>>()?;
        let lambda = parse(&json.lambda)?;
        let f = Self::new(breakpoints, pieces)?;
        if &lambda != f.lambda() {
            return Err(PiecewiseError::LambdaMismatch {
                lambda,
                last: f.lambda().clone(),
            });
        }
        Ok(f)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("plain strings serialize")
    }

    pub fn from_json_str(s: &str) -> Result<Self, PiecewiseError> {
        let json: PiecewiseJson =
            serde_json::from_str(s).map_err(|e| PiecewiseError::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Serialized form: exact rational strings, constant coefficient first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiecewiseJson {
    pub breakpoints: Vec<String>,
    pub pieces: Vec<PieceJson>,
    pub lambda: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceJson {
    pub coeffs: [String; 3],
}

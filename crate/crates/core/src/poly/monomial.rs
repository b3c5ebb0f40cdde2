use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

/// `x^i y^j`. Ordered graded-lexicographically with `x > y`: total degree
/// first, then the larger `x` exponent wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0 };

    pub const fn new(i: u32, j: u32) -> Self {
        Self { i, j }
    }

    pub const fn degree(self) -> u64 {
        self.i as u64 + self.j as u64
    }

    pub const fn divides(self, other: Monomial) -> bool {
        self.i <= other.i && self.j <= other.j
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(self, other: Monomial) -> Option<Monomial> {
        self.divides(other)
            .then(|| Monomial::new(other.i - self.i, other.j - self.j))
    }

    pub fn lcm(self, other: Monomial) -> Monomial {
        Monomial::new(self.i.max(other.i), self.j.max(other.j))
    }

    pub fn is_coprime(self, other: Monomial) -> bool {
        (self.i == 0 || other.i == 0) && (self.j == 0 || other.j == 0)
    }

    /// Weighted degree `wx * i + wy * j`.
    pub fn weighted_degree(self, wx: u64, wy: u64) -> u64 {
        wx * self.i as u64 + wy * self.j as u64
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.i.cmp(&other.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |v: &str, e: u32| match e {
            0 => None,
            1 => Some(v.to_string()),
            e => Some(format!("{v}^{e}")),
        };
        let parts: Vec<String> = [part("x", self.i), part("y", self.j)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// A monomial ideal in `K[x, y]`, kept as its minimal generating set sorted by
/// increasing `x` exponent (hence decreasing `y` exponent).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize)]
pub struct MonomialIdeal {
    gens: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn new(gens: impl IntoIterator<Item = Monomial>) -> Self {
        let mut all: Vec<Monomial> = gens.into_iter().collect();
        all.sort_by_key(|m| (m.i, m.j));
        all.dedup();
        let mut gens: Vec<Monomial> = Vec::new();
        for m in all {
            // Sorted by x exponent, so m is redundant iff some kept generator
            // has a y exponent no larger than m's.
            if gens.iter().all(|g| !g.divides(m)) {
                gens.push(m);
            }
        }
        Self { gens }
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, m: Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// Number of monomials outside the ideal; `None` when that set is infinite.
    pub fn staircase_count(&self) -> Option<u64> {
        let has_x = self.gens.iter().any(|g| g.j == 0);
        let has_y = self.gens.iter().any(|g| g.i == 0);
        if !(has_x && has_y) {
            return None;
        }
        // Between consecutive generators the staircase height is the smallest
        // y exponent among generators with x exponent at most the column.
        let mut total = 0u64;
        for w in self.gens.windows(2) {
            total += (w[1].i - w[0].i) as u64 * w[0].j as u64;
        }
        Some(total)
    }

    /// Monomials outside the ideal, ordered by `x` then `y` exponent.
    pub fn staircase(&self) -> Option<Vec<Monomial>> {
        self.staircase_count()?;
        let mut out = Vec::new();
        for w in self.gens.windows(2) {
            for i in w[0].i..w[1].i {
                out.extend((0..w[0].j).map(|j| Monomial::new(i, j)));
            }
        }
        Some(out)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.gens.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

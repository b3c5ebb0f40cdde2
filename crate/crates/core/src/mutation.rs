//! Deliberate corruptions of case boundaries, used to confirm that the
//! verification suites can actually fail.
//!
//! A mutation reverses one case condition (`>=` becomes `<`). Turning `>=`
//! into `>` would be invisible: the formulas agree on every boundary.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Mutation {
    /// `n >= k + m` in the simple length theorem.
    SimpleCaseA,
    /// `k >= m + n` in the simple length theorem.
    SimpleCaseB,
    /// `m >= n + k` in the simple length theorem.
    SimpleCaseC,
    /// First case of the general limit function.
    GeneralCase1,
    /// Second case of the general limit function.
    GeneralCase2,
    /// Third case of the general limit function.
    GeneralCase3,
}

impl Mutation {
    pub const ALL: [Mutation; 6] = [
        Mutation::SimpleCaseA,
        Mutation::SimpleCaseB,
        Mutation::SimpleCaseC,
        Mutation::GeneralCase1,
        Mutation::GeneralCase2,
        Mutation::GeneralCase3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mutation::SimpleCaseA => "simple-a",
            Mutation::SimpleCaseB => "simple-b",
            Mutation::SimpleCaseC => "simple-c",
            Mutation::GeneralCase1 => "general-1",
            Mutation::GeneralCase2 => "general-2",
            Mutation::GeneralCase3 => "general-3",
        }
    }
}

/// Applies `mutation` to a case condition if it targets `site`.
pub(crate) fn guard(cond: bool, site: Mutation, mutation: Option<Mutation>) -> bool {
    if mutation == Some(site) {
        !cond
    } else {
        cond
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Mutation::ALL.iter().map(|m| m.name()).collect();
                format!(
                    "unknown mutation `{s}`; expected one of {}",
                    names.join(", ")
                )
            })
    }
}

use std::collections::HashMap;

use crate::arith::Field;
use crate::par::*;
use crate::poly::{Monomial, Poly};

use super::OracleError;

/// Largest `M * N` accepted over the rationals.
pub const MAX_RATIONAL_BOX: u64 = 2500;

/// One graded piece of `K[x,y]/(x^M, y^N)`: the box monomials of a fixed
/// weighted degree, listed by increasing `x` exponent. Consecutive entries
/// differ by `x^{wy} / y^{wx}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub degree: u64,
    pub first_i: u32,
    pub monomials: Vec<Monomial>,
}

/// The weighted-degree decomposition of the box `i < M, j < N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRankPlan {
    pub m: u32,
    pub n: u32,
    pub wx: u64,
    pub wy: u64,
    pub blocks: Vec<Block>,
    index: HashMap<u64, usize>,
}

impl GradedRankPlan {
    pub fn new(m: u32, n: u32, wx: u64, wy: u64) -> Self {
        assert!(wx > 0 && wy > 0, "weights must be positive");
        let g = num_integer::gcd(wx, wy);
        let (wx, wy) = (wx / g, wy / g);
        let mut by_degree: HashMap<u64, Vec<Monomial>> = HashMap::new();
        for i in 0..m {
            for j in 0..n {
                let mono = Monomial::new(i, j);
                by_degree
                    .entry(mono.weighted_degree(wx, wy))
                    .or_default()
                    .push(mono);
            }
        }
        let mut blocks: Vec<Block> = by_degree
            .into_iter()
            .map(|(degree, mut monomials)| {
                monomials.sort_by_key(|m| m.i);
                Block {
                    degree,
                    first_i: monomials[0].i,
                    monomials,
                }
            })
            .collect();
        blocks.sort_by_key(|b| b.degree);
        let index = blocks
            .iter()
            .enumerate()
            .map(|(k, b)| (b.degree, k))
            .collect();
        Self {
            m,
            n,
            wx,
            wy,
            blocks,
            index,
        }
    }

    pub fn block(&self, degree: u64) -> Option<&Block> {
        self.index.get(&degree).map(|&k| &self.blocks[k])
    }

    /// Position of `mono` inside its block.
    fn position(&self, block: &Block, mono: Monomial) -> usize {
        ((mono.i - block.first_i) as u64 / self.wy) as usize
    }

    /// Rank of multiplication by `g` (homogeneous of weighted degree
    /// `g_degree`) from `block` into the block `g_degree` higher.
    fn block_rank<F: Field>(&self, block: &Block, g: &Poly<F>, g_degree: u64) -> usize {
        let Some(target) = self.block(block.degree + g_degree) else {
            return 0;
        };
        let field = g.field();
        let width = target.monomials.len();
        let rows: Vec<Vec<F::Elem>> = block
            .monomials
            .iter()
            .map(|src| {
                let mut row = vec![field.zero(); width];
                for (gm, c) in g.terms() {
                    let (i, j) = (src.i + gm.i, src.j + gm.j);
                    if i < self.m && j < self.n {
                        row[self.position(target, Monomial::new(i, j))] = c.clone();
                    }
                }
                row
            })
            .collect();
        field.rank(rows)
    }

    /// Rank of multiplication by `g` on the whole box, summed over blocks.
    pub fn rank<F: Field>(&self, g: &Poly<F>) -> Result<usize, OracleError> {
        let g_degree = g.homogeneous_degree(self.wx, self.wy).ok_or_else(|| {
            OracleError::Domain(format!(
                "polynomial is not homogeneous for weights ({}, {})",
                self.wx, self.wy
            ))
        })?;
        Ok(self
            .blocks
            .par_iter()
            .map(|b| self.block_rank(b, g, g_degree))
            .sum())
    }
}

/// `g` reduced modulo `(x^M, y^N)`.
fn truncate_box<F: Field>(g: &Poly<F>, m: u32, n: u32) -> Poly<F> {
    g.truncate_x(m).truncate_y(n)
}

fn check_size<F: Field>(field: &F, m: u32, n: u32) -> Result<(), OracleError> {
    let size = m as u64 * n as u64;
    if field.characteristic() == 0 && size > MAX_RATIONAL_BOX {
        return Err(OracleError::TooLarge(format!(
            "M*N = {size} exceeds {MAX_RATIONAL_BOX} over the rationals"
        )));
    }
    Ok(())
}

/// `dim K[x,y]/(x^M, y^N, g)` as `M*N` minus the rank of multiplication by `g`.
/// `weights` overrides weight discovery from the support of `g`.
pub fn colength_by_rank<F: Field>(
    m: u32,
    n: u32,
    g: &Poly<F>,
    weights: Option<(u64, u64)>,
) -> Result<u64, OracleError> {
    if m == 0 || n == 0 {
        return Ok(0);
    }
    check_size(g.field(), m, n)?;
    let g = truncate_box(g, m, n);
    if g.is_zero() {
        return Ok(m as u64 * n as u64);
    }
    let (wx, wy) = match weights {
        Some(w) => w,
        None => g.homogeneity_weights().ok_or_else(|| {
            OracleError::Domain("no positive weights make the polynomial homogeneous".into())
        })?,
    };
    let plan = GradedRankPlan::new(m, n, wx, wy);
    Ok(m as u64 * n as u64 - plan.rank(&g)? as u64)
}

/// `dim K[x,y]/(x^M, y^N, f^K)`. The power is formed modulo `(x^M, y^N)`.
pub fn length_rank<F: Field>(m: u32, n: u32, f: &Poly<F>, k: u32) -> Result<u64, OracleError> {
    if m == 0 || n == 0 {
        return Ok(0);
    }
    let weights = f.homogeneity_weights();
    let mut acc = Poly::one(f.field());
    let mut base = truncate_box(f, m, n);
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc = truncate_box(&acc.try_mul(&base)?, m, n);
        }
        e >>= 1;
        if e > 0 {
            base = truncate_box(&base.try_mul(&base)?, m, n);
        }
    }
    if k > 0 && weights.is_none() {
        return Err(OracleError::Domain(
            "no positive weights make the polynomial homogeneous".into(),
        ));
    }
    colength_by_rank(m, n, &acc, weights.or(Some((1, 1))))
}

/// `dim K[x,y]/(x^M, y^N, (x^a y^b (x^u + y^v)^c)^K)`, graded by
/// `wt(x) = v`, `wt(y) = u`.
pub fn length_for_pair<F: Field>(
    field: &F,
    m: u32,
    n: u32,
    exps: (u64, u64, u64),
    uv: (u64, u64),
    k: u64,
) -> Result<u64, OracleError> {
    let (a, b, c) = exps;
    let (u, v) = uv;
    if m == 0 || n == 0 {
        return Ok(0);
    }
    check_size(field, m, n)?;
    // Terms with an x exponent of M or more vanish in the box, so a very large
    // power may be replaced by the zero polynomial without building it.
    if a * k >= m as u64 || b * k >= n as u64 {
        return Ok(m as u64 * n as u64);
    }
    let g = Poly::power_xy(field, a, b, c, u, v, k)?;
    colength_by_rank(m, n, &g, Some((v, u)))
}

/// The same colength from one dense `MN x MN` rank computation, as a check on
/// the graded decomposition.
pub fn colength_dense<F: Field>(m: u32, n: u32, g: &Poly<F>) -> Result<u64, OracleError> {
    if m == 0 || n == 0 {
        return Ok(0);
    }
    check_size(g.field(), m, n)?;
    let field = g.field();
    let size = (m * n) as usize;
    let idx = |i: u32, j: u32| (i * n + j) as usize;
    let rows: Vec<Vec<F::Elem>> = (0..m)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            let mut row = vec![field.zero(); size];
            for (gm, c) in g.terms() {
                let (ti, tj) = (i + gm.i, j + gm.j);
                if ti < m && tj < n {
                    let t = idx(ti, tj);
                    row[t] = field.add(&row[t], c);
                }
            }
            row
        })
        .collect();
    Ok(m as u64 * n as u64 - field.rank(rows) as u64)
}

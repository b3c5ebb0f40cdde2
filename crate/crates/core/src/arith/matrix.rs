//! Dense exact linear algebra: ranks over `F_p` and over the rationals,
//! determinants over the integers.
//!
//! The prime-field routine is the hot loop of the colength oracle. Rows coming
//! from multiplication maps are banded (each row is a shifted copy of one
//! coefficient pattern), so elimination only walks each pivot row's nonzero
//! span instead of the full width.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::Field;

/// Gaussian elimination over an arbitrary field.
pub fn rank_generic<F: Field>(field: &F, mut rows: Vec<Vec<F::Elem>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let nrows = rows.len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !field.is_zero(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(&rows[rank][col]).expect("pivot is nonzero");
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            if field.is_zero(&row[col]) {
                continue;
            }
            let factor = field.mul(&row[col], &inv);
            for c in col..ncols {
                let t = field.mul(&factor, &prow[c]);
                row[c] = field.sub(&row[c], &t);
            }
        }
        rank += 1;
    }
    rank
}

/// Lemire's "fastmod" reduction of 32-bit values by a fixed modulus.
#[derive(Clone, Copy)]
struct FastMod {
    p: u32,
    magic: u64,
}

impl FastMod {
    fn new(p: u32) -> Self {
        Self {
            p,
            magic: u64::MAX / p as u64 + 1,
        }
    }

    #[inline(always)]
    fn reduce(self, a: u32) -> u32 {
        let low = self.magic.wrapping_mul(a as u64);
        ((low as u128 * self.p as u128) >> 64) as u32
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut exp, mut acc) = (a as u64, p as u64 - 2, 1u64);
    let p = p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc as u32
}

/// Nonzero span `[lo, hi)` of a row; `(len, 0)` for a zero row.
fn span(row: &[u32]) -> (usize, usize) {
    match row.iter().position(|&v| v != 0) {
        None => (row.len(), 0),
        Some(lo) => {
            let hi = row.iter().rposition(|&v| v != 0).unwrap() + 1;
            (lo, hi)
        }
    }
}

/// Rank over `F_p` of a matrix with entries already reduced into `[0, p)`.
pub fn rank_mod_p(mut rows: Vec<Vec<u32>>, p: u32) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut spans: Vec<(usize, usize)> = rows.iter().map(|r| span(r)).collect();
    // Zero rows never contribute; dropping them shortens every pivot search.
    let mut keep = 0;
    for i in 0..rows.len() {
        if spans[i].1 > 0 {
            rows.swap(keep, i);
            spans.swap(keep, i);
            keep += 1;
        }
    }
    rows.truncate(keep);
    spans.truncate(keep);
    let nrows = rows.len();
    // Sorting by leading column keeps fill-in inside the band.
    let mut order: Vec<usize> = (0..nrows).collect();
    order.sort_by_key(|&i| spans[i]);
    let mut rows: Vec<Vec<u32>> = order
        .iter()
        .map(|&i| std::mem::take(&mut rows[i]))
        .collect();
    let mut spans: Vec<(usize, usize)> = order.iter().map(|&i| spans[i]).collect();

    let small = p <= 1 << 16;
    let fm = FastMod::new(p);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| spans[r].0 <= col && rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        spans.swap(rank, pivot);
        let hi = spans[rank].1;
        let inv = inv_mod(rows[rank][col], p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank][..hi];
        for (row, sp) in tail.iter_mut().zip(spans[rank + 1..].iter_mut()) {
            // Swaps break the sort order, so this is a skip rather than a break.
            if sp.0 > col {
                continue;
            }
            let a = row[col];
            if a == 0 {
                continue;
            }
            let factor = p - (a as u64 * inv as u64 % p as u64) as u32;
            if small {
                for (dst, &src) in row[col..hi].iter_mut().zip(&prow[col..]) {
                    *dst = fm.reduce(*dst + factor * src);
                }
            } else {
                let p64 = p as u64;
                for (dst, &src) in row[col..hi].iter_mut().zip(&prow[col..]) {
                    *dst = ((*dst as u64 + factor as u64 * src as u64) % p64) as u32;
                }
            }
            sp.0 = col + 1;
            sp.1 = sp.1.max(hi);
        }
        rank += 1;
    }
    rank
}

/// Clears denominators row by row, then runs fraction-free elimination.
pub fn rank_rational(rows: Vec<Vec<BigRational>>) -> usize {
    let int_rows = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            row.into_iter()
                .map(|q| (q * BigRational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    bareiss(int_rows).0
}

/// Fraction-free (Bareiss) elimination. Returns the rank and, for a square
/// matrix of full rank, the determinant.
pub fn bareiss(mut rows: Vec<Vec<BigInt>>) -> (usize, BigInt) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign_flips = 0usize;
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            rows.swap(rank, pivot);
            sign_flips += 1;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let prow = &head[rank];
        for row in tail.iter_mut() {
            let lead = row[col].clone();
            for c in col + 1..ncols {
                let v = &prow[col] * &row[c] - &lead * &prow[c];
                row[c] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = prow[col].clone();
        rank += 1;
    }
    let det = if nrows == ncols && rank == nrows {
        if nrows == 0 {
            BigInt::one()
        } else if sign_flips % 2 == 1 {
            -prev
        } else {
            prev
        }
    } else {
        BigInt::zero()
    };
    (rank, det)
}

/// Determinant of a square integer matrix.
pub fn determinant(rows: Vec<Vec<BigInt>>) -> BigInt {
    assert!(
        rows.iter().all(|r| r.len() == rows.len()),
        "square matrix required"
    );
    bareiss(rows).1
}

/// Sign helper for tests that build matrices from signed data.
pub fn is_unimodular(det: &BigInt) -> bool {
    det.abs().is_one()
}

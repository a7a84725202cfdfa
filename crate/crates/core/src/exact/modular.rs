//! Rank modulo a prime, used as an exact certificate for full rank.
//!
//! Clearing denominators row by row turns a rational matrix into an integer
//! matrix of the same rank. Every minor that is nonzero mod `p` is nonzero
//! over the integers, so `rank_p ≤ rank_Q`. When `rank_p` already reaches
//! `min(rows, cols)` the rational rank is known without any big-integer
//! elimination.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::echelon::Echelon;
use super::rational::{primitive_integer_vector, Rational};
use crate::error::{Error, Result};

/// `2^61 - 1`.
const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn inv(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, P - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

fn reduce(x: &BigInt) -> u64 {
    let m = BigInt::from(P);
    let r = ((x % &m) + &m) % &m;
    r.to_u64().expect("residue below 2^61")
}

/// Rank of the rows over `Z/pZ` after clearing denominators per row.
pub fn rank_mod_p(rows: &[Vec<Rational>], ncols: usize) -> Result<usize> {
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != ncols {
            return Err(Error::LengthMismatch {
                expected: ncols,
                found: row.len(),
            });
        }
        m.push(primitive_integer_vector(row).iter().map(reduce).collect());
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let pinv = inv(m[rank][col]);
        let pivot = std::mem::take(&mut m[rank]);
        for row in m.iter_mut().skip(rank + 1) {
            if row[col] == 0 {
                continue;
            }
            let f = mul(row[col], pinv);
            for (x, &y) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x = (*x + P - mul(f, y)) % P;
            }
        }
        m[rank] = pivot;
        rank += 1;
    }
    Ok(rank)
}

/// Exact rank: the modular rank when it is already maximal, otherwise exact
/// integer elimination.
pub fn rank_exact(rows: &[Vec<Rational>], ncols: usize) -> Result<usize> {
    let rp = rank_mod_p(rows, ncols)?;
    if rp == rows.len().min(ncols) {
        return Ok(rp);
    }
    let mut e = Echelon::new(ncols);
    for row in rows {
        e.insert_dense(row)?;
    }
    Ok(e.rank())
}

//! Exact rational scalars and fraction-free linear algebra.
//!
//! Two elimination routes are provided. [`rank`], [`nullspace`] and [`solve`]
//! run dense Bareiss elimination on a [`RatMatrix`]. [`Echelon`] keeps a sparse
//! integer echelon form that grows one row at a time and is used for the
//! global constraint systems. Both produce the same canonical null space basis.
//! [`rank_exact`] short-circuits full-rank cases with a modular certificate.

mod echelon;
mod matrix;
mod modular;
mod rational;

pub use echelon::{Echelon, IntRow, SparseRow};
pub use matrix::{nullspace, rank, solve, RatMatrix};
pub use modular::{rank_exact, rank_mod_p};
pub use rational::{
    common_denominator, dot, format_rational, int, parse_rational, primitive_integer_vector, rat,
    serde_rational, Rational,
};

use crate::error::{Error, Result};

/// `true` iff the two lists of vectors span the same subspace, decided as
/// `rank(a) = rank(b) = rank(a ∪ b)`.
pub fn span_equal(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Result<bool> {
    let Some(n) = a.iter().chain(b).map(Vec::len).next() else {
        return Ok(true);
    };
    if let Some(bad) = a.iter().chain(b).find(|v| v.len() != n) {
        return Err(Error::LengthMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    // Null space bases end in their free column, so reversing the columns
    // turns them into rows that are already in echelon form.
    let reversed = |v: &Vec<Rational>| v.iter().rev().cloned().collect::<Vec<_>>();
    let mut ea = Echelon::new(n);
    for v in a {
        ea.insert_dense(&reversed(v))?;
    }
    let mut eb = Echelon::new(n);
    for v in b {
        eb.insert_dense(&reversed(v))?;
    }
    if ea.rank() != eb.rank() {
        return Ok(false);
    }
    for v in b {
        if !ea.contains_dense(&reversed(v))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of a list of equal-length vectors.
pub fn rank_of_vectors(vs: &[Vec<Rational>], n: usize) -> Result<usize> {
    rank_exact(vs, n)
}

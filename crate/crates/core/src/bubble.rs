//! Bubble weight spaces `B_{F,n,k}`.
//!
//! For a face `F` of codimension `s` in `R^d`, the order-`n` moments on `F`
//! are weighted by barycentric monomials `λ_F^σ` with `|σ| = k - n` and, for
//! every proper subset of the `d - s + 1` positions of size `l`,
//! `Σ σ_i > r_{l+s} - n`. On a vertex the space is the constants.

use serde::Serialize;

use crate::bernstein::{multi_indices, MultiIndex};
use crate::continuity::ContinuityVector;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BubbleSpace {
    /// `d - s`.
    pub face_dim: usize,
    pub s: usize,
    pub n: usize,
    pub k: usize,
    /// Admissible weights, lexicographically ascending.
    pub indices: Vec<MultiIndex>,
}

impl BubbleSpace {
    pub fn dim(&self) -> usize {
        self.indices.len()
    }
}

fn check_params(d: usize, s: usize, r: &ContinuityVector) -> Result<()> {
    if r.d() != d {
        return Err(Error::ParameterMismatch(format!(
            "continuity vector {r} has length {}, expected {d}",
            r.d()
        )));
    }
    if s > d {
        return Err(Error::Precondition(format!("codimension {s} exceeds dimension {d}")));
    }
    Ok(())
}

/// `true` iff `sigma` meets the subset condition for codimension `s`, order `n`.
pub fn satisfies_subset_condition(sigma: &[usize], s: usize, r: &ContinuityVector, n: usize) -> bool {
    let len = sigma.len();
    (1u64..(1 << len) - 1).all(|mask| {
        let l = mask.count_ones() as usize;
        let sum: usize = (0..len).filter(|i| mask & (1 << i) != 0).map(|i| sigma[i]).sum();
        sum as i64 > r.r(l + s) as i64 - n as i64
    })
}

/// Enumerates `B_{F,n,k}` for a face of codimension `s`.
pub fn enumerate_bubble(d: usize, s: usize, r: &ContinuityVector, k: usize, n: usize) -> Result<BubbleSpace> {
    check_params(d, s, r)?;
    if n > r.r(s) {
        return Err(Error::Precondition(format!(
            "order {n} exceeds r_{s} = {}",
            r.r(s)
        )));
    }
    let indices = if s == d {
        // The constants; for k < n the weight degree saturates at zero.
        vec![vec![k.saturating_sub(n)]]
    } else if k < n {
        Vec::new()
    } else {
        multi_indices(d - s + 1, k - n)
            .into_iter()
            .filter(|sigma| satisfies_subset_condition(sigma, s, r, n))
            .collect()
    };
    Ok(BubbleSpace {
        face_dim: d - s,
        s,
        n,
        k,
        indices,
    })
}

/// `q = (r_{s+1} - n, …, r_d - n)`, a continuity vector for dimension `d - s`.
pub fn shift_continuity_vector(r: &ContinuityVector, s: usize, n: usize) -> Result<ContinuityVector> {
    let d = r.d();
    if s >= d {
        return Err(Error::Precondition(format!(
            "codimension {s} leaves no continuity orders in dimension {d}"
        )));
    }
    if n > r.r(s + 1) {
        return Err(Error::Precondition(format!(
            "order {n} exceeds r_{} = {}",
            s + 1,
            r.r(s + 1)
        )));
    }
    ContinuityVector::new((s + 1..=d).map(|i| r.r(i) - n).collect())
}

/// Compares `B_{E, n2 + n, k}` in `R^d` with the space for the same face `E`
/// viewed inside a `(d - s)`-face `F`, with shifted continuity
/// `q = shift_continuity_vector(r, s, n)` and degree `k - n`.
///
/// `E` has codimension `t ≥ s`. Valid ranges: `n ≤ r_s`, `n ≤ k`, and
/// `n2 ≤ r_t - n` when `t > s`; when `t = s` the face is `F` itself and only
/// `n2 = 0` is admissible because `q_0 = 0`.
pub fn check_bubble_shift(
    d: usize,
    s: usize,
    t: usize,
    r: &ContinuityVector,
    k: usize,
    n: usize,
    n2: usize,
) -> Result<bool> {
    check_params(d, s, r)?;
    if s >= d || t < s || t > d {
        return Err(Error::Precondition(format!(
            "need s < d and s ≤ t ≤ d, got d={d}, s={s}, t={t}"
        )));
    }
    if n > r.r(s) || n > k {
        return Err(Error::Precondition(format!(
            "order {n} must not exceed r_{s} = {} or k = {k}",
            r.r(s)
        )));
    }
    let q = shift_continuity_vector(r, s, n)?;
    if n2 > q.r(t - s) {
        return Err(Error::Precondition(format!(
            "order {n2} exceeds q_{} = {}",
            t - s,
            q.r(t - s)
        )));
    }
    let lhs = enumerate_bubble(d, t, r, k, n2 + n)?;
    let rhs = enumerate_bubble(d - s, t - s, &q, k - n, n2)?;
    Ok(lhs.indices == rhs.indices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ContinuityVector {
        s.parse().unwrap()
    }

    #[test]
    fn argyris_edge_weights() {
        assert_eq!(enumerate_bubble(2, 1, &r("1,2"), 5, 1).unwrap().indices, vec![vec![2, 2]]);
        assert!(enumerate_bubble(2, 1, &r("1,2"), 5, 0).unwrap().indices.is_empty());
        assert!(enumerate_bubble(2, 0, &r("1,2"), 5, 0).unwrap().indices.is_empty());
    }

    #[test]
    fn vertex_space_is_one_dimensional() {
        for n in 0..=2 {
            assert_eq!(enumerate_bubble(2, 2, &r("1,2"), 5, n).unwrap().dim(), 1);
        }
        assert_eq!(enumerate_bubble(1, 1, &r("3"), 2, 3).unwrap().dim(), 1);
    }

    #[test]
    fn hermite_has_no_interior_weights() {
        assert!(enumerate_bubble(1, 0, &r("1"), 3, 0).unwrap().indices.is_empty());
    }

    #[test]
    fn order_above_r_s_is_rejected() {
        assert!(enumerate_bubble(2, 1, &r("1,2"), 5, 2).is_err());
        assert!(enumerate_bubble(2, 0, &r("1,2"), 5, 1).is_err());
        assert!(enumerate_bubble(3, 1, &r("1,2"), 5, 0).is_err());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(shift_continuity_vector(&r("1,2"), 1, 1).unwrap(), r("1"));
        assert_eq!(shift_continuity_vector(&r("1,2,4"), 0, 0).unwrap(), r("1,2,4"));
        assert_eq!(shift_continuity_vector(&r("1,2,4"), 1, 2).unwrap(), r("0,2"));
        assert!(shift_continuity_vector(&r("1,2"), 2, 0).is_err());
        assert!(shift_continuity_vector(&r("1,2"), 0, 2).is_err());
    }

    #[test]
    fn shift_identity_examples() {
        assert!(check_bubble_shift(2, 1, 2, &r("1,2"), 5, 1, 1).unwrap());
        assert!(check_bubble_shift(3, 0, 2, &r("1,2,4"), 9, 0, 2).unwrap());
        assert!(check_bubble_shift(2, 1, 1, &r("1,2"), 5, 1, 1).is_err());
    }

    #[test]
    fn enumerated_weights_satisfy_both_conditions() {
        let rv = r("1,2,4");
        for s in 0..=3 {
            for n in 0..=rv.r(s) {
                let b = enumerate_bubble(3, s, &rv, 9, n).unwrap();
                for sigma in &b.indices {
                    if s < 3 {
                        assert_eq!(sigma.iter().sum::<usize>(), 9 - n);
                        assert!(satisfies_subset_condition(sigma, s, &rv, n));
                    }
                }
            }
        }
    }
}

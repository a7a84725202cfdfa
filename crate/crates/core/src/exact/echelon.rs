//! Incremental sparse row echelon form over the integers.
//!
//! Rows are stored as primitive integer vectors (content removed, leading
//! entry positive). Eliminating a leading entry uses the fraction-free
//! combination `p_c * row - row_c * pivot`, so no rationals appear until back
//! substitution. This is the workhorse for the global constraint systems,
//! whose rows touch only a couple of cell blocks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{primitive_integer_vector, Rational};
use crate::error::{Error, Result};

/// Sparse integer row: strictly increasing column indices, nonzero values.
pub type IntRow = Vec<(usize, BigInt)>;

/// Sparse rational row, as produced by constraint assembly.
pub type SparseRow = Vec<(usize, Rational)>;

#[derive(Clone, Debug, Default)]
pub struct Echelon {
    ncols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Self {
            ncols,
            pivots: BTreeMap::new(),
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Inserts a sparse rational row; returns `true` when it raised the rank.
    pub fn insert_sparse(&mut self, row: &SparseRow) -> Result<bool> {
        let int_row = self.to_int_row(row)?;
        Ok(self.insert_int(int_row))
    }

    pub fn insert_dense(&mut self, row: &[Rational]) -> Result<bool> {
        let sparse = self.dense_to_sparse(row)?;
        Ok(self.insert_int(sparse))
    }

    /// `true` when the dense row lies in the current row space.
    pub fn contains_dense(&self, row: &[Rational]) -> Result<bool> {
        let sparse = self.dense_to_sparse(row)?;
        Ok(self.reduce(sparse).is_empty())
    }

    /// The leading column of the residual after elimination, if any.
    pub fn residual_lead(&self, row: &SparseRow) -> Result<Option<usize>> {
        let int_row = self.to_int_row(row)?;
        Ok(self.reduce(int_row).first().map(|(c, _)| *c))
    }

    fn dense_to_sparse(&self, row: &[Rational]) -> Result<IntRow> {
        if row.len() != self.ncols {
            return Err(Error::LengthMismatch {
                expected: self.ncols,
                found: row.len(),
            });
        }
        Ok(primitive_integer_vector(row)
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect())
    }

    fn to_int_row(&self, row: &SparseRow) -> Result<IntRow> {
        let mut sorted: Vec<(usize, Rational)> =
            row.iter().filter(|(_, v)| !v.is_zero()).cloned().collect();
        sorted.sort_by_key(|(c, _)| *c);
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Precondition(format!(
                    "duplicate column {} in sparse row",
                    w[0].0
                )));
            }
        }
        if let Some((c, _)) = sorted.last() {
            if *c >= self.ncols {
                return Err(Error::LengthMismatch {
                    expected: self.ncols,
                    found: c + 1,
                });
            }
        }
        let values: Vec<Rational> = sorted.iter().map(|(_, v)| v.clone()).collect();
        let ints = primitive_integer_vector(&values);
        Ok(sorted.into_iter().map(|(c, _)| c).zip(ints).collect())
    }

    fn insert_int(&mut self, row: IntRow) -> bool {
        let reduced = self.reduce(row);
        match reduced.first() {
            Some(&(c, _)) => {
                self.pivots.insert(c, reduced);
                true
            }
            None => false,
        }
    }

    /// Eliminates leading entries until the leading column has no pivot.
    fn reduce(&self, mut row: IntRow) -> IntRow {
        normalize(&mut row);
        while let Some((c, _)) = row.first() {
            let Some(pivot) = self.pivots.get(c) else {
                break;
            };
            row = eliminate(&row, pivot);
            normalize(&mut row);
        }
        row
    }

    /// Canonical null space basis (see [`super::nullspace`]).
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        (0..self.ncols)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|f| {
                let mut x = vec![Rational::zero(); self.ncols];
                x[f] = Rational::one();
                self.back_substitute(&mut x, None);
                x
            })
            .collect()
    }

    /// Treats the last column as a right-hand side and returns a solution of
    /// the system (free variables zero), or `None` if it is inconsistent.
    pub fn solve_augmented(&self) -> Option<Vec<Rational>> {
        let n = self.ncols.checked_sub(1)?;
        if self.pivots.contains_key(&n) {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        self.back_substitute(&mut x, Some(n));
        Some(x)
    }

    /// `true` when the augmented system (last column = right-hand side) is
    /// consistent.
    pub fn augmented_consistent(&self) -> bool {
        self.ncols > 0 && !self.pivots.contains_key(&(self.ncols - 1))
    }

    fn back_substitute(&self, x: &mut [Rational], rhs_col: Option<usize>) {
        for (&c, row) in self.pivots.iter().rev() {
            let mut acc = Rational::zero();
            let mut lead = None;
            for (j, v) in row {
                if *j == c {
                    lead = Some(v);
                } else if Some(*j) == rhs_col {
                    acc += Rational::from_integer(v.clone());
                } else if !x[*j].is_zero() {
                    acc -= &x[*j] * Rational::from_integer(v.clone());
                }
            }
            let lead = lead.expect("pivot row without its pivot entry");
            x[c] = acc / Rational::from_integer(lead.clone());
        }
    }
}

fn normalize(row: &mut IntRow) {
    if row.is_empty() {
        return;
    }
    let g = row
        .iter()
        .fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    let flip = row[0].1.is_negative();
    if !g.is_one() || flip {
        let g = if flip { -g } else { g };
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `pivot_lead * row - row_lead * pivot`, which cancels the shared leading
/// column.
fn eliminate(row: &IntRow, pivot: &IntRow) -> IntRow {
    let a = &pivot[0].1;
    let b = &row[0].1;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0);
        let cj = pivot.get(j).map(|e| e.0);
        let (col, val) = match (ci, cj) {
            (Some(x), Some(y)) if x == y => {
                let v = a * &row[i].1 - b * &pivot[j].1;
                i += 1;
                j += 1;
                (x, v)
            }
            (Some(x), Some(y)) if x < y => {
                let v = a * &row[i].1;
                i += 1;
                (x, v)
            }
            (Some(x), None) => {
                let v = a * &row[i].1;
                i += 1;
                (x, v)
            }
            (_, Some(y)) => {
                let v = -(b * &pivot[j].1);
                j += 1;
                (y, v)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_zero() {
            out.push((col, val));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::matrix::{nullspace, rank, RatMatrix};
    use crate::exact::rational::int;
    use proptest::prelude::*;

    fn echelon_of(m: &RatMatrix) -> Echelon {
        let mut e = Echelon::new(m.cols());
        for i in 0..m.rows() {
            e.insert_dense(m.row(i)).unwrap();
        }
        e
    }

    #[test]
    fn rank_and_membership() {
        let m = RatMatrix::from_i64(&[&[1, 2, 0], &[2, 4, 0], &[0, 0, 5]]);
        let e = echelon_of(&m);
        assert_eq!(e.rank(), 2);
        assert!(e.contains_dense(&[int(3), int(6), int(-1)]).unwrap());
        assert!(!e.contains_dense(&[int(0), int(1), int(0)]).unwrap());
    }

    #[test]
    fn augmented_solve() {
        // x + y = 3, x - y = 1
        let mut e = Echelon::new(3);
        e.insert_dense(&[int(1), int(1), int(3)]).unwrap();
        e.insert_dense(&[int(1), int(-1), int(1)]).unwrap();
        assert!(e.augmented_consistent());
        assert_eq!(e.solve_augmented().unwrap(), vec![int(2), int(1)]);
        e.insert_dense(&[int(1), int(0), int(0)]).unwrap();
        assert!(!e.augmented_consistent());
        assert_eq!(e.solve_augmented(), None);
    }

    #[test]
    fn sparse_rows_validate_columns() {
        let mut e = Echelon::new(2);
        assert!(e.insert_sparse(&vec![(2, int(1))]).is_err());
        assert!(e.insert_sparse(&vec![(0, int(1)), (0, int(2))]).is_err());
        assert!(e.insert_sparse(&vec![(1, int(-3)), (0, int(0))]).unwrap());
    }

    fn small_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |v| {
                let rows: Vec<&[i64]> = v.chunks(c).collect();
                RatMatrix::from_i64(&rows)
            })
        })
    }

    proptest! {
        // The sparse route and dense Bareiss agree on rank and on the
        // canonical null space basis.
        #[test]
        fn sparse_matches_dense(m in small_matrix()) {
            let e = echelon_of(&m);
            prop_assert_eq!(e.rank(), rank(&m));
            prop_assert_eq!(e.nullspace(), nullspace(&m));
        }

        #[test]
        fn rank_equals_rank_of_transpose(m in small_matrix()) {
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn rank_plus_nullity_is_cols(m in small_matrix()) {
            let ns = nullspace(&m);
            prop_assert_eq!(rank(&m) + ns.len(), m.cols());
            for x in &ns {
                prop_assert!(m.mul_vec(x).unwrap().iter().all(Zero::is_zero));
            }
        }
    }
}

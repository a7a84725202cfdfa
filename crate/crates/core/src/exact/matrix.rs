use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rational::{format_rational, primitive_integer_vector, Rational};
use crate::error::{Error, Result};

/// Dense rectangular matrix of rationals, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from row vectors; `cols` is required so that empty row
    /// lists still carry a width.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n_rows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n_rows,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(cols, rows).expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| super::rational::dot(self.row(i), x))
            .collect())
    }

    /// Scales every row to a primitive integer row. Row scaling by nonzero
    /// factors preserves rank, null space and row space.
    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| primitive_integer_vector(self.row(i)))
            .collect()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row echelon form produced by fraction-free elimination.
struct BareissEchelon {
    /// The first `pivots.len()` rows are the nonzero echelon rows.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

/// Bareiss elimination with first-nonzero pivoting. Every intermediate entry
/// is a minor of the input, so each division below is exact.
fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> BareissEchelon {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let num = pivot * &row[j] - &factor * &pivot_row[j];
                debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                row[j] = num / &prev;
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    BareissEchelon { rows: a, pivots }
}

impl BareissEchelon {
    /// Back-substitutes one solution with the given free-variable values,
    /// using `rhs` as the constant column (or zeros).
    fn back_substitute(&self, cols: usize, x: &mut [Rational], rhs: Option<&[BigInt]>) {
        for (i, &c) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let mut acc = match rhs {
                Some(b) => Rational::from_integer(b[i].clone()),
                None => Rational::zero(),
            };
            for j in c + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= &x[j] * Rational::from_integer(row[j].clone());
                }
            }
            x[c] = acc / Rational::from_integer(row[c].clone());
        }
    }
}

/// Exact rank over the rationals.
pub fn rank(m: &RatMatrix) -> usize {
    bareiss(m.integer_rows(), m.cols()).pivots.len()
}

/// A basis of `{x : m x = 0}`, one vector per free column in increasing
/// column order. Each vector has a one in its free column and zeros in the
/// other free columns, which makes the basis canonical for the subspace.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    let cols = m.cols();
    let ech = bareiss(m.integer_rows(), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !ech.pivots.contains(c)).collect();
    let basis: Vec<Vec<Rational>> = free
        .iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            ech.back_substitute(cols, &mut x, None);
            x
        })
        .collect();
    debug_assert!(basis
        .iter()
        .all(|x| m.mul_vec(x).unwrap().iter().all(Zero::is_zero)));
    basis
}

/// Solves `m x = b`. Returns `None` when the system is inconsistent; free
/// variables are set to zero otherwise.
pub fn solve(m: &RatMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != m.rows() {
        return Err(Error::LengthMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let cols = m.cols();
    let rows: Vec<Vec<BigInt>> = (0..m.rows())
        .map(|i| {
            let mut aug = m.row(i).to_vec();
            aug.push(b[i].clone());
            primitive_integer_vector(&aug)
        })
        .collect();
    let ech = bareiss(rows, cols + 1);
    if ech.pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let rhs: Vec<BigInt> = ech
        .rows
        .iter()
        .take(ech.pivots.len())
        .map(|r| r[cols].clone())
        .collect();
    let mut x = vec![Rational::zero(); cols];
    ech.back_substitute(cols, &mut x, Some(&rhs));
    Ok(Some(x))
}

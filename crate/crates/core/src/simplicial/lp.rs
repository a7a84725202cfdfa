//! A small exact linear program solver, used only to validate that two cells
//! meet in a common face.
//!
//! Dense tableau, two phases, Bland's rule. The programs solved here have at
//! most `2d + 2` variables, so nothing more elaborate is warranted.

use num_traits::{One, Signed, Zero};

use crate::exact::Rational;

/// Maximum of `c · x` subject to `a x = b`, `x ≥ 0`.
#[derive(Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs the simplex method for `max c · x` over the columns in `allowed`.
    /// Returns `false` if unbounded.
    fn optimize(&mut self, c: &[Rational], allowed: usize) -> bool {
        loop {
            let reduced = |j: usize| -> Rational {
                let mut r = c[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        r -= &c[b] * &self.rows[i][j];
                    }
                }
                r
            };
            let Some(enter) = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| reduced(j).is_positive())
            else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][enter];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((l, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, enter);
        }
    }

    fn objective(&self, c: &[Rational]) -> Rational {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| c.get(b).cloned().unwrap_or_default() * self.rhs(i))
            .sum()
    }
}

pub(crate) fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    let width = n + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let flip = bi.is_negative();
        let mut t: Vec<Rational> = row
            .iter()
            .map(|v| if flip { -v.clone() } else { v.clone() })
            .collect();
        t.extend((0..m).map(|j| {
            if j == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        }));
        t.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(t);
    }
    let mut tab = Tableau {
        rows,
        basis: (n..n + m).collect(),
        width,
    };

    // Phase I: maximize minus the sum of artificials.
    let mut phase1 = vec![Rational::zero(); width];
    for v in phase1.iter_mut().skip(n) {
        *v = -Rational::one();
    }
    tab.optimize(&phase1, width);
    if !tab.objective(&phase1).is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive zero-valued artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    let mut phase2 = c.to_vec();
    phase2.resize(width, Rational::zero());
    if !tab.optimize(&phase2, n) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal(tab.objective(&phase2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn simple_box() {
        // max x + y, x + s1 = 1, y + s2 = 2
        let a = vec![v(&[1, 0, 1, 0]), v(&[0, 1, 0, 1])];
        let out = maximize(&a, &v(&[1, 2]), &v(&[1, 1, 0, 0]));
        assert_eq!(out, LpOutcome::Optimal(int(3)));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let a = vec![v(&[1, 1])];
        assert_eq!(maximize(&a, &v(&[-1]), &v(&[1, 0])), LpOutcome::Infeasible);
        let a = vec![v(&[1, -1])];
        assert_eq!(maximize(&a, &v(&[0]), &v(&[1, 0])), LpOutcome::Unbounded);
    }

    #[test]
    fn fractional_optimum_and_redundant_rows() {
        // max x, 2x + y = 1, 4x + 2y = 2
        let a = vec![v(&[2, 1]), v(&[4, 2])];
        assert_eq!(
            maximize(&a, &v(&[1, 2]), &v(&[1, 0])),
            LpOutcome::Optimal(rat(1, 2))
        );
    }
}

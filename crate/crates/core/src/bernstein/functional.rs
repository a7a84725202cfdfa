use std::sync::Arc;

use num_traits::{One, Zero};

use super::multi_index::{factorial, index_of, multi_indices};
use super::BBPoly;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::simplicial::{Simplex, SimplexGeometry};

/// A linear functional on degree-`k` polynomials of one simplex, stored as
/// weights `w_α` so that `l(p) = Σ_α w_α c_α`.
///
/// Composite functionals such as "integrate the trace of a derivative against
/// a weight" are built by pulling back a simple functional through each
/// operation, which yields one constraint row per functional without
/// materializing a polynomial per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFunctional {
    geom: Arc<SimplexGeometry>,
    degree: usize,
    weights: Vec<Rational>,
}

impl LinearFunctional {
    pub fn zero(geom: Arc<SimplexGeometry>, degree: usize) -> Self {
        let n = multi_indices(geom.dim() + 1, degree).len();
        Self {
            geom,
            degree,
            weights: vec![Rational::zero(); n],
        }
    }

    /// `p ↦ c_α`.
    pub fn coefficient(geom: Arc<SimplexGeometry>, alpha: &[usize]) -> Self {
        let degree = alpha.iter().sum();
        let mut weights = vec![Rational::zero(); multi_indices(alpha.len(), degree).len()];
        weights[index_of(alpha)] = Rational::one();
        Self {
            geom,
            degree,
            weights,
        }
    }

    /// `p ↦ p(V_i)`.
    pub fn vertex_value(geom: Arc<SimplexGeometry>, degree: usize, i: usize) -> Self {
        let mut alpha = vec![0; geom.dim() + 1];
        alpha[i] = degree;
        Self::coefficient(geom, &alpha)
    }

    /// `p ↦ (1/|F|) ∫_F p · w` on degree-`degree` polynomials.
    pub fn weighted_moment(weight: &BBPoly, degree: usize) -> Self {
        let geom = weight.geometry().clone();
        let m = geom.dim();
        let top = degree + weight.degree();
        let facts: Vec<_> = (0..=top + m).map(factorial).collect();
        let denom = Rational::from_integer(facts[top + m].clone());
        let w_idx = multi_indices(m + 1, weight.degree());
        let mut gamma = vec![0; m + 1];
        let weights = multi_indices(m + 1, degree)
            .iter()
            .map(|beta| {
                let mut acc = Rational::zero();
                for (sigma, v) in w_idx.iter().zip(weight.coeffs()) {
                    if v.is_zero() {
                        continue;
                    }
                    for i in 0..=m {
                        gamma[i] = beta[i] + sigma[i];
                    }
                    let num = gamma.iter().fold(facts[m].clone(), |acc, &g| acc * &facts[g]);
                    acc += v * Rational::from_integer(num);
                }
                acc / &denom
            })
            .collect();
        Self {
            geom,
            degree,
            weights,
        }
    }

    pub fn geometry(&self) -> &Arc<SimplexGeometry> {
        &self.geom
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.weights
    }

    pub fn apply(&self, p: &BBPoly) -> Result<Rational> {
        if p.simplex() != self.geom.simplex() {
            return Err(Error::SimplexMismatch(
                p.simplex().vertices().to_vec(),
                self.geom.simplex().vertices().to_vec(),
            ));
        }
        if p.degree() != self.degree {
            return Err(Error::Precondition(format!(
                "functional of degree {} applied to polynomial of degree {}",
                self.degree,
                p.degree()
            )));
        }
        Ok(self
            .weights
            .iter()
            .zip(p.coeffs())
            .filter(|(w, c)| !w.is_zero() && !c.is_zero())
            .map(|(w, c)| w * c)
            .sum())
    }

    /// `p ↦ l(∂_v p)` on polynomials one degree higher.
    pub fn pullback_derivative(&self, v: &[Rational]) -> Self {
        let g = self.geom.frame().derivatives(v);
        let len = self.geom.dim() + 1;
        let weights = multi_indices(len, self.degree + 1)
            .into_iter()
            .map(|mut alpha| {
                let mut acc = Rational::zero();
                for i in 0..len {
                    if alpha[i] == 0 || g[i].is_zero() {
                        continue;
                    }
                    let a = alpha[i];
                    alpha[i] -= 1;
                    let w = &self.weights[index_of(&alpha)];
                    if !w.is_zero() {
                        acc += w * &g[i] * Rational::from_integer(a.into());
                    }
                    alpha[i] += 1;
                }
                acc
            })
            .collect();
        Self {
            geom: self.geom.clone(),
            degree: self.degree + 1,
            weights,
        }
    }

    /// `p ↦ l(trace(p, F))` for a functional `l` living on the face `F` of
    /// `cell`.
    pub fn pullback_trace(&self, cell: Arc<SimplexGeometry>) -> Result<Self> {
        let face: &Simplex = self.geom.simplex();
        let pos = face.positions_in(cell.simplex()).ok_or_else(|| Error::NotAFace {
            face: face.vertices().to_vec(),
            cell: cell.simplex().vertices().to_vec(),
        })?;
        let len = cell.dim() + 1;
        let mut weights = vec![Rational::zero(); multi_indices(len, self.degree).len()];
        let mut full = vec![0; len];
        for (beta, w) in multi_indices(pos.len(), self.degree).iter().zip(&self.weights) {
            for (p, b) in pos.iter().zip(beta) {
                full[*p] = *b;
            }
            weights[index_of(&full)] = w.clone();
            for p in &pos {
                full[*p] = 0;
            }
        }
        Ok(Self {
            geom: cell,
            degree: self.degree,
            weights,
        })
    }
}

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::multi_index::{factorial, index_of, multi_indices, unit_index, MultiIndex};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::simplicial::{AffineForm, Simplex, SimplexGeometry};

/// A polynomial of declared degree `k` on one simplex, written as
/// `Σ_{|α| = k} c_α Π λ_i^{α_i}` in the simplex's barycentric coordinates.
///
/// Coefficients are stored densely in ascending lexicographic order of `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BBPoly {
    geom: Arc<SimplexGeometry>,
    degree: usize,
    coeffs: Vec<Rational>,
}

impl BBPoly {
    pub fn zero(geom: Arc<SimplexGeometry>, degree: usize) -> Self {
        let n = multi_indices(geom.dim() + 1, degree).len();
        Self {
            geom,
            degree,
            coeffs: vec![Rational::zero(); n],
        }
    }

    /// The constant `1` at degree 0.
    pub fn one(geom: Arc<SimplexGeometry>) -> Self {
        Self {
            geom,
            degree: 0,
            coeffs: vec![Rational::one()],
        }
    }

    /// `Π λ_i^{α_i}`.
    pub fn monomial(geom: Arc<SimplexGeometry>, alpha: &[usize]) -> Result<Self> {
        if alpha.len() != geom.dim() + 1 {
            return Err(Error::LengthMismatch {
                expected: geom.dim() + 1,
                found: alpha.len(),
            });
        }
        let mut p = Self::zero(geom, alpha.iter().sum());
        p.coeffs[index_of(alpha)] = Rational::one();
        Ok(p)
    }

    pub fn from_coeffs(geom: Arc<SimplexGeometry>, degree: usize, coeffs: Vec<Rational>) -> Result<Self> {
        let n = multi_indices(geom.dim() + 1, degree).len();
        if coeffs.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: coeffs.len(),
            });
        }
        Ok(Self {
            geom,
            degree,
            coeffs,
        })
    }

    /// The degree-1 form of an affine function: its coefficients are its
    /// values at the vertices.
    pub fn from_affine(geom: Arc<SimplexGeometry>, f: &AffineForm) -> Self {
        let coeffs = multi_indices(geom.dim() + 1, 1)
            .iter()
            .map(|a| {
                let i = a.iter().position(|&x| x == 1).unwrap();
                f.eval(&geom.points()[i])
            })
            .collect();
        Self {
            geom,
            degree: 1,
            coeffs,
        }
    }

    /// The Cartesian coordinate function `x_c` (0-based `c`).
    pub fn coordinate(geom: Arc<SimplexGeometry>, c: usize) -> Self {
        let d = geom.ambient_dim();
        let f = AffineForm {
            gradient: (0..d)
                .map(|j| if j == c { Rational::one() } else { Rational::zero() })
                .collect(),
            offset: Rational::zero(),
        };
        Self::from_affine(geom, &f)
    }

    pub fn geometry(&self) -> &Arc<SimplexGeometry> {
        &self.geom
    }

    pub fn simplex(&self) -> &Simplex {
        self.geom.simplex()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// `c_α`.
    pub fn coeff(&self, alpha: &[usize]) -> &Rational {
        &self.coeffs[index_of(alpha)]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn len(&self) -> usize {
        self.geom.dim() + 1
    }

    pub fn evaluate(&self, x: &[Rational]) -> Rational {
        let lam = self.geom.frame().eval(x);
        let k = self.degree;
        let powers: Vec<Vec<Rational>> = lam
            .iter()
            .map(|l| {
                let mut p = Vec::with_capacity(k + 1);
                p.push(Rational::one());
                for e in 1..=k {
                    let next = &p[e - 1] * l;
                    p.push(next);
                }
                p
            })
            .collect();
        multi_indices(self.len(), k)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| {
                a.iter()
                    .enumerate()
                    .fold(c.clone(), |acc, (i, &e)| acc * &powers[i][e])
            })
            .sum()
    }

    /// Value at the `i`-th vertex, which is the coefficient of `λ_i^k`.
    pub fn value_at_vertex(&self, i: usize) -> Rational {
        let mut alpha = vec![0; self.len()];
        alpha[i] = self.degree;
        self.coeff(&alpha).clone()
    }

    /// `∂_v p` at degree `k - 1`; the zero polynomial of degree 0 when `k = 0`.
    pub fn directional_derivative(&self, v: &[Rational]) -> BBPoly {
        if self.degree == 0 {
            return BBPoly::zero(self.geom.clone(), 0);
        }
        let g = self.geom.frame().derivatives(v);
        let len = self.len();
        let coeffs = multi_indices(len, self.degree - 1)
            .into_iter()
            .map(|mut gamma| {
                let mut acc = Rational::zero();
                for i in 0..len {
                    if g[i].is_zero() {
                        continue;
                    }
                    gamma[i] += 1;
                    let c = &self.coeffs[index_of(&gamma)];
                    if !c.is_zero() {
                        acc += c * &g[i] * Rational::from_integer(gamma[i].into());
                    }
                    gamma[i] -= 1;
                }
                acc
            })
            .collect();
        BBPoly {
            geom: self.geom.clone(),
            degree: self.degree - 1,
            coeffs,
        }
    }

    /// `∂^β p` for a Cartesian multi-index `β` of length `d`.
    pub fn partial(&self, beta: &[usize]) -> BBPoly {
        let d = self.geom.ambient_dim();
        let mut p = self.clone();
        for (c, &b) in beta.iter().enumerate() {
            let e: Vec<Rational> = (0..d)
                .map(|j| if j == c { Rational::one() } else { Rational::zero() })
                .collect();
            for _ in 0..b {
                p = p.directional_derivative(&e);
            }
        }
        p
    }

    /// Restriction to a face: coefficients with `α` supported on the face's
    /// vertices, reindexed in the face's vertex order.
    pub fn trace(&self, face: &Simplex) -> Result<BBPoly> {
        let pos = face.positions_in(self.simplex()).ok_or_else(|| Error::NotAFace {
            face: face.vertices().to_vec(),
            cell: self.simplex().vertices().to_vec(),
        })?;
        let face_geom = if pos.len() == self.len() {
            self.geom.clone()
        } else {
            Arc::new(self.geom.face(face)?)
        };
        let mut full = vec![0; self.len()];
        let coeffs = multi_indices(pos.len(), self.degree)
            .iter()
            .map(|beta| {
                for (p, b) in pos.iter().zip(beta) {
                    full[*p] = *b;
                }
                let c = self.coeffs[index_of(&full)].clone();
                for p in &pos {
                    full[*p] = 0;
                }
                c
            })
            .collect();
        Ok(BBPoly {
            geom: face_geom,
            degree: self.degree,
            coeffs,
        })
    }

    fn check_same_simplex(&self, other: &BBPoly) -> Result<()> {
        if Arc::ptr_eq(&self.geom, &other.geom) || self.geom == other.geom {
            Ok(())
        } else {
            Err(Error::SimplexMismatch(
                self.simplex().vertices().to_vec(),
                other.simplex().vertices().to_vec(),
            ))
        }
    }

    /// Exact product: the coefficient of `λ^γ` is `Σ_{α+σ=γ} a_α b_σ`.
    pub fn multiply(&self, other: &BBPoly) -> Result<BBPoly> {
        self.check_same_simplex(other)?;
        let len = self.len();
        let mut out = BBPoly::zero(self.geom.clone(), self.degree + other.degree);
        let a_idx = multi_indices(len, self.degree);
        let b_idx = multi_indices(len, other.degree);
        let mut gamma = vec![0; len];
        for (a, ca) in a_idx.iter().zip(&self.coeffs) {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in b_idx.iter().zip(&other.coeffs) {
                if cb.is_zero() {
                    continue;
                }
                for i in 0..len {
                    gamma[i] = a[i] + b[i];
                }
                out.coeffs[index_of(&gamma)] += ca * cb;
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &BBPoly) -> Result<BBPoly> {
        self.check_same_simplex(other)?;
        let (a, b) = match self.degree.cmp(&other.degree) {
            std::cmp::Ordering::Less => (self.degree_elevate(other.degree - self.degree), other.clone()),
            std::cmp::Ordering::Greater => (self.clone(), other.degree_elevate(self.degree - other.degree)),
            std::cmp::Ordering::Equal => (self.clone(), other.clone()),
        };
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(BBPoly { coeffs, ..a })
    }

    pub fn scale(&self, s: &Rational) -> BBPoly {
        BBPoly {
            geom: self.geom.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn pow(&self, e: usize) -> BBPoly {
        let mut acc = BBPoly::one(self.geom.clone());
        for _ in 0..e {
            acc = acc.multiply(self).expect("same simplex");
        }
        acc
    }

    /// The same polynomial at degree `k + j`, via multiplication by `(Σ λ_i)^j`.
    pub fn degree_elevate(&self, j: usize) -> BBPoly {
        let len = self.len();
        let mut p = self.clone();
        for _ in 0..j {
            let coeffs = multi_indices(len, p.degree + 1)
                .into_iter()
                .map(|mut gamma| {
                    let mut acc = Rational::zero();
                    for i in 0..len {
                        if gamma[i] > 0 {
                            gamma[i] -= 1;
                            acc += &p.coeffs[index_of(&gamma)];
                            gamma[i] += 1;
                        }
                    }
                    acc
                })
                .collect();
            p = BBPoly {
                geom: p.geom,
                degree: p.degree + 1,
                coeffs,
            };
        }
        p
    }

    /// `(1/|F|) ∫_F p` over this simplex `F`, termwise from
    /// `(1/|F|) ∫_F λ^γ = m! Π γ_i! / (|γ| + m)!`.
    pub fn integrate_normalized(&self) -> Rational {
        let m = self.geom.dim();
        let facts: Vec<_> = (0..=self.degree + m).map(factorial).collect();
        let denom = Rational::from_integer(facts[self.degree + m].clone());
        let mut acc = Rational::zero();
        for (g, c) in multi_indices(m + 1, self.degree).iter().zip(&self.coeffs) {
            if c.is_zero() {
                continue;
            }
            let num = g.iter().fold(facts[m].clone(), |acc, &gi| acc * &facts[gi]);
            acc += c * Rational::from_integer(num);
        }
        acc / denom
    }

    /// `true` iff every Cartesian partial of order at most `r` vanishes at
    /// the `i`-th vertex.
    pub fn vanishing_order_at_vertex(&self, i: usize, r: usize) -> bool {
        let d = self.geom.ambient_dim();
        let mut by_order: HashMap<MultiIndex, BBPoly> = HashMap::new();
        by_order.insert(vec![0; d], self.clone());
        for n in 0..=r {
            for beta in multi_indices(d, n) {
                let p = if n == 0 {
                    self.clone()
                } else {
                    let j = beta.iter().position(|&b| b > 0).unwrap();
                    let mut prev = beta.clone();
                    prev[j] -= 1;
                    by_order[&prev].directional_derivative(&axis(d, j))
                };
                if !p.value_at_vertex(i).is_zero() {
                    return false;
                }
                by_order.insert(beta, p);
            }
        }
        true
    }

    pub fn to_json(&self) -> BBPolyJson {
        let coeffs = multi_indices(self.len(), self.degree)
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| (alpha_key(a), serde_json::Value::String(format_rational(c))))
            .collect();
        BBPolyJson {
            simplex: self.simplex().vertices().to_vec(),
            k: self.degree,
            coeffs,
        }
    }

    pub fn from_json(geom: Arc<SimplexGeometry>, json: &BBPolyJson) -> Result<BBPoly> {
        if json.simplex != geom.simplex().vertices() {
            return Err(Error::SimplexMismatch(
                json.simplex.clone(),
                geom.simplex().vertices().to_vec(),
            ));
        }
        let mut p = BBPoly::zero(geom, json.k);
        let len = p.len();
        for (key, val) in &json.coeffs {
            let alpha = key
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|_| Error::Precondition(format!("bad multi-index {key:?}")))?;
            if alpha.len() != len || alpha.iter().sum::<usize>() != json.k {
                return Err(Error::Precondition(format!(
                    "multi-index {key:?} does not fit degree {} on {len} vertices",
                    json.k
                )));
            }
            let val = val
                .as_str()
                .ok_or_else(|| Error::ParseRational(val.to_string()))?;
            p.coeffs[index_of(&alpha)] = parse_rational(val)?;
        }
        Ok(p)
    }
}

fn axis(d: usize, j: usize) -> Vec<Rational> {
    unit_index(d, j)
        .into_iter()
        .map(|x| Rational::from_integer(x.into()))
        .collect()
}

fn alpha_key(alpha: &[usize]) -> String {
    alpha
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Serialized form: nonzero coefficients keyed by `"α_0,α_1,…"`, in
/// lexicographic order of `α`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BBPolyJson {
    pub simplex: Vec<usize>,
    pub k: usize,
    pub coeffs: serde_json::Map<String, serde_json::Value>,
}

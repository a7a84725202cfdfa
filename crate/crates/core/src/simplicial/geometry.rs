use num_traits::{One, Zero};

use super::Simplex;
use crate::error::{Error, Result};
use crate::exact::{dot, solve, RatMatrix, Rational};

/// A point of `R^d` with rational coordinates.
pub type Point = Vec<Rational>;

/// Affine function `x ↦ gradient · x + offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineForm {
    pub gradient: Vec<Rational>,
    pub offset: Rational,
}

impl AffineForm {
    pub fn eval(&self, x: &[Rational]) -> Rational {
        dot(&self.gradient, x) + &self.offset
    }

    /// Derivative along `v`, a constant.
    pub fn derivative(&self, v: &[Rational]) -> Rational {
        dot(&self.gradient, v)
    }
}

/// Barycentric coordinates of a simplex, extended to affine forms on the
/// ambient space.
///
/// For a lower-dimensional face the extension is the one whose gradients lie
/// in the face's tangent space, so derivatives along tangent directions are
/// exact and derivatives along normals vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarycentricFrame {
    forms: Vec<AffineForm>,
}

impl BarycentricFrame {
    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    /// `λ_i(x)` for every vertex `i`.
    pub fn eval(&self, x: &[Rational]) -> Vec<Rational> {
        self.forms.iter().map(|f| f.eval(x)).collect()
    }

    /// `∂_v λ_i` for every vertex `i`.
    pub fn derivatives(&self, v: &[Rational]) -> Vec<Rational> {
        self.forms.iter().map(|f| f.derivative(v)).collect()
    }
}

/// A simplex together with its vertex coordinates and barycentric frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexGeometry {
    simplex: Simplex,
    points: Vec<Point>,
    frame: BarycentricFrame,
}

impl SimplexGeometry {
    /// `points[i]` is the coordinate of `simplex.vertices()[i]`.
    pub fn new(simplex: Simplex, points: Vec<Point>) -> Result<Self> {
        if points.len() != simplex.num_vertices() {
            return Err(Error::LengthMismatch {
                expected: simplex.num_vertices(),
                found: points.len(),
            });
        }
        let d = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::LengthMismatch {
                expected: d,
                found: p.len(),
            });
        }
        let frame = solve_frame(&simplex, &points)?;
        Ok(Self {
            simplex,
            points,
            frame,
        })
    }

    /// The standard simplex `conv{0, e_1, …, e_d}` with vertex ids `0..=d`.
    pub fn reference(d: usize) -> Self {
        let points = (0..=d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        if i == j + 1 {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(Simplex::new((0..=d).collect()).unwrap(), points)
            .expect("reference simplex is nondegenerate")
    }

    pub fn simplex(&self) -> &Simplex {
        &self.simplex
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn frame(&self) -> &BarycentricFrame {
        &self.frame
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn dim(&self) -> usize {
        self.simplex.dim()
    }

    /// Vectors from the first vertex to each of the others.
    pub fn edge_vectors(&self) -> Vec<Vec<Rational>> {
        let p0 = &self.points[0];
        self.points[1..]
            .iter()
            .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
            .collect()
    }

    /// Geometry of a face of this simplex.
    pub fn face(&self, face: &Simplex) -> Result<SimplexGeometry> {
        let pos = face.positions_in(&self.simplex).ok_or_else(|| Error::NotAFace {
            face: face.vertices().to_vec(),
            cell: self.simplex.vertices().to_vec(),
        })?;
        let points = pos.iter().map(|&i| self.points[i].clone()).collect();
        SimplexGeometry::new(face.clone(), points)
    }
}

fn solve_frame(simplex: &Simplex, points: &[Point]) -> Result<BarycentricFrame> {
    let d = points[0].len();
    let m = points.len() - 1;
    if m > d {
        return Err(Error::DegenerateSimplex(simplex.vertices().to_vec()));
    }
    let p0 = &points[0];
    let edges: Vec<Vec<Rational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    // λ_j(x) = [G⁻¹ E (x − p0)]_j for j ≥ 1 with Gram matrix G = E Eᵀ.
    let gram_rows: Vec<Vec<Rational>> = edges
        .iter()
        .map(|a| edges.iter().map(|b| dot(a, b)).collect())
        .collect();
    let gram = RatMatrix::from_rows(m, gram_rows)?;
    if m > 0 && crate::exact::rank(&gram) < m {
        return Err(Error::DegenerateSimplex(simplex.vertices().to_vec()));
    }
    let mut gradients = vec![vec![Rational::zero(); d]; m];
    for c in 0..d {
        let rhs: Vec<Rational> = edges.iter().map(|e| e[c].clone()).collect();
        let y = solve(&gram, &rhs)?
            .ok_or_else(|| Error::DegenerateSimplex(simplex.vertices().to_vec()))?;
        for j in 0..m {
            gradients[j][c] = y[j].clone();
        }
    }
    let mut forms = Vec::with_capacity(m + 1);
    let mut g0 = vec![Rational::zero(); d];
    let mut off0 = Rational::one();
    for g in &gradients {
        let off = -dot(g, p0);
        for (a, b) in g0.iter_mut().zip(g) {
            *a -= b;
        }
        off0 -= &off;
        forms.push(AffineForm {
            gradient: g.clone(),
            offset: off,
        });
    }
    forms.insert(
        0,
        AffineForm {
            gradient: g0,
            offset: off0,
        },
    );
    Ok(BarycentricFrame { forms })
}

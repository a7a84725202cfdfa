//! Degrees of freedom: normal frames, the functionals `Σ_F` attached to each
//! face, and the local unisolvency check.
//!
//! A DOF on a face `F` of codimension `s` takes an order-`n` derivative of
//! `u` along the normals of `F` (multi-index `θ`, `|θ| = n`), restricts it to
//! `F` and integrates it against a bubble weight `λ_F^σ` with the normalized
//! measure `(1/|F|) ∫_F`. On a vertex the moment is replaced by the point
//! value.
//!
//! Normals are rational and not unit length. Rescaling a normal by a positive
//! constant rescales each DOF by a positive constant depending only on the
//! face and `θ`, so spans, single-valuedness and unisolvency are unaffected.

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{dim_pk, multi_indices, BBPoly, LinearFunctional, MultiIndex};
use crate::bubble::enumerate_bubble;
use crate::continuity::ContinuityVector;
use crate::error::{Error, Result};
use crate::exact::{dot, primitive_integer_vector, rank_exact, Rational};
use crate::simplicial::{Simplex, SimplexGeometry};

/// Pairwise orthogonal rational normals of a face, orthogonal to its tangent
/// space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFrame {
    pub face: Simplex,
    pub normals: Vec<Vec<Rational>>,
}

impl NormalFrame {
    /// The same frame with normal `i` multiplied by `factors[i] > 0`.
    pub fn scaled(&self, factors: &[Rational]) -> Result<NormalFrame> {
        if factors.len() != self.normals.len() {
            return Err(Error::LengthMismatch {
                expected: self.normals.len(),
                found: factors.len(),
            });
        }
        if factors.iter().any(|f| *f <= Rational::zero()) {
            return Err(Error::Precondition("frame scalings must be positive".into()));
        }
        Ok(NormalFrame {
            face: self.face.clone(),
            normals: self
                .normals
                .iter()
                .zip(factors)
                .map(|(v, f)| v.iter().map(|x| x * f).collect())
                .collect(),
        })
    }
}

/// Unnormalized Gram–Schmidt of `e_1, …, e_d` against the face's edge
/// vectors and previously accepted normals; dependent candidates are skipped.
/// Each accepted normal is scaled to a primitive integer vector.
pub fn normal_frame(face: &SimplexGeometry) -> Result<NormalFrame> {
    let d = face.ambient_dim();
    let s = d - face.dim();
    let mut basis: Vec<Vec<Rational>> = Vec::with_capacity(d);
    for e in face.edge_vectors() {
        let w = orthogonalize(e, &basis);
        if w.iter().all(Zero::is_zero) {
            return Err(Error::DegenerateSimplex(face.simplex().vertices().to_vec()));
        }
        basis.push(w);
    }
    let mut normals = Vec::with_capacity(s);
    for j in 0..d {
        if normals.len() == s {
            break;
        }
        let e: Vec<Rational> = (0..d)
            .map(|i| Rational::from_integer(i64::from(i == j).into()))
            .collect();
        let w = orthogonalize(e, &basis);
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        let w: Vec<Rational> = primitive_integer_vector(&w)
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        basis.push(w.clone());
        normals.push(w);
    }
    Ok(NormalFrame {
        face: face.simplex().clone(),
        normals,
    })
}

fn orthogonalize(mut v: Vec<Rational>, basis: &[Vec<Rational>]) -> Vec<Rational> {
    for u in basis {
        let c = dot(&v, u) / dot(u, u);
        if c.is_zero() {
            continue;
        }
        for (a, b) in v.iter_mut().zip(u) {
            *a -= &c * b;
        }
    }
    v
}

/// One degree of freedom `l ∈ Σ_F`.
#[derive(Clone, Debug)]
pub struct DofFunctional {
    pub face: Simplex,
    /// Codimension of the face.
    pub s: usize,
    pub n: usize,
    /// Normal derivative orders, `|θ| = n`, one entry per normal.
    pub theta: MultiIndex,
    /// Bubble weight exponents over the face's vertices.
    pub sigma: MultiIndex,
    /// Position in the canonical order of the set it was generated in.
    pub id: usize,
    face_geom: Arc<SimplexGeometry>,
    frame: Arc<NormalFrame>,
}

impl DofFunctional {
    pub fn frame(&self) -> &NormalFrame {
        &self.frame
    }

    pub fn face_geometry(&self) -> &Arc<SimplexGeometry> {
        &self.face_geom
    }

    /// The same functional measured with a different normal frame.
    pub fn with_frame(&self, frame: Arc<NormalFrame>) -> Result<Self> {
        if frame.face != self.face || frame.normals.len() != self.s {
            return Err(Error::Precondition(format!(
                "frame for {:?} does not fit face {:?}",
                frame.face, self.face
            )));
        }
        Ok(Self {
            frame,
            ..self.clone()
        })
    }

    fn check_cell(&self, cell: &SimplexGeometry) -> Result<()> {
        if self.face.is_face_of(cell.simplex()) {
            Ok(())
        } else {
            Err(Error::NotAFace {
                face: self.face.vertices().to_vec(),
                cell: cell.simplex().vertices().to_vec(),
            })
        }
    }

    /// `l(u)` by applying derivative, trace, weight and integral in turn.
    pub fn apply(&self, u: &BBPoly) -> Result<Rational> {
        self.check_cell(u.geometry())?;
        let mut p = u.clone();
        for (normal, &t) in self.frame.normals.iter().zip(&self.theta) {
            for _ in 0..t {
                p = p.directional_derivative(normal);
            }
        }
        if self.n > u.degree() {
            return Ok(Rational::zero());
        }
        let tr = p.trace(&self.face)?;
        let tr = BBPoly::from_coeffs(self.face_geom.clone(), tr.degree(), tr.into_coeffs())?;
        if self.s == self.face_geom.ambient_dim() {
            return Ok(tr.value_at_vertex(0));
        }
        let weight = BBPoly::monomial(self.face_geom.clone(), &self.sigma)?;
        Ok(tr.multiply(&weight)?.integrate_normalized())
    }

    /// `l` as a linear functional on the degree-`k` BB coefficients of `cell`.
    pub fn row(&self, cell: &Arc<SimplexGeometry>, k: usize) -> Result<LinearFunctional> {
        self.check_cell(cell)?;
        if self.n > k {
            return Ok(LinearFunctional::zero(cell.clone(), k));
        }
        let base = if self.s == self.face_geom.ambient_dim() {
            LinearFunctional::vertex_value(self.face_geom.clone(), k - self.n, 0)
        } else {
            let weight = BBPoly::monomial(self.face_geom.clone(), &self.sigma)?;
            LinearFunctional::weighted_moment(&weight, k - self.n)
        };
        let mut l = base.pullback_trace(cell.clone())?;
        for (normal, &t) in self.frame.normals.iter().zip(&self.theta) {
            for _ in 0..t {
                l = l.pullback_derivative(normal);
            }
        }
        Ok(l)
    }
}

/// `Σ_F` for one face, in `(n, θ, σ)` order. Ids start at `first_id`.
pub fn dof_set_for_face(
    face: &Arc<SimplexGeometry>,
    r: &ContinuityVector,
    k: usize,
    first_id: usize,
) -> Result<Vec<DofFunctional>> {
    let d = face.ambient_dim();
    if r.d() != d {
        return Err(Error::ParameterMismatch(format!(
            "continuity vector {r} does not match dimension {d}"
        )));
    }
    let s = d - face.dim();
    let frame = Arc::new(normal_frame(face)?);
    let mut out = Vec::new();
    for n in 0..=r.r(s) {
        let bubble = enumerate_bubble(d, s, r, k, n)?;
        for theta in multi_indices(s, n) {
            for sigma in &bubble.indices {
                out.push(DofFunctional {
                    face: face.simplex().clone(),
                    s,
                    n,
                    theta: theta.clone(),
                    sigma: sigma.clone(),
                    id: first_id + out.len(),
                    face_geom: face.clone(),
                    frame: frame.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Faces of a simplex by dimension descending, then lexicographically.
pub fn canonical_faces(cell: &Simplex) -> Vec<Simplex> {
    let mut faces = cell.faces();
    faces.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.cmp(b)));
    faces
}

/// `Σ(K)`: the DOFs of every face of the cell, in canonical order.
pub fn dof_set_for_cell(cell: &Arc<SimplexGeometry>, r: &ContinuityVector, k: usize) -> Result<Vec<DofFunctional>> {
    let mut out = Vec::new();
    for f in canonical_faces(cell.simplex()) {
        let fg = if f == *cell.simplex() {
            cell.clone()
        } else {
            Arc::new(cell.face(&f)?)
        };
        let next = out.len();
        out.extend(dof_set_for_face(&fg, r, k, next)?);
    }
    Ok(out)
}

/// DOF matrix `[l_i(b_j)]` against the BB monomial basis of the cell.
pub fn dof_matrix(cell: &Arc<SimplexGeometry>, dofs: &[DofFunctional], k: usize) -> Result<Vec<Vec<Rational>>> {
    dofs.par_iter()
        .map(|l| l.row(cell, k).map(LinearFunctional::into_weights))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unisolvent,
    CountMismatch,
    RankDeficient,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceDofCount {
    pub face: Vec<usize>,
    pub codim: usize,
    pub dofs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnisolvencyReport {
    pub verdict: Verdict,
    pub dof_count: usize,
    pub dim_pk: usize,
    pub rank: usize,
    pub per_face_breakdown: Vec<FaceDofCount>,
}

impl UnisolvencyReport {
    pub fn is_unisolvent(&self) -> bool {
        self.verdict == Verdict::Unisolvent
    }
}

/// Unisolvency of `Σ(K)` on the reference simplex in `R^d`.
pub fn unisolvency_check(d: usize, r: &ContinuityVector, k: usize) -> Result<UnisolvencyReport> {
    if r.d() != d {
        return Err(Error::ParameterMismatch(format!(
            "continuity vector {r} does not match dimension {d}"
        )));
    }
    unisolvency_check_on(&Arc::new(SimplexGeometry::reference(d)), r, k)
}

/// Unisolvency of `Σ(K)` on a given cell.
pub fn unisolvency_check_on(
    cell: &Arc<SimplexGeometry>,
    r: &ContinuityVector,
    k: usize,
) -> Result<UnisolvencyReport> {
    let dofs = dof_set_for_cell(cell, r, k)?;
    unisolvency_of(cell, &dofs, k)
}

/// Unisolvency of an explicit DOF list on a cell.
pub fn unisolvency_of(cell: &Arc<SimplexGeometry>, dofs: &[DofFunctional], k: usize) -> Result<UnisolvencyReport> {
    let d = cell.ambient_dim();
    let dim = dim_pk(d, k);
    let rows = dof_matrix(cell, dofs, k)?;
    let rank = rank_exact(&rows, dim)?;
    let verdict = if dofs.len() != dim {
        Verdict::CountMismatch
    } else if rank < dim {
        Verdict::RankDeficient
    } else {
        Verdict::Unisolvent
    };
    let mut per_face_breakdown: Vec<FaceDofCount> = Vec::new();
    for f in canonical_faces(cell.simplex()) {
        let count = dofs.iter().filter(|l| l.face == f).count();
        per_face_breakdown.push(FaceDofCount {
            codim: d - f.dim(),
            face: f.vertices().to_vec(),
            dofs: count,
        });
    }
    Ok(UnisolvencyReport {
        verdict,
        dof_count: dofs.len(),
        dim_pk: dim,
        rank,
        per_face_breakdown,
    })
}

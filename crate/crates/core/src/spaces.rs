//! Global spaces on a triangulation as exact null spaces.
//!
//! A global coefficient vector concatenates one block of BB coefficients per
//! cell, cells in the triangulation's lexicographic order, each block in
//! lexicographic `α` order. The finite element space `E^r_k(T)` requires every
//! DOF of every shared face to agree between the cells of its star; the
//! superspline space `S^r_k(T)` requires the traces of all Cartesian partials
//! of order at most `r_s` to agree on every shared face of codimension `s`.
//! Both are imposed against the lexicographically smallest cell of the star.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bernstein::{dim_pk, multi_indices, BBPoly, LinearFunctional};
use crate::continuity::ContinuityVector;
use crate::dofs::{dof_matrix, dof_set_for_cell, dof_set_for_face, DofFunctional};
use crate::error::{Error, Result};
use crate::exact::{rank_exact, solve, span_equal, Echelon, RatMatrix, Rational, SparseRow};
use crate::simplicial::{Simplex, SimplexGeometry, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpaceKind {
    Fe,
    Superspline,
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpaceKind::Fe => "fe",
            SpaceKind::Superspline => "spline",
        })
    }
}

impl FromStr for SpaceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fe" => Ok(SpaceKind::Fe),
            "spline" | "superspline" => Ok(SpaceKind::Superspline),
            _ => Err(Error::Precondition(format!("unknown space kind {s:?}"))),
        }
    }
}

/// Size of an assembled constraint system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SystemStats {
    pub n_constraints: usize,
    pub n_unknowns: usize,
    pub rank: usize,
}

/// A basis of `E^r_k(T)` or `S^r_k(T)`.
#[derive(Clone, Debug)]
pub struct SpaceBasis {
    tri: Arc<Triangulation>,
    kind: SpaceKind,
    r: ContinuityVector,
    k: usize,
    basis: Vec<Vec<Rational>>,
    stats: SystemStats,
}

impl SpaceBasis {
    pub fn triangulation(&self) -> &Arc<Triangulation> {
        &self.tri
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn r(&self) -> &ContinuityVector {
        &self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The canonical null space basis of the constraint system.
    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn stats(&self) -> SystemStats {
        self.stats
    }

    /// Length of one cell block, `C(k + d, d)`.
    pub fn block(&self) -> usize {
        dim_pk(self.tri.dim(), self.k)
    }
}

fn check_dims(tri: &Triangulation, r: &ContinuityVector) -> Result<()> {
    if r.d() != tri.dim() {
        return Err(Error::ParameterMismatch(format!(
            "continuity vector {r} does not match mesh dimension {}",
            tri.dim()
        )));
    }
    Ok(())
}

/// The polynomial on cell `idx` encoded in a global coefficient vector.
pub fn cell_poly(tri: &Triangulation, k: usize, v: &[Rational], idx: usize) -> Result<BBPoly> {
    let block = dim_pk(tri.dim(), k);
    if v.len() != block * tri.num_cells() {
        return Err(Error::LengthMismatch {
            expected: block * tri.num_cells(),
            found: v.len(),
        });
    }
    BBPoly::from_coeffs(
        tri.cell_geometry(idx),
        k,
        v[idx * block..(idx + 1) * block].to_vec(),
    )
}

/// Concatenates per-cell polynomials (in cell order) into a global vector.
pub fn global_vector(polys: &[BBPoly]) -> Vec<Rational> {
    polys.iter().flat_map(|p| p.coeffs().iter().cloned()).collect()
}

/// `l_K - l_{K0}` as a sparse global row.
fn difference_row(
    lk: &LinearFunctional,
    k_idx: usize,
    l0: &LinearFunctional,
    k0_idx: usize,
    block: usize,
) -> SparseRow {
    let mut row: SparseRow = Vec::new();
    let mut push = |idx: usize, w: &[Rational], neg: bool| {
        for (j, x) in w.iter().enumerate() {
            if !x.is_zero() {
                row.push((idx * block + j, if neg { -x.clone() } else { x.clone() }));
            }
        }
    };
    if k0_idx < k_idx {
        push(k0_idx, l0.weights(), true);
        push(k_idx, lk.weights(), false);
    } else {
        push(k_idx, lk.weights(), false);
        push(k0_idx, l0.weights(), true);
    }
    row
}

/// Functionals whose agreement across a face defines the space, for one face.
fn face_functionals(
    tri: &Triangulation,
    face: &Simplex,
    kind: SpaceKind,
    r: &ContinuityVector,
    k: usize,
) -> Result<Vec<FaceFunctional>> {
    let fg = tri.geometry(face)?;
    match kind {
        SpaceKind::Fe => Ok(dof_set_for_face(&fg, r, k, 0)?
            .into_iter()
            .map(FaceFunctional::Dof)
            .collect()),
        SpaceKind::Superspline => {
            let d = tri.dim();
            let s = d - face.dim();
            let mut out = Vec::new();
            for order in 0..=r.r(s).min(k) {
                for beta in multi_indices(d, order) {
                    for tau in multi_indices(face.num_vertices(), k - order) {
                        out.push(FaceFunctional::Trace {
                            face: fg.clone(),
                            beta: beta.clone(),
                            tau,
                        });
                    }
                }
            }
            Ok(out)
        }
    }
}

/// `u ↦ l(u|_K)` for one cell; the cell-independent description of a
/// constraint.
enum FaceFunctional {
    Dof(DofFunctional),
    /// Coefficient `τ` of the trace of `∂^β u` on the face.
    Trace {
        face: Arc<SimplexGeometry>,
        beta: Vec<usize>,
        tau: Vec<usize>,
    },
}

impl FaceFunctional {
    fn on_cell(&self, cell: &Arc<SimplexGeometry>, k: usize) -> Result<LinearFunctional> {
        match self {
            FaceFunctional::Dof(l) => l.row(cell, k),
            FaceFunctional::Trace { face, beta, tau } => {
                let d = cell.ambient_dim();
                let mut l = LinearFunctional::coefficient(face.clone(), tau).pullback_trace(cell.clone())?;
                for (c, &b) in beta.iter().enumerate() {
                    let e: Vec<Rational> = (0..d)
                        .map(|j| Rational::from_integer(i64::from(j == c).into()))
                        .collect();
                    for _ in 0..b {
                        l = l.pullback_derivative(&e);
                    }
                }
                Ok(l)
            }
        }
    }
}

/// All constraint rows of the given kind. Rows come out in a deterministic
/// order: faces as stored in the star map, then functional order, then star
/// order.
pub fn constraint_rows(
    tri: &Triangulation,
    kind: SpaceKind,
    r: &ContinuityVector,
    k: usize,
) -> Result<Vec<SparseRow>> {
    check_dims(tri, r)?;
    let block = dim_pk(tri.dim(), k);
    let shared: Vec<(&Simplex, &[usize])> = tri.shared_faces().collect();
    let per_face: Vec<Vec<SparseRow>> = shared
        .par_iter()
        .map(|(face, star)| {
            let fs = face_functionals(tri, face, kind, r, k)?;
            let k0 = star[0];
            let g0 = tri.cell_geometry(k0);
            let mut rows = Vec::new();
            for f in &fs {
                let l0 = f.on_cell(&g0, k)?;
                for &ki in &star[1..] {
                    let lk = f.on_cell(&tri.cell_geometry(ki), k)?;
                    let row = difference_row(&lk, ki, &l0, k0, block);
                    if !row.is_empty() {
                        rows.push(row);
                    }
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    Ok(per_face.into_iter().flatten().collect())
}

fn assemble(tri: Arc<Triangulation>, kind: SpaceKind, r: &ContinuityVector, k: usize) -> Result<SpaceBasis> {
    let rows = constraint_rows(&tri, kind, r, k)?;
    let n = dim_pk(tri.dim(), k) * tri.num_cells();
    let mut ech = Echelon::new(n);
    for row in &rows {
        ech.insert_sparse(row)?;
    }
    let basis = ech.nullspace();
    Ok(SpaceBasis {
        stats: SystemStats {
            n_constraints: rows.len(),
            n_unknowns: n,
            rank: ech.rank(),
        },
        tri,
        kind,
        r: r.clone(),
        k,
        basis,
    })
}

/// `E^r_k(T)`: single-valued DOFs on every shared face.
pub fn assemble_fe_space(tri: Arc<Triangulation>, r: &ContinuityVector, k: usize) -> Result<SpaceBasis> {
    assemble(tri, SpaceKind::Fe, r, k)
}

/// `S^r_k(T)`: single-valued partials of order `≤ r_s` on shared faces of
/// codimension `s`.
pub fn assemble_superspline(tri: Arc<Triangulation>, r: &ContinuityVector, k: usize) -> Result<SpaceBasis> {
    assemble(tri, SpaceKind::Superspline, r, k)
}

pub fn assemble_space(
    tri: Arc<Triangulation>,
    kind: SpaceKind,
    r: &ContinuityVector,
    k: usize,
) -> Result<SpaceBasis> {
    assemble(tri, kind, r, k)
}

/// `true` iff `v` satisfies every row exactly.
pub fn satisfies(rows: &[SparseRow], v: &[Rational]) -> bool {
    rows.iter().all(|row| {
        row.iter()
            .filter(|(j, _)| !v[*j].is_zero())
            .map(|(j, w)| w * &v[*j])
            .sum::<Rational>()
            .is_zero()
    })
}

/// Cuts a global vector on `tri` down to the cells at `positions`.
pub fn restrict_vector(block: usize, v: &[Rational], positions: &[usize]) -> Vec<Rational> {
    positions
        .iter()
        .flat_map(|&p| v[p * block..(p + 1) * block].iter().cloned())
        .collect()
}

/// Restricts every basis vector of `space` to the cells of `sub`.
pub fn restrict_space(space: &SpaceBasis, sub: &Triangulation) -> Result<Vec<Vec<Rational>>> {
    let positions = space.tri.cell_positions_of(sub)?;
    let block = space.block();
    Ok(space
        .basis
        .iter()
        .map(|v| restrict_vector(block, v, &positions))
        .collect())
}

fn same_triangulation(a: &Triangulation, b: &Triangulation) -> bool {
    a.dim() == b.dim() && a.cells() == b.cells() && a.vertices() == b.vertices()
}

/// Equality of two spaces on the same mesh with the same `r` and `k`.
pub fn spaces_equal(a: &SpaceBasis, b: &SpaceBasis) -> Result<bool> {
    if !(Arc::ptr_eq(&a.tri, &b.tri) || same_triangulation(&a.tri, &b.tri)) || a.r != b.r || a.k != b.k {
        return Err(Error::ParameterMismatch(
            "spaces live on different meshes or parameters".into(),
        ));
    }
    span_equal(&a.basis, &b.basis)
}

/// Extends `u ∈ E^r_k(T′)` to `v ∈ E^r_k(T)` by keeping every DOF on faces of
/// `T′` and setting every other DOF to zero.
///
/// Cells of `T′` keep their polynomial. On each remaining cell the DOFs are
/// prescribed and the local system is solved, which needs `Σ(K)` to be
/// unisolvent.
pub fn fe_extend(
    u: &[Rational],
    sub: &Triangulation,
    tri: &Triangulation,
    r: &ContinuityVector,
    k: usize,
) -> Result<Vec<Rational>> {
    check_dims(tri, r)?;
    let positions = tri.cell_positions_of(sub)?;
    let block = dim_pk(tri.dim(), k);
    if u.len() != block * sub.num_cells() {
        return Err(Error::LengthMismatch {
            expected: block * sub.num_cells(),
            found: u.len(),
        });
    }
    let sub_rows = constraint_rows(sub, SpaceKind::Fe, r, k)?;
    if !satisfies(&sub_rows, u) {
        return Err(Error::NotAMember(
            "input violates the finite element constraints on the subtriangulation".into(),
        ));
    }
    let mut v = vec![Rational::zero(); block * tri.num_cells()];
    for (j, &p) in positions.iter().enumerate() {
        v[p * block..(p + 1) * block].clone_from_slice(&u[j * block..(j + 1) * block]);
    }
    for ci in 0..tri.num_cells() {
        if positions.contains(&ci) {
            continue;
        }
        let cell = tri.cell_geometry(ci);
        let dofs = dof_set_for_cell(&cell, r, k)?;
        if dofs.len() != block {
            return Err(Error::NotUnisolvent(format!(
                "{} DOFs for a polynomial space of dimension {block}",
                dofs.len()
            )));
        }
        let values = dofs
            .iter()
            .map(|l| prescribed_value(l, sub, u, k))
            .collect::<Result<Vec<_>>>()?;
        let rows = dof_matrix(&cell, &dofs, k)?;
        if rank_exact(&rows, block)? < block {
            return Err(Error::NotUnisolvent(format!("DOF matrix of cell {ci} is singular")));
        }
        let c = solve(&RatMatrix::from_rows(block, rows)?, &values)?.expect("square system of full rank");
        v[ci * block..(ci + 1) * block].clone_from_slice(&c);
    }
    Ok(v)
}

/// `l(u)` evaluated on the first cell of `T′` containing the DOF's face, or
/// zero when the face is not in `T′`.
fn prescribed_value(l: &DofFunctional, sub: &Triangulation, u: &[Rational], k: usize) -> Result<Rational> {
    if !sub.contains_face(&l.face) {
        return Ok(Rational::zero());
    }
    let idx = sub.star(&l.face)?[0];
    let p = cell_poly(sub, k, u, idx)?;
    l.row(p.geometry(), k)?.apply(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn r(s: &str) -> ContinuityVector {
        s.parse().unwrap()
    }

    fn chain() -> Arc<Triangulation> {
        Arc::new(
            Triangulation::new(1, vec![vec![int(0)], vec![int(1)], vec![int(2)]], vec![vec![0, 1], vec![1, 2]])
                .unwrap(),
        )
    }

    #[test]
    fn chain_dimensions() {
        let t = chain();
        assert_eq!(assemble_fe_space(t.clone(), &r("1"), 3).unwrap().dim(), 6);
        assert_eq!(assemble_superspline(t.clone(), &r("0"), 1).unwrap().dim(), 3);
        assert_eq!(assemble_superspline(t.clone(), &r("1"), 3).unwrap().dim(), 6);
    }

    #[test]
    fn single_cell_is_unconstrained() {
        let t = Arc::new(t_single());
        let s = assemble_superspline(t.clone(), &r("1,2"), 5).unwrap();
        assert_eq!(s.dim(), 21);
        assert_eq!(s.stats().n_constraints, 0);
        assert_eq!(assemble_fe_space(t, &r("1,2"), 5).unwrap().dim(), 21);
    }

    fn t_single() -> Triangulation {
        Triangulation::new(
            2,
            vec![vec![int(0), int(0)], vec![int(1), int(0)], vec![int(0), int(1)]],
            vec![vec![0, 1, 2]],
        )
        .unwrap()
    }

    #[test]
    fn chain_fe_equals_superspline() {
        let t = chain();
        let e = assemble_fe_space(t.clone(), &r("1"), 3).unwrap();
        let s = assemble_superspline(t, &r("1"), 3).unwrap();
        assert!(spaces_equal(&e, &s).unwrap());
        assert!(spaces_equal(&e, &e).unwrap());
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let t = chain();
        let a = assemble_fe_space(t.clone(), &r("1"), 3).unwrap();
        let b = assemble_fe_space(t.clone(), &r("1"), 4).unwrap();
        assert!(spaces_equal(&a, &b).is_err());
        assert!(assemble_fe_space(t, &r("1,2"), 5).is_err());
    }
}

//! Extendability of space mappings from a subtriangulation `T′ ⊆ T`.
//!
//! The mapping is extendable on a pair when restriction `P(T) → P(T′)` is
//! onto. This module decides that by rank, builds the explicit functions on
//! `T′` that cannot be extended when the degree or the continuity gaps are too
//! small, and verifies such functions by an exact feasibility solve.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::bernstein::{dim_pk, BBPoly};
use crate::continuity::ContinuityVector;
use crate::error::{Error, Result};
use crate::exact::{Echelon, Rational, SparseRow};
use crate::simplicial::{builtin_mesh, qua_cell, vertex_touch_cells, MeshName, MeshPair, Triangulation};
use crate::spaces::{
    assemble_space, constraint_rows, restrict_space, satisfies, SpaceKind, SystemStats,
};

/// `r_t ≥ 2 r_{t-1}` for every `2 ≤ t ≤ d`.
pub fn check_a2(r: &ContinuityVector) -> bool {
    (2..=r.d()).all(|t| r.r(t) >= 2 * r.r(t - 1))
}

/// `k ≥ 2 r_d + 1` together with [`check_a2`].
pub fn check_a1(r: &ContinuityVector, k: usize) -> bool {
    k > 2 * r.top() && check_a2(r)
}

#[derive(Clone, Debug, Serialize)]
pub struct ExtendVerdict {
    pub onto: bool,
    pub dim_full: usize,
    pub dim_sub: usize,
    pub image_rank: usize,
    /// A member of the space on `T′` outside the restriction image.
    #[serde(skip)]
    pub witness: Option<Vec<Rational>>,
    pub full_system: SystemStats,
    pub sub_system: SystemStats,
}

/// Decides whether restriction from `tri` to `sub` is onto.
pub fn restriction_onto(
    tri: Arc<Triangulation>,
    sub: Arc<Triangulation>,
    r: &ContinuityVector,
    k: usize,
    kind: SpaceKind,
) -> Result<ExtendVerdict> {
    tri.cell_positions_of(&sub)?;
    let full = assemble_space(tri, kind, r, k)?;
    let on_sub = assemble_space(sub.clone(), kind, r, k)?;
    let image = restrict_space(&full, &sub)?;
    let n = on_sub.block() * sub.num_cells();
    let mut ech = Echelon::new(n);
    for v in &image {
        ech.insert_dense(v)?;
    }
    let image_rank = ech.rank();
    let mut witness = None;
    if image_rank < on_sub.dim() {
        for b in on_sub.basis() {
            if !ech.contains_dense(b)? {
                witness = Some(b.clone());
                break;
            }
        }
    }
    Ok(ExtendVerdict {
        onto: image_rank == on_sub.dim(),
        dim_full: full.dim(),
        dim_sub: on_sub.dim(),
        image_rank,
        witness,
        full_system: full.stats(),
        sub_system: on_sub.stats(),
    })
}

/// A function on `T′` together with the mesh pair it lives on.
#[derive(Clone, Debug)]
pub struct Witness {
    pub pair: MeshPair,
    pub r: ContinuityVector,
    pub k: usize,
    /// One polynomial per cell of `pair.sub`, in cell order.
    pub polys: Vec<BBPoly>,
}

impl Witness {
    /// The global coefficient vector on `pair.sub`.
    pub fn coefficients(&self) -> Vec<Rational> {
        crate::spaces::global_vector(&self.polys)
    }
}

fn check_r(d: usize, r: &ContinuityVector) -> Result<()> {
    if r.d() != d {
        return Err(Error::ParameterMismatch(format!(
            "continuity vector {r} does not match dimension {d}"
        )));
    }
    Ok(())
}

/// On the vertex-touch mesh: `u = 0` on `K_0` and `u = λ_0^{k_0} λ_1^{k_1}`
/// on `K_1`, with `λ_i` the barycentric coordinates of the middle cell `K`,
/// `k_0 = ⌊k/2⌋` and `k_1 = ⌈k/2⌉`. Requires `k ≤ 2 r_d`.
pub fn witness_k_rd(d: usize, r: &ContinuityVector, k: usize) -> Result<Witness> {
    check_r(d, r)?;
    if k > 2 * r.top() {
        return Err(Error::Precondition(format!(
            "k = {k} exceeds 2 r_d = {}",
            2 * r.top()
        )));
    }
    let pair = builtin_mesh(MeshName::VertexTouch, d)?;
    let [k_mid, k0, k1] = vertex_touch_cells(d);
    let frame = pair.full.geometry(&k_mid)?.frame().clone();
    let (e0, e1) = (k / 2, k - k / 2);
    let mut polys = Vec::new();
    for cell in pair.sub.cells() {
        let g = pair.sub.geometry(cell)?;
        let p = if *cell == k0 {
            BBPoly::zero(g, k)
        } else {
            debug_assert_eq!(*cell, k1);
            let l0 = BBPoly::from_affine(g.clone(), &frame.forms()[0]);
            let l1 = BBPoly::from_affine(g, &frame.forms()[1]);
            l0.pow(e0).multiply(&l1.pow(e1))?
        };
        polys.push(p);
    }
    Ok(Witness {
        pair,
        r: r.clone(),
        k,
        polys,
    })
}

/// Total degree of the continuity witness, `2 r_d - r_s + 1`.
pub fn witness_rd_rs_degree(r: &ContinuityVector, s: usize) -> usize {
    2 * r.top() + 1 - r.r(s)
}

/// On the L¹-ball mesh with `T′ = {K_0, K_{2^s - 1}}`: `u = 0` on `K_0` and
///
/// `u = x_{s-1}^{r_{s-1}} x_s^{r_s - r_{s-1} + 1} Π_{i>s} x_i^{r_i - r_{i-1}} (1 - Σ_{i>s} x_i)^{r_d - r_s}`
///
/// on `K_{2^s - 1}`, written at degree `k`. Requires `2 ≤ s ≤ d`,
/// `r_s < 2 r_{s-1}`, `r_t ≥ 2 r_{t-1}` for `t > s`, and `k ≥ 2 r_d - r_s + 1`.
pub fn witness_rd_rs(d: usize, s: usize, r: &ContinuityVector, k: usize) -> Result<Witness> {
    check_r(d, r)?;
    if s < 2 || s > d {
        return Err(Error::Precondition(format!("need 2 ≤ s ≤ d, got s = {s}, d = {d}")));
    }
    if r.r(s) >= 2 * r.r(s - 1) {
        return Err(Error::Precondition(format!(
            "r_{s} = {} is not below 2 r_{} = {}",
            r.r(s),
            s - 1,
            2 * r.r(s - 1)
        )));
    }
    if let Some(t) = (s + 1..=d).find(|&t| r.r(t) < 2 * r.r(t - 1)) {
        return Err(Error::Precondition(format!(
            "r_{t} < 2 r_{}: the gaps above s must satisfy the doubling condition",
            t - 1
        )));
    }
    let degree = witness_rd_rs_degree(r, s);
    if k < degree {
        return Err(Error::Precondition(format!(
            "k = {k} is below the witness degree {degree}"
        )));
    }
    let full = builtin_mesh(MeshName::Qua, d)?.full;
    let k_pp = qua_cell(d, 0);
    let k_mm = qua_cell(d, (1 << s) - 1);
    let mut sub_indices = vec![
        full.cell_index(&k_pp).expect("catalog cell"),
        full.cell_index(&k_mm).expect("catalog cell"),
    ];
    sub_indices.sort_unstable();
    let sub = full.subtriangulation(&sub_indices)?;
    let mut polys = Vec::new();
    for cell in sub.cells() {
        let g = sub.geometry(cell)?;
        let p = if *cell == k_pp {
            BBPoly::zero(g, k)
        } else {
            let x = |i: usize| BBPoly::coordinate(g.clone(), i - 1);
            let mut p = x(s - 1).pow(r.r(s - 1)).multiply(&x(s).pow(r.r(s) - r.r(s - 1) + 1))?;
            let mut rest = BBPoly::one(g.clone()).degree_elevate(1);
            for i in s + 1..=d {
                p = p.multiply(&x(i).pow(r.r(i) - r.r(i - 1)))?;
                rest = rest.add(&x(i).scale(&Rational::from_integer((-1).into())))?;
            }
            p = p.multiply(&rest.pow(r.top() - r.r(s)))?;
            p.degree_elevate(k - p.degree())
        };
        polys.push(p);
    }
    Ok(Witness {
        pair: MeshPair {
            full,
            sub,
            sub_indices,
        },
        r: r.clone(),
        k,
        polys,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    /// `u` satisfies every constraint of the space on `T′`.
    pub member_of_sub: bool,
    /// Some member of the space on `T` restricts to `u`.
    pub extendable: bool,
    /// Cell indices of the subtriangulation on which the extension problem
    /// was decided. Infeasibility on a subtriangulation containing `T′` rules
    /// out an extension to all of `T`.
    pub decided_on: Vec<usize>,
}

/// Checks that `u` lies in the space on `sub` and whether it extends to `tri`.
pub fn verify_witness(
    tri: &Triangulation,
    sub: &Triangulation,
    r: &ContinuityVector,
    k: usize,
    kind: SpaceKind,
    u: &[Rational],
) -> Result<WitnessReport> {
    let positions = tri.cell_positions_of(sub)?;
    let block = dim_pk(tri.dim(), k);
    if u.len() != block * sub.num_cells() {
        return Err(Error::LengthMismatch {
            expected: block * sub.num_cells(),
            found: u.len(),
        });
    }
    let member_of_sub = satisfies(&constraint_rows(sub, kind, r, k)?, u);

    // Try each single extra cell first: these systems are small, and any
    // obstruction found there is an obstruction on T.
    let extra: Vec<usize> = (0..tri.num_cells()).filter(|i| !positions.contains(i)).collect();
    if extra.len() > 1 {
        for &c in &extra {
            let mut cells = positions.clone();
            cells.push(c);
            cells.sort_unstable();
            let mid = tri.subtriangulation(&cells)?;
            if !extension_exists(&mid, sub, r, k, kind, u)? {
                return Ok(WitnessReport {
                    member_of_sub,
                    extendable: false,
                    decided_on: cells,
                });
            }
        }
    }
    let extendable = extension_exists(tri, sub, r, k, kind, u)?;
    Ok(WitnessReport {
        member_of_sub,
        extendable,
        decided_on: (0..tri.num_cells()).collect(),
    })
}

/// `true` iff some `v` in the space on `tri` restricts to `u` on `sub`.
fn extension_exists(
    tri: &Triangulation,
    sub: &Triangulation,
    r: &ContinuityVector,
    k: usize,
    kind: SpaceKind,
    u: &[Rational],
) -> Result<bool> {
    let positions = tri.cell_positions_of(sub)?;
    let block = dim_pk(tri.dim(), k);
    let n = block * tri.num_cells();
    let mut ech = Echelon::new(n + 1);
    for (j, &p) in positions.iter().enumerate() {
        for i in 0..block {
            let val = &u[j * block + i];
            let mut row: SparseRow = vec![(p * block + i, Rational::one())];
            if !val.is_zero() {
                row.push((n, val.clone()));
            }
            ech.insert_sparse(&row)?;
        }
    }
    for row in constraint_rows(tri, kind, r, k)? {
        ech.insert_sparse(&row)?;
        if !ech.augmented_consistent() {
            return Ok(false);
        }
    }
    Ok(ech.augmented_consistent())
}

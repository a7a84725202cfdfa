use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::lp::{maximize, LpOutcome};
use super::{BarycentricFrame, Point, Simplex, SimplexGeometry};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// A pure `d`-dimensional simplicial complex with rational vertex coordinates.
///
/// Cells are kept in lexicographic order of their vertex ids; that order is
/// the block layout of every global coefficient vector. The face lattice and
/// the star of every face are derived once at construction.
#[derive(Clone)]
pub struct Triangulation {
    dim: usize,
    vertices: Vec<Point>,
    cells: Vec<Simplex>,
    faces: Vec<BTreeSet<Simplex>>,
    stars: BTreeMap<Simplex, Vec<usize>>,
    geometry: HashMap<Simplex, Arc<SimplexGeometry>>,
}

impl Triangulation {
    /// Validates and builds a triangulation.
    ///
    /// Every cell needs `d + 1` distinct known vertex ids spanning a
    /// nondegenerate simplex, and any two cells must meet in a common face
    /// (possibly empty).
    pub fn new(dim: usize, vertices: Vec<Point>, cells: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMesh("ambient dimension must be at least 1".into()));
        }
        if let Some((i, p)) = vertices.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::InvalidMesh(format!(
                "vertex {i} has {} coordinates, expected {dim}",
                p.len()
            )));
        }
        let mut seen = BTreeMap::new();
        for (i, p) in vertices.iter().enumerate() {
            if let Some(j) = seen.insert(p.clone(), i) {
                return Err(Error::InvalidMesh(format!(
                    "vertices {j} and {i} coincide"
                )));
            }
        }
        if cells.is_empty() {
            return Err(Error::InvalidMesh("no cells".into()));
        }
        let mut simplices = Vec::with_capacity(cells.len());
        for ids in cells {
            let s = Simplex::new(ids)?;
            if s.num_vertices() != dim + 1 {
                return Err(Error::InvalidMesh(format!(
                    "cell {s:?} has {} vertices, expected {}",
                    s.num_vertices(),
                    dim + 1
                )));
            }
            if let Some(&v) = s.vertices().iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::InvalidMesh(format!("cell {s:?} uses unknown vertex {v}")));
            }
            simplices.push(s);
        }
        simplices.sort();
        if let Some(w) = simplices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidMesh(format!("duplicate cell {:?}", w[0])));
        }

        let mut geometry = HashMap::new();
        for cell in &simplices {
            let pts = cell.vertices().iter().map(|&v| vertices[v].clone()).collect();
            let g = SimplexGeometry::new(cell.clone(), pts)?;
            for f in cell.faces() {
                if !geometry.contains_key(&f) {
                    let fg = g.face(&f)?;
                    geometry.insert(f, Arc::new(fg));
                }
            }
        }

        for i in 0..simplices.len() {
            for j in i + 1..simplices.len() {
                check_proper_intersection(&simplices[i], &simplices[j], &vertices)?;
            }
        }

        let mut faces = vec![BTreeSet::new(); dim + 1];
        let mut stars: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
        for (idx, cell) in simplices.iter().enumerate() {
            for f in cell.faces() {
                faces[f.dim()].insert(f.clone());
                stars.entry(f).or_default().push(idx);
            }
        }

        Ok(Self {
            dim,
            vertices,
            cells: simplices,
            faces,
            stars,
            geometry,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The full vertex table, indexed by id.
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_index(&self, cell: &Simplex) -> Option<usize> {
        self.cells.binary_search(cell).ok()
    }

    /// All faces of dimension `m`, in lexicographic order.
    pub fn faces_of_dim(&self, m: usize) -> impl Iterator<Item = &Simplex> {
        self.faces.get(m).into_iter().flatten()
    }

    /// All faces, by dimension descending then lexicographically.
    pub fn faces_canonical(&self) -> impl Iterator<Item = &Simplex> {
        (0..=self.dim).rev().flat_map(move |m| self.faces[m].iter())
    }

    pub fn contains_face(&self, face: &Simplex) -> bool {
        self.stars.contains_key(face)
    }

    /// Indices of the cells containing `face`, in cell order.
    pub fn star(&self, face: &Simplex) -> Result<&[usize]> {
        self.stars
            .get(face)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::NotInTriangulation(face.vertices().to_vec()))
    }

    /// The cells containing `face`, in lexicographic order.
    pub fn star_cells(&self, face: &Simplex) -> Result<Vec<&Simplex>> {
        Ok(self.star(face)?.iter().map(|&i| &self.cells[i]).collect())
    }

    /// Faces contained in at least two cells.
    pub fn shared_faces(&self) -> impl Iterator<Item = (&Simplex, &[usize])> {
        self.stars
            .iter()
            .filter(|(_, s)| s.len() > 1)
            .map(|(f, s)| (f, s.as_slice()))
    }

    pub fn geometry(&self, face: &Simplex) -> Result<Arc<SimplexGeometry>> {
        self.geometry
            .get(face)
            .cloned()
            .ok_or_else(|| Error::NotInTriangulation(face.vertices().to_vec()))
    }

    pub fn cell_geometry(&self, idx: usize) -> Arc<SimplexGeometry> {
        self.geometry[&self.cells[idx]].clone()
    }

    /// The triangulation made of the given cells, sharing this vertex table.
    pub fn subtriangulation(&self, cell_indices: &[usize]) -> Result<Triangulation> {
        let mut cells = Vec::with_capacity(cell_indices.len());
        for &i in cell_indices {
            let c = self.cells.get(i).ok_or_else(|| {
                Error::NotSubtriangulation(format!(
                    "cell index {i} out of range (mesh has {} cells)",
                    self.cells.len()
                ))
            })?;
            cells.push(c.vertices().to_vec());
        }
        Triangulation::new(self.dim, self.vertices.clone(), cells)
    }

    /// Positions of `sub`'s cells inside this triangulation's cell list.
    pub fn cell_positions_of(&self, sub: &Triangulation) -> Result<Vec<usize>> {
        if !is_subtriangulation(sub, self) {
            return Err(Error::NotSubtriangulation(
                "cells or vertex coordinates do not match".into(),
            ));
        }
        Ok(sub
            .cells
            .iter()
            .map(|c| self.cell_index(c).expect("checked above"))
            .collect())
    }
}

impl fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Triangulation")
            .field("dim", &self.dim)
            .field("vertices", &self.vertices.len())
            .field("cells", &self.cells)
            .finish()
    }
}

/// The barycentric frame of a face of `t`.
pub fn barycentric_frame(face: &Simplex, t: &Triangulation) -> Result<BarycentricFrame> {
    Ok(t.geometry(face)?.frame().clone())
}

/// `true` iff every cell of `sub` is a cell of `t` and every vertex `sub`'s
/// cells use has the same coordinates in both tables.
pub fn is_subtriangulation(sub: &Triangulation, t: &Triangulation) -> bool {
    sub.dim == t.dim
        && sub.cells.iter().all(|c| {
            t.cell_index(c).is_some()
                && c.vertices()
                    .iter()
                    .all(|&v| t.vertices.get(v) == sub.vertices.get(v))
        })
}

fn bounding_boxes_disjoint(a: &[&Point], b: &[&Point]) -> bool {
    let d = a[0].len();
    (0..d).any(|c| {
        let amax = a.iter().map(|p| &p[c]).max().unwrap();
        let amin = a.iter().map(|p| &p[c]).min().unwrap();
        let bmax = b.iter().map(|p| &p[c]).max().unwrap();
        let bmin = b.iter().map(|p| &p[c]).min().unwrap();
        amax < bmin || bmax < amin
    })
}

/// Two cells meet properly iff every common point has barycentric weights
/// (with respect to the first cell) supported on the shared vertices.
fn check_proper_intersection(a: &Simplex, b: &Simplex, vertices: &[Point]) -> Result<()> {
    let pa: Vec<&Point> = a.vertices().iter().map(|&v| &vertices[v]).collect();
    let pb: Vec<&Point> = b.vertices().iter().map(|&v| &vertices[v]).collect();
    if bounding_boxes_disjoint(&pa, &pb) {
        return Ok(());
    }
    let na = pa.len();
    let nb = pb.len();
    let d = pa[0].len();
    let zero = Rational::zero;
    let one = Rational::one;
    let mut rows = Vec::with_capacity(d + 2);
    let mut rhs = Vec::with_capacity(d + 2);
    rows.push((0..na + nb).map(|j| if j < na { one() } else { zero() }).collect());
    rhs.push(one());
    rows.push((0..na + nb).map(|j| if j < na { zero() } else { one() }).collect());
    rhs.push(one());
    for c in 0..d {
        let row: Vec<Rational> = pa
            .iter()
            .map(|p| p[c].clone())
            .chain(pb.iter().map(|p| -p[c].clone()))
            .collect();
        rows.push(row);
        rhs.push(zero());
    }
    let objective: Vec<Rational> = a
        .vertices()
        .iter()
        .map(|&v| if b.contains_vertex(v) { zero() } else { one() })
        .chain((0..nb).map(|_| zero()))
        .collect();
    match maximize(&rows, &rhs, &objective) {
        LpOutcome::Optimal(v) if v.is_positive() => Err(Error::InvalidMesh(format!(
            "cells {a:?} and {b:?} do not meet in a common face"
        ))),
        _ => Ok(()),
    }
}

//! Built-in meshes: the small configurations on which the extendability
//! results are demonstrated.

use std::fmt;
use std::str::FromStr;

use super::{Point, Simplex, Triangulation};
use crate::error::{Error, Result};
use crate::exact::int;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeshName {
    /// Three unit intervals `[-1,0], [0,1], [1,2]`; the middle one is dropped.
    Intervals3,
    /// Three triangles around the origin; the two opposite ones meet only at
    /// the origin.
    SingularVertex2d,
    /// The `2^d` cells of the L¹ unit ball, one per orthant.
    Qua,
    /// The standard simplex and its point reflections through `V_0` and `V_1`.
    VertexTouch,
}

impl MeshName {
    pub const ALL: [MeshName; 4] = [
        MeshName::Intervals3,
        MeshName::SingularVertex2d,
        MeshName::Qua,
        MeshName::VertexTouch,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MeshName::Intervals3 => "intervals3",
            MeshName::SingularVertex2d => "singular-vertex-2d",
            MeshName::Qua => "qua",
            MeshName::VertexTouch => "vertex-touch",
        }
    }

    /// Dimensions for which the mesh is defined (`None` = any `d ≥ 1`).
    pub fn fixed_dim(self) -> Option<usize> {
        match self {
            MeshName::Intervals3 => Some(1),
            MeshName::SingularVertex2d => Some(2),
            MeshName::Qua | MeshName::VertexTouch => None,
        }
    }
}

impl fmt::Display for MeshName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MeshName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MeshName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::UnknownMesh(s.to_string()))
    }
}

/// A triangulation together with a distinguished subtriangulation.
#[derive(Clone, Debug)]
pub struct MeshPair {
    pub full: Triangulation,
    pub sub: Triangulation,
    /// Positions of `sub`'s cells in `full`'s cell order.
    pub sub_indices: Vec<usize>,
}

impl MeshPair {
    fn from_cells(
        dim: usize,
        vertices: Vec<Point>,
        cells: Vec<Vec<usize>>,
        sub_cells: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let full = Triangulation::new(dim, vertices, cells)?;
        let mut sub_indices = sub_cells
            .into_iter()
            .map(|c| {
                let s = Simplex::new(c)?;
                full.cell_index(&s)
                    .ok_or_else(|| Error::NotInTriangulation(s.vertices().to_vec()))
            })
            .collect::<Result<Vec<_>>>()?;
        sub_indices.sort_unstable();
        let sub = full.subtriangulation(&sub_indices)?;
        Ok(Self {
            full,
            sub,
            sub_indices,
        })
    }
}

fn point(coords: &[i64]) -> Point {
    coords.iter().map(|&x| int(x)).collect()
}

fn unit(d: usize, i: usize, sign: i64) -> Point {
    (0..d).map(|j| int(if j == i { sign } else { 0 })).collect()
}

/// Builds a catalog mesh and its subtriangulation.
pub fn builtin_mesh(name: MeshName, d: usize) -> Result<MeshPair> {
    if d < 1 {
        return Err(Error::InvalidMesh("dimension must be at least 1".into()));
    }
    if let Some(fixed) = name.fixed_dim() {
        if fixed != d {
            return Err(Error::InvalidMesh(format!(
                "mesh {name} exists only in dimension {fixed}"
            )));
        }
    }
    match name {
        MeshName::Intervals3 => intervals3(),
        MeshName::SingularVertex2d => singular_vertex_2d(),
        MeshName::Qua => qua(d),
        MeshName::VertexTouch => vertex_touch(d),
    }
}

fn intervals3() -> Result<MeshPair> {
    let vertices = vec![point(&[-1]), point(&[0]), point(&[1]), point(&[2])];
    MeshPair::from_cells(
        1,
        vertices,
        vec![vec![0, 1], vec![1, 2], vec![2, 3]],
        vec![vec![0, 1], vec![2, 3]],
    )
}

fn singular_vertex_2d() -> Result<MeshPair> {
    let vertices = vec![
        point(&[0, 0]),
        point(&[0, 1]),
        point(&[-1, 0]),
        point(&[1, 0]),
        point(&[0, -1]),
    ];
    let k_pp = vec![0, 1, 3];
    let k_mm = vec![0, 2, 4];
    let k_pm = vec![0, 3, 4];
    MeshPair::from_cells(2, vertices, vec![k_pp.clone(), k_mm.clone(), k_pm], vec![k_pp, k_mm])
}

/// Vertex id of `V_i^+` (`i` is 1-based).
pub fn qua_plus(i: usize) -> usize {
    2 * i - 1
}

/// Vertex id of `V_i^-` (`i` is 1-based).
pub fn qua_minus(i: usize) -> usize {
    2 * i
}

/// Cell `K_j` of the L¹-ball triangulation: bit `i-1` of `j` selects
/// `V_i^-` over `V_i^+`.
pub fn qua_cell(d: usize, j: usize) -> Simplex {
    let mut ids = vec![0];
    for i in 1..=d {
        if j >> (i - 1) & 1 == 1 {
            ids.push(qua_minus(i));
        } else {
            ids.push(qua_plus(i));
        }
    }
    Simplex::new(ids).expect("distinct ids")
}

fn qua(d: usize) -> Result<MeshPair> {
    let mut vertices = vec![vec![int(0); d]];
    for i in 0..d {
        vertices.push(unit(d, i, 1));
        vertices.push(unit(d, i, -1));
    }
    let cells = (0..1usize << d)
        .map(|j| qua_cell(d, j).vertices().to_vec())
        .collect();
    let sub = vec![
        qua_cell(d, 0).vertices().to_vec(),
        qua_cell(d, (1 << d) - 1).vertices().to_vec(),
    ];
    MeshPair::from_cells(d, vertices, cells, sub)
}

/// Ids of the three cells `K`, `K_0`, `K_1` of the vertex-touch mesh.
pub fn vertex_touch_cells(d: usize) -> [Simplex; 3] {
    let k = Simplex::new((0..=d).collect()).unwrap();
    let mut k0 = vec![0];
    k0.extend(d + 1..=2 * d);
    let mut k1 = vec![1, 2 * d + 1];
    k1.extend(2 * d + 2..=3 * d);
    [k, Simplex::new(k0).unwrap(), Simplex::new(k1).unwrap()]
}

fn vertex_touch(d: usize) -> Result<MeshPair> {
    // 0 .. d: the standard simplex V_0 = 0, V_i = e_i.
    let mut vertices = vec![vec![int(0); d]];
    vertices.extend((0..d).map(|i| unit(d, i, 1)));
    // d+1 .. 2d: reflections of e_i through V_0.
    vertices.extend((0..d).map(|i| unit(d, i, -1)));
    // 2d+1: reflection of V_0 through V_1, then of e_i (i ≥ 2) through V_1.
    let two_e1 = {
        let mut p = vec![int(0); d];
        p[0] = int(2);
        p
    };
    vertices.push(two_e1.clone());
    for i in 1..d {
        let mut p = two_e1.clone();
        p[i] = int(-1);
        vertices.push(p);
    }
    let [k, k0, k1] = vertex_touch_cells(d);
    MeshPair::from_cells(
        d,
        vertices,
        vec![
            k.vertices().to_vec(),
            k0.vertices().to_vec(),
            k1.vertices().to_vec(),
        ],
        vec![k0.vertices().to_vec(), k1.vertices().to_vec()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qua_2d_has_four_triangles_around_the_origin() {
        let m = builtin_mesh(MeshName::Qua, 2).unwrap();
        assert_eq!(m.full.num_cells(), 4);
        assert_eq!(m.full.vertices().len(), 5);
        assert_eq!(m.full.star(&Simplex::vertex(0)).unwrap().len(), 4);
        assert_eq!(m.sub.num_cells(), 2);
        let cells: Vec<&Simplex> = m.sub_indices.iter().map(|&i| &m.full.cells()[i]).collect();
        assert!(cells.contains(&&qua_cell(2, 0)));
        assert!(cells.contains(&&qua_cell(2, 3)));
    }

    #[test]
    fn qua_is_valid_up_to_dimension_four() {
        for d in 1..=4 {
            let m = builtin_mesh(MeshName::Qua, d).unwrap();
            assert_eq!(m.full.num_cells(), 1 << d);
        }
    }

    #[test]
    fn intervals3_shape() {
        let m = builtin_mesh(MeshName::Intervals3, 1).unwrap();
        assert_eq!(m.full.num_cells(), 3);
        assert_eq!(m.full.vertices().len(), 4);
        assert_eq!(m.sub_indices, vec![0, 2]);
    }

    #[test]
    fn singular_vertex_subcomplex_meets_only_at_origin() {
        let m = builtin_mesh(MeshName::SingularVertex2d, 2).unwrap();
        assert_eq!(m.sub_indices, vec![0, 1]);
        let [a, b] = [&m.sub.cells()[0], &m.sub.cells()[1]];
        assert_eq!(a.common_vertices(b), vec![0]);
    }

    #[test]
    fn vertex_touch_in_one_dimension() {
        let m = builtin_mesh(MeshName::VertexTouch, 1).unwrap();
        let coords: Vec<Vec<i64>> = m
            .full
            .cells()
            .iter()
            .map(|c| {
                c.vertices()
                    .iter()
                    .map(|&v| {
                        m.full.vertices()[v][0].to_integer().try_into().unwrap()
                    })
                    .collect()
            })
            .collect();
        // Cells [0,1], [0,-1] and [1,2] in id order.
        assert_eq!(coords, vec![vec![0, 1], vec![0, -1], vec![1, 2]]);
        let sub: Vec<_> = m.sub.cells().to_vec();
        assert!(sub[0].common_vertices(&sub[1]).is_empty());
    }

    #[test]
    fn vertex_touch_is_valid_up_to_dimension_four() {
        for d in 1..=4 {
            let m = builtin_mesh(MeshName::VertexTouch, d).unwrap();
            let [k, k0, k1] = vertex_touch_cells(d);
            assert_eq!(k.common_vertices(&k0), vec![0]);
            assert_eq!(k.common_vertices(&k1), vec![1]);
            assert!(k0.common_vertices(&k1).is_empty());
            assert_eq!(m.sub.num_cells(), 2);
        }
    }

    #[test]
    fn fixed_dimension_meshes_reject_other_d() {
        assert!(builtin_mesh(MeshName::Intervals3, 2).is_err());
        assert!(builtin_mesh(MeshName::SingularVertex2d, 3).is_err());
        assert!(builtin_mesh(MeshName::Qua, 0).is_err());
        assert!("nope".parse::<MeshName>().is_err());
    }
}

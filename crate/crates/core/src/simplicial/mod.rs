//! Simplices, barycentric frames, triangulations and the built-in meshes.

mod catalog;
mod geometry;
mod io;
mod lp;
mod simplex;
mod triangulation;

pub use catalog::{
    builtin_mesh, qua_cell, qua_minus, qua_plus, vertex_touch_cells, MeshName, MeshPair,
};
pub use geometry::{AffineForm, BarycentricFrame, Point, SimplexGeometry};
pub use io::MeshJson;
pub use simplex::Simplex;
pub use triangulation::{barycentric_frame, is_subtriangulation, Triangulation};

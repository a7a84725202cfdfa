use serde::{Deserialize, Serialize};

use super::Triangulation;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational};

/// Mesh file layout: `{"dim", "vertices": [["p/q", ...], ...], "cells": [[ids], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub cells: Vec<Vec<usize>>,
}

impl From<&Triangulation> for MeshJson {
    fn from(t: &Triangulation) -> Self {
        MeshJson {
            dim: t.dim(),
            vertices: t
                .vertices()
                .iter()
                .map(|p| p.iter().map(format_rational).collect())
                .collect(),
            cells: t.cells().iter().map(|c| c.vertices().to_vec()).collect(),
        }
    }
}

impl TryFrom<MeshJson> for Triangulation {
    type Error = Error;

    fn try_from(m: MeshJson) -> Result<Self> {
        let vertices = m
            .vertices
            .iter()
            .map(|p| p.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Triangulation::new(m.dim, vertices, m.cells)
    }
}

impl Triangulation {
    /// Compact, deterministic JSON: vertices by id, cells lexicographically.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MeshJson::from(self)).expect("mesh serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: MeshJson =
            serde_json::from_str(s).map_err(|e| Error::InvalidMesh(format!("mesh JSON: {e}")))?;
        Triangulation::try_from(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::{builtin_mesh, MeshName};

    #[test]
    fn round_trip_is_identity() {
        for (name, d) in [
            (MeshName::Intervals3, 1),
            (MeshName::SingularVertex2d, 2),
            (MeshName::Qua, 3),
            (MeshName::VertexTouch, 2),
        ] {
            let t = builtin_mesh(name, d).unwrap().full;
            let s = t.to_json();
            let back = Triangulation::from_json(&s).unwrap();
            assert_eq!(back.to_json(), s);
            assert_eq!(back.cells(), t.cells());
        }
    }

    #[test]
    fn layout_and_rational_strings() {
        let t = Triangulation::from_json(
            r#"{"dim":1,"vertices":[["1/2"],["0.75"],["3"]],"cells":[[2,1],[0,1]]}"#,
        )
        .unwrap();
        assert_eq!(
            t.to_json(),
            r#"{"dim":1,"vertices":[["1/2"],["3/4"],["3"]],"cells":[[0,1],[1,2]]}"#
        );
    }

    #[test]
    fn malformed_input_is_an_error() {
        assert!(Triangulation::from_json("{").is_err());
        assert!(Triangulation::from_json(r#"{"dim":1,"vertices":[["x"]],"cells":[]}"#).is_err());
        assert!(Triangulation::from_json(
            r#"{"dim":1,"vertices":[["0"],["1"]],"cells":[[0,1]],"extra":1}"#
        )
        .is_err());
    }
}

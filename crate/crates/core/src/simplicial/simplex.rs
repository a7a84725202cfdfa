use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simplex identified by its strictly increasing global vertex ids.
///
/// The sorted id list is the canonical identity used to match faces between
/// cells, and it fixes the vertex order of the simplex's barycentric
/// coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Simplex(Vec<usize>);

impl Simplex {
    /// Sorts the ids; rejects empty lists and repeated ids.
    pub fn new(mut ids: Vec<usize>) -> Result<Self> {
        if ids.is_empty() {
            return Err(Error::InvalidSimplex("no vertices".into()));
        }
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSimplex(format!("repeated vertex in {ids:?}")));
        }
        Ok(Self(ids))
    }

    pub fn vertex(id: usize) -> Self {
        Self(vec![id])
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn num_vertices(&self) -> usize {
        self.0.len()
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains_vertex(&self, id: usize) -> bool {
        self.0.binary_search(&id).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains_vertex(*v))
    }

    /// Positions of this simplex's vertices inside `other`, or `None` when it
    /// is not a face of `other`. Positions come out increasing.
    pub fn positions_in(&self, other: &Simplex) -> Option<Vec<usize>> {
        self.0
            .iter()
            .map(|v| other.0.binary_search(v).ok())
            .collect()
    }

    /// Every nonempty face, including the simplex itself.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        (1u64..(1 << n))
            .map(|mask| {
                Simplex(
                    (0..n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| self.0[i])
                        .collect(),
                )
            })
            .collect()
    }

    /// Shared vertex ids, increasing.
    pub fn common_vertices(&self, other: &Simplex) -> Vec<usize> {
        self.0
            .iter()
            .copied()
            .filter(|v| other.contains_vertex(*v))
            .collect()
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl TryFrom<Vec<usize>> for Simplex {
    type Error = Error;

    fn try_from(ids: Vec<usize>) -> Result<Self> {
        Simplex::new(ids)
    }
}

impl From<Simplex> for Vec<usize> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_sorts_and_validates() {
        assert_eq!(Simplex::new(vec![3, 1, 2]).unwrap().vertices(), &[1, 2, 3]);
        assert!(Simplex::new(vec![]).is_err());
        assert!(Simplex::new(vec![1, 1]).is_err());
    }

    #[test]
    fn faces_of_triangle() {
        let t = Simplex::new(vec![0, 1, 2]).unwrap();
        let faces = t.faces();
        assert_eq!(faces.len(), 7);
        assert!(faces.iter().all(|f| f.is_face_of(&t)));
        assert_eq!(
            Simplex::new(vec![0, 2]).unwrap().positions_in(&t),
            Some(vec![0, 2])
        );
        assert_eq!(Simplex::vertex(5).positions_in(&t), None);
    }
}

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Continuity orders `(r_1, …, r_d)`: `r_s` is the smoothness required across
/// faces of codimension `s`. Non-decreasing; `r_0 = 0` is implicit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ContinuityVector(Vec<usize>);

impl ContinuityVector {
    pub fn new(r: Vec<usize>) -> Result<Self> {
        if r.is_empty() {
            return Err(Error::InvalidContinuity("empty continuity vector".into()));
        }
        if r.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidContinuity(format!("{r:?} is not non-decreasing")));
        }
        Ok(Self(r))
    }

    /// Ambient dimension `d`.
    pub fn d(&self) -> usize {
        self.0.len()
    }

    /// `r_s` for `0 ≤ s ≤ d`, with `r_0 = 0`.
    pub fn r(&self, s: usize) -> usize {
        if s == 0 {
            0
        } else {
            self.0[s - 1]
        }
    }

    /// `r_d`.
    pub fn top(&self) -> usize {
        *self.0.last().unwrap()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl fmt::Display for ContinuityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for ContinuityVector {
    type Err = Error;

    /// Parses `"1,2,4"`.
    fn from_str(s: &str) -> Result<Self> {
        let r = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidContinuity(format!("bad entry {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(r)
    }
}

impl TryFrom<Vec<usize>> for ContinuityVector {
    type Error = Error;

    fn try_from(r: Vec<usize>) -> Result<Self> {
        Self::new(r)
    }
}

impl From<ContinuityVector> for Vec<usize> {
    fn from(r: ContinuityVector) -> Self {
        r.0
    }
}

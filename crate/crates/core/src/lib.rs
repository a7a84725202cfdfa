//! Exact construction of `C^r` finite element and superspline spaces on
//! simplicial triangulations.
//!
//! Everything is computed over the rationals. Local polynomials are stored in
//! Bernstein–Bézier form per cell, global spaces are exact null spaces of
//! sparse constraint systems, and extendability of a space mapping from a
//! subtriangulation `T′ ⊆ T` is decided by comparing the rank of the
//! restriction with the dimension of the space on `T′`.
//!
//! ```
//! use srk::{dofs::unisolvency_check, ContinuityVector};
//!
//! // The Argyris element: C¹ quintics with C² supersmoothness at vertices.
//! let r: ContinuityVector = "1,2".parse().unwrap();
//! let report = unisolvency_check(2, &r, 5).unwrap();
//! assert!(report.is_unisolvent());
//! assert_eq!(report.dof_count, 21);
//! ```

pub mod bernstein;
pub mod bubble;
mod continuity;
pub mod dofs;
pub mod error;
pub mod exact;
pub mod extend;
pub mod simplicial;
pub mod spaces;

pub use continuity::ContinuityVector;
pub use error::{Error, Result};
pub use exact::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact.md")]
    mod exact {}
    #[doc = include_str!("../../../book/src/meshes.md")]
    mod meshes {}
    #[doc = include_str!("../../../book/src/bernstein.md")]
    mod bernstein {}
    #[doc = include_str!("../../../book/src/dofs.md")]
    mod dofs {}
    #[doc = include_str!("../../../book/src/spaces.md")]
    mod spaces {}
    #[doc = include_str!("../../../book/src/extendability.md")]
    mod extendability {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

//! Bernstein–Bézier polynomials on simplices and linear functionals on them.

mod functional;
mod multi_index;
mod poly;

pub use functional::LinearFunctional;
pub use multi_index::{
    binomial, count_multi_indices, dim_pk, factorial, index_of, multi_indices, unit_index,
    MultiIndex,
};
pub use poly::{BBPoly, BBPolyJson};

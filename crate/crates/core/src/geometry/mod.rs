//! Parametric edges, multiply connected cells, Kress corner grading, and
//! boundary sampling with trapezoid quadrature.

mod cell;
mod edge;
pub mod file;
mod kress;
mod sampled;

pub use cell::{BoundaryComponent, Hole, Orientation, PuncturedCell};
pub use edge::{EdgePoint, EdgeShape, ParametricEdge};
pub use kress::{kress_tau, kress_tau_with_derivative, CornerFlags};
pub use sampled::{sample_cell_boundary, ComponentRange, SampledBoundary};

/// Kress parameter used when none is given.
pub const DEFAULT_SIGMA: f64 = 7.0;

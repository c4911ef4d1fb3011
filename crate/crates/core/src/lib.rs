//! Nyström-based evaluation of `H¹` and `L²` inner products of implicitly
//! defined local Poisson functions on curvilinear, multiply connected cells.
//!
//! A function `v` on a cell `K` is given by its boundary trace and a
//! polynomial Laplacian. [`inner_products::prepare`] splits it into a
//! polynomial particular solution and a harmonic part, recovers the harmonic
//! conjugate, logarithmic coefficients, normal derivative and an
//! anti-Laplacian of the harmonic part, all from boundary data. The inner
//! products then reduce to boundary integrals.
//!
//! ```
//! use std::sync::Arc;
//! use punctured::benchmarks::Benchmark;
//! use punctured::geometry::{sample_cell_boundary, DEFAULT_SIGMA};
//! use punctured::harmonic::CellOperators;
//! use punctured::inner_products::{h1_semi, prepare, LocalPoissonFunction};
//! use punctured::nystrom::SolverChoice;
//!
//! let cell = Benchmark::PuncturedSquare.cell::<f64>();
//! let sb = sample_cell_boundary(&cell, 32, DEFAULT_SIGMA).unwrap();
//! let ops = Arc::new(CellOperators::new(sb, SolverChoice::Lu).unwrap());
//! let (v, w) = Benchmark::PuncturedSquare.functions::<f64>();
//! let pv = prepare(&ops, &LocalPoissonFunction::new(v.trace(ops.boundary()), v.laplacian())).unwrap();
//! let pw = prepare(&ops, &LocalPoissonFunction::new(w.trace(ops.boundary()), w.laplacian())).unwrap();
//! let value = h1_semi(&pv, &pw).unwrap();
//! assert!((value - Benchmark::PuncturedSquare.references().h1).abs() < 1e-8);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod antilaplacian;
pub mod benchmarks;
mod error;
pub mod functions;
pub mod geometry;
pub mod harmonic;
pub mod inner_products;
pub mod interior;
pub mod nystrom;
pub mod oracle;
pub mod polynomials;
mod scalar;
pub mod trace_calculus;

pub use error::{Error, Result};
pub use scalar::{count, lit, Coefficient, Real};

pub type Cell = geometry::PuncturedCell<f64>;
pub type Boundary = geometry::SampledBoundary<f64>;
pub type Operators = harmonic::CellOperators<f64>;
pub type Prepared = inner_products::PreparedFunction<f64>;
pub type Polynomial = polynomials::BivariatePolynomial<f64>;
pub type Function = functions::ClosedForm<f64>;

pub type Cell32 = geometry::PuncturedCell<f32>;
pub type Boundary32 = geometry::SampledBoundary<f32>;
pub type Operators32 = harmonic::CellOperators<f32>;
pub type Prepared32 = inner_products::PreparedFunction<f32>;

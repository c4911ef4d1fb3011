#![allow(dead_code)]

use std::sync::Arc;

use punctured::geometry::{
    sample_cell_boundary, BoundaryComponent, CornerFlags, Orientation, ParametricEdge,
    PuncturedCell, SampledBoundary, DEFAULT_SIGMA,
};
use punctured::harmonic::CellOperators;
use punctured::inner_products::{prepare, LocalPoissonFunction, PreparedFunction};
use punctured::nystrom::SolverChoice;
use punctured::polynomials::BivariatePolynomial;

pub fn disc(center: [f64; 2], radius: f64) -> PuncturedCell<f64> {
    let outer = BoundaryComponent::new(
        vec![ParametricEdge::circle(center, radius).unwrap()],
        Orientation::CounterClockwise,
    )
    .unwrap();
    PuncturedCell::new("disc", outer, vec![]).unwrap()
}

pub fn ellipse(semi_axes: [f64; 2], rotation: f64) -> PuncturedCell<f64> {
    let outer = BoundaryComponent::new(
        vec![ParametricEdge::ellipse([0.0, 0.0], semi_axes, rotation).unwrap()],
        Orientation::CounterClockwise,
    )
    .unwrap();
    PuncturedCell::new("ellipse", outer, vec![]).unwrap()
}

/// `inner < |x| < 1` with the hole anchored at the origin.
pub fn annulus(inner: f64) -> PuncturedCell<f64> {
    let outer = BoundaryComponent::new(
        vec![ParametricEdge::circle([0.0, 0.0], 1.0).unwrap()],
        Orientation::CounterClockwise,
    )
    .unwrap();
    let hole = BoundaryComponent::new(
        vec![ParametricEdge::circle([0.0, 0.0], inner).unwrap()],
        Orientation::Clockwise,
    )
    .unwrap();
    PuncturedCell::new("annulus", outer, vec![(hole, Some([0.0, 0.0]))]).unwrap()
}

pub fn unit_square() -> PuncturedCell<f64> {
    let v = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let edges = (0..4)
        .map(|k| ParametricEdge::line(v[k], v[(k + 1) % 4], CornerFlags::BOTH).unwrap())
        .collect();
    let outer = BoundaryComponent::new(edges, Orientation::CounterClockwise).unwrap();
    PuncturedCell::new("square", outer, vec![]).unwrap()
}

pub fn sample(cell: &PuncturedCell<f64>, n: usize) -> SampledBoundary<f64> {
    sample_cell_boundary(cell, n, DEFAULT_SIGMA).unwrap()
}

pub fn operators(cell: &PuncturedCell<f64>, n: usize) -> Arc<CellOperators<f64>> {
    Arc::new(CellOperators::new(sample(cell, n), SolverChoice::Lu).unwrap())
}

pub fn poly(terms: &[(u32, u32, f64)]) -> BivariatePolynomial<f64> {
    BivariatePolynomial::from_terms(terms.iter().copied()).unwrap()
}

/// Prepares a polynomial function.
pub fn prepare_poly(ops: &Arc<CellOperators<f64>>, p: &BivariatePolynomial<f64>) -> PreparedFunction<f64> {
    let v = LocalPoissonFunction::new(p.trace(ops.boundary()), p.laplacian());
    prepare(ops, &v).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

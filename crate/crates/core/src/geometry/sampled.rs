use std::ops::Range;

use crate::error::{Error, Result};
use crate::scalar::{count, lit, norm, rotate_cw, sub, Real};
use crate::trace_calculus::{fft_antiderivative, fft_derivative, PeriodicSamples};

use super::cell::{polyline_winding, PuncturedCell};
use super::kress::validate_sigma;

/// Index bookkeeping for one boundary component of a sampled cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentRange {
    /// Node indices of the component.
    pub nodes: Range<usize>,
    /// Number of edges; the component parameter runs over `[0, 2π·edges)`.
    pub edges: usize,
}

/// Quadrature nodes on `∂K` with weighted tangents and normals.
///
/// Every edge contributes `2n` nodes `u_k = kπ/n`, `0 ≤ k < 2n`, in the
/// (possibly corner-graded) edge parameter. Derivatives are taken with
/// respect to that parameter, so `|x'|` vanishes at graded corners.
#[derive(Debug, Clone)]
pub struct SampledBoundary<T> {
    n: usize,
    sigma: T,
    step: T,
    points: Vec<[T; 2]>,
    derivatives: Vec<[T; 2]>,
    weighted_normals: Vec<[T; 2]>,
    speeds: Vec<T>,
    unit_tangents: Vec<[T; 2]>,
    unit_normals: Vec<[T; 2]>,
    curvatures: Vec<T>,
    components: Vec<ComponentRange>,
    edges: Vec<Range<usize>>,
    anchors: Vec<[T; 2]>,
    /// Fine polylines of the exact components, independent of `n`.
    outlines: Vec<Vec<[T; 2]>>,
    cell: PuncturedCell<T>,
}

const OUTLINE_POINTS_PER_EDGE: usize = 512;

/// Samples every edge of `cell` with `2n` nodes, applying the Kress map
/// with parameter `sigma` on edges flagged as meeting corners.
pub fn sample_cell_boundary<T: Real>(
    cell: &PuncturedCell<T>,
    n: usize,
    sigma: T,
) -> Result<SampledBoundary<T>> {
    SampledBoundary::new(cell, n, sigma)
}

impl<T: Real> SampledBoundary<T> {
    pub fn new(cell: &PuncturedCell<T>, n: usize, sigma: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "need at least 2 half-points per edge, got n = {n}"
            )));
        }
        validate_sigma(sigma)?;
        let step = T::PI() / count::<T>(n);
        let total = 2 * n * cell.num_edges();
        let mut sb = Self {
            n,
            sigma,
            step,
            points: Vec::with_capacity(total),
            derivatives: Vec::with_capacity(total),
            weighted_normals: Vec::with_capacity(total),
            speeds: Vec::with_capacity(total),
            unit_tangents: Vec::with_capacity(total),
            unit_normals: Vec::with_capacity(total),
            curvatures: Vec::with_capacity(total),
            components: Vec::new(),
            edges: Vec::new(),
            anchors: cell.holes().iter().map(|h| h.anchor).collect(),
            outlines: cell.components().map(|c| c.polyline(OUTLINE_POINTS_PER_EDGE)).collect(),
            cell: cell.clone(),
        };
        for component in cell.components() {
            let start = sb.points.len();
            for edge in component.edges() {
                let edge_start = sb.points.len();
                for k in 0..2 * n {
                    let u = step * count::<T>(k);
                    let (base, dtau) = edge.eval_graded(u, sigma);
                    let d = [base.derivative[0] * dtau, base.derivative[1] * dtau];
                    let base_speed = norm(base.derivative);
                    let tangent = [base.derivative[0] / base_speed, base.derivative[1] / base_speed];
                    let dd = base.second_derivative;
                    let curvature = (base.derivative[0] * dd[1] - base.derivative[1] * dd[0])
                        / (base_speed * base_speed * base_speed);
                    sb.points.push(base.position);
                    sb.derivatives.push(d);
                    sb.weighted_normals.push(rotate_cw(d));
                    sb.speeds.push(norm(d));
                    sb.unit_tangents.push(tangent);
                    sb.unit_normals.push(rotate_cw(tangent));
                    sb.curvatures.push(curvature);
                }
                sb.edges.push(edge_start..sb.points.len());
            }
            sb.components.push(ComponentRange {
                nodes: start..sb.points.len(),
                edges: component.edges().len(),
            });
        }
        Ok(sb)
    }

    /// Half the number of nodes per edge.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    /// Parameter step `h = π/n`.
    pub fn step(&self) -> T {
        self.step
    }

    /// Total node count `N = 2n × (number of edges)`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn cell(&self) -> &PuncturedCell<T> {
        &self.cell
    }

    pub fn points(&self) -> &[[T; 2]] {
        &self.points
    }

    /// Parameter derivatives `x'(u)` (the weighted tangents).
    pub fn derivatives(&self) -> &[[T; 2]] {
        &self.derivatives
    }

    /// Weighted outward normals `n |x'|`.
    pub fn weighted_normals(&self) -> &[[T; 2]] {
        &self.weighted_normals
    }

    /// `|x'(u)|` at every node.
    pub fn speeds(&self) -> &[T] {
        &self.speeds
    }

    pub fn unit_tangents(&self) -> &[[T; 2]] {
        &self.unit_tangents
    }

    /// Outward unit normals, the clockwise quarter turn of the tangents.
    pub fn unit_normals(&self) -> &[[T; 2]] {
        &self.unit_normals
    }

    /// Signed curvature at every node (positive where the boundary turns
    /// left in its traversal direction).
    pub fn curvatures(&self) -> &[T] {
        &self.curvatures
    }

    /// Outer component first, then the holes.
    pub fn components(&self) -> &[ComponentRange] {
        &self.components
    }

    pub fn edge_ranges(&self) -> &[Range<usize>] {
        &self.edges
    }

    pub fn num_holes(&self) -> usize {
        self.components.len() - 1
    }

    /// Hole anchor points `ξ_j`.
    pub fn anchors(&self) -> &[[T; 2]] {
        &self.anchors
    }

    /// Index of the component containing node `i`.
    pub fn component_of(&self, i: usize) -> usize {
        self.components
            .iter()
            .position(|c| c.nodes.contains(&i))
            .expect("node index in range")
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }

    /// Trapezoid rule for `∮ f ds`: `Σ f_i |x'_i| h`.
    pub fn integrate(&self, f: &[T]) -> Result<T> {
        self.check_len(f.len())?;
        Ok(f.iter().zip(&self.speeds).map(|(&a, &s)| a * s).sum::<T>() * self.step)
    }

    /// Trapezoid rule for integrands already carrying the `|x'|` weight:
    /// `Σ g_i h`.
    pub fn integrate_weighted(&self, g: &[T]) -> Result<T> {
        self.check_len(g.len())?;
        Ok(g.iter().copied().sum::<T>() * self.step)
    }

    /// `∮_{∂K_c} f ds` over one component.
    pub fn integrate_component(&self, component: usize, f: &[T]) -> Result<T> {
        self.check_len(f.len())?;
        let r = self.components[component].nodes.clone();
        Ok(r.map(|i| f[i] * self.speeds[i]).sum::<T>() * self.step)
    }

    /// `(∮ f² ds)^{1/2}`.
    pub fn l2_norm(&self, f: &[T]) -> Result<T> {
        let sq: Vec<T> = f.iter().map(|&a| a * a).collect();
        Ok(self.integrate(&sq)?.sqrt())
    }

    pub fn perimeter(&self) -> T {
        self.speeds.iter().copied().sum::<T>() * self.step
    }

    /// `|K| = ½ ∮ x·n ds`.
    pub fn area(&self) -> T {
        let total: T = self
            .points
            .iter()
            .zip(&self.weighted_normals)
            .map(|(x, nu)| x[0] * nu[0] + x[1] * nu[1])
            .sum();
        total * self.step * lit(0.5)
    }

    /// Smallest distance from `z` to a boundary node.
    pub fn min_distance_to_boundary(&self, z: [T; 2]) -> T {
        self.points
            .iter()
            .map(|&p| norm(sub(p, z)))
            .fold(T::infinity(), T::min)
    }

    /// Winding number of `∂K` about `z`: `1` inside `K`, `0` in a hole or
    /// outside. Uses a fine polyline of the exact boundary, so the answer
    /// does not depend on `n`.
    pub fn winding_number(&self, z: [T; 2]) -> i32 {
        self.outlines.iter().map(|o| polyline_winding(o, z)).sum()
    }

    pub fn contains(&self, z: [T; 2]) -> bool {
        self.winding_number(z) == 1
    }

    /// Samples of `values` on one component, with its period.
    pub fn component_samples(&self, component: usize, values: &[T]) -> Result<PeriodicSamples<T>> {
        self.check_len(values.len())?;
        let c = &self.components[component];
        PeriodicSamples::new(values[c.nodes.clone()].to_vec(), c.edges)
    }

    /// `d/du` of a boundary trace, computed spectrally on each component
    /// separately. Applied to a trace `η(x(u))` this is the weighted
    /// tangential derivative `∂η/∂t |x'|`.
    pub fn derivative(&self, values: &[T]) -> Result<Vec<T>> {
        self.per_component(values, |s| Ok(fft_derivative(s)?.into_values()))
    }

    /// Zero-mean antiderivative of `values` on each component separately,
    /// together with the largest removed mean.
    pub fn antiderivative(&self, values: &[T]) -> Result<(Vec<T>, T)> {
        let mut worst = T::zero();
        let out = self.per_component(values, |s| {
            let a = fft_antiderivative(s)?;
            worst = worst.max(a.removed_mean.abs());
            Ok(a.samples.into_values())
        })?;
        Ok((out, worst))
    }

    fn per_component(
        &self,
        values: &[T],
        mut f: impl FnMut(&PeriodicSamples<T>) -> Result<Vec<T>>,
    ) -> Result<Vec<T>> {
        self.check_len(values.len())?;
        let mut out = vec![T::zero(); self.len()];
        for (k, c) in self.components.iter().enumerate() {
            let s = self.component_samples(k, values)?;
            out[c.nodes.clone()].copy_from_slice(&f(&s)?);
        }
        Ok(out)
    }

    /// The same cell sampled with `2^levels` times as many nodes. Nodes of
    /// `self` are a subset of the result.
    pub fn refined(&self, levels: u32) -> Result<Self> {
        Self::new(&self.cell, self.n << levels, self.sigma)
    }
}

#[cfg(test)]
mod tests {
    use super::super::cell::{BoundaryComponent, Orientation};
    use super::super::edge::ParametricEdge;
    use super::super::kress::CornerFlags;
    use super::*;
    use std::f64::consts::PI;

    fn disk(r: f64) -> PuncturedCell<f64> {
        let outer = BoundaryComponent::new(
            vec![ParametricEdge::circle([0.0, 0.0], r).unwrap()],
            Orientation::CounterClockwise,
        )
        .unwrap();
        PuncturedCell::new("disk", outer, vec![]).unwrap()
    }

    fn square(hole: Option<f64>) -> PuncturedCell<f64> {
        let v = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        let edges = (0..4)
            .map(|k| ParametricEdge::line(v[k], v[(k + 1) % 4], CornerFlags::BOTH).unwrap())
            .collect();
        let outer = BoundaryComponent::new(edges, Orientation::CounterClockwise).unwrap();
        let holes = hole
            .map(|r| {
                vec![(
                    BoundaryComponent::new(
                        vec![ParametricEdge::circle([0.5, 0.5], r).unwrap()],
                        Orientation::Clockwise,
                    )
                    .unwrap(),
                    None,
                )]
            })
            .unwrap_or_default();
        PuncturedCell::new("square", outer, holes).unwrap()
    }

    #[test]
    fn node_count() {
        let sb = SampledBoundary::new(&square(Some(0.25)), 4, 7.0).unwrap();
        assert_eq!(sb.len(), 40);
        assert_eq!(sb.components().len(), 2);
        assert_eq!(sb.components()[0].edges, 4);
        assert_eq!(sb.components()[1].nodes, 32..40);
    }

    #[test]
    fn invalid_parameters() {
        assert!(matches!(
            SampledBoundary::new(&disk(1.0), 1, 7.0),
            Err(Error::InvalidParameter(_))
        ));
        assert!(SampledBoundary::new(&disk(1.0), 8, 1.0).is_err());
    }

    #[test]
    fn unit_circle_speeds_and_circumference() {
        let sb = SampledBoundary::new(&disk(1.0), 16, 7.0).unwrap();
        assert!(sb.speeds().iter().all(|&s| (s - 1.0).abs() < 1e-15));
        let ones = vec![1.0; sb.len()];
        assert!((sb.integrate(&ones).unwrap() - 2.0 * PI).abs() < 1e-13);
        assert!(sb.integrate(&ones[1..]).is_err());
    }

    #[test]
    fn normals_are_clockwise_rotations_of_tangents() {
        let sb = SampledBoundary::new(&square(Some(0.25)), 8, 7.0).unwrap();
        for (t, n) in sb.unit_tangents().iter().zip(sb.unit_normals()) {
            assert_eq!(*n, [t[1], -t[0]]);
        }
        // outward on the hole points towards its center
        let i = sb.components()[1].nodes.start;
        let x = sb.points()[i];
        let nrm = sb.unit_normals()[i];
        let to_center = [0.5 - x[0], 0.5 - x[1]];
        assert!(nrm[0] * to_center[0] + nrm[1] * to_center[1] > 0.0);
    }

    #[test]
    fn area_identity() {
        // graded corners converge algebraically, fast enough at n = 64
        let sb = SampledBoundary::new(&square(None), 64, 7.0).unwrap();
        assert!((sb.area() - 1.0).abs() < 1e-13);
        let mut last = f64::INFINITY;
        for n in [8, 16, 32, 64] {
            let sb = SampledBoundary::new(&square(Some(0.25)), n, 7.0).unwrap();
            let err = (sb.area() - (1.0 - PI / 16.0)).abs();
            assert!(err < last.max(1e-14));
            last = err;
        }
        assert!(last < 1e-13);
    }

    #[test]
    fn kress_clusters_nodes_at_corners() {
        let n = 32;
        let cluster = |sigma: Option<f64>| {
            let cell = square(None);
            let sb = match sigma {
                Some(s) => SampledBoundary::new(&cell, n, s).unwrap(),
                None => {
                    // same square, corners not flagged
                    let v = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
                    let edges = (0..4)
                        .map(|k| ParametricEdge::line(v[k], v[(k + 1) % 4], CornerFlags::NONE).unwrap())
                        .collect();
                    let outer = BoundaryComponent::new(edges, Orientation::CounterClockwise).unwrap();
                    SampledBoundary::new(&PuncturedCell::new("u", outer, vec![]).unwrap(), n, 7.0).unwrap()
                }
            };
            sb.points()
                .iter()
                .filter(|p| p[0].hypot(p[1]) < 0.05)
                .count()
        };
        let graded = cluster(Some(7.0));
        let uniform = cluster(None);
        // interior densities are within a factor 2, so compare per unit length
        let graded_density = graded as f64 / (2.0 * 0.05);
        let interior = 2.0 * n as f64 / 2.0; // mid-edge node density: τ'(π) = 2
        assert!(graded_density > 10.0 * interior, "{graded} vs {uniform}");
        assert!(graded > uniform);
    }

    #[test]
    fn perimeter_self_refinement() {
        use super::super::edge::EdgeShape;
        let bottom = ParametricEdge::new(
            EdgeShape::SinePerturbedLine {
                start: [0.0, 0.0],
                end: [1.0, 0.0],
                amplitude: 0.1,
                frequency: 3.0,
            },
            CornerFlags::BOTH,
        )
        .unwrap();
        let right = ParametricEdge::line([1.0, 0.0], [1.0, 0.8], CornerFlags::BOTH).unwrap();
        let top = ParametricEdge::new(EdgeShape::arc([0.5, 0.8], 0.5, 0.0, PI), CornerFlags::BOTH).unwrap();
        let left = ParametricEdge::line([0.0, 0.8], [0.0, 0.0], CornerFlags::BOTH).unwrap();
        let outer = BoundaryComponent::new(vec![bottom, right, top, left], Orientation::CounterClockwise).unwrap();
        let cell = PuncturedCell::new("ghost outline", outer, vec![]).unwrap();
        // arc length of the sinusoid has a narrow strip of analyticity
        let coarse = SampledBoundary::new(&cell, 128, 7.0).unwrap().perimeter();
        let fine = SampledBoundary::new(&cell, 256, 7.0).unwrap().perimeter();
        assert!((coarse - fine).abs() < 1e-10, "{coarse} vs {fine}");
    }

    #[test]
    fn min_distance_and_winding() {
        let sb = SampledBoundary::new(&disk(1.0), 16, 7.0).unwrap();
        assert!((sb.min_distance_to_boundary([0.0, 0.0]) - 1.0).abs() < 1e-15);
        let sq = SampledBoundary::new(&square(Some(0.25)), 16, 7.0).unwrap();
        assert_eq!(sq.winding_number([0.1, 0.1]), 1);
        assert_eq!(sq.winding_number([0.5, 0.5]), 0);
        assert_eq!(sq.winding_number([1.5, 0.5]), 0);
        let d = sq.min_distance_to_boundary([0.5, 0.5 + 0.25 + 1e-3]);
        assert!(d > 0.0 && d < 0.05);
    }

    #[test]
    fn refinement_nests_nodes_on_closed_contours() {
        let sb = SampledBoundary::new(&disk(1.0), 8, 7.0).unwrap();
        let fine = sb.refined(1).unwrap();
        for (k, p) in sb.points().iter().enumerate() {
            let q = fine.points()[2 * k];
            assert!((p[0] - q[0]).abs() < 1e-15 && (p[1] - q[1]).abs() < 1e-15);
        }
    }
}

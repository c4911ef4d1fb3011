use crate::error::{Error, Result};
use crate::scalar::{count, lit, norm, sub, Real};

use super::edge::{approx_eq, ParametricEdge};

/// Traversal direction of a boundary component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

/// Closed chain of edges.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryComponent<T> {
    edges: Vec<ParametricEdge<T>>,
    orientation: Orientation,
}

/// Tolerance on the gap between consecutive edge endpoints.
const CLOSURE_TOL: f64 = 1e-12;

impl<T: Real> BoundaryComponent<T> {
    /// Builds a component. Open edges must be listed in traversal order; a
    /// closed contour is flipped to match `orientation`.
    pub fn new(edges: Vec<ParametricEdge<T>>, orientation: Orientation) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::Geometry("boundary component has no edges".into()));
        }
        let closed = edges.iter().filter(|e| e.is_closed_contour()).count();
        if closed > 0 && edges.len() > 1 {
            return Err(Error::Geometry(
                "a closed contour must form a boundary component by itself".into(),
            ));
        }
        let edges = edges
            .into_iter()
            .map(|e| {
                let ccw = !e.is_reversed();
                let want_ccw = orientation == Orientation::CounterClockwise;
                if e.is_closed_contour() && ccw != want_ccw {
                    e.reversed()
                } else {
                    e
                }
            })
            .collect();
        let component = Self { edges, orientation };
        component.check_closure()?;
        component.check_corners()?;
        Ok(component)
    }

    pub fn edges(&self) -> &[ParametricEdge<T>] {
        &self.edges
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn check_closure(&self) -> Result<()> {
        let m = self.edges.len();
        for k in 0..m {
            let end = self.edges[k].end_point();
            let next = self.edges[(k + 1) % m].start_point();
            let tol = lit::<T>(CLOSURE_TOL).max(T::epsilon() * lit(64.0));
            if !approx_eq(end, next, tol) {
                return Err(Error::Geometry(format!(
                    "open chain: edge {k} ends at ({}, {}) but edge {} starts at ({}, {})",
                    end[0],
                    end[1],
                    (k + 1) % m,
                    next[0],
                    next[1]
                )));
            }
        }
        Ok(())
    }

    fn check_corners(&self) -> Result<()> {
        let m = self.edges.len();
        let two_pi = T::PI() + T::PI();
        for k in 0..m {
            let din = self.edges[k].eval(two_pi).derivative;
            let dout = self.edges[(k + 1) % m].eval(T::zero()).derivative;
            let cross = din[0] * dout[1] - din[1] * dout[0];
            let dot = din[0] * dout[0] + din[1] * dout[1];
            let turn = cross.atan2(dot);
            if turn.abs() > T::PI() - lit(1e-8) {
                return Err(Error::Geometry(format!(
                    "cusp or slit between edges {k} and {}",
                    (k + 1) % m
                )));
            }
        }
        Ok(())
    }

    /// Polyline through `per_edge` equispaced base-parameter points per edge.
    pub(crate) fn polyline(&self, per_edge: usize) -> Vec<[T; 2]> {
        let two_pi = T::PI() + T::PI();
        let mut pts = Vec::with_capacity(per_edge * self.edges.len());
        for e in &self.edges {
            for k in 0..per_edge {
                pts.push(e.eval(two_pi * count::<T>(k) / count::<T>(per_edge)).position);
            }
        }
        pts
    }
}

/// Signed area of a closed polyline.
pub(crate) fn polyline_area<T: Real>(pts: &[[T; 2]]) -> T {
    let m = pts.len();
    let mut a = T::zero();
    for k in 0..m {
        let p = pts[k];
        let q = pts[(k + 1) % m];
        a = a + p[0] * q[1] - p[1] * q[0];
    }
    a * lit(0.5)
}

/// Winding number of a closed polyline about `z`.
pub(crate) fn polyline_winding<T: Real>(pts: &[[T; 2]], z: [T; 2]) -> i32 {
    let m = pts.len();
    let mut total = T::zero();
    for k in 0..m {
        let a = sub(pts[k], z);
        let b = sub(pts[(k + 1) % m], z);
        total = total + (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]);
    }
    (total / (T::PI() + T::PI())).round().to_i32().unwrap_or(0)
}

/// A hole `K_j` of a cell with its anchor point `ξ_j ∈ K_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hole<T> {
    pub boundary: BoundaryComponent<T>,
    pub anchor: [T; 2],
}

/// A mesh cell `K = K₀ \ ∪ K̄_j`: an outer counterclockwise component and
/// `m ≥ 0` clockwise inner components.
#[derive(Debug, Clone, PartialEq)]
pub struct PuncturedCell<T> {
    name: String,
    outer: BoundaryComponent<T>,
    holes: Vec<Hole<T>>,
}

const CHECK_POINTS_PER_EDGE: usize = 128;

impl<T: Real> PuncturedCell<T> {
    /// Builds and validates a cell. A hole without an explicit anchor gets
    /// the centroid of equispaced points on its boundary.
    pub fn new(
        name: impl Into<String>,
        outer: BoundaryComponent<T>,
        holes: Vec<(BoundaryComponent<T>, Option<[T; 2]>)>,
    ) -> Result<Self> {
        if outer.orientation() != Orientation::CounterClockwise {
            return Err(Error::Geometry(
                "outer boundary must be oriented counterclockwise".into(),
            ));
        }
        let outer_poly = outer.polyline(CHECK_POINTS_PER_EDGE);
        if !(polyline_area(&outer_poly) > T::zero()) {
            return Err(Error::Geometry(
                "outer boundary edges are not traversed counterclockwise".into(),
            ));
        }
        let mut built = Vec::with_capacity(holes.len());
        let mut hole_polys = Vec::with_capacity(holes.len());
        for (j, (boundary, anchor)) in holes.into_iter().enumerate() {
            if boundary.orientation() != Orientation::Clockwise {
                return Err(Error::Geometry(format!(
                    "hole {} must be oriented clockwise",
                    j + 1
                )));
            }
            let poly = boundary.polyline(CHECK_POINTS_PER_EDGE);
            if !(polyline_area(&poly) < T::zero()) {
                return Err(Error::Geometry(format!(
                    "hole {} edges are not traversed clockwise",
                    j + 1
                )));
            }
            let anchor = anchor.unwrap_or_else(|| {
                let s = poly.iter().fold([T::zero(); 2], |acc, p| [acc[0] + p[0], acc[1] + p[1]]);
                let m = count::<T>(poly.len());
                [s[0] / m, s[1] / m]
            });
            if polyline_winding(&poly, anchor) != -1 {
                return Err(Error::Geometry(format!(
                    "anchor point ({}, {}) is not inside hole {}",
                    anchor[0],
                    anchor[1],
                    j + 1
                )));
            }
            if poly.iter().any(|&p| polyline_winding(&outer_poly, p) != 1) {
                return Err(Error::Geometry(format!(
                    "hole {} is not strictly inside the outer boundary",
                    j + 1
                )));
            }
            hole_polys.push(poly);
            built.push(Hole { boundary, anchor });
        }
        for a in 0..hole_polys.len() {
            for b in 0..hole_polys.len() {
                if a != b && hole_polys[a].iter().any(|&p| polyline_winding(&hole_polys[b], p) != 0) {
                    return Err(Error::Geometry(format!(
                        "holes {} and {} overlap",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            outer,
            holes: built,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn outer(&self) -> &BoundaryComponent<T> {
        &self.outer
    }

    pub fn holes(&self) -> &[Hole<T>] {
        &self.holes
    }

    pub fn num_holes(&self) -> usize {
        self.holes.len()
    }

    /// Outer component followed by the hole components.
    pub fn components(&self) -> impl Iterator<Item = &BoundaryComponent<T>> {
        std::iter::once(&self.outer).chain(self.holes.iter().map(|h| &h.boundary))
    }

    pub fn num_edges(&self) -> usize {
        self.components().map(|c| c.edges().len()).sum()
    }

    /// Applies `x ↦ R x + shift` to every edge and anchor, where `R` is the
    /// rotation by `angle`.
    pub fn rigid_motion(&self, angle: T, shift: [T; 2]) -> Result<Self> {
        use super::edge::EdgeShape as S;
        let (s, c) = angle.sin_cos();
        let map = |p: [T; 2]| [c * p[0] - s * p[1] + shift[0], s * p[0] + c * p[1] + shift[1]];
        let map_edge = |e: &ParametricEdge<T>| -> Result<ParametricEdge<T>> {
            let shape = match e.shape().clone() {
                S::Line { start, end } => S::Line {
                    start: map(start),
                    end: map(end),
                },
                S::CircularArc {
                    center,
                    radius,
                    start_angle,
                    end_angle,
                } => S::CircularArc {
                    center: map(center),
                    radius,
                    start_angle: start_angle + angle,
                    end_angle: end_angle + angle,
                },
                S::EllipseArc {
                    center,
                    semi_axes,
                    rotation,
                    start_angle,
                    end_angle,
                } => S::EllipseArc {
                    center: map(center),
                    semi_axes,
                    rotation: rotation + angle,
                    start_angle,
                    end_angle,
                },
                S::SinePerturbedLine {
                    start,
                    end,
                    amplitude,
                    frequency,
                } => S::SinePerturbedLine {
                    start: map(start),
                    end: map(end),
                    amplitude,
                    frequency,
                },
                // An equal-axis ellipse carries the rotation of its parameter origin.
                S::ClosedCircle { center, radius } => S::ClosedEllipse {
                    center: map(center),
                    semi_axes: [radius, radius],
                    rotation: angle,
                },
                S::ClosedEllipse {
                    center,
                    semi_axes,
                    rotation,
                } => S::ClosedEllipse {
                    center: map(center),
                    semi_axes,
                    rotation: rotation + angle,
                },
            };
            let corners = if e.is_reversed() {
                e.corners().swapped()
            } else {
                e.corners()
            };
            let moved = ParametricEdge::new(shape, corners)?;
            Ok(if e.is_reversed() { moved.reversed() } else { moved })
        };
        let map_component = |c: &BoundaryComponent<T>| -> Result<BoundaryComponent<T>> {
            let edges = c.edges().iter().map(map_edge).collect::<Result<Vec<_>>>()?;
            BoundaryComponent::new(edges, c.orientation())
        };
        let outer = map_component(&self.outer)?;
        let holes = self
            .holes
            .iter()
            .map(|h| Ok((map_component(&h.boundary)?, Some(map(h.anchor)))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.name.clone(), outer, holes)
    }

    /// Length of the polyline approximation of `∂K`, for quick sanity checks.
    pub fn approximate_perimeter(&self) -> T {
        self.components()
            .map(|c| {
                let p = c.polyline(CHECK_POINTS_PER_EDGE);
                (0..p.len())
                    .map(|k| norm(sub(p[(k + 1) % p.len()], p[k])))
                    .sum::<T>()
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::super::kress::CornerFlags;
    use super::*;

    fn square_edges() -> Vec<ParametricEdge<f64>> {
        let v = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        (0..4)
            .map(|k| ParametricEdge::line(v[k], v[(k + 1) % 4], CornerFlags::BOTH).unwrap())
            .collect()
    }

    #[test]
    fn open_chain_is_rejected() {
        let mut edges = square_edges();
        edges.pop();
        assert!(matches!(
            BoundaryComponent::new(edges, Orientation::CounterClockwise),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn slit_is_rejected() {
        let a = ParametricEdge::line([0.0, 0.0], [1.0, 0.0], CornerFlags::BOTH).unwrap();
        let b = ParametricEdge::line([1.0, 0.0], [0.0, 0.0], CornerFlags::BOTH).unwrap();
        assert!(BoundaryComponent::new(vec![a, b], Orientation::CounterClockwise).is_err());
    }

    #[test]
    fn closed_contour_follows_component_orientation() {
        let c = ParametricEdge::circle([0.0, 0.0], 1.0).unwrap();
        let comp = BoundaryComponent::new(vec![c], Orientation::Clockwise).unwrap();
        assert!(polyline_area(&comp.polyline(64)) < 0.0);
    }

    #[test]
    fn hole_validation() {
        let outer = BoundaryComponent::new(square_edges(), Orientation::CounterClockwise).unwrap();
        let hole = |c: [f64; 2], r: f64| {
            BoundaryComponent::new(
                vec![ParametricEdge::circle(c, r).unwrap()],
                Orientation::Clockwise,
            )
            .unwrap()
        };
        let cell = PuncturedCell::new("ok", outer.clone(), vec![(hole([0.5, 0.5], 0.25), None)]).unwrap();
        let xi = cell.holes()[0].anchor;
        assert!((xi[0] - 0.5).abs() < 1e-14 && (xi[1] - 0.5).abs() < 1e-14);

        assert!(PuncturedCell::new("bad anchor", outer.clone(), vec![(hole([0.5, 0.5], 0.25), Some([0.1, 0.1]))]).is_err());
        assert!(PuncturedCell::new("outside", outer.clone(), vec![(hole([0.9, 0.5], 0.25), None)]).is_err());
        assert!(PuncturedCell::new(
            "overlap",
            outer.clone(),
            vec![(hole([0.4, 0.5], 0.2), None), (hole([0.6, 0.5], 0.2), None)]
        )
        .is_err());
        let ccw_hole = BoundaryComponent::new(
            vec![ParametricEdge::circle([0.5, 0.5], 0.25).unwrap()],
            Orientation::CounterClockwise,
        )
        .unwrap();
        assert!(PuncturedCell::new("ccw hole", outer, vec![(ccw_hole, None)]).is_err());
    }

    #[test]
    fn clockwise_outer_edges_are_rejected() {
        let edges: Vec<_> = square_edges().iter().rev().map(|e| e.reversed()).collect();
        let outer = BoundaryComponent::new(edges, Orientation::CounterClockwise).unwrap();
        assert!(PuncturedCell::new("cw", outer, vec![]).is_err());
    }
}

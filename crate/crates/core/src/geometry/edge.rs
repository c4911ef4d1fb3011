use crate::error::{Error, Result};
use crate::scalar::{norm, Real};

use super::kress::{graded, CornerFlags};

/// Shape of an edge, each parameterized over `t ∈ [0, 2π]`.
#[derive(Debug, Clone, PartialEq)]
pub enum EdgeShape<T> {
    /// Segment from `start` to `end`.
    Line { start: [T; 2], end: [T; 2] },
    /// Arc of a circle; angles in radians, traversed from `start_angle` to
    /// `end_angle` (clockwise when `end_angle < start_angle`).
    CircularArc {
        center: [T; 2],
        radius: T,
        start_angle: T,
        end_angle: T,
    },
    /// Arc of an ellipse with semi-axes `(a, b)` rotated by `rotation`.
    EllipseArc {
        center: [T; 2],
        semi_axes: [T; 2],
        rotation: T,
        start_angle: T,
        end_angle: T,
    },
    /// Segment displaced along its left normal by
    /// `amplitude · sin(2π · frequency · s)`, `s ∈ [0, 1]`.
    SinePerturbedLine {
        start: [T; 2],
        end: [T; 2],
        amplitude: T,
        frequency: T,
    },
    /// Full circle, counterclockwise unless the edge is reversed.
    ClosedCircle { center: [T; 2], radius: T },
    /// Full ellipse, counterclockwise unless the edge is reversed.
    ClosedEllipse {
        center: [T; 2],
        semi_axes: [T; 2],
        rotation: T,
    },
}

/// Position, first, and second parameter derivative at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgePoint<T> {
    pub position: [T; 2],
    pub derivative: [T; 2],
    pub second_derivative: [T; 2],
}

/// One smooth edge of a cell boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct ParametricEdge<T> {
    shape: EdgeShape<T>,
    corners: CornerFlags,
    reversed: bool,
}

impl<T: Real> ParametricEdge<T> {
    pub fn new(shape: EdgeShape<T>, corners: CornerFlags) -> Result<Self> {
        let edge = Self {
            shape,
            corners,
            reversed: false,
        };
        edge.validate()?;
        if edge.is_closed_contour() && corners.any() {
            return Err(Error::Geometry(
                "closed contours cannot terminate at corners".into(),
            ));
        }
        Ok(edge)
    }

    pub fn line(start: [T; 2], end: [T; 2], corners: CornerFlags) -> Result<Self> {
        Self::new(EdgeShape::Line { start, end }, corners)
    }

    pub fn circle(center: [T; 2], radius: T) -> Result<Self> {
        Self::new(EdgeShape::ClosedCircle { center, radius }, CornerFlags::NONE)
    }

    pub fn ellipse(center: [T; 2], semi_axes: [T; 2], rotation: T) -> Result<Self> {
        Self::new(
            EdgeShape::ClosedEllipse {
                center,
                semi_axes,
                rotation,
            },
            CornerFlags::NONE,
        )
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Geometry(format!("degenerate edge: {what}")));
        match &self.shape {
            EdgeShape::Line { start, end } | EdgeShape::SinePerturbedLine { start, end, .. } => {
                if start == end {
                    return bad("segment endpoints coincide");
                }
            }
            EdgeShape::CircularArc {
                radius,
                start_angle,
                end_angle,
                ..
            } => {
                if !(*radius > T::zero()) || start_angle == end_angle {
                    return bad("arc needs positive radius and nonzero sweep");
                }
            }
            EdgeShape::EllipseArc {
                semi_axes,
                start_angle,
                end_angle,
                ..
            } => {
                if !(semi_axes[0] > T::zero() && semi_axes[1] > T::zero())
                    || start_angle == end_angle
                {
                    return bad("ellipse arc needs positive semi-axes and nonzero sweep");
                }
            }
            EdgeShape::ClosedCircle { radius, .. } => {
                if !(*radius > T::zero()) {
                    return bad("circle radius must be positive");
                }
            }
            EdgeShape::ClosedEllipse { semi_axes, .. } => {
                if !(semi_axes[0] > T::zero() && semi_axes[1] > T::zero()) {
                    return bad("ellipse semi-axes must be positive");
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &EdgeShape<T> {
        &self.shape
    }

    /// Corner flags in traversal order.
    pub fn corners(&self) -> CornerFlags {
        if self.reversed {
            self.corners.swapped()
        } else {
            self.corners
        }
    }

    pub fn is_closed_contour(&self) -> bool {
        matches!(
            self.shape,
            EdgeShape::ClosedCircle { .. } | EdgeShape::ClosedEllipse { .. }
        )
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    /// The same edge traversed backwards.
    pub fn reversed(&self) -> Self {
        Self {
            shape: self.shape.clone(),
            corners: self.corners,
            reversed: !self.reversed,
        }
    }

    /// Evaluates the strongly regular base parameterization.
    pub fn eval(&self, t: T) -> EdgePoint<T> {
        if self.reversed {
            let two_pi = T::PI() + T::PI();
            let p = self.eval_forward(two_pi - t);
            EdgePoint {
                position: p.position,
                derivative: [-p.derivative[0], -p.derivative[1]],
                second_derivative: p.second_derivative,
            }
        } else {
            self.eval_forward(t)
        }
    }

    /// Evaluates the corner-graded parameterization `x(τ(u))` and returns
    /// it together with the base point at `τ(u)` and `τ'(u)`.
    pub fn eval_graded(&self, u: T, sigma: T) -> (EdgePoint<T>, T) {
        let (tau, dtau) = graded(u, sigma, self.corners());
        (self.eval(tau), dtau)
    }

    pub fn start_point(&self) -> [T; 2] {
        self.eval(T::zero()).position
    }

    pub fn end_point(&self) -> [T; 2] {
        self.eval(T::PI() + T::PI()).position
    }

    /// Signed curvature of the base parameterization at `t`.
    pub fn curvature(&self, t: T) -> T {
        let p = self.eval(t);
        let d = p.derivative;
        let dd = p.second_derivative;
        let speed = norm(d);
        (d[0] * dd[1] - d[1] * dd[0]) / (speed * speed * speed)
    }

    fn eval_forward(&self, t: T) -> EdgePoint<T> {
        let two_pi = T::PI() + T::PI();
        let zero = [T::zero(); 2];
        match &self.shape {
            EdgeShape::Line { start, end } => {
                let s = t / two_pi;
                let d = [(end[0] - start[0]) / two_pi, (end[1] - start[1]) / two_pi];
                EdgePoint {
                    position: [start[0] + s * (end[0] - start[0]), start[1] + s * (end[1] - start[1])],
                    derivative: d,
                    second_derivative: zero,
                }
            }
            EdgeShape::CircularArc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                let rate = (*end_angle - *start_angle) / two_pi;
                let theta = *start_angle + rate * t;
                circle_point(*center, [*radius, *radius], T::zero(), theta, rate)
            }
            EdgeShape::EllipseArc {
                center,
                semi_axes,
                rotation,
                start_angle,
                end_angle,
            } => {
                let rate = (*end_angle - *start_angle) / two_pi;
                let theta = *start_angle + rate * t;
                circle_point(*center, *semi_axes, *rotation, theta, rate)
            }
            EdgeShape::SinePerturbedLine {
                start,
                end,
                amplitude,
                frequency,
            } => {
                let s = t / two_pi;
                let chord = [end[0] - start[0], end[1] - start[1]];
                let len = norm(chord);
                let normal = [-chord[1] / len, chord[0] / len];
                let (sn, cs) = (*frequency * t).sin_cos();
                let bump = *amplitude * sn;
                let dbump = *amplitude * *frequency * cs;
                let ddbump = -*amplitude * *frequency * *frequency * sn;
                EdgePoint {
                    position: [
                        start[0] + s * chord[0] + bump * normal[0],
                        start[1] + s * chord[1] + bump * normal[1],
                    ],
                    derivative: [
                        chord[0] / two_pi + dbump * normal[0],
                        chord[1] / two_pi + dbump * normal[1],
                    ],
                    second_derivative: [ddbump * normal[0], ddbump * normal[1]],
                }
            }
            EdgeShape::ClosedCircle { center, radius } => {
                circle_point(*center, [*radius, *radius], T::zero(), t, T::one())
            }
            EdgeShape::ClosedEllipse {
                center,
                semi_axes,
                rotation,
            } => circle_point(*center, *semi_axes, *rotation, t, T::one()),
        }
    }
}

/// Point on the (rotated) ellipse at angle `theta = θ0 + rate·t`.
fn circle_point<T: Real>(
    center: [T; 2],
    semi_axes: [T; 2],
    rotation: T,
    theta: T,
    rate: T,
) -> EdgePoint<T> {
    let (s, c) = theta.sin_cos();
    let (rs, rc) = rotation.sin_cos();
    let rot = |v: [T; 2]| [rc * v[0] - rs * v[1], rs * v[0] + rc * v[1]];
    let [a, b] = semi_axes;
    let p = rot([a * c, b * s]);
    let d = rot([-a * s * rate, b * c * rate]);
    let dd = rot([-a * c * rate * rate, -b * s * rate * rate]);
    EdgePoint {
        position: [center[0] + p[0], center[1] + p[1]],
        derivative: d,
        second_derivative: dd,
    }
}

impl<T: Real> EdgeShape<T> {
    /// Half-disk or sector helper: an arc on the circle of `radius` about
    /// `center` from `start_angle` to `end_angle`.
    pub fn arc(center: [T; 2], radius: T, start_angle: T, end_angle: T) -> Self {
        EdgeShape::CircularArc {
            center,
            radius,
            start_angle,
            end_angle,
        }
    }
}

pub(crate) fn approx_eq<T: Real>(a: [T; 2], b: [T; 2], tol: T) -> bool {
    norm([a[0] - b[0], a[1] - b[1]]) <= tol
}

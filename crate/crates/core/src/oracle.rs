//! Independent area quadrature over a punctured cell.
//!
//! The cell is cut into vertical strips at every vertex and every point
//! where an edge has a vertical tangent. Inside a strip each edge piece
//! crosses a vertical line at most once, so the slice `{x1 = s} ∩ K` is a
//! union of intervals found by root finding on the exact parameterizations.
//! Both the strip and the slice integrals use tanh-sinh quadrature, which
//! tolerates the square-root behaviour of slice lengths near vertical
//! tangents and the logarithmic behaviour at re-entrant corners.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::functions::ClosedForm;
use crate::geometry::{ParametricEdge, PuncturedCell};

const TWO_PI: f64 = std::f64::consts::TAU;
const SCAN_SAMPLES: usize = 2048;

/// Tanh-sinh rule on `[a, b]` with step `h`, truncated where the weights
/// underflow relative to machine precision.
fn tanh_sinh_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, h: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = std::f64::consts::FRAC_PI_2 * f(mid);
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        let weight = std::f64::consts::FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u);
        // Distance from the node to the nearer endpoint, without cancellation.
        let gap = half / (u.exp() * cosh_u);
        if weight < 1e-20 || gap <= 0.0 || gap.is_nan() {
            break;
        }
        sum += weight * (f(a + gap) + f(b - gap));
        k += 1;
    }
    sum * h * half
}

/// Tanh-sinh quadrature refined by halving the step until two levels agree.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tolerance: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let mut h = 0.5;
    let mut previous = tanh_sinh_fixed(&f, a, b, h);
    for _ in 0..7 {
        h *= 0.5;
        let current = tanh_sinh_fixed(&f, a, b, h);
        if (current - previous).abs() <= tolerance * current.abs().max(1e-300) {
            return current;
        }
        previous = current;
    }
    previous
}

/// Sub-arc of an edge on which `x1` is strictly monotone.
#[derive(Debug, Clone)]
struct MonotonePiece {
    edge: ParametricEdge<f64>,
    t0: f64,
    t1: f64,
    s0: f64,
    s1: f64,
}

impl MonotonePiece {
    fn covers(&self, s: f64) -> bool {
        let (lo, hi) = if self.s0 < self.s1 { (self.s0, self.s1) } else { (self.s1, self.s0) };
        lo < s && s < hi
    }

    fn crossing(&self, s: f64) -> f64 {
        let x1 = |t: f64| self.edge.eval(t).position[0] - s;
        let (mut lo, mut hi) = (self.t0, self.t1);
        let mut f_lo = self.s0 - s;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let f_mid = x1(mid);
            if (f_mid < 0.0) == (f_lo < 0.0) {
                lo = mid;
                f_lo = f_mid;
            } else {
                hi = mid;
            }
        }
        self.edge.eval(0.5 * (lo + hi)).position[1]
    }
}

/// Slice-based quadrature for integrals over a punctured cell.
#[derive(Debug, Clone)]
pub struct AreaOracle {
    pieces: Vec<MonotonePiece>,
    breakpoints: Vec<f64>,
    vertex_heights: Vec<f64>,
    tolerance: f64,
}

impl AreaOracle {
    pub fn new(cell: &PuncturedCell<f64>) -> Result<Self> {
        let mut pieces = Vec::new();
        let mut breakpoints = Vec::new();
        let mut vertex_heights = Vec::new();
        for component in cell.components() {
            for edge in component.edges() {
                split_monotone(edge, &mut pieces, &mut breakpoints);
                if !edge.is_closed_contour() {
                    vertex_heights.push(edge.start_point()[1]);
                }
            }
        }
        breakpoints.sort_by(f64::total_cmp);
        let span = breakpoints.last().copied().unwrap_or(0.0) - breakpoints.first().copied().unwrap_or(0.0);
        if !(span > 0.0) {
            return Err(Error::Geometry("cell has no horizontal extent".into()));
        }
        breakpoints.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * span);
        Ok(Self {
            pieces,
            breakpoints,
            vertex_heights,
            tolerance: 1e-13,
        })
    }

    /// Relative tolerance used to stop the step halving.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    /// Intervals of `{x1 = s} ∩ K`, sorted by `x2`. Intervals are further
    /// split at the heights of the vertices, where integrands with corner
    /// singularities peak on slices passing close to the corner.
    pub fn slice(&self, s: f64) -> Vec<[f64; 2]> {
        let mut ys: Vec<f64> =
            self.pieces.iter().filter(|p| p.covers(s)).map(|p| p.crossing(s)).collect();
        ys.sort_by(f64::total_cmp);
        let mut out = Vec::new();
        for c in ys.chunks_exact(2) {
            let mut lo = c[0];
            let mut cuts: Vec<f64> = self
                .vertex_heights
                .iter()
                .copied()
                .filter(|&y| c[0] < y && y < c[1])
                .collect();
            cuts.sort_by(f64::total_cmp);
            for y in cuts {
                out.push([lo, y]);
                lo = y;
            }
            out.push([lo, c[1]]);
        }
        out
    }

    /// `∫_K f`.
    pub fn integrate<F: Fn([f64; 2]) -> f64 + Sync>(&self, f: F) -> f64 {
        let tol = self.tolerance;
        self.breakpoints
            .par_windows(2)
            .map(|w| {
                tanh_sinh(
                    |s| {
                        self.slice(s)
                            .iter()
                            .map(|&[lo, hi]| tanh_sinh(|y| f([s, y]), lo, hi, tol))
                            .sum()
                    },
                    w[0],
                    w[1],
                    tol,
                )
            })
            .sum()
    }

    pub fn area(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    /// `∫_K ∇v · ∇w` for closed-form functions.
    pub fn h1_semi(&self, v: &ClosedForm<f64>, w: &ClosedForm<f64>) -> f64 {
        self.integrate(|x| {
            let (gv, gw) = (v.gradient(x), w.gradient(x));
            gv[0] * gw[0] + gv[1] * gw[1]
        })
    }

    /// `∫_K v w` for closed-form functions.
    pub fn l2(&self, v: &ClosedForm<f64>, w: &ClosedForm<f64>) -> f64 {
        self.integrate(|x| v.value(x) * w.value(x))
    }
}

fn split_monotone(
    edge: &ParametricEdge<f64>,
    pieces: &mut Vec<MonotonePiece>,
    breakpoints: &mut Vec<f64>,
) {
    let dx = |t: f64| edge.eval(t).derivative[0];
    let mut cuts = vec![0.0];
    let step = TWO_PI / SCAN_SAMPLES as f64;
    let mut prev = dx(0.0);
    for k in 1..=SCAN_SAMPLES {
        let t = k as f64 * step;
        let cur = dx(t);
        if prev != 0.0 && cur != 0.0 && (prev < 0.0) != (cur < 0.0) {
            let (mut lo, mut hi) = (t - step, t);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if (dx(mid) < 0.0) == (prev < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push(0.5 * (lo + hi));
        }
        if cur != 0.0 {
            prev = cur;
        }
    }
    cuts.push(TWO_PI);
    for w in cuts.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let s0 = edge.eval(t0).position[0];
        let s1 = edge.eval(t1).position[0];
        breakpoints.push(s0);
        breakpoints.push(s1);
        if s0 != s1 {
            pieces.push(MonotonePiece { edge: edge.clone(), t0, t1, s0, s1 });
        }
    }
}

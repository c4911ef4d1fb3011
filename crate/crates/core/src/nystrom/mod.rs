//! Nyström discretizations of the Laplace layer potentials on a sampled
//! cell boundary, and the dense solvers they feed.
//!
//! Densities come in two flavours. A plain density `f` is integrated
//! against arc length, `∮ … f ds`. A weighted density `g = f |x'|` already
//! carries the parameterization speed and is integrated against the
//! parameter, `∮ … g du`; derivatives `d/du` of traces are naturally
//! weighted.

mod linalg;

pub use linalg::{
    gmres, solve_dense, DenseMatrix, DenseSystem, FactoredMatrix, GmresOptions, GmresSolution, LuFactors,
    SolverChoice,
};

use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::scalar::{count, dot, lit, norm, sub, Real};

/// Point evaluations of the Laplace fundamental solution
/// `G(x, y) = -ln|x - y| / 2π` and its normal derivative in `y`.
#[derive(Debug, Clone, Copy, Default)]
pub struct LayerKernels;

impl LayerKernels {
    pub fn single_layer<T: Real>(x: [T; 2], y: [T; 2]) -> T {
        -norm(sub(x, y)).ln() / T::TAU()
    }

    /// `∂G(x, y)/∂n(y) = (x - y)·n / (2π |x - y|²)`.
    pub fn double_layer<T: Real>(x: [T; 2], y: [T; 2], normal: [T; 2]) -> T {
        let d = sub(x, y);
        dot(d, normal) / (T::TAU() * dot(d, d))
    }

    /// Limit of the double-layer kernel as `x → y` along a smooth curve of
    /// signed curvature `κ` (positive when turning left).
    pub fn double_layer_diagonal<T: Real>(curvature: T) -> T {
        -curvature / (lit::<T>(2.0) * T::TAU())
    }
}

/// Weighted double-layer matrix `D_ij = ∂G(x_i, x_j)/∂n(x_j) |x'_j| h`
/// with zero diagonal.
fn double_layer_offdiagonal<T: Real>(sb: &SampledBoundary<T>) -> DenseMatrix<T> {
    let h = sb.step();
    let (pts, nus) = (sb.points(), sb.weighted_normals());
    DenseMatrix::from_row_fn(sb.len(), sb.len(), |i, row| {
        for (j, r) in row.iter_mut().enumerate() {
            *r = if i == j {
                T::zero()
            } else {
                LayerKernels::double_layer(pts[i], pts[j], nus[j]) * h
            };
        }
    })
}

/// Matrix of `u ↦ ½u + ∮ (∂G/∂n(y) + 1) u(y) ds(y)` at the nodes.
///
/// The diagonal is fixed so that every row of the double-layer part sums
/// to `-½`, the exact value of `∮ ∂G(x, ·)/∂n ds` at smooth boundary
/// points. Written as `∮ ∂G/∂n (u(y) - u(x)) ds`, this is also the correct
/// limit at corner nodes, whose own column carries no weight.
pub fn build_dlp_operator<T: Real>(sb: &SampledBoundary<T>) -> DenseMatrix<T> {
    let h = sb.step();
    let weights: Vec<T> = sb.speeds().iter().map(|&s| s * h).collect();
    let mut m = double_layer_offdiagonal(sb);
    for i in 0..sb.len() {
        let row = m.row_mut(i);
        let off: T = row.iter().copied().sum();
        row[i] = -off;
        for (r, &w) in row.iter_mut().zip(&weights) {
            *r = *r + w;
        }
    }
    m
}

/// Double-layer matrix with the curvature limit on the diagonal, without
/// the jump term or the rank-one constraint. Accurate on smooth closed
/// components only.
pub fn build_double_layer_curvature<T: Real>(sb: &SampledBoundary<T>) -> DenseMatrix<T> {
    let h = sb.step();
    let mut m = double_layer_offdiagonal(sb);
    for i in 0..sb.len() {
        m[(i, i)] = LayerKernels::double_layer_diagonal(sb.curvatures()[i]) * sb.speeds()[i] * h;
    }
    m
}

/// Product weights `R_k` for `∫₀^{2π} ln(4 sin²((t - s)/2)) f(s) ds` at the
/// `2p` nodes `s_j = πj/p`, as a function of `k = |i - j|`.
fn periodic_log_weights<T: Real>(p: usize) -> Vec<T> {
    let pt = count::<T>(p);
    (0..2 * p)
        .map(|k| {
            let s: T = (1..p)
                .map(|m| (count::<T>(m * k) * T::PI() / pt).cos() / count::<T>(m))
                .sum();
            let alt = if k % 2 == 0 { T::one() } else { -T::one() };
            -(T::TAU() / pt) * s - T::PI() / (pt * pt) * alt
        })
        .collect()
}

/// Matrix of `g ↦ ∮ G(x_i, y) g(y) du` acting on weighted densities.
///
/// On each component the logarithm is split as
/// `ln|x - y| = ½ ln(4 sin²((θ - θ')/2)) + smooth`, with `θ` the component
/// parameter rescaled to `[0, 2π)`; the first part uses product weights and
/// the smooth remainder the trapezoid rule. Blocks between different
/// components use the trapezoid rule directly.
pub fn build_slp_weighted<T: Real>(sb: &SampledBoundary<T>) -> DenseMatrix<T> {
    let h = sb.step();
    let pts = sb.points();
    let speeds = sb.speeds();
    let comps = sb.components();
    let owner: Vec<usize> = (0..sb.len()).map(|i| sb.component_of(i)).collect();
    let weights: Vec<Vec<T>> = comps
        .iter()
        .map(|c| periodic_log_weights(c.nodes.len() / 2))
        .collect();
    let half = lit::<T>(0.5);
    DenseMatrix::from_row_fn(sb.len(), sb.len(), |i, row| {
        let ci = owner[i];
        let c = &comps[ci];
        let m = c.nodes.len();
        let edges = count::<T>(c.edges);
        let li = i - c.nodes.start;
        for (j, r) in row.iter_mut().enumerate() {
            if owner[j] != ci {
                *r = -norm(sub(pts[i], pts[j])).ln() * h / T::TAU();
                continue;
            }
            let lj = j - c.nodes.start;
            let k = li.abs_diff(lj);
            let smooth = if k == 0 {
                if speeds[i] > T::zero() {
                    (edges * speeds[i]).ln()
                } else {
                    T::zero()
                }
            } else {
                let dtheta = T::PI() * count::<T>(k) / count::<T>(m);
                let s = dtheta.sin();
                norm(sub(pts[i], pts[j])).ln() - half * (lit::<T>(4.0) * s * s).ln()
            };
            *r = -edges / (lit::<T>(2.0) * T::TAU()) * weights[ci][k] - h * smooth / T::TAU();
        }
    })
}

/// `∮ G(x_i, y) f(y) ds(y)` at every node for a plain density `f`.
pub fn apply_slp<T: Real>(sb: &SampledBoundary<T>, density: &[T]) -> Result<Vec<T>> {
    if density.len() != sb.len() {
        return Err(Error::LengthMismatch {
            expected: sb.len(),
            found: density.len(),
        });
    }
    let g: Vec<T> = density.iter().zip(sb.speeds()).map(|(&f, &s)| f * s).collect();
    build_slp_weighted(sb).matvec(&g)
}

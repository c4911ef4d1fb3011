//! Dirichlet-to-Neumann map for harmonic traces on punctured cells.
//!
//! A harmonic `φ` on a cell with holes `K_1 … K_m` splits as
//! `φ = ψ + Σ a_j λ_j` with `λ_j = ln|x - ξ_j|` and `ψ` owning a harmonic
//! conjugate `ψ̂`. Collocating the conjugate equation together with one
//! moment condition per hole gives a square system in `ψ̂` and the `a_j`;
//! the normal derivative of `φ` then follows from `d ψ̂/du`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::nystrom::{build_dlp_operator, build_slp_weighted, DenseMatrix, FactoredMatrix, SolverChoice};
use crate::scalar::{dot, lit, sub, Real};

/// The functions attached to each hole anchor `ξ_j`: `λ_j = ln r`,
/// `μ_j, μ̂_j` with `∇λ_j = (μ_j, -μ̂_j)`, `Λ_j = ¼ r² (ln r - 1)` and
/// `M_j = ½ (b, c)·(x - ξ_j) ln r`, where `r = |x - ξ_j|`.
#[derive(Debug, Clone)]
pub struct LogFamily<T> {
    anchors: Vec<[T; 2]>,
    traces: Vec<Vec<T>>,
    tangential: Vec<Vec<T>>,
    normal: Vec<Vec<T>>,
}

impl<T: Real> LogFamily<T> {
    pub fn new(sb: &SampledBoundary<T>) -> Self {
        let anchors = sb.anchors().to_vec();
        let mut traces = Vec::new();
        let mut tangential = Vec::new();
        let mut normal = Vec::new();
        for &xi in &anchors {
            traces.push(sb.points().iter().map(|&x| Self::log_at(xi, x)).collect());
            let grads: Vec<[T; 2]> = sb.points().iter().map(|&x| Self::log_gradient_at(xi, x)).collect();
            tangential.push(grads.iter().zip(sb.derivatives()).map(|(&g, &d)| dot(g, d)).collect());
            normal.push(grads.iter().zip(sb.weighted_normals()).map(|(&g, &nu)| dot(g, nu)).collect());
        }
        Self {
            anchors,
            traces,
            tangential,
            normal,
        }
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn anchors(&self) -> &[[T; 2]] {
        &self.anchors
    }

    /// Trace of `λ_j`.
    pub fn trace(&self, j: usize) -> &[T] {
        &self.traces[j]
    }

    /// `dλ_j/du` at the nodes.
    pub fn weighted_tangential(&self, j: usize) -> &[T] {
        &self.tangential[j]
    }

    /// `∂λ_j/∂n |x'|` at the nodes.
    pub fn weighted_normal(&self, j: usize) -> &[T] {
        &self.normal[j]
    }

    fn log_at(xi: [T; 2], x: [T; 2]) -> T {
        let d = sub(x, xi);
        lit::<T>(0.5) * dot(d, d).ln()
    }

    fn log_gradient_at(xi: [T; 2], x: [T; 2]) -> [T; 2] {
        let d = sub(x, xi);
        let r2 = dot(d, d);
        [d[0] / r2, d[1] / r2]
    }

    pub fn log(&self, j: usize, x: [T; 2]) -> T {
        Self::log_at(self.anchors[j], x)
    }

    pub fn log_gradient(&self, j: usize, x: [T; 2]) -> [T; 2] {
        Self::log_gradient_at(self.anchors[j], x)
    }

    /// `(μ_j, μ̂_j)` at `x`.
    pub fn mu(&self, j: usize, x: [T; 2]) -> (T, T) {
        let g = self.log_gradient(j, x);
        (g[0], -g[1])
    }

    /// `Λ_j(x) = ¼ r² (ln r - 1)`, so that `ΔΛ_j = λ_j`.
    pub fn big_lambda(&self, j: usize, x: [T; 2]) -> T {
        let d = sub(x, self.anchors[j]);
        let r2 = dot(d, d);
        lit::<T>(0.25) * r2 * (lit::<T>(0.5) * r2.ln() - T::one())
    }

    pub fn big_lambda_gradient(&self, j: usize, x: [T; 2]) -> [T; 2] {
        let d = sub(x, self.anchors[j]);
        let s = lit::<T>(0.25) * (dot(d, d).ln() - T::one());
        [s * d[0], s * d[1]]
    }

    /// `M_j(x; b, c)`, with `ΔM_j = b μ_j - c μ̂_j`.
    pub fn m_term(&self, j: usize, b: T, c: T, x: [T; 2]) -> T {
        let d = sub(x, self.anchors[j]);
        lit::<T>(0.5) * (b * d[0] + c * d[1]) * self.log(j, x)
    }

    pub fn m_gradient(&self, j: usize, b: T, c: T, x: [T; 2]) -> [T; 2] {
        let d = sub(x, self.anchors[j]);
        let (mu, mu_hat) = self.mu(j, x);
        let s = lit::<T>(0.5) * (b * mu - c * mu_hat);
        let l = lit::<T>(0.5) * self.log(j, x);
        [s * d[0] + l * b, s * d[1] + l * c]
    }
}

/// Operators of one sampled cell, assembled and factored once.
///
/// Holds the weighted single-layer matrix, the double-layer operator with
/// its rank-one constraint, and the augmented conjugate system. Every
/// function prepared on the cell reuses them.
#[derive(Debug)]
pub struct CellOperators<T> {
    boundary: Arc<SampledBoundary<T>>,
    logs: LogFamily<T>,
    slp: DenseMatrix<T>,
    dlp: FactoredMatrix<T>,
    augmented: Option<FactoredMatrix<T>>,
    solver: SolverChoice,
    refined: Mutex<HashMap<u32, Arc<SampledBoundary<T>>>>,
}

impl<T: Real> CellOperators<T> {
    pub fn new(boundary: SampledBoundary<T>, solver: SolverChoice) -> Result<Self> {
        Self::from_arc(Arc::new(boundary), solver)
    }

    pub fn from_arc(boundary: Arc<SampledBoundary<T>>, solver: SolverChoice) -> Result<Self> {
        let sb = &*boundary;
        let logs = LogFamily::new(sb);
        let slp = build_slp_weighted(sb);
        let dlp_matrix = build_dlp_operator(sb);
        let slp_log_tangential = (0..logs.len())
            .map(|l| slp.matvec(logs.weighted_tangential(l)))
            .collect::<Result<Vec<_>>>()?;
        let augmented = if logs.is_empty() {
            None
        } else {
            Some(FactoredMatrix::new(
                augmented_matrix(sb, &logs, &dlp_matrix, &slp_log_tangential),
                solver,
            )?)
        };
        let dlp = FactoredMatrix::new(dlp_matrix, solver)?;
        Ok(Self {
            boundary,
            logs,
            slp,
            dlp,
            augmented,
            solver,
            refined: Mutex::new(HashMap::new()),
        })
    }

    pub fn boundary(&self) -> &Arc<SampledBoundary<T>> {
        &self.boundary
    }

    pub fn logs(&self) -> &LogFamily<T> {
        &self.logs
    }

    pub fn solver(&self) -> SolverChoice {
        self.solver
    }

    /// Weighted single-layer matrix.
    pub fn slp(&self) -> &DenseMatrix<T> {
        &self.slp
    }

    /// Solves `½u + ∮ (∂G/∂n + 1) u ds = rhs`.
    pub fn solve_dlp(&self, rhs: &[T]) -> Result<Vec<T>> {
        self.dlp.solve(rhs)
    }

    /// Solves `½u + ∮ ∂G/∂n u ds = ∮ G (∂u/∂n) ds` for the mean-zero
    /// trace `u` from weighted Neumann data `(∂u/∂n)|x'|`.
    pub fn solve_neumann(&self, weighted_neumann: &[T]) -> Result<Vec<T>> {
        self.solve_dlp(&self.slp.matvec(weighted_neumann)?)
    }

    /// The boundary sampled `2^levels` times more finely, cached.
    pub fn refined_boundary(&self, levels: u32) -> Result<Arc<SampledBoundary<T>>> {
        if levels == 0 {
            return Ok(self.boundary.clone());
        }
        let mut cache = self.refined.lock().expect("refinement cache");
        if let Some(sb) = cache.get(&levels) {
            return Ok(sb.clone());
        }
        let sb = Arc::new(self.boundary.refined(levels)?);
        cache.insert(levels, sb.clone());
        Ok(sb)
    }
}

fn augmented_matrix<T: Real>(
    sb: &SampledBoundary<T>,
    logs: &LogFamily<T>,
    dlp: &DenseMatrix<T>,
    slp_log_tangential: &[Vec<T>],
) -> DenseMatrix<T> {
    let (n, m) = (sb.len(), logs.len());
    let h = sb.step();
    let scale = T::one() / sb.perimeter();
    let mut a = DenseMatrix::zeros(n + m, n + m);
    a.set_block(0, 0, dlp);
    for (l, col) in slp_log_tangential.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            a[(i, n + l)] = -v;
        }
    }
    for l in 0..m {
        let row = n + l;
        for (i, &d) in logs.weighted_tangential(l).iter().enumerate() {
            a[(row, i)] = -d * h * scale;
        }
        for j in 0..m {
            let s: T = logs
                .trace(j)
                .iter()
                .zip(logs.weighted_normal(l))
                .map(|(&lam, &dn)| lam * dn)
                .sum();
            a[(row, n + j)] = s * h * scale;
        }
    }
    a
}

/// Conjugate data of a harmonic trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateSolution<T> {
    /// Trace of `φ`.
    pub trace: Vec<T>,
    /// `dφ/du` at the nodes.
    pub weighted_tangential: Vec<T>,
    /// Trace of `ψ̂`, with `∮ ψ̂ ds = 0`.
    pub conjugate: Vec<T>,
    /// `a_1 … a_m`.
    pub log_coefficients: Vec<T>,
}

/// Everything the inner products need from a harmonic trace.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicDecomposition<T> {
    pub trace: Vec<T>,
    pub weighted_tangential: Vec<T>,
    pub conjugate: Vec<T>,
    pub log_coefficients: Vec<T>,
    /// `∂φ/∂n |x'|` at the nodes.
    pub weighted_normal_derivative: Vec<T>,
}

impl<T: Real> HarmonicDecomposition<T> {
    /// Trace of the conjugable part `ψ = φ - Σ a_j λ_j`.
    pub fn conjugable_part(&self, logs: &LogFamily<T>) -> Vec<T> {
        let mut psi = self.trace.clone();
        for (j, &a) in self.log_coefficients.iter().enumerate() {
            psi.iter_mut().zip(logs.trace(j)).for_each(|(p, &l)| *p = *p - a * l);
        }
        psi
    }

    /// `∂ψ/∂n |x'| = dψ̂/du`, the weighted normal derivative of `ψ`.
    pub fn conjugable_normal_derivative(&self, logs: &LogFamily<T>) -> Vec<T> {
        let mut out = self.weighted_normal_derivative.clone();
        for (j, &a) in self.log_coefficients.iter().enumerate() {
            out.iter_mut().zip(logs.weighted_normal(j)).for_each(|(p, &l)| *p = *p - a * l);
        }
        out
    }
}

/// Solves for `ψ̂` and the logarithmic coefficients of a harmonic trace.
pub fn solve_conjugate_augmented<T: Real>(ops: &CellOperators<T>, trace: &[T]) -> Result<ConjugateSolution<T>> {
    let sb = &*ops.boundary;
    if trace.len() != sb.len() {
        return Err(Error::LengthMismatch {
            expected: sb.len(),
            found: trace.len(),
        });
    }
    let dphi = sb.derivative(trace)?;
    let mut rhs: Vec<T> = ops.slp.matvec(&dphi)?.into_iter().map(|v| -v).collect();
    let logs = &ops.logs;
    let (conjugate, log_coefficients) = match &ops.augmented {
        None => (ops.dlp.solve(&rhs)?, Vec::new()),
        Some(aug) => {
            let (h, scale) = (sb.step(), T::one() / sb.perimeter());
            for l in 0..logs.len() {
                let s: T = trace.iter().zip(logs.weighted_normal(l)).map(|(&p, &d)| p * d).sum();
                rhs.push(s * h * scale);
            }
            let mut x = aug.solve(&rhs)?;
            let a = x.split_off(sb.len());
            (x, a)
        }
    };
    Ok(ConjugateSolution {
        trace: trace.to_vec(),
        weighted_tangential: dphi,
        conjugate,
        log_coefficients,
    })
}

/// `∂φ/∂n |x'| = dψ̂/du + Σ a_j ∂λ_j/∂n |x'|`.
pub fn dtn_weighted_normal_derivative<T: Real>(
    solution: &ConjugateSolution<T>,
    sb: &SampledBoundary<T>,
    logs: &LogFamily<T>,
) -> Result<Vec<T>> {
    let mut out = sb.derivative(&solution.conjugate)?;
    for (j, &a) in solution.log_coefficients.iter().enumerate() {
        out.iter_mut().zip(logs.weighted_normal(j)).for_each(|(p, &l)| *p = *p + a * l);
    }
    Ok(out)
}

/// Conjugate solve followed by the Dirichlet-to-Neumann map.
pub fn decompose_harmonic<T: Real>(ops: &CellOperators<T>, trace: &[T]) -> Result<HarmonicDecomposition<T>> {
    let sol = solve_conjugate_augmented(ops, trace)?;
    let wnd = dtn_weighted_normal_derivative(&sol, &ops.boundary, &ops.logs)?;
    Ok(HarmonicDecomposition {
        trace: sol.trace,
        weighted_tangential: sol.weighted_tangential,
        conjugate: sol.conjugate,
        log_coefficients: sol.log_coefficients,
        weighted_normal_derivative: wnd,
    })
}

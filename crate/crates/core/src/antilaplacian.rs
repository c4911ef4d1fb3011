//! Boundary data of an anti-Laplacian `Φ` (`ΔΦ = φ`) of a harmonic `φ`.
//!
//! With `φ = ψ + Σ a_j λ_j` and `f = ψ + iψ̂`, the residues `α_j = b_j + i c_j`
//! of `f` at the anchors are removed first. The remainder `f₀ = ψ₀ + iψ̂₀`
//! has an analytic antiderivative `ρ₀ + iρ̂₀` whose traces solve two
//! interior Neumann problems, and
//! `Φ = ¼(x₁ρ₀ + x₂ρ̂₀) + Σ M_j + Σ a_j Λ_j`.

use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::harmonic::{CellOperators, HarmonicDecomposition};
use crate::scalar::{dot, lit, Real};

/// Residue coefficients `(b_j, c_j)` of the conjugable part, one pair per
/// hole.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalPartCoefficients<T> {
    pub b: Vec<T>,
    pub c: Vec<T>,
}

impl<T: Real> RationalPartCoefficients<T> {
    pub fn zeros(m: usize) -> Self {
        Self {
            b: vec![T::zero(); m],
            c: vec![T::zero(); m],
        }
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }
}

/// `b_j = -(2π)⁻¹ ∮_{∂K_j} (ψ̂, ψ)·t ds` and `c_j = (2π)⁻¹ ∮_{∂K_j} (ψ, -ψ̂)·t ds`
/// over each (clockwise) hole boundary.
pub fn rational_coefficients<T: Real>(
    sb: &SampledBoundary<T>,
    psi: &[T],
    psi_hat: &[T],
) -> Result<RationalPartCoefficients<T>> {
    for found in [psi.len(), psi_hat.len()] {
        if found != sb.len() {
            return Err(Error::LengthMismatch {
                expected: sb.len(),
                found,
            });
        }
    }
    let h = sb.step();
    let mut out = RationalPartCoefficients::zeros(sb.num_holes());
    for (j, comp) in sb.components().iter().skip(1).enumerate() {
        let (mut sb_, mut sc) = (T::zero(), T::zero());
        for i in comp.nodes.clone() {
            let d = sb.derivatives()[i];
            sb_ = sb_ + psi_hat[i] * d[0] + psi[i] * d[1];
            sc = sc + psi[i] * d[0] - psi_hat[i] * d[1];
        }
        out.b[j] = -sb_ * h / T::TAU();
        out.c[j] = sc * h / T::TAU();
    }
    Ok(out)
}

/// How the potentials `ρ, ρ̂` are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AntiLaplacianMethod {
    /// Spectral antiderivative on a single smooth closed contour, Neumann
    /// solves otherwise.
    #[default]
    Auto,
    /// Two Neumann solves with the double-layer operator.
    Neumann,
    /// Antidifferentiation along the boundary. Only valid when the boundary
    /// is one smooth closed contour.
    Spectral,
}

/// Trace and weighted normal derivative of `Φ`, with intermediate data.
#[derive(Debug, Clone, PartialEq)]
pub struct AntiLaplacianTrace<T> {
    pub values: Vec<T>,
    /// `∂Φ/∂n |x'|` at the nodes.
    pub weighted_normal_derivative: Vec<T>,
    pub rho: Vec<T>,
    pub rho_hat: Vec<T>,
    pub rational: RationalPartCoefficients<T>,
    pub method: AntiLaplacianMethod,
    /// Largest `|∮ F₀·n ds|` of the two Neumann problems. Large values mean
    /// the conjugate data were inconsistent.
    pub neumann_flux: T,
    /// `∮_{∂K_j} F₀·t ds` for every hole, which vanishes once the residues
    /// are removed.
    pub circulations: Vec<T>,
}

fn smooth_single_contour<T: Real>(sb: &SampledBoundary<T>) -> bool {
    let cell = sb.cell();
    cell.num_holes() == 0 && cell.outer().edges().len() == 1 && cell.outer().edges()[0].is_closed_contour()
}

/// Steps two to five of the construction, after the harmonic
/// decomposition.
pub fn anti_laplacian_harmonic<T: Real>(
    ops: &CellOperators<T>,
    hd: &HarmonicDecomposition<T>,
    method: AntiLaplacianMethod,
) -> Result<AntiLaplacianTrace<T>> {
    let sb = &**ops.boundary();
    let logs = ops.logs();
    let m = logs.len();
    let spectral = match method {
        AntiLaplacianMethod::Auto => smooth_single_contour(sb),
        AntiLaplacianMethod::Neumann => false,
        AntiLaplacianMethod::Spectral => {
            if !smooth_single_contour(sb) {
                return Err(Error::InvalidParameter(
                    "spectral antidifferentiation needs a single smooth closed boundary".into(),
                ));
            }
            true
        }
    };
    let psi = hd.conjugable_part(logs);
    let psi_hat = &hd.conjugate;
    let rational = if m == 0 {
        RationalPartCoefficients::zeros(0)
    } else {
        rational_coefficients(sb, &psi, psi_hat)?
    };

    // ψ₀ and ψ̂₀
    let mut psi0 = psi.clone();
    let mut psi0_hat = psi_hat.clone();
    for j in 0..m {
        let (b, c) = (rational.b[j], rational.c[j]);
        for (i, &x) in sb.points().iter().enumerate() {
            let (mu, mu_hat) = logs.mu(j, x);
            psi0[i] = psi0[i] - (b * mu - c * mu_hat);
            psi0_hat[i] = psi0_hat[i] - (c * mu + b * mu_hat);
        }
    }

    // F₀ = ∇ρ₀ = (ψ₀, -ψ̂₀), F̂₀ = ∇ρ̂₀ = (ψ̂₀, ψ₀)
    let f0 = |i: usize| [psi0[i], -psi0_hat[i]];
    let f0_hat = |i: usize| [psi0_hat[i], psi0[i]];
    let neumann: Vec<T> = (0..sb.len()).map(|i| dot(f0(i), sb.weighted_normals()[i])).collect();
    let neumann_hat: Vec<T> = (0..sb.len()).map(|i| dot(f0_hat(i), sb.weighted_normals()[i])).collect();
    let neumann_flux = sb
        .integrate_weighted(&neumann)?
        .abs()
        .max(sb.integrate_weighted(&neumann_hat)?.abs());
    let circulations = sb
        .components()
        .iter()
        .skip(1)
        .map(|c| {
            c.nodes
                .clone()
                .map(|i| dot(f0(i), sb.derivatives()[i]))
                .sum::<T>()
                * sb.step()
        })
        .collect();

    let (rho, rho_hat) = if spectral {
        let tang: Vec<T> = (0..sb.len()).map(|i| dot(f0(i), sb.derivatives()[i])).collect();
        let tang_hat: Vec<T> = (0..sb.len()).map(|i| dot(f0_hat(i), sb.derivatives()[i])).collect();
        (sb.antiderivative(&tang)?.0, sb.antiderivative(&tang_hat)?.0)
    } else {
        (ops.solve_neumann(&neumann)?, ops.solve_neumann(&neumann_hat)?)
    };

    let quarter = lit::<T>(0.25);
    let mut values = Vec::with_capacity(sb.len());
    let mut wnd = Vec::with_capacity(sb.len());
    for (i, &x) in sb.points().iter().enumerate() {
        let mut phi = quarter * (x[0] * rho[i] + x[1] * rho_hat[i]);
        let (p, q) = (psi0[i], psi0_hat[i]);
        let mut grad = [
            quarter * (rho[i] + x[0] * p + x[1] * q),
            quarter * (rho_hat[i] + x[1] * p - x[0] * q),
        ];
        for j in 0..m {
            let (b, c, a) = (rational.b[j], rational.c[j], hd.log_coefficients[j]);
            phi = phi + logs.m_term(j, b, c, x) + a * logs.big_lambda(j, x);
            let gm = logs.m_gradient(j, b, c, x);
            let gl = logs.big_lambda_gradient(j, x);
            grad = [grad[0] + gm[0] + a * gl[0], grad[1] + gm[1] + a * gl[1]];
        }
        values.push(phi);
        wnd.push(dot(grad, sb.weighted_normals()[i]));
    }

    Ok(AntiLaplacianTrace {
        values,
        weighted_normal_derivative: wnd,
        rho,
        rho_hat,
        rational,
        method: if spectral {
            AntiLaplacianMethod::Spectral
        } else {
            AntiLaplacianMethod::Neumann
        },
        neumann_flux,
        circulations,
    })
}

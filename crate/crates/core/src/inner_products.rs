//! `H¹` semi-inner products and `L²` inner products of local Poisson
//! functions, computed from boundary data only.
//!
//! Each function `v` is split as `v = φ + P` with `P` a polynomial
//! anti-Laplacian of `Δv` and `φ` harmonic. [`prepare`] computes, once per
//! function, the normal derivative of `φ` and the boundary data of an
//! anti-Laplacian `Φ` of `φ`; the products of any two prepared functions on
//! the same cell are then boundary sums.

use std::sync::Arc;

use crate::antilaplacian::{anti_laplacian_harmonic, AntiLaplacianMethod, AntiLaplacianTrace};
use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::harmonic::{decompose_harmonic, CellOperators, HarmonicDecomposition};
use crate::polynomials::BivariatePolynomial;
use crate::scalar::{lit, Real};
use crate::trace_calculus::trig_interpolate;

/// A function in the local Poisson space: its Dirichlet trace at the
/// boundary nodes and its polynomial Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalPoissonFunction<T> {
    pub trace: Vec<T>,
    pub laplacian: BivariatePolynomial<T>,
}

impl<T: Real> LocalPoissonFunction<T> {
    pub fn new(trace: Vec<T>, laplacian: BivariatePolynomial<T>) -> Self {
        Self { trace, laplacian }
    }

    /// Samples `f` at the boundary nodes.
    pub fn from_fn(sb: &SampledBoundary<T>, f: impl Fn([T; 2]) -> T, laplacian: BivariatePolynomial<T>) -> Self {
        Self::new(sb.points().iter().map(|&x| f(x)).collect(), laplacian)
    }
}

/// Options for [`prepare_with`].
#[derive(Debug, Clone, Default)]
pub struct PrepareOptions<T> {
    /// Polynomial part to use instead of the generated anti-Laplacian of
    /// `Δv`. Its Laplacian must equal `Δv`.
    pub polynomial: Option<BivariatePolynomial<T>>,
    pub method: AntiLaplacianMethod,
}

/// Boundary data of one function, ready for pairing.
#[derive(Debug, Clone)]
pub struct PreparedFunction<T> {
    ops: Arc<CellOperators<T>>,
    /// Trace of `v`.
    pub trace: Vec<T>,
    /// The polynomial part `P`.
    pub polynomial: BivariatePolynomial<T>,
    /// Anti-Laplacian of `P`, used by the `L²` cross terms.
    pub polynomial_anti_laplacian: BivariatePolynomial<T>,
    /// Decomposition of the harmonic part `φ = v - P`.
    pub harmonic: HarmonicDecomposition<T>,
    /// Boundary data of `Φ` with `ΔΦ = φ`.
    pub anti_laplacian: AntiLaplacianTrace<T>,
}

impl<T: Real> PreparedFunction<T> {
    pub fn operators(&self) -> &Arc<CellOperators<T>> {
        &self.ops
    }

    pub fn boundary(&self) -> &SampledBoundary<T> {
        self.ops.boundary()
    }

    /// Trace of `φ = v - P`.
    pub fn harmonic_trace(&self) -> &[T] {
        &self.harmonic.trace
    }

    /// Logarithmic coefficients of `φ`.
    pub fn log_coefficients(&self) -> &[T] {
        &self.harmonic.log_coefficients
    }
}

/// Prepares `v` with the generated polynomial part.
pub fn prepare<T: Real>(ops: &Arc<CellOperators<T>>, v: &LocalPoissonFunction<T>) -> Result<PreparedFunction<T>> {
    prepare_with(ops, v, &PrepareOptions::default())
}

pub fn prepare_with<T: Real>(
    ops: &Arc<CellOperators<T>>,
    v: &LocalPoissonFunction<T>,
    options: &PrepareOptions<T>,
) -> Result<PreparedFunction<T>> {
    let sb = ops.boundary();
    if v.trace.len() != sb.len() {
        return Err(Error::LengthMismatch {
            expected: sb.len(),
            found: v.trace.len(),
        });
    }
    let polynomial = match &options.polynomial {
        None => v.laplacian.anti_laplacian()?,
        Some(p) => {
            let mismatch = p.laplacian().sub(&v.laplacian);
            if mismatch.terms().any(|(_, c)| c.abs() > lit(1e-12)) {
                return Err(Error::InvalidParameter(
                    "the supplied polynomial part does not have the function's Laplacian".into(),
                ));
            }
            p.clone()
        }
    };
    let p_trace = polynomial.trace(sb);
    let phi: Vec<T> = v.trace.iter().zip(&p_trace).map(|(&a, &b)| a - b).collect();
    let harmonic = decompose_harmonic(ops, &phi)?;
    let anti_laplacian = anti_laplacian_harmonic(ops, &harmonic, options.method)?;
    Ok(PreparedFunction {
        ops: ops.clone(),
        trace: v.trace.clone(),
        polynomial_anti_laplacian: polynomial.anti_laplacian()?,
        polynomial,
        harmonic,
        anti_laplacian,
    })
}

/// Options for the products.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct InnerProductOptions {
    /// Trigonometric interpolation of all boundary data onto `2^refinement`
    /// times as many nodes before summation.
    pub refinement: u32,
}

/// Boundary sums on the original or a refined node set.
struct Pairing<'a, T> {
    ops: &'a CellOperators<T>,
    fine: Arc<SampledBoundary<T>>,
    levels: u32,
}

impl<'a, T: Real> Pairing<'a, T> {
    fn new(ops: &'a CellOperators<T>, levels: u32) -> Result<Self> {
        Ok(Self {
            ops,
            fine: ops.refined_boundary(levels)?,
            levels,
        })
    }

    /// Node data carried over to the fine node set.
    fn lift(&self, values: &[T]) -> Result<Vec<T>> {
        if self.levels == 0 {
            return Ok(values.to_vec());
        }
        let sb = self.ops.boundary();
        let mut out = Vec::with_capacity(self.fine.len());
        for k in 0..sb.components().len() {
            let s = sb.component_samples(k, values)?;
            out.extend(trig_interpolate(&s, self.levels)?.into_values());
        }
        Ok(out)
    }

    fn poly_trace(&self, p: &BivariatePolynomial<T>) -> Vec<T> {
        p.trace(&self.fine)
    }

    fn poly_wnd(&self, p: &BivariatePolynomial<T>) -> Vec<T> {
        p.weighted_normal_derivative(&self.fine)
    }

    fn sum(&self, a: &[T], b: &[T]) -> T {
        a.iter().zip(b).map(|(&x, &y)| x * y).sum::<T>() * self.fine.step()
    }

    /// `∮ (a ∂b/∂n - c ∂d/∂n) ds` from traces and weighted normal
    /// derivatives.
    fn green(&self, a: &[T], wnd_b: &[T], c: &[T], wnd_d: &[T]) -> T {
        self.sum(a, wnd_b) - self.sum(c, wnd_d)
    }

    fn volume(&self, p: &BivariatePolynomial<T>) -> T {
        p.integrate_over_cell(&self.fine)
    }
}

fn check_same_cell<T>(v: &PreparedFunction<T>, w: &PreparedFunction<T>) -> Result<()> {
    if Arc::ptr_eq(&v.ops, &w.ops) {
        Ok(())
    } else {
        Err(Error::CellMismatch)
    }
}

/// `∫_K ∇v·∇w dx`.
pub fn h1_semi<T: Real>(v: &PreparedFunction<T>, w: &PreparedFunction<T>) -> Result<T> {
    h1_semi_with(v, w, InnerProductOptions::default())
}

/// `∫_K v w dx`.
pub fn l2<T: Real>(v: &PreparedFunction<T>, w: &PreparedFunction<T>) -> Result<T> {
    l2_with(v, w, InnerProductOptions::default())
}

/// `∮ w ∂φ/∂n ds + ∮ P ∂ψ/∂n ds + ∫_K ∇P·∇Q dx` with `v = φ + P`,
/// `w = ψ + Q`.
pub fn h1_semi_with<T: Real>(v: &PreparedFunction<T>, w: &PreparedFunction<T>, options: InnerProductOptions) -> Result<T> {
    check_same_cell(v, w)?;
    let pr = Pairing::new(&v.ops, options.refinement)?;
    let boundary_v = pr.sum(&pr.lift(&w.trace)?, &pr.lift(&v.harmonic.weighted_normal_derivative)?);
    let boundary_p = pr.sum(
        &pr.poly_trace(&v.polynomial),
        &pr.lift(&w.harmonic.weighted_normal_derivative)?,
    );
    let volume = pr.volume(&v.polynomial.grad_dot(&w.polynomial)?);
    Ok(boundary_v + boundary_p + volume)
}

/// `∫φψ + ∫φQ + ∫Pψ + ∫PQ`, the first three by Green's second identity
/// with `Φ` and the polynomial anti-Laplacians of `Q` and `P`.
pub fn l2_with<T: Real>(v: &PreparedFunction<T>, w: &PreparedFunction<T>, options: InnerProductOptions) -> Result<T> {
    check_same_cell(v, w)?;
    let pr = Pairing::new(&v.ops, options.refinement)?;
    let psi = pr.lift(&w.harmonic.trace)?;
    let wnd_psi = pr.lift(&w.harmonic.weighted_normal_derivative)?;
    let phi = pr.lift(&v.harmonic.trace)?;
    let wnd_phi = pr.lift(&v.harmonic.weighted_normal_derivative)?;

    let big_phi = pr.lift(&v.anti_laplacian.values)?;
    let wnd_big_phi = pr.lift(&v.anti_laplacian.weighted_normal_derivative)?;
    let harmonic_pair = pr.green(&psi, &wnd_big_phi, &big_phi, &wnd_psi);

    let rq = &w.polynomial_anti_laplacian;
    let phi_q = pr.green(&phi, &pr.poly_wnd(rq), &pr.poly_trace(rq), &wnd_phi);

    let rp = &v.polynomial_anti_laplacian;
    let p_psi = pr.green(&psi, &pr.poly_wnd(rp), &pr.poly_trace(rp), &wnd_psi);

    let volume = pr.volume(&v.polynomial.mul(&w.polynomial)?);
    Ok(harmonic_pair + phi_q + p_psi + volume)
}

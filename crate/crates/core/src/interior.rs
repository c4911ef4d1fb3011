//! Interior values of a prepared function from its boundary data.
//!
//! The conjugable part `ψ` of `φ = v - P` is the real part of the analytic
//! `f = ψ + iψ̂`, so Cauchy's formula over the oriented boundary gives
//! `f(z)` and `f'(z) = ∂ψ/∂x₁ - i ∂ψ/∂x₂`. The polynomial and logarithmic
//! parts are added in closed form.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::inner_products::PreparedFunction;
use crate::scalar::{lit, Real};
use crate::trace_calculus::trig_interpolate;

/// Default exclusion distance from the boundary nodes.
pub const DEFAULT_EPSILON: f64 = 0.02;

/// Default trigonometric refinement of the Cauchy sums. Without it the
/// trapezoid rule loses accuracy once `ε` drops below the node spacing.
pub const DEFAULT_REFINEMENT: u32 = 3;

/// Points at which to evaluate a prepared function.
#[derive(Debug, Clone)]
pub struct InteriorQuery<'a, T> {
    pub function: &'a PreparedFunction<T>,
    pub points: Vec<[T; 2]>,
    /// Points closer than this to a boundary node are skipped.
    pub epsilon: T,
    /// Trigonometric refinement of the boundary data before quadrature.
    pub refinement: u32,
}

impl<'a, T: Real> InteriorQuery<'a, T> {
    pub fn new(function: &'a PreparedFunction<T>, points: Vec<[T; 2]>) -> Self {
        Self {
            function,
            points,
            epsilon: lit(DEFAULT_EPSILON),
            refinement: DEFAULT_REFINEMENT,
        }
    }
}

/// Classification of a query point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointStatus {
    Evaluated,
    /// Inside the cell but within the exclusion distance of the boundary.
    Skipped,
    /// In a hole or outside the outer boundary.
    OutsideDomain,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InteriorValue<T> {
    pub point: [T; 2],
    pub status: PointStatus,
    /// `v` and `∇v`, present for evaluated points.
    pub value: Option<T>,
    pub gradient: Option<[T; 2]>,
}

impl<T: Real> InteriorValue<T> {
    pub fn in_domain(&self) -> bool {
        self.status != PointStatus::OutsideDomain
    }

    pub fn skipped(&self) -> bool {
        self.status == PointStatus::Skipped
    }
}

/// Evaluates `v` and `∇v` at every query point.
pub fn cauchy_eval<T: Real>(q: &InteriorQuery<'_, T>) -> Result<Vec<InteriorValue<T>>> {
    let prepared = q.function;
    let ops = prepared.operators();
    let sb = ops.boundary();
    let logs = ops.logs();
    let psi = prepared.harmonic.conjugable_part(logs);
    let psi_hat = &prepared.harmonic.conjugate;

    let fine = ops.refined_boundary(q.refinement)?;
    let lift = |values: &[T]| -> Result<Vec<T>> {
        if q.refinement == 0 {
            return Ok(values.to_vec());
        }
        let mut out = Vec::with_capacity(fine.len());
        for k in 0..sb.components().len() {
            out.extend(trig_interpolate(&sb.component_samples(k, values)?, q.refinement)?.into_values());
        }
        Ok(out)
    };
    let (re, im) = (lift(&psi)?, lift(psi_hat)?);
    let h = fine.step();
    // f_j ζ'_j h / 2πi, and ζ_j
    let nodes: Vec<(Complex<T>, Complex<T>)> = fine
        .points()
        .iter()
        .zip(fine.derivatives())
        .enumerate()
        .map(|(j, (p, d))| {
            let weight = Complex::new(d[0], d[1]) * h / Complex::new(T::zero(), T::TAU());
            (Complex::new(p[0], p[1]), Complex::new(re[j], im[j]) * weight)
        })
        .collect();

    let coefficients = prepared.log_coefficients();
    let polynomial = &prepared.polynomial;
    Ok(q
        .points
        .par_iter()
        .map(|&z| {
            if !sb.contains(z) {
                return InteriorValue {
                    point: z,
                    status: PointStatus::OutsideDomain,
                    value: None,
                    gradient: None,
                };
            }
            if sb.min_distance_to_boundary(z) < q.epsilon {
                return InteriorValue {
                    point: z,
                    status: PointStatus::Skipped,
                    value: None,
                    gradient: None,
                };
            }
            let zc = Complex::new(z[0], z[1]);
            let zero = Complex::new(T::zero(), T::zero());
            let (f, df) = nodes.iter().fold((zero, zero), |(f, df), &(zeta, w)| {
                let inv = T::one() / (zeta - zc).norm_sqr();
                let r = (zeta - zc).conj() * inv;
                (f + w * r, df + w * r * r)
            });
            let mut value = f.re + polynomial.eval(z);
            let gp = polynomial.eval_gradient(z);
            let mut gradient = [df.re + gp[0], -df.im + gp[1]];
            for (j, &a) in coefficients.iter().enumerate() {
                value = value + a * logs.log(j, z);
                let g = logs.log_gradient(j, z);
                gradient = [gradient[0] + a * g[0], gradient[1] + a * g[1]];
            }
            InteriorValue {
                point: z,
                status: PointStatus::Evaluated,
                value: Some(value),
                gradient: Some(gradient),
            }
        })
        .collect())
}

/// `resolution × resolution` cell-centred grid over the bounding box of the
/// boundary nodes.
pub fn bounding_box_grid<T: Real>(points: &[[T; 2]], resolution: usize) -> Result<Vec<[T; 2]>> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("interior grid resolution must be positive".into()));
    }
    let (mut lo, mut hi) = ([T::infinity(); 2], [T::neg_infinity(); 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    let r = T::from_usize(resolution).expect("grid size");
    let mut grid = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        for j in 0..resolution {
            let t = |k: usize, idx: usize| {
                lo[k] + (T::from_usize(idx).expect("index") + lit(0.5)) * (hi[k] - lo[k]) / r
            };
            grid.push([t(0, j), t(1, i)]);
        }
    }
    Ok(grid)
}

/// Writes `x1,x2,v,dv_dx1,dv_dx2,skipped,in_domain` rows; unevaluated
/// values are left empty.
pub fn write_csv<T: Real>(values: &[InteriorValue<T>], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "x1,x2,v,dv_dx1,dv_dx2,skipped,in_domain")?;
    let sci = |x: T| format!("{:.15e}", crate::scalar::to_f64(x));
    for v in values {
        let (val, g1, g2) = match (v.value, v.gradient) {
            (Some(val), Some(g)) => (sci(val), sci(g[0]), sci(g[1])),
            _ => (String::new(), String::new(), String::new()),
        };
        writeln!(
            out,
            "{},{},{val},{g1},{g2},{},{}",
            sci(v.point[0]),
            sci(v.point[1]),
            u8::from(v.skipped()),
            u8::from(v.in_domain())
        )?;
    }
    Ok(())
}

//! A small vocabulary of closed-form functions for traces and checks:
//! polynomials, `e^{x₁} cos x₂`, `e^{x₁} sin x₂`, `ln|x - c|`,
//! `(x_k - c_k)/|x - c|²` and `r^α sin(αθ)` about a vertex.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::polynomials::{BivariatePolynomial, PolynomialLiteral};
use crate::scalar::{dot, lit, sub, Real};

/// One term of a [`ClosedForm`].
#[derive(Debug, Clone, PartialEq)]
pub enum Term<T> {
    Polynomial(BivariatePolynomial<T>),
    /// `s e^{x₁} cos x₂`
    ExpCos { scale: T },
    /// `s e^{x₁} sin x₂`
    ExpSin { scale: T },
    /// `s ln|x - c|`
    Log { center: [T; 2], scale: T },
    /// `s (x_k - c_k) / |x - c|²`, `component` being `k - 1`.
    Rational { center: [T; 2], component: usize, scale: T },
    /// `s r^α sin(αθ)` in polar coordinates about `vertex`, with
    /// `θ ∈ [0, 2π)` measured counterclockwise from the direction `branch`.
    CornerPower { vertex: [T; 2], alpha: T, branch: T, scale: T },
}

impl<T: Real> Term<T> {
    pub fn value(&self, x: [T; 2]) -> T {
        match self {
            Term::Polynomial(p) => p.eval(x),
            Term::ExpCos { scale } => *scale * x[0].exp() * x[1].cos(),
            Term::ExpSin { scale } => *scale * x[0].exp() * x[1].sin(),
            Term::Log { center, scale } => {
                let d = sub(x, *center);
                *scale * lit::<T>(0.5) * dot(d, d).ln()
            }
            Term::Rational {
                center,
                component,
                scale,
            } => {
                let d = sub(x, *center);
                *scale * d[*component] / dot(d, d)
            }
            Term::CornerPower {
                vertex,
                alpha,
                branch,
                scale,
            } => {
                let (r, theta) = polar(x, *vertex, *branch);
                *scale * r.powf(*alpha) * (*alpha * theta).sin()
            }
        }
    }

    pub fn gradient(&self, x: [T; 2]) -> [T; 2] {
        match self {
            Term::Polynomial(p) => p.eval_gradient(x),
            Term::ExpCos { scale } => {
                let e = *scale * x[0].exp();
                [e * x[1].cos(), -e * x[1].sin()]
            }
            Term::ExpSin { scale } => {
                let e = *scale * x[0].exp();
                [e * x[1].sin(), e * x[1].cos()]
            }
            Term::Log { center, scale } => {
                let d = sub(x, *center);
                let r2 = dot(d, d);
                [*scale * d[0] / r2, *scale * d[1] / r2]
            }
            Term::Rational {
                center,
                component,
                scale,
            } => {
                let d = sub(x, *center);
                let r2 = dot(d, d);
                let r4 = r2 * r2;
                let two = lit::<T>(2.0);
                if *component == 0 {
                    [*scale * (d[1] * d[1] - d[0] * d[0]) / r4, -*scale * two * d[0] * d[1] / r4]
                } else {
                    [-*scale * two * d[0] * d[1] / r4, *scale * (d[0] * d[0] - d[1] * d[1]) / r4]
                }
            }
            Term::CornerPower {
                vertex,
                alpha,
                branch,
                scale,
            } => {
                // ∇ Im F = (Im F', Re F') for F = z^α in the rotated frame
                let (r, theta) = polar(x, *vertex, *branch);
                let a = *alpha;
                let mag = *scale * a * r.powf(a - T::one());
                let phase = (a - T::one()) * theta;
                let local = [mag * phase.sin(), mag * phase.cos()];
                let (s, c) = branch.sin_cos();
                [c * local[0] - s * local[1], s * local[0] + c * local[1]]
            }
        }
    }

    pub fn is_harmonic(&self) -> bool {
        match self {
            Term::Polynomial(p) => p.laplacian().is_zero(),
            _ => true,
        }
    }
}

fn polar<T: Real>(x: [T; 2], vertex: [T; 2], branch: T) -> (T, T) {
    let d = sub(x, vertex);
    let (s, c) = branch.sin_cos();
    let local = [c * d[0] + s * d[1], -s * d[0] + c * d[1]];
    let mut theta = local[1].atan2(local[0]);
    if theta < T::zero() {
        theta = theta + T::TAU();
    }
    (local[0].hypot(local[1]), theta)
}

/// A sum of [`Term`]s.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClosedForm<T> {
    pub terms: Vec<Term<T>>,
}

impl<T: Real> ClosedForm<T> {
    pub fn new(terms: Vec<Term<T>>) -> Self {
        Self { terms }
    }

    pub fn value(&self, x: [T; 2]) -> T {
        self.terms.iter().map(|t| t.value(x)).sum()
    }

    pub fn gradient(&self, x: [T; 2]) -> [T; 2] {
        self.terms.iter().fold([T::zero(); 2], |acc, t| {
            let g = t.gradient(x);
            [acc[0] + g[0], acc[1] + g[1]]
        })
    }

    /// The Laplacian, a polynomial since every other term is harmonic.
    pub fn laplacian(&self) -> BivariatePolynomial<T> {
        self.terms.iter().fold(BivariatePolynomial::zero(), |acc, t| match t {
            Term::Polynomial(p) => acc.add(&p.laplacian()),
            _ => acc,
        })
    }

    pub fn trace(&self, sb: &SampledBoundary<T>) -> Vec<T> {
        sb.points().iter().map(|&x| self.value(x)).collect()
    }

    /// `∇f · n |x'|` at the nodes.
    pub fn weighted_normal_derivative(&self, sb: &SampledBoundary<T>) -> Vec<T> {
        sb.points()
            .iter()
            .zip(sb.weighted_normals())
            .map(|(&x, &nu)| dot(self.gradient(x), nu))
            .collect()
    }
}

fn one() -> f64 {
    1.0
}

fn is_one(s: &f64) -> bool {
    *s == 1.0
}

/// Serialized form of a [`Term`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TermRecord {
    Poly {
        terms: PolynomialLiteral,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    ExpCos {
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    ExpSin {
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    Log {
        center: [f64; 2],
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    Rational {
        center: [f64; 2],
        /// 1 or 2.
        component: u8,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
    CornerPower {
        vertex: [f64; 2],
        alpha: f64,
        #[serde(default)]
        branch: f64,
        #[serde(default = "one", skip_serializing_if = "is_one")]
        scale: f64,
    },
}

fn pt<T: Real>(p: [f64; 2]) -> [T; 2] {
    [lit(p[0]), lit(p[1])]
}

impl TermRecord {
    pub fn to_term<T: Real>(&self) -> Result<Term<T>> {
        Ok(match self {
            TermRecord::Poly { terms, scale } => Term::Polynomial(terms.to_polynomial::<T>()?.scale(lit(*scale))),
            TermRecord::ExpCos { scale } => Term::ExpCos { scale: lit(*scale) },
            TermRecord::ExpSin { scale } => Term::ExpSin { scale: lit(*scale) },
            TermRecord::Log { center, scale } => Term::Log {
                center: pt(*center),
                scale: lit(*scale),
            },
            TermRecord::Rational {
                center,
                component,
                scale,
            } => {
                if !matches!(component, 1 | 2) {
                    return Err(Error::Parse(format!(
                        "rational term: component must be 1 or 2, got {component}"
                    )));
                }
                Term::Rational {
                    center: pt(*center),
                    component: usize::from(*component - 1),
                    scale: lit(*scale),
                }
            }
            TermRecord::CornerPower {
                vertex,
                alpha,
                branch,
                scale,
            } => {
                if !(*alpha > 0.0) {
                    return Err(Error::Parse(format!("corner_power term: alpha must be positive, got {alpha}")));
                }
                Term::CornerPower {
                    vertex: pt(*vertex),
                    alpha: lit(*alpha),
                    branch: lit(*branch),
                    scale: lit(*scale),
                }
            }
        })
    }
}

/// A local Poisson function given by a closed-form trace and, optionally,
/// an explicit Laplacian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionRecord {
    pub trace: Vec<TermRecord>,
    /// Defaults to the Laplacian of the closed form.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laplacian: Option<PolynomialLiteral>,
}

impl FunctionRecord {
    pub fn closed_form<T: Real>(&self) -> Result<ClosedForm<T>> {
        Ok(ClosedForm::new(
            self.trace.iter().map(TermRecord::to_term).collect::<Result<_>>()?,
        ))
    }

    /// The Laplacian to use, and whether it matches the closed form (so
    /// that the closed form is the function everywhere in the cell).
    pub fn laplacian<T: Real>(&self) -> Result<(BivariatePolynomial<T>, bool)> {
        let natural = self.closed_form::<T>()?.laplacian();
        match &self.laplacian {
            None => Ok((natural, true)),
            Some(lit_) => {
                let given = lit_.to_polynomial::<T>()?;
                let same = given.sub(&natural).terms().all(|(_, c)| c.abs() <= lit(1e-12));
                Ok((given, same))
            }
        }
    }
}

/// The two functions of a custom run, `[v]` and `[w]` in TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionPair {
    pub v: FunctionRecord,
    pub w: FunctionRecord,
}

impl FunctionPair {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse(format!("function file: {e}")))
    }
}

//! The three reference cells with their test functions and reference
//! values, plus the boundary error metrics used to report them.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::functions::{ClosedForm, Term};
use crate::geometry::{
    BoundaryComponent, CornerFlags, EdgeShape, Orientation, ParametricEdge, PuncturedCell, SampledBoundary,
};
use crate::polynomials::BivariatePolynomial;
use crate::scalar::{lit, Real};

/// A built-in benchmark cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Benchmark {
    /// Unit square minus the disk of radius 1/4 about (1/2, 1/2).
    PuncturedSquare,
    /// Unit disk sector `π/6 < θ < 11π/6` minus the disk of radius 1/4
    /// about (-1/10, 1/2).
    PacMan,
    /// Sinusoidal bottom, vertical sides and a semicircular top, with two
    /// elliptical holes.
    Ghost,
}

/// Reference values of `∫∇v·∇w` and `∫vw`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct References {
    pub h1: f64,
    pub l2: f64,
}

impl Benchmark {
    pub const ALL: [Benchmark; 3] = [Benchmark::PuncturedSquare, Benchmark::PacMan, Benchmark::Ghost];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::PuncturedSquare => "punctured-square",
            Benchmark::PacMan => "pacman",
            Benchmark::Ghost => "ghost",
        }
    }

    pub fn cell<T: Real>(self) -> PuncturedCell<T> {
        match self {
            Benchmark::PuncturedSquare => punctured_square(),
            Benchmark::PacMan => pacman(),
            Benchmark::Ghost => ghost(),
        }
    }

    /// The pair `(v, w)`; Pac-Man pairs `v` with itself.
    pub fn functions<T: Real>(self) -> (ClosedForm<T>, ClosedForm<T>) {
        match self {
            Benchmark::PuncturedSquare => {
                let xi = [lit(0.5), lit(0.5)];
                let v = ClosedForm::new(vec![
                    Term::ExpCos { scale: T::one() },
                    Term::Log {
                        center: xi,
                        scale: T::one(),
                    },
                    Term::Polynomial(poly(&[(3, 1, 1.0), (1, 3, 1.0)])),
                ]);
                let w = ClosedForm::new(vec![
                    Term::Rational {
                        center: xi,
                        component: 0,
                        scale: T::one(),
                    },
                    Term::Polynomial(poly(&[(3, 0, 1.0), (1, 2, 1.0)])),
                ]);
                (v, w)
            }
            Benchmark::PacMan => {
                let v = ClosedForm::new(vec![Term::CornerPower {
                    vertex: [T::zero(); 2],
                    alpha: lit(0.5),
                    branch: T::zero(),
                    scale: T::one(),
                }]);
                (v.clone(), v)
            }
            Benchmark::Ghost => {
                let v = ClosedForm::new(vec![
                    Term::Rational {
                        center: [lit(0.25), lit(0.7)],
                        component: 0,
                        scale: T::one(),
                    },
                    Term::Polynomial(poly(&[(3, 1, 1.0), (0, 2, 1.0)])),
                ]);
                let w = ClosedForm::new(vec![
                    Term::Log {
                        center: [lit(0.75), lit(0.7)],
                        scale: lit(2.0),
                    },
                    Term::Polynomial(poly(&[(2, 2, 1.0), (1, 3, -1.0)])),
                ]);
                (v, w)
            }
        }
    }

    pub fn references(self) -> References {
        match self {
            Benchmark::PuncturedSquare => References {
                h1: 4.46481780319135,
                l2: 1.39484950156676,
            },
            Benchmark::PacMan => References {
                h1: 1.2095368224085591,
                l2: 0.9779343149214397,
            },
            Benchmark::Ghost => References {
                h1: -6.311053612386,
                l2: -3.277578636852,
            },
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "unknown benchmark cell `{s}` (expected punctured-square, pacman or ghost)"
                ))
            })
    }
}

fn poly<T: Real>(terms: &[(u32, u32, f64)]) -> BivariatePolynomial<T> {
    BivariatePolynomial::from_terms(terms.iter().map(|&(a, b, c)| (a, b, lit::<T>(c)))).expect("small degree")
}

fn line<T: Real>(a: [f64; 2], b: [f64; 2]) -> ParametricEdge<T> {
    ParametricEdge::line([lit(a[0]), lit(a[1])], [lit(b[0]), lit(b[1])], CornerFlags::BOTH).expect("valid line")
}

fn hole<T: Real>(edge: ParametricEdge<T>) -> BoundaryComponent<T> {
    BoundaryComponent::new(vec![edge], Orientation::Clockwise).expect("valid hole")
}

fn punctured_square<T: Real>() -> PuncturedCell<T> {
    let v = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
    let edges = (0..4).map(|k| line(v[k], v[(k + 1) % 4])).collect();
    let outer = BoundaryComponent::new(edges, Orientation::CounterClockwise).expect("square");
    let xi = [lit(0.5), lit(0.5)];
    let disk = hole(ParametricEdge::circle(xi, lit(0.25)).expect("disk"));
    PuncturedCell::new("punctured-square", outer, vec![(disk, Some(xi))]).expect("punctured square")
}

fn pacman<T: Real>() -> PuncturedCell<T> {
    let theta0 = T::PI() / lit(6.0);
    let origin = [T::zero(); 2];
    let mouth_top = [theta0.cos(), theta0.sin()];
    let mouth_bottom = [theta0.cos(), -theta0.sin()];
    let edges = vec![
        ParametricEdge::line(origin, mouth_top, CornerFlags::BOTH).expect("upper jaw"),
        ParametricEdge::new(EdgeShape::arc(origin, T::one(), theta0, T::TAU() - theta0), CornerFlags::BOTH)
            .expect("arc"),
        ParametricEdge::line(mouth_bottom, origin, CornerFlags::BOTH).expect("lower jaw"),
    ];
    let outer = BoundaryComponent::new(edges, Orientation::CounterClockwise).expect("sector");
    let c = [lit(-0.1), lit(0.5)];
    let eye = hole(ParametricEdge::circle(c, lit(0.25)).expect("eye"));
    PuncturedCell::new("pacman", outer, vec![(eye, Some(c))]).expect("pacman")
}

fn ghost<T: Real>() -> PuncturedCell<T> {
    let bottom = ParametricEdge::new(
        EdgeShape::SinePerturbedLine {
            start: [T::zero(); 2],
            end: [T::one(), T::zero()],
            amplitude: lit(0.1),
            frequency: lit(3.0),
        },
        CornerFlags::BOTH,
    )
    .expect("sinusoid");
    let top = ParametricEdge::new(
        EdgeShape::arc([lit(0.5), lit(0.8)], lit(0.5), T::zero(), T::PI()),
        CornerFlags::BOTH,
    )
    .expect("arc");
    let edges = vec![bottom, line([1.0, 0.0], [1.0, 0.8]), top, line([0.0, 0.8], [0.0, 0.0])];
    let outer = BoundaryComponent::new(edges, Orientation::CounterClockwise).expect("ghost");
    let eye = |cx: f64| {
        let c = [lit(cx), lit(0.7)];
        (
            hole(ParametricEdge::ellipse(c, [lit(0.15), lit(0.2)], T::zero()).expect("ellipse")),
            Some(c),
        )
    };
    PuncturedCell::new("ghost", outer, vec![eye(0.25), eye(0.75)]).expect("ghost")
}

/// Closed forms of the intermediate quantities of the punctured-square
/// function `v`: `φ = e^{x₁} cos x₂ + ln|x - ξ|` has `a₁ = 1`, conjugate
/// `ψ̂ = e^{x₁} sin x₂` and anti-Laplacian
/// `Φ = ¼ e^{x₁}(x₁ cos x₂ + x₂ sin x₂) + ¼ |x - ξ|²(ln|x - ξ| - 1)`.
pub mod punctured_square_exact {
    use super::*;

    pub const LOG_COEFFICIENT: f64 = 1.0;

    pub fn harmonic_part<T: Real>() -> ClosedForm<T> {
        ClosedForm::new(vec![
            Term::ExpCos { scale: T::one() },
            Term::Log {
                center: [lit(0.5), lit(0.5)],
                scale: T::one(),
            },
        ])
    }

    pub fn conjugate<T: Real>(x: [T; 2]) -> T {
        x[0].exp() * x[1].sin()
    }

    pub fn anti_laplacian<T: Real>(x: [T; 2]) -> T {
        let d = [x[0] - lit(0.5), x[1] - lit(0.5)];
        let r2 = d[0] * d[0] + d[1] * d[1];
        let q = lit::<T>(0.25);
        q * x[0].exp() * (x[0] * x[1].cos() + x[1] * x[1].sin()) + q * r2 * (lit::<T>(0.5) * r2.ln() - T::one())
    }
}

/// `‖e + c‖_{L²(∂K)}` minimised over constants `c`, with `e` the
/// difference of two traces.
pub fn constant_aligned_error<T: Real>(sb: &SampledBoundary<T>, exact: &[T], computed: &[T]) -> Result<T> {
    let diff: Vec<T> = exact.iter().zip(computed).map(|(&a, &b)| a - b).collect();
    let c = sb.integrate(&diff)? / sb.perimeter();
    let shifted: Vec<T> = diff.iter().map(|&d| d - c).collect();
    sb.l2_norm(&shifted)
}

/// `‖e - c₁x₁ - c₂x₂‖_{L²(∂K)}` with `c₁, c₂` from least squares.
pub fn linear_aligned_error<T: Real>(sb: &SampledBoundary<T>, exact: &[T], computed: &[T]) -> Result<T> {
    let diff: Vec<T> = exact.iter().zip(computed).map(|(&a, &b)| a - b).collect();
    let x1: Vec<T> = sb.points().iter().map(|p| p[0]).collect();
    let x2: Vec<T> = sb.points().iter().map(|p| p[1]).collect();
    let ip = |a: &[T], b: &[T]| -> Result<T> {
        let prod: Vec<T> = a.iter().zip(b).map(|(&p, &q)| p * q).collect();
        sb.integrate(&prod)
    };
    let (a11, a12, a22) = (ip(&x1, &x1)?, ip(&x1, &x2)?, ip(&x2, &x2)?);
    let (b1, b2) = (ip(&x1, &diff)?, ip(&x2, &diff)?);
    let det = a11 * a22 - a12 * a12;
    let c1 = (b1 * a22 - b2 * a12) / det;
    let c2 = (a11 * b2 - a12 * b1) / det;
    let fitted: Vec<T> = (0..sb.len()).map(|i| diff[i] - c1 * x1[i] - c2 * x2[i]).collect();
    sb.l2_norm(&fitted)
}

/// `‖e‖_{L²(∂K)}` of the difference of two traces.
pub fn boundary_error<T: Real>(sb: &SampledBoundary<T>, exact: &[T], computed: &[T]) -> Result<T> {
    let diff: Vec<T> = exact.iter().zip(computed).map(|(&a, &b)| a - b).collect();
    sb.l2_norm(&diff)
}

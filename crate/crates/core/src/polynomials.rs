//! Bivariate polynomial algebra.
//!
//! Polynomials are stored as a sorted map from multi-index `(α₁, α₂)` to
//! coefficient. All calculus (gradients, Laplacians, anti-Laplacians) is
//! exact coefficient manipulation; only evaluation and integration touch
//! floating point.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::SampledBoundary;
use crate::scalar::{Coefficient, Real};

/// Largest total degree a polynomial may have.
pub const MAX_DEGREE: u32 = 16;

/// Multi-index `(α₁, α₂)` of the monomial `x₁^α₁ x₂^α₂`.
pub type MultiIndex = (u32, u32);

/// A polynomial in `x₁, x₂` with coefficients in `C`.
#[derive(Clone, PartialEq)]
pub struct BivariatePolynomial<C> {
    terms: BTreeMap<MultiIndex, C>,
}

impl<C: Coefficient> Default for BivariatePolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> BivariatePolynomial<C> {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, 0, c)
    }

    /// `c · x₁^a1 x₂^a2`. Panics if `a1 + a2` exceeds [`MAX_DEGREE`].
    pub fn monomial(a1: u32, a2: u32, c: C) -> Self {
        assert!(a1 + a2 <= MAX_DEGREE, "monomial degree above {MAX_DEGREE}");
        let mut p = Self::zero();
        p.add_term((a1, a2), c);
        p
    }

    /// Builds a polynomial from `(α₁, α₂, coefficient)` triples. Repeated
    /// multi-indices are summed.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32, C)>,
    {
        let mut p = Self::zero();
        for (a1, a2, c) in terms {
            let degree = a1 + a2;
            if degree > MAX_DEGREE {
                return Err(Error::DegreeTooHigh {
                    degree,
                    max: MAX_DEGREE,
                });
            }
            p.add_term((a1, a2), c);
        }
        Ok(p)
    }

    fn negligible(c: &C) -> bool {
        let tol = C::from_f64(1e-14).unwrap_or_else(C::zero);
        c.abs() <= tol
    }

    fn add_term(&mut self, alpha: MultiIndex, c: C) {
        let entry = self.terms.entry(alpha).or_insert_with(C::zero);
        *entry = entry.clone() + c;
        if Self::negligible(entry) {
            self.terms.remove(&alpha);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn coefficient(&self, a1: u32, a2: u32) -> C {
        self.terms.get(&(a1, a2)).cloned().unwrap_or_else(C::zero)
    }

    /// Nonzero terms in multi-index order.
    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, &C)> {
        self.terms.iter().map(|(k, v)| (*k, v))
    }

    pub fn scale(&self, s: C) -> Self {
        let mut p = Self::zero();
        for (&alpha, c) in &self.terms {
            p.add_term(alpha, c.clone() * s.clone());
        }
        p
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (&alpha, c) in &other.terms {
            p.add_term(alpha, c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut p = self.clone();
        for (&alpha, c) in &other.terms {
            p.add_term(alpha, -c.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let degree = self.degree() + other.degree();
        if !self.is_zero() && !other.is_zero() && degree > MAX_DEGREE {
            return Err(Error::DegreeTooHigh {
                degree,
                max: MAX_DEGREE,
            });
        }
        let mut p = Self::zero();
        for (&(a1, a2), c) in &self.terms {
            for (&(b1, b2), d) in &other.terms {
                p.add_term((a1 + b1, a2 + b2), c.clone() * d.clone());
            }
        }
        Ok(p)
    }

    pub fn partial_x1(&self) -> Self {
        let mut p = Self::zero();
        for (&(a1, a2), c) in &self.terms {
            if a1 > 0 {
                p.add_term((a1 - 1, a2), c.clone() * Self::int(a1));
            }
        }
        p
    }

    pub fn partial_x2(&self) -> Self {
        let mut p = Self::zero();
        for (&(a1, a2), c) in &self.terms {
            if a2 > 0 {
                p.add_term((a1, a2 - 1), c.clone() * Self::int(a2));
            }
        }
        p
    }

    pub fn gradient(&self) -> [Self; 2] {
        [self.partial_x1(), self.partial_x2()]
    }

    pub fn laplacian(&self) -> Self {
        let mut p = Self::zero();
        for (&(a1, a2), c) in &self.terms {
            if a1 > 1 {
                p.add_term((a1 - 2, a2), c.clone() * Self::int(a1 * (a1 - 1)));
            }
            if a2 > 1 {
                p.add_term((a1, a2 - 2), c.clone() * Self::int(a2 * (a2 - 1)));
            }
        }
        p
    }

    /// `∇p · ∇q`.
    pub fn grad_dot(&self, other: &Self) -> Result<Self> {
        let [p1, p2] = self.gradient();
        let [q1, q2] = other.gradient();
        Ok(p1.mul(&q1)?.add(&p2.mul(&q2)?))
    }

    /// A polynomial `R` with `ΔR = self`, assembled monomial by monomial from
    /// the closed form
    ///
    /// `Δ⁻¹ x^α = Σ_{k=0}^{⌊n/2⌋} (-1)^k (n-k)! / ((n+1)! (k+1)!) (|x|²/4)^(k+1) Δ^k x^α`,
    /// `n = |α|`.
    pub fn anti_laplacian(&self) -> Result<Self> {
        let degree = self.degree() + 2;
        if !self.is_zero() && degree > MAX_DEGREE {
            return Err(Error::DegreeTooHigh {
                degree,
                max: MAX_DEGREE,
            });
        }
        let quarter_r2 = Self::from_terms([
            (2, 0, C::one() / Self::int(4)),
            (0, 2, C::one() / Self::int(4)),
        ])?;
        let mut result = Self::zero();
        for (&(a1, a2), c) in &self.terms {
            let n = a1 + a2;
            let mut lap_k = Self::monomial(a1, a2, c.clone());
            let mut r_pow = quarter_r2.clone();
            for k in 0..=n / 2 {
                // (n-k)!/(n+1)! = 1/((n-k+1)···(n+1)), then 1/(k+1)!.
                let mut weight = C::one();
                for j in (n - k + 1)..=(n + 1) {
                    weight = weight / Self::int(j);
                }
                for j in 1..=(k + 1) {
                    weight = weight / Self::int(j);
                }
                if k % 2 == 1 {
                    weight = -weight;
                }
                result = result.add(&r_pow.mul(&lap_k)?.scale(weight));
                lap_k = lap_k.laplacian();
                if lap_k.is_zero() {
                    break;
                }
                r_pow = r_pow.mul(&quarter_r2)?;
            }
        }
        Ok(result)
    }

    fn int(k: u32) -> C {
        C::from_u32(k).expect("small integer representable as coefficient")
    }

    /// Evaluates with the coefficient type itself (exact for rationals).
    pub fn eval_exact(&self, x1: C, x2: C) -> C {
        let mut total = C::zero();
        for (&(a1, a2), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..a1 {
                term = term * x1.clone();
            }
            for _ in 0..a2 {
                term = term * x2.clone();
            }
            total = total + term;
        }
        total
    }

    /// Converts coefficients into another type.
    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> BivariatePolynomial<D> {
        let mut p = BivariatePolynomial::zero();
        for (&alpha, c) in &self.terms {
            p.add_term(alpha, f(c));
        }
        p
    }
}

impl<T: Real> BivariatePolynomial<T> {
    /// Evaluates at `x` using precomputed powers.
    pub fn eval(&self, x: [T; 2]) -> T {
        if self.terms.is_empty() {
            return T::zero();
        }
        let d = self.degree() as usize;
        let mut p1 = vec![T::one(); d + 1];
        let mut p2 = vec![T::one(); d + 1];
        for k in 1..=d {
            p1[k] = p1[k - 1] * x[0];
            p2[k] = p2[k - 1] * x[1];
        }
        self.terms
            .iter()
            .map(|(&(a1, a2), &c)| c * p1[a1 as usize] * p2[a2 as usize])
            .sum()
    }

    pub fn eval_gradient(&self, x: [T; 2]) -> [T; 2] {
        let [g1, g2] = self.gradient();
        [g1.eval(x), g2.eval(x)]
    }

    /// Values at every boundary node.
    pub fn trace(&self, sb: &SampledBoundary<T>) -> Vec<T> {
        sb.points().iter().map(|&x| self.eval(x)).collect()
    }

    /// Weighted normal derivative `∇p · n |x'|` at every boundary node.
    pub fn weighted_normal_derivative(&self, sb: &SampledBoundary<T>) -> Vec<T> {
        let [g1, g2] = self.gradient();
        sb.points()
            .iter()
            .zip(sb.weighted_normals())
            .map(|(&x, nu)| g1.eval(x) * nu[0] + g2.eval(x) * nu[1])
            .collect()
    }

    /// `∫_K q dx` through `∫_K x^α dx = (2+|α|)⁻¹ ∮_{∂K} (x·n) x^α ds`.
    pub fn integrate_over_cell(&self, sb: &SampledBoundary<T>) -> T {
        let h = sb.step();
        let mut total = T::zero();
        for (x, nu) in sb.points().iter().zip(sb.weighted_normals()) {
            let x_dot_n = x[0] * nu[0] + x[1] * nu[1];
            if x_dot_n == T::zero() {
                continue;
            }
            let mut value = T::zero();
            for (&(a1, a2), &c) in &self.terms {
                let scale = T::one() / T::from_u32(2 + a1 + a2).unwrap();
                value = value + c * scale * x[0].powi(a1 as i32) * x[1].powi(a2 as i32);
            }
            total = total + value * x_dot_n;
        }
        total * h
    }
}

impl<C: fmt::Debug> fmt::Debug for BivariatePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a1, a2), c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            if a1 > 0 {
                write!(f, "·x1^{a1}")?;
            }
            if a2 > 0 {
                write!(f, "·x2^{a2}")?;
            }
        }
        Ok(())
    }
}

/// Literal form used in configuration files: a list of `[α₁, α₂, c]`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolynomialLiteral(pub Vec<(u32, u32, f64)>);

impl PolynomialLiteral {
    pub fn to_polynomial<T: Real>(&self) -> Result<BivariatePolynomial<T>> {
        BivariatePolynomial::from_terms(
            self.0
                .iter()
                .map(|&(a1, a2, c)| (a1, a2, T::from_f64(c).unwrap())),
        )
    }
}

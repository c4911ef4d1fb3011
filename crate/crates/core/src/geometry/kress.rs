//! Kress corner-grading reparameterization of `[0, 2π]`.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Which ends of an edge meet a corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CornerFlags {
    pub start: bool,
    pub end: bool,
}

impl CornerFlags {
    pub const NONE: Self = Self {
        start: false,
        end: false,
    };
    pub const BOTH: Self = Self {
        start: true,
        end: true,
    };

    pub fn any(self) -> bool {
        self.start || self.end
    }

    pub fn swapped(self) -> Self {
        Self {
            start: self.end,
            end: self.start,
        }
    }
}

fn check_sigma<T: Real>(sigma: T) -> Result<()> {
    if !(sigma >= lit(2.0)) {
        return Err(Error::InvalidParameter(format!(
            "Kress parameter must be at least 2, got {sigma}"
        )));
    }
    Ok(())
}

/// `(τ(u), τ'(u))` for the symmetric Kress map with parameter `sigma`.
///
/// `c(u) = (1/2 - 1/σ) s³ + s/σ + 1/2` with `s = u/π - 1`, and
/// `τ = 2π c^σ / (c^σ + (1-c)^σ)`. The map fixes `0`, `π`, `2π`, and its
/// derivative vanishes to order `σ - 1` at both ends.
pub fn kress_tau_with_derivative<T: Real>(u: T, sigma: T) -> Result<(T, T)> {
    check_sigma(sigma)?;
    Ok(tau_unchecked(u, sigma))
}

/// The Kress map `τ(u)`.
pub fn kress_tau<T: Real>(u: T, sigma: T) -> Result<T> {
    kress_tau_with_derivative(u, sigma).map(|(t, _)| t)
}

fn tau_unchecked<T: Real>(u: T, sigma: T) -> (T, T) {
    let pi = T::PI();
    let two_pi = pi + pi;
    let half = lit::<T>(0.5);
    let s = u / pi - T::one();
    let a = half - sigma.recip();
    let c = (a * s * s * s + s / sigma + half).max(T::zero()).min(T::one());
    let dc = (lit::<T>(3.0) * a * s * s + sigma.recip()) / pi;
    let cs = c.powf(sigma);
    let ds = (T::one() - c).powf(sigma);
    let denom = cs + ds;
    let tau = two_pi * cs / denom;
    let dtau = two_pi * sigma * c.powf(sigma - T::one()) * (T::one() - c).powf(sigma - T::one()) * dc
        / (denom * denom);
    (tau, dtau)
}

/// Grading applied according to `corners`: two-sided Kress, one-sided
/// variants `2τ(u/2)` (start) or `2τ(π + u/2) - 2π` (end), or the identity.
pub(crate) fn graded<T: Real>(u: T, sigma: T, corners: CornerFlags) -> (T, T) {
    let pi = T::PI();
    let two = lit::<T>(2.0);
    match (corners.start, corners.end) {
        (true, true) => tau_unchecked(u, sigma),
        (true, false) => {
            let (t, d) = tau_unchecked(u / two, sigma);
            (two * t, d)
        }
        (false, true) => {
            let (t, d) = tau_unchecked(pi + u / two, sigma);
            (two * t - two * pi, d)
        }
        (false, false) => (u, T::one()),
    }
}

pub(crate) fn validate_sigma<T: Real>(sigma: T) -> Result<()> {
    check_sigma(sigma)
}

//! Spectral calculus for periodic traces on a single boundary component.
//!
//! A component made of `E` edges is sampled at `2nE` equispaced parameter
//! values with period `2πE`, so the Fourier modes carry wavenumbers `k/E`.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::scalar::{count, lit, Real};

/// Samples of a periodic function at `t_k = 2πE k / N`, `k = 0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples<T> {
    values: Vec<T>,
    edges: usize,
}

impl<T: Real> PeriodicSamples<T> {
    /// `values` over a component made of `edges` edges. The length must be
    /// even, at least 4, and a multiple of `2 * edges`.
    pub fn new(values: Vec<T>, edges: usize) -> Result<Self> {
        let n = values.len();
        if edges == 0 {
            return Err(Error::InvalidParameter("a component has at least one edge".into()));
        }
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "periodic samples need an even length of at least 4, got {n}"
            )));
        }
        if !n.is_multiple_of(2 * edges) {
            return Err(Error::InvalidParameter(format!(
                "{n} samples cannot cover {edges} edges with 2n nodes each"
            )));
        }
        Ok(Self { values, edges })
    }

    /// Samples on a single edge of period `2π`.
    pub fn single(values: Vec<T>) -> Result<Self> {
        Self::new(values, 1)
    }

    /// Samples `f(t)` on `[0, 2πE)`.
    pub fn from_fn(len: usize, edges: usize, f: impl Fn(T) -> T) -> Result<Self> {
        let step = T::TAU() * count::<T>(edges) / count::<T>(len.max(1));
        Self::new((0..len).map(|k| f(count::<T>(k) * step)).collect(), edges)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn edges(&self) -> usize {
        self.edges
    }

    /// Parameter spacing `2πE / N`.
    pub fn step(&self) -> T {
        T::TAU() * count::<T>(self.edges) / count::<T>(self.len())
    }

    /// Fourier coefficients `ω_k` with `G(t_j) = Σ_k ω_k e^{i k t_j / E}`,
    /// in FFT order.
    pub fn spectrum(&self) -> Vec<Complex<T>> {
        let mut buf: Vec<Complex<T>> = self.values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
        let scale = T::one() / count::<T>(buf.len());
        buf.iter_mut().for_each(|c| *c = *c * scale);
        buf
    }

    fn from_spectrum(mut spec: Vec<Complex<T>>, edges: usize) -> Result<Self> {
        FftPlanner::new().plan_fft_inverse(spec.len()).process(&mut spec);
        Self::new(spec.into_iter().map(|c| c.re).collect(), edges)
    }

    /// Signed wavenumber (in units of `1/E`) of FFT slot `k`, `None` at Nyquist.
    fn wavenumber(&self, k: usize) -> Option<T> {
        let n = self.len();
        match k.cmp(&(n / 2)) {
            std::cmp::Ordering::Less => Some(count::<T>(k)),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(-count::<T>(n - k)),
        }
    }
}

/// Result of [`fft_antiderivative`].
#[derive(Debug, Clone, PartialEq)]
pub struct Antiderivative<T> {
    /// Zero-mean antiderivative samples.
    pub samples: PeriodicSamples<T>,
    /// Mean of the input, discarded before integration.
    pub removed_mean: T,
    /// Root mean square of the input.
    pub input_rms: T,
}

impl<T: Real> Antiderivative<T> {
    /// Whether the discarded mean is below `1e-6` of the input size. A
    /// larger mean means the input was not the derivative of a periodic
    /// function.
    pub fn is_consistent(&self) -> bool {
        self.removed_mean.abs() <= lit::<T>(1e-6) * self.input_rms
    }
}

/// Spectral derivative `dG/dt`. The Nyquist mode is dropped.
pub fn fft_derivative<T: Real>(s: &PeriodicSamples<T>) -> Result<PeriodicSamples<T>> {
    let e = count::<T>(s.edges);
    let mut spec = s.spectrum();
    for (k, c) in spec.iter_mut().enumerate() {
        *c = match s.wavenumber(k) {
            Some(w) => *c * Complex::new(T::zero(), w / e),
            None => Complex::new(T::zero(), T::zero()),
        };
    }
    PeriodicSamples::from_spectrum(spec, s.edges)
}

/// Zero-mean spectral antiderivative. The mean of the input and the
/// Nyquist mode are dropped.
pub fn fft_antiderivative<T: Real>(s: &PeriodicSamples<T>) -> Result<Antiderivative<T>> {
    let e = count::<T>(s.edges);
    let mut spec = s.spectrum();
    let removed_mean = spec[0].re;
    for (k, c) in spec.iter_mut().enumerate() {
        *c = match s.wavenumber(k) {
            Some(w) if k != 0 => *c / Complex::new(T::zero(), w / e),
            _ => Complex::new(T::zero(), T::zero()),
        };
    }
    let sum_sq: T = s.values.iter().map(|&v| v * v).sum();
    Ok(Antiderivative {
        samples: PeriodicSamples::from_spectrum(spec, s.edges)?,
        removed_mean,
        input_rms: (sum_sq / count::<T>(s.len())).sqrt(),
    })
}

/// Trigonometric interpolation onto `2^levels` times as many equispaced
/// nodes. The original nodes are every `2^levels`-th output node.
pub fn trig_interpolate<T: Real>(s: &PeriodicSamples<T>, levels: u32) -> Result<PeriodicSamples<T>> {
    if levels == 0 {
        return Ok(s.clone());
    }
    let n = s.len();
    let big = n << levels;
    let spec = s.spectrum();
    let zero = Complex::new(T::zero(), T::zero());
    let mut padded = vec![zero; big];
    let half = n / 2;
    padded[..half].copy_from_slice(&spec[..half]);
    padded[big - half + 1..].copy_from_slice(&spec[half + 1..]);
    let nyquist = spec[half] * lit::<T>(0.5);
    padded[half] = nyquist;
    padded[big - half] = nyquist;
    PeriodicSamples::from_spectrum(padded, s.edges)
}

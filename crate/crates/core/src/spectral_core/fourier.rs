//! FFT-based operations on a spatial grid treated as periodic with period
//! `n h`. Inputs are expected to decay towards both ends.

use std::f64::consts::PI;

use rustfft::FftPlanner;

use super::Potential;
use crate::{Error, Result, C64};

pub(crate) fn forward(values: &[f64]) -> Vec<C64> {
    let mut buf: Vec<C64> = values.iter().map(|&v| C64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

pub(crate) fn inverse_real(mut spec: Vec<C64>) -> Vec<f64> {
    let n = spec.len();
    FftPlanner::new().plan_fft_inverse(n).process(&mut spec);
    spec.iter().map(|v| v.re / n as f64).collect()
}

/// Angular wavenumbers in FFT order.
pub(crate) fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let l = n as f64 * h;
    (0..n)
        .map(|k| {
            let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            2.0 * PI * kk / l
        })
        .collect()
}

/// `u - 1` for `m - 1` given on the grid, via division by `1 + xi^2`.
pub fn helmholtz_inverse(p: &Potential) -> Result<Vec<f64>> {
    let h = p.grid().spacing();
    if h > 1.0 {
        return Err(Error::Resolution { h });
    }
    Ok(helmholtz_inverse_samples(p.values(), h))
}

pub(crate) fn helmholtz_inverse_samples(values: &[f64], h: f64) -> Vec<f64> {
    let xi = wavenumbers(values.len(), h);
    let mut spec = forward(values);
    for (s, k) in spec.iter_mut().zip(&xi) {
        *s /= 1.0 + k * k;
    }
    inverse_real(spec)
}

/// Spectral first derivative. The Nyquist mode is dropped for even `n`.
pub fn spectral_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let xi = wavenumbers(n, h);
    let mut spec = forward(values);
    for (k, s) in spec.iter_mut().enumerate() {
        if n.is_multiple_of(2) && k == n / 2 {
            *s = C64::new(0.0, 0.0);
        } else {
            *s *= C64::new(0.0, xi[k]);
        }
    }
    inverse_real(spec)
}

/// Trigonometric interpolant of real samples at nodes `x0 + i h`, evaluated
/// at arbitrary `x`. The Nyquist mode enters as a cosine.
pub fn band_limited_eval(values: &[f64], h: f64, x0: f64, x: &[f64]) -> Vec<f64> {
    let n = values.len();
    let spec = forward(values);
    let l = n as f64 * h;
    let top = n.div_ceil(2);
    x.iter()
        .map(|&xv| {
            let s = xv - x0;
            let w = C64::from_polar(1.0, 2.0 * PI * s / l);
            let mut p = C64::new(1.0, 0.0);
            let mut acc = 0.0;
            for c in &spec[1..top] {
                p *= w;
                acc += 2.0 * (c * p).re;
            }
            if n.is_multiple_of(2) {
                acc += spec[n / 2].re * (PI * n as f64 * s / l).cos();
            }
            (spec[0].re + acc) / n as f64
        })
        .collect()
}

/// Band-limited values at the midpoints `x_i + h/2`.
pub fn midpoint_samples(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut spec = forward(values);
    for (k, s) in spec.iter_mut().enumerate() {
        let kk = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        if n.is_multiple_of(2) && k == n / 2 {
            // Real part of the Nyquist mode only, shifted as a cosine.
            *s = C64::new(s.re * (PI / 2.0).cos(), 0.0);
        } else {
            *s *= C64::from_polar(1.0, PI * kk / n as f64);
        }
    }
    inverse_real(spec)
}

//! Discretised line-of-sight channel between uniformly spaced antennas on the
//! two arrays, and its singular spectrum.
//!
//! Entry `(i, j)` of the channel matrix is `exp(j2π r_ij) / r_ij` where
//! `r_ij` is the exact distance (in wavelengths) from source antenna `j` to
//! receive antenna `i`.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{finite, positive, Error, Result};
use crate::geometry::{Assembly, ReceiveDirection};
use crate::math::{self, Vec3, PI};

/// Default usability threshold on `σᵢ/σ₁` (about 10 dB below the best mode).
pub const USABLE_THRESHOLD: f64 = 0.3;

const DIVISIBILITY_TOL: f64 = 1e-9;

/// `1 + length/spacing` positions evenly spaced along `axis`, symmetric about
/// `center`.
///
/// The spacing must divide the length to within `1e-9`; otherwise the error
/// carries the nearest spacings that do.
pub fn antenna_positions(length: f64, spacing: f64, center: Vec3, axis: Vec3) -> Result<Vec<Vec3>> {
    let intervals = interval_count(length, spacing)?;
    let step = length / intervals as f64;
    Ok((0..=intervals)
        .map(|k| math::axpy(center, -0.5 * length + step * k as f64, axis))
        .collect())
}

/// Number of spacings along the array, `length/spacing`.
pub fn interval_count(length: f64, spacing: f64) -> Result<usize> {
    positive(spacing, "antenna spacing")?;
    finite(length, "array length")?;
    if length < 0.0 {
        return Err(Error::InvalidParameter {
            name: "array length",
            reason: "must be non-negative",
        });
    }
    let n = length / spacing;
    let rounded = libm::round(n);
    if (n - rounded).abs() > DIVISIBILITY_TOL * rounded.max(1.0) {
        let (lo, hi) = (libm::floor(n).max(1.0), libm::ceil(n).max(1.0));
        return Err(Error::NonDivisibleSpacing {
            spacing,
            length,
            below: length / hi,
            above: length / lo,
        });
    }
    Ok(rounded as usize)
}

/// Assembly, receive orientation and antenna spacings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec {
    /// Geometry of the two arrays.
    pub assembly: Assembly,
    /// Receive orientation.
    pub direction: ReceiveDirection,
    /// Source spacing `Δ_s`.
    pub source_spacing: f64,
    /// Receive spacing `Δ_r`.
    pub receive_spacing: f64,
}

impl ChannelSpec {
    /// Source antennas, `N_t = 1 + L/Δ_s` of them.
    pub fn source_positions(&self) -> Result<Vec<Vec3>> {
        let p = self.assembly.placement();
        antenna_positions(p.length(), self.source_spacing, p.source_center(), [0.0, 0.0, 1.0])
    }

    /// Receive antennas, `N_r = 1 + 2ρ/Δ_r` of them.
    pub fn receive_positions(&self) -> Result<Vec<Vec3>> {
        antenna_positions(
            2.0 * self.assembly.half_length(),
            self.receive_spacing,
            [0.0; 3],
            self.direction.unit_vector(),
        )
    }
}

/// `N_r × N_t` channel matrix.
pub fn build_channel(spec: &ChannelSpec) -> Result<DMatrix<Complex64>> {
    let tx = spec.source_positions()?;
    let rx = spec.receive_positions()?;
    let mut h = DMatrix::from_element(rx.len(), tx.len(), Complex64::new(0.0, 0.0));
    for (j, s) in tx.iter().enumerate() {
        for (i, p) in rx.iter().enumerate() {
            let r = math::norm(math::sub(*p, *s));
            if r == 0.0 {
                return Err(Error::CoincidentAntennas);
            }
            // Reduce the phase first so large distances keep full precision.
            let phase = 2.0 * PI * (r - libm::round(r));
            h[(i, j)] = Complex64::new(math::cos(phase), math::sin(phase)) / r;
        }
    }
    Ok(h)
}

/// Singular values in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularSpectrum {
    /// `σ₁ ≥ σ₂ ≥ … ≥ 0`, `min(n_rows, n_cols)` of them.
    pub sigmas: Vec<f64>,
    /// Rows of the decomposed matrix.
    pub n_rows: usize,
    /// Columns of the decomposed matrix.
    pub n_cols: usize,
}

/// Singular values of `h`.
pub fn singular_spectrum(h: &DMatrix<Complex64>) -> Result<SingularSpectrum> {
    if h.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("channel matrix entry"));
    }
    let (n_rows, n_cols) = h.shape();
    let mut sigmas: Vec<f64> = if n_rows == 0 || n_cols == 0 {
        Vec::new()
    } else {
        h.clone().singular_values().iter().copied().collect()
    };
    sigmas.sort_by(|a, b| b.total_cmp(a));
    Ok(SingularSpectrum { sigmas, n_rows, n_cols })
}

/// How [`normalized_spectrum`] scales the singular values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    /// Divide by `σ₁`.
    MaxNorm,
    /// Divide by `Σσᵢ`.
    SumNorm,
}

/// Scaled copy of the spectrum.
pub fn normalized_spectrum(s: &SingularSpectrum, mode: NormMode) -> Result<Vec<f64>> {
    let scale = match mode {
        NormMode::MaxNorm => s.sigmas.first().copied().unwrap_or(0.0),
        NormMode::SumNorm => s.sigmas.iter().sum(),
    };
    if scale <= 0.0 {
        return Err(Error::ZeroSpectrum);
    }
    Ok(s.sigmas.iter().map(|x| x / scale).collect())
}

/// Number of singular values with `σᵢ/σ₁ ≥ threshold`; zero for an all-zero
/// spectrum.
pub fn usable_count(s: &SingularSpectrum, threshold: f64) -> usize {
    match s.sigmas.first() {
        Some(&top) if top > 0.0 => s.sigmas.iter().filter(|&&x| x / top >= threshold).count(),
        _ => 0,
    }
}

/// Receive spacing `2ρ/K` matching the sampling rate of a constant bandwidth
/// `K/(2ρ)`.
pub fn nyquist_spacing(k: f64, half_length: f64) -> Result<f64> {
    positive(k, "K")?;
    positive(half_length, "receive half-length")?;
    Ok(2.0 * half_length / k)
}

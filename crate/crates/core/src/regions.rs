//! Spatial multiplexing region boundaries as distance thresholds per polar
//! angle.
//!
//! A receive position belongs to the spatial multiplexing region (SMR) of
//! threshold `K₀` when its K number reaches `K₀`. Under the
//! constant-bandwidth approximation this becomes `w^max = K₀/(2ρ)` for `ê_z`
//! and `ê_x`, and `w_y^max = 2K₀/ρ` for `ê_y`. The non-constant-bandwidth
//! region (NCSMR) is where the bandwidth spread `w^range` exceeds `ΔK/ρ`.
//!
//! All solvers search `r ∈ [1, 4R₀]` wavelengths.

use alloc::vec::Vec;

use crate::bandwidth;
use crate::error::{finite, positive, Error, Result};
use crate::geometry::{Assembly, ReceiveDirection};
use crate::math::{self, PI};
use crate::roots;

/// Axis directions with a constant-bandwidth boundary equation of the form
/// `w^max = K₀/(2ρ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisDir {
    /// `ê_x`.
    X,
    /// `ê_z`.
    Z,
}

impl From<AxisDir> for ReceiveDirection {
    fn from(d: AxisDir) -> Self {
        match d {
            AxisDir::X => Self::X,
            AxisDir::Z => Self::Z,
        }
    }
}

/// Which boundary a curve traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    /// Spatial multiplexing region, threshold `K₀`.
    Smr,
    /// Non-constant-bandwidth region, threshold `ΔK`.
    Ncsmr,
}

/// The boresight threshold for `K₀ = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct R0 {
    /// `L√(4ρ² − 1/4)`; `None` when `ρ ≤ 1/4`.
    pub exact: Option<f64>,
    /// `2ρL`.
    pub approx: f64,
}

impl R0 {
    /// The exact value when defined, otherwise the approximation.
    pub fn value(&self) -> f64 {
        self.exact.unwrap_or(self.approx)
    }
}

/// Largest SMR distance for `K₀ = 1`, reached at boresight with a parallel
/// receive array.
pub fn r0_threshold(length: f64, half_length: f64) -> Result<R0> {
    positive(length, "source length")?;
    positive(half_length, "receive half-length")?;
    let radicand = 4.0 * half_length * half_length - 0.25;
    Ok(R0 {
        exact: (radicand > 0.0).then(|| length * math::sqrt(radicand)),
        approx: 2.0 * half_length * length,
    })
}

/// Boresight distance at which a parallel receive array reaches `K₀`:
/// `L√(4ρ²/K₀² − 1/4)`.
pub fn rz_boresight(length: f64, half_length: f64, k0: f64) -> Result<f64> {
    positive(length, "source length")?;
    positive(half_length, "receive half-length")?;
    positive(k0, "K0")?;
    let ratio = 2.0 * half_length / k0;
    let radicand = ratio * ratio - 0.25;
    if radicand <= 0.0 {
        return Err(Error::Unreachable { k0 });
    }
    Ok(length * math::sqrt(radicand))
}

/// Fraunhofer distance `L²`.
pub fn fraunhofer(length: f64) -> Result<f64> {
    positive(length, "source length")?;
    Ok(length * length)
}

/// Relative tolerance of the bisection refinements.
pub const ROOT_REL_TOL: f64 = 1e-12;
/// Points of the log-spaced NCSMR scan.
pub const SCAN_POINTS: usize = 2048;
const STEP_FACTOR: f64 = 1.02;
const FLOOR: f64 = 1.0;

fn check_theta(theta: f64) -> Result<f64> {
    finite(theta, "theta")?;
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: "must lie in [0, pi]",
        });
    }
    Ok(theta)
}

fn search_ceiling(length: f64, half_length: f64) -> Result<f64> {
    Ok(4.0 * r0_threshold(length, half_length)?.value())
}

fn assembly_at(length: f64, half_length: f64, theta: f64, r: f64) -> Assembly {
    // Inputs are validated by the callers; r stays within [1, ∞).
    Assembly::new(length, half_length, r, theta).unwrap_or_else(|_| unreachable!())
}

/// Largest bandwidth over the effective interval, `w^max(r)`.
pub fn w_max(dir: AxisDir, theta: f64, length: f64, half_length: f64, r: f64) -> f64 {
    let a = assembly_at(length, half_length, theta, r);
    match dir {
        AxisDir::X => bandwidth::extrema_x(&a).w_max,
        AxisDir::Z => bandwidth::extrema_z(&a).w_max,
    }
}

/// Bandwidth spread over the effective interval, `w^range(r)`.
pub fn w_range(dir: AxisDir, theta: f64, length: f64, half_length: f64, r: f64) -> f64 {
    let a = assembly_at(length, half_length, theta, r);
    match dir {
        AxisDir::X => bandwidth::extrema_x(&a).w_range,
        AxisDir::Z => bandwidth::extrema_z(&a).w_range,
    }
}

/// Outermost distance where `w^max = K₀/(2ρ)` at polar angle `θ`, or `None`
/// when the equation has no solution in `[1, 4R₀]`.
pub fn smr_boundary(dir: AxisDir, theta: f64, length: f64, half_length: f64, k0: f64) -> Result<Option<f64>> {
    let theta = check_theta(theta)?;
    positive(k0, "K0")?;
    let ceiling = search_ceiling(length, half_length)?;
    let target = k0 / (2.0 * half_length);
    let f = |r: f64| w_max(dir, theta, length, half_length, r) - target;
    Ok(roots::largest_root(f, ceiling, FLOOR, STEP_FACTOR, ROOT_REL_TOL))
}

/// Outermost distance where `w_y^max = 2K₀/ρ`. The whole region it encloses
/// is non-constant-bandwidth.
pub fn smr_boundary_y(theta: f64, length: f64, half_length: f64, k0: f64) -> Result<Option<f64>> {
    let theta = check_theta(theta)?;
    positive(k0, "K0")?;
    let ceiling = search_ceiling(length, half_length)?;
    let target = 2.0 * k0 / half_length;
    let f = |r: f64| {
        let a = assembly_at(length, half_length, theta, r);
        bandwidth::extrema_y(&a).w_max - target
    };
    Ok(roots::largest_root(f, ceiling, FLOOR, STEP_FACTOR, ROOT_REL_TOL))
}

/// Every distance in `[1, 4R₀]` where `w^range = ΔK/ρ`, increasing.
pub fn ncsmr_boundary(dir: AxisDir, theta: f64, length: f64, half_length: f64, dk: f64) -> Result<Vec<f64>> {
    let theta = check_theta(theta)?;
    positive(dk, "delta K")?;
    let ceiling = search_ceiling(length, half_length)?;
    let target = dk / half_length;
    let grid = roots::log_grid(FLOOR, ceiling.max(2.0 * FLOOR), SCAN_POINTS);
    let f = |r: f64| w_range(dir, theta, length, half_length, r) - target;
    Ok(roots::scan_roots(f, &grid, ROOT_REL_TOL))
}

/// Roots found at one polar angle.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    /// Polar angle.
    pub theta: f64,
    /// Boundary distances, increasing. At most one for SMR curves.
    pub radii: Vec<f64>,
}

/// A boundary traced over a grid of polar angles.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionCurve {
    /// Receive direction (`X`, `Y` or `Z`).
    pub direction: ReceiveDirection,
    /// Boundary kind.
    pub kind: RegionKind,
    /// `K₀` for SMR curves, `ΔK` for NCSMR curves.
    pub threshold: f64,
    /// One entry per polar angle.
    pub samples: Vec<CurveSample>,
}

/// Solves the boundary at every angle of a strictly increasing grid in
/// `[0, π]`.
///
/// `Y` only has an SMR equation; asking for its NCSMR curve is an error.
pub fn boundary_curve(
    dir: ReceiveDirection,
    kind: RegionKind,
    thetas: &[f64],
    length: f64,
    half_length: f64,
    threshold: f64,
) -> Result<RegionCurve> {
    for &t in thetas {
        check_theta(t)?;
    }
    if thetas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "theta grid",
            reason: "must be strictly increasing",
        });
    }
    let solve = |theta: f64| -> Result<Vec<f64>> {
        match (dir, kind) {
            (ReceiveDirection::X, RegionKind::Smr) => {
                Ok(smr_boundary(AxisDir::X, theta, length, half_length, threshold)?.into_iter().collect())
            }
            (ReceiveDirection::Z, RegionKind::Smr) => {
                Ok(smr_boundary(AxisDir::Z, theta, length, half_length, threshold)?.into_iter().collect())
            }
            (ReceiveDirection::Y, RegionKind::Smr) => {
                Ok(smr_boundary_y(theta, length, half_length, threshold)?.into_iter().collect())
            }
            (ReceiveDirection::X, RegionKind::Ncsmr) => ncsmr_boundary(AxisDir::X, theta, length, half_length, threshold),
            (ReceiveDirection::Z, RegionKind::Ncsmr) => ncsmr_boundary(AxisDir::Z, theta, length, half_length, threshold),
            (ReceiveDirection::Y, RegionKind::Ncsmr) => Err(Error::InvalidParameter {
                name: "direction",
                reason: "y has no non-constant-bandwidth boundary equation",
            }),
            (ReceiveDirection::Generic(_), _) => Err(Error::InvalidParameter {
                name: "direction",
                reason: "boundaries are defined for x, y and z only",
            }),
        }
    };
    let mut samples = Vec::with_capacity(thetas.len());
    for &theta in thetas {
        samples.push(CurveSample { theta, radii: solve(theta)? });
    }
    Ok(RegionCurve {
        direction: dir,
        kind,
        threshold,
        samples,
    })
}

//! K number: the integral of the local spatial bandwidth over the effective
//! receive interval, with its constant-bandwidth bounds and the linear
//! (mid-point) approximation.

use alloc::vec::Vec;

use crate::bandwidth::{self, BandwidthSummary};
use crate::error::{positive, Result};
use crate::geometry::{Assembly, ReceiveDirection};
use crate::quadrature::{self, Integral};

/// Interval length used for `ê_x` bounds and the linear approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum XInterval {
    /// `[−min(d, ρ), ρ]`, excluding the mirrored part of the array.
    #[default]
    Exact,
    /// `[−ρ, ρ]` regardless of geometry (as used for region boundaries).
    Full,
}

/// Conditions attached to a result that do not prevent computing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Warning {
    /// Centre distance below ten wavelengths.
    FarFieldInvalid,
    /// Parallel-array formula used outside `D ≥ 10·max(L_s, L_r)`.
    ParallelRegime,
}

impl Warning {
    /// Stable machine-readable tag.
    pub fn tag(&self) -> &'static str {
        match self {
            Self::FarFieldInvalid => "far_field",
            Self::ParallelRegime => "parallel_regime",
        }
    }
}

/// K number with its bounds and linear approximation for one direction.
#[derive(Debug, Clone, PartialEq)]
pub struct KNumberReport {
    /// Quadrature of the bandwidth over the effective interval.
    pub k_exact: f64,
    /// `w_max · |I|`.
    pub k_upper: f64,
    /// `w_min · |I|`.
    pub k_lower: f64,
    /// `(w_max + w_min)/2 · |I|`.
    pub k_linear: f64,
    /// Receive direction.
    pub direction: ReceiveDirection,
    /// Quadrature error estimate.
    pub quadrature_abs_err: f64,
    /// Bandwidth extrema the bounds were built from.
    pub summary: BandwidthSummary,
    /// Validity warnings.
    pub warnings: Vec<Warning>,
}

/// Extrema for any direction: closed form on the axes, numeric otherwise.
pub fn summary(assembly: &Assembly, dir: ReceiveDirection) -> Result<BandwidthSummary> {
    match dir {
        ReceiveDirection::Generic(v) => bandwidth::extrema_generic(assembly, &v),
        axis => Ok(bandwidth::extrema(assembly, axis).unwrap_or_else(|| unreachable!())),
    }
}

fn interval_length(assembly: &Assembly, dir: ReceiveDirection, s: &BandwidthSummary, x: XInterval) -> f64 {
    match (dir, x) {
        (ReceiveDirection::X, XInterval::Full) => 2.0 * assembly.half_length(),
        _ => s.interval_length(),
    }
}

fn bounds_from(assembly: &Assembly, dir: ReceiveDirection, s: &BandwidthSummary, x: XInterval) -> (f64, f64) {
    let len = interval_length(assembly, dir, s, x);
    (s.w_min * len, s.w_max * len)
}

fn linear_from(assembly: &Assembly, dir: ReceiveDirection, s: &BandwidthSummary, x: XInterval) -> f64 {
    0.5 * (s.w_max + s.w_min) * interval_length(assembly, dir, s, x)
}

/// `(k_lower, k_upper)`: constant-bandwidth bounds from the bandwidth minimum
/// and maximum.
pub fn k_bounds(assembly: &Assembly, dir: ReceiveDirection, x: XInterval) -> Result<(f64, f64)> {
    let s = summary(assembly, dir)?;
    Ok(bounds_from(assembly, dir, &s, x))
}

/// Linear approximation: bandwidth assumed to vary linearly between its
/// extrema across the effective interval.
pub fn k_linear(assembly: &Assembly, dir: ReceiveDirection, x: XInterval) -> Result<f64> {
    let s = summary(assembly, dir)?;
    Ok(linear_from(assembly, dir, &s, x))
}

/// Integrates the bandwidth over the effective interval. Panels are split at
/// the bandwidth extrema.
pub fn k_exact(assembly: &Assembly, dir: ReceiveDirection, abs_tol: f64) -> Result<Integral> {
    let s = summary(assembly, dir)?;
    k_exact_with(assembly, dir, &s, abs_tol)
}

fn k_exact_with(assembly: &Assembly, dir: ReceiveDirection, s: &BandwidthSummary, abs_tol: f64) -> Result<Integral> {
    let (lo, hi) = s.interval;
    let mut breaks: Vec<f64> = Vec::with_capacity(4);
    breaks.push(lo);
    let mut inner = [s.argmax, s.argmin];
    inner.sort_by(f64::total_cmp);
    for x in inner {
        if x > lo && x < hi && breaks.last().is_none_or(|&b| x > b) {
            breaks.push(x);
        }
    }
    breaks.push(hi);
    let p = *assembly.placement();
    quadrature::integrate_with_breaks(|l| bandwidth::bandwidth(dir, l, &p), &breaks, abs_tol)
}

/// Full report with the default absolute tolerance `1e-8` and the exact `ê_x`
/// interval.
pub fn k_number(assembly: &Assembly, dir: ReceiveDirection) -> Result<KNumberReport> {
    k_number_with(assembly, dir, XInterval::Exact, quadrature::DEFAULT_ABS_TOL)
}

/// Full report with explicit options.
pub fn k_number_with(assembly: &Assembly, dir: ReceiveDirection, x: XInterval, abs_tol: f64) -> Result<KNumberReport> {
    let s = summary(assembly, dir)?;
    let integral = k_exact_with(assembly, dir, &s, abs_tol)?;
    let (k_lower, k_upper) = bounds_from(assembly, dir, &s, x);
    let mut warnings = Vec::new();
    if assembly.placement().far_field_warning() {
        warnings.push(Warning::FarFieldInvalid);
    }
    Ok(KNumberReport {
        k_exact: integral.value,
        k_upper,
        k_lower,
        k_linear: linear_from(assembly, dir, &s, x),
        direction: dir,
        quadrature_abs_err: integral.abs_err,
        summary: s,
        warnings,
    })
}

/// Parallel-array K number `L_s·L_r / D` (λ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelK {
    /// `L_s·L_r / D`.
    pub value: f64,
    /// Set when `D < 10·max(L_s, L_r)`, outside the formula's regime.
    pub outside_regime: bool,
}

/// K number of two parallel arrays facing each other at distance `D`.
pub fn k_parallel(source_length: f64, receive_length: f64, distance: f64) -> Result<ParallelK> {
    positive(source_length, "source length")?;
    positive(receive_length, "receive length")?;
    positive(distance, "distance")?;
    Ok(ParallelK {
        value: source_length * receive_length / distance,
        outside_regime: distance < 10.0 * source_length.max(receive_length),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::UnitVector;
    use crate::math::FRAC_PI_2;
    use approx::assert_relative_eq;

    fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|k| f(a + h * k as f64)).sum();
        h * (0.5 * (f(a) + f(b)) + inner)
    }

    #[test]
    fn r0_case_is_constant_bandwidth() {
        let a = Assembly::new(400.0, 20.0, 15_998.749_951_168_06, FRAC_PI_2).unwrap();
        let r = k_number(&a, ReceiveDirection::Z).unwrap();
        assert_relative_eq!(r.k_upper, 1.0, max_relative = 1e-12);
        assert!((r.k_exact - 1.0).abs() < 0.01);
        assert!(r.warnings.is_empty());
    }

    #[test]
    fn close_range_matches_trapezoid() {
        let a = Assembly::new(400.0, 20.0, 200.0, FRAC_PI_2).unwrap();
        let r = k_number(&a, ReceiveDirection::Z).unwrap();
        let p = *a.placement();
        let oracle = trapezoid(|z| bandwidth::bandwidth_z(z, &p), -20.0, 20.0, 1_000_000);
        assert!((r.k_exact - oracle).abs() < 1e-6, "{} vs {}", r.k_exact, oracle);
    }

    #[test]
    fn y_vanishes_with_receive_length() {
        let a = Assembly::new(400.0, 1e-9, 300.0, 1.0).unwrap();
        assert!(k_number(&a, ReceiveDirection::Y).unwrap().k_exact < 1e-9);
    }

    #[test]
    fn y_lower_bound_is_zero_and_linear_is_quarter_span() {
        let a = Assembly::new(400.0, 20.0, 150.0, 0.9).unwrap();
        let (lo, hi) = k_bounds(&a, ReceiveDirection::Y, XInterval::Exact).unwrap();
        assert_eq!(lo, 0.0);
        let lin = k_linear(&a, ReceiveDirection::Y, XInterval::Exact).unwrap();
        assert_relative_eq!(lin, 10.0 * bandwidth::bandwidth_y(20.0, a.placement()));
        assert_relative_eq!(lin, 0.5 * hi);
    }

    #[test]
    fn x_full_interval_variant() {
        // d < ρ so the two variants differ.
        let a = Assembly::new(400.0, 20.0, 500.0, 0.01).unwrap();
        assert!(a.placement().transverse() < 20.0);
        let s = bandwidth::extrema_x(&a);
        let exact = k_linear(&a, ReceiveDirection::X, XInterval::Exact).unwrap();
        let full = k_linear(&a, ReceiveDirection::X, XInterval::Full).unwrap();
        let d = a.placement().transverse();
        assert_relative_eq!(exact, 0.5 * (20.0 + d) * (s.w_max + s.w_min));
        assert_relative_eq!(full, 20.0 * (s.w_max + s.w_min));
        let (_, hi) = k_bounds(&a, ReceiveDirection::X, XInterval::Full).unwrap();
        assert_relative_eq!(hi, 40.0 * s.w_max);
    }

    #[test]
    fn linear_far_limit_is_upper_bound() {
        let a = Assembly::new(400.0, 20.0, 1e6, FRAC_PI_2).unwrap();
        let r = k_number(&a, ReceiveDirection::Z).unwrap();
        let peak = 40.0 * bandwidth::peak_parallel_bandwidth(a.placement());
        assert_relative_eq!(r.k_linear, peak, max_relative = 1e-6);
    }

    #[test]
    fn generic_axis_matches_closed_form_and_reversal() {
        let a = Assembly::new(400.0, 20.0, 350.0, 0.8).unwrap();
        let z = k_number(&a, ReceiveDirection::Z).unwrap();
        let v = UnitVector::new([0.0, 0.0, 1.0]).unwrap();
        let g = k_number(&a, ReceiveDirection::Generic(v)).unwrap();
        assert!((z.k_exact - g.k_exact).abs() < 1e-7);
        assert_relative_eq!(z.k_upper, g.k_upper, max_relative = 1e-9);
        let tilted = UnitVector::normalize([0.4, 0.2, 0.7]).unwrap();
        let fwd = k_number(&a, ReceiveDirection::Generic(tilted)).unwrap();
        let back = k_number(&a, ReceiveDirection::Generic(tilted.negated())).unwrap();
        assert!((fwd.k_exact - back.k_exact).abs() < 2e-8);
    }

    #[test]
    fn far_field_warning_below_ten_wavelengths() {
        let a = Assembly::new(4.0, 1.0, 8.0, FRAC_PI_2).unwrap();
        let r = k_number(&a, ReceiveDirection::Z).unwrap();
        assert_eq!(r.warnings, [Warning::FarFieldInvalid]);
    }

    #[test]
    fn parallel_formula() {
        assert_relative_eq!(k_parallel(400.0, 40.0, 16_000.0).unwrap().value, 1.0);
        assert_relative_eq!(k_parallel(10.0, 10.0, 100.0).unwrap().value, 1.0);
        let base = k_parallel(3.0, 7.0, 500.0).unwrap().value;
        assert_relative_eq!(k_parallel(9.0, 21.0, 1500.0).unwrap().value, 3.0 * base, max_relative = 1e-14);
        assert!(k_parallel(10.0, 10.0, 50.0).unwrap().outside_regime);
        assert!(k_parallel(10.0, 10.0, 0.0).is_err());
    }
}

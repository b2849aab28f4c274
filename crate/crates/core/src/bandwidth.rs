//! Local spatial bandwidth seen along a receive array.
//!
//! At a receive point `p` moving along `v̂`, every source point `s` contributes
//! a wave whose spatial frequency is `⟨r̂(p, s), v̂⟩` cycles per wavelength.
//! The local spatial bandwidth is the spread (max − min) of those frequencies
//! over the whole source segment, so it always lies in `[0, 2]`.
//!
//! Closed forms exist for the three axes of the receiving frame
//! ([`bandwidth_z`], [`bandwidth_x`], [`bandwidth_y`]) together with their
//! extrema over the effective receive interval. [`bandwidth_generic`]
//! evaluates the definition directly for any orientation.

use crate::error::{Error, Result};
use crate::geometry::{Assembly, Placement, ReceiveDirection, UnitVector};
use crate::math;

/// Extrema of the local bandwidth over a receive interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandwidthSummary {
    /// Largest bandwidth on the interval.
    pub w_max: f64,
    /// Smallest bandwidth on the interval.
    pub w_min: f64,
    /// `w_max − w_min`.
    pub w_range: f64,
    /// Receive coordinate of the maximum.
    pub argmax: f64,
    /// Receive coordinate of the minimum.
    pub argmin: f64,
    /// Effective receive interval `(lo, hi)`.
    pub interval: (f64, f64),
}

impl BandwidthSummary {
    fn new(max: (f64, f64), min: (f64, f64), interval: (f64, f64)) -> Self {
        Self {
            w_max: max.1,
            w_min: min.1,
            w_range: max.1 - min.1,
            argmax: max.0,
            argmin: min.0,
            interval,
        }
    }

    /// Length of the effective interval.
    pub fn interval_length(&self) -> f64 {
        self.interval.1 - self.interval.0
    }
}

/// `t / √(t² + c²)`: the cosine between the source axis and the ray from a
/// point at axial offset `t` and transverse offset `c`.
pub fn axial_cosine(t: f64, c: f64) -> Result<f64> {
    if !t.is_finite() || !c.is_finite() {
        return Err(Error::NonFinite("axial cosine argument"));
    }
    if t == 0.0 && c == 0.0 {
        return Err(Error::Indeterminate);
    }
    Ok(cosine(t, c))
}

// Infallible variant for the closed forms; the indeterminate point only
// occurs for receive points lying on the source, where 0 is used.
#[inline]
fn cosine(t: f64, c: f64) -> f64 {
    if t == 0.0 && c == 0.0 {
        0.0
    } else {
        t / math::hypot(t, c)
    }
}

/// Bandwidth at coordinate `z` of a receive array parallel to the source.
pub fn bandwidth_z(z: f64, p: &Placement) -> f64 {
    let d = p.transverse();
    cosine(z + p.upper_end(), d) - cosine(z + p.lower_end(), d)
}

/// Bandwidth at coordinate `x` of a receive array along `ê_x`.
///
/// Only meaningful for `x ≥ −d`; points beyond the source axis see the
/// mirror image of the field.
pub fn bandwidth_x(x: f64, p: &Placement) -> f64 {
    let s = x + p.transverse();
    let far = cosine(s, p.far_end());
    if p.projects_onto_source() {
        1.0 - far
    } else {
        cosine(s, p.near_end()) - far
    }
}

/// Bandwidth at coordinate `y` of a receive array along `ê_y`. Even in `y`.
pub fn bandwidth_y(y: f64, p: &Placement) -> f64 {
    let y = y.abs();
    let d = p.transverse();
    let far = cosine(y, math::hypot(d, p.far_end()));
    if p.projects_onto_source() {
        cosine(y, d) - far
    } else {
        cosine(y, math::hypot(d, p.near_end())) - far
    }
}

/// Closed-form bandwidth for an axis direction; `None` for generic ones.
pub fn bandwidth_axis(dir: ReceiveDirection, l: f64, p: &Placement) -> Option<f64> {
    match dir {
        ReceiveDirection::X => Some(bandwidth_x(l, p)),
        ReceiveDirection::Y => Some(bandwidth_y(l, p)),
        ReceiveDirection::Z => Some(bandwidth_z(l, p)),
        ReceiveDirection::Generic(_) => None,
    }
}

const GENERIC_SCAN: usize = 1024;

/// Bandwidth at `l·v̂` computed from the definition: the spread of
/// `⟨r̂(l·v̂, s), v̂⟩` over all source points `s`.
///
/// The extremes are taken over both source ends and every interior
/// stationary point. Stationary points are bracketed by the sign of the
/// derivative on a 1024-point scan of the source and refined by bisection to
/// `1e-12` in the source coordinate.
pub fn bandwidth_generic(l: f64, v_hat: &UnitVector, p: &Placement) -> Result<f64> {
    if !l.is_finite() {
        return Err(Error::NonFinite("receive coordinate"));
    }
    let [vx, vy, vz] = v_hat.components();
    let d = p.transverse();
    // p − s(t) = (l vx + d, l vy, l vz + r cosθ − t) for t ∈ [−L/2, L/2].
    let px = l * vx + d;
    let py = l * vy;
    let h2 = px * px + py * py;
    let c0 = px * vx + py * vy;
    let axial = l * vz + p.axial_offset();
    let half = 0.5 * p.length();

    let u_of = |t: f64| axial - t;
    let g = |t: f64| {
        let u = u_of(t);
        (c0 + u * vz) / math::sqrt(h2 + u * u)
    };
    // dg/dt has the sign of c0·u − vz·h².
    let slope = |t: f64| c0 * u_of(t) - vz * h2;

    if h2 == 0.0 {
        let (u_hi, u_lo) = (u_of(-half), u_of(half));
        if u_lo <= 0.0 && u_hi >= 0.0 {
            return Err(Error::CoincidentPoint);
        }
        // On the source axis but off the segment: every ray is parallel.
        return Ok(0.0);
    }

    let (mut hi, mut lo) = {
        let (a, b) = (g(-half), g(half));
        (a.max(b), a.min(b))
    };
    let step = (2.0 * half) / GENERIC_SCAN as f64;
    let mut t_prev = -half;
    let mut s_prev = slope(t_prev);
    for k in 1..=GENERIC_SCAN {
        let t = if k == GENERIC_SCAN { half } else { -half + step * k as f64 };
        let s = slope(t);
        if s_prev == 0.0 || (s_prev < 0.0) != (s < 0.0) {
            let root = if s_prev == 0.0 {
                t_prev
            } else {
                bisect_sign(&slope, t_prev, t, s_prev)
            };
            let value = g(root);
            hi = hi.max(value);
            lo = lo.min(value);
        }
        t_prev = t;
        s_prev = s;
    }
    Ok(hi - lo)
}

fn bisect_sign(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let negative_at_a = fa < 0.0;
    for _ in 0..200 {
        if b - a <= 1e-12 {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == negative_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Bandwidth along `dir` at coordinate `l`, closed form where available.
pub fn bandwidth(dir: ReceiveDirection, l: f64, p: &Placement) -> Result<f64> {
    match dir {
        ReceiveDirection::Generic(v) => bandwidth_generic(l, &v, p),
        axis => Ok(bandwidth_axis(axis, l, p).unwrap_or_default()),
    }
}

/// Extrema of [`bandwidth_z`] over `[−ρ, ρ]`.
pub fn extrema_z(assembly: &Assembly) -> BandwidthSummary {
    let p = assembly.placement();
    let rho = assembly.half_length();
    let d = p.transverse();
    let offset = p.axial_offset();
    let (far, near) = (p.far_end(), p.near_end());

    let peak = -offset;
    let max = if offset.abs() <= rho {
        (peak, 2.0 * cosine(0.5 * p.length(), d))
    } else {
        (peak.clamp(-rho, rho), cosine(far - rho, d) - cosine(near - rho, d))
    };
    let min_at = if offset <= 0.0 { -rho } else { rho };
    let min = (min_at, cosine(far + rho, d) - cosine(near + rho, d));
    BandwidthSummary::new(max, min, (-rho, rho))
}

/// Interior stationary point of `f(s; B) − f(s; A)` in the transverse
/// coordinate, returned as `x₀ = s* − d`.
///
/// `far` and `near` are `A` and `B > 0`. Evaluated as `u²v² / √(u² + v²)`
/// with `u = ∛A`, `v = ∛B`, which avoids the cancellation in the textbook
/// ratio of differences.
pub fn x_stationary_point(far: f64, near: f64, transverse: f64) -> f64 {
    let u2 = {
        let u = math::cbrt(far);
        u * u
    };
    let v2 = {
        let v = math::cbrt(near);
        v * v
    };
    u2 * v2 / math::sqrt(u2 + v2) - transverse
}

/// Extrema of [`bandwidth_x`] over `[−min(d, ρ), ρ]`.
pub fn extrema_x(assembly: &Assembly) -> BandwidthSummary {
    let p = assembly.placement();
    let rho = assembly.half_length();
    let d = p.transverse();
    let lo = -d.min(rho);
    let interval = (lo, rho);
    let at = |x: f64| (x, bandwidth_x(x, p));

    if p.projects_onto_source() {
        return BandwidthSummary::new(at(lo), at(rho), interval);
    }
    let x0 = x_stationary_point(p.far_end(), p.near_end(), d);
    let (max, min) = if x0 < lo {
        (at(lo), at(rho))
    } else if x0 <= rho {
        let (left, right) = (at(lo), at(rho));
        let min = if right.1 < left.1 { right } else { left };
        (at(x0), min)
    } else {
        (at(rho), at(lo))
    };
    BandwidthSummary::new(max, min, interval)
}

/// Stationary point `y*` of `f(y; c₁) − f(y; c₂)` for `0 ≤ c₁ < c₂`: the
/// bandwidth grows on `[0, y*]` and decays beyond. Evaluated as
/// `uv / √(u + v)` with `u = c₁^(2/3)`, `v = c₂^(2/3)`.
pub fn y_stationary_point(near: f64, far: f64) -> f64 {
    let u = math::cbrt(near * near);
    let v = math::cbrt(far * far);
    u * v / math::sqrt(u + v)
}

/// Extrema of [`bandwidth_y`] over the half interval `[0, ρ]`; the other half
/// is a mirror image.
///
/// The maximum sits at `y = ρ` unless the array reaches past the stationary
/// point [`y_stationary_point`], which only happens when `ρ` is comparable to
/// the distance from the source axis.
pub fn extrema_y(assembly: &Assembly) -> BandwidthSummary {
    let p = assembly.placement();
    let rho = assembly.half_length();
    let d = p.transverse();
    let near = if p.projects_onto_source() { d } else { math::hypot(d, p.near_end()) };
    let far = math::hypot(d, p.far_end());
    let peak = y_stationary_point(near, far).min(rho);
    BandwidthSummary::new((peak, bandwidth_y(peak, p)), (0.0, 0.0), (0.0, rho))
}

/// Closed-form extrema for an axis direction; `None` for generic ones.
pub fn extrema(assembly: &Assembly, dir: ReceiveDirection) -> Option<BandwidthSummary> {
    match dir {
        ReceiveDirection::X => Some(extrema_x(assembly)),
        ReceiveDirection::Y => Some(extrema_y(assembly)),
        ReceiveDirection::Z => Some(extrema_z(assembly)),
        ReceiveDirection::Generic(_) => None,
    }
}

/// Extrema of [`bandwidth_generic`] over `[−ρ, ρ]`, located numerically: a
/// 257-point scan followed by golden-section refinement around the best
/// samples.
pub fn extrema_generic(assembly: &Assembly, v_hat: &UnitVector) -> Result<BandwidthSummary> {
    const SCAN: usize = 256;
    let p = assembly.placement();
    let rho = assembly.half_length();
    let w = |l: f64| bandwidth_generic(l, v_hat, p);
    let grid: alloc::vec::Vec<f64> = (0..=SCAN)
        .map(|k| -rho + 2.0 * rho * k as f64 / SCAN as f64)
        .collect();
    let mut values = alloc::vec::Vec::with_capacity(grid.len());
    for &l in &grid {
        values.push(w(l)?);
    }
    let (mut imax, mut imin) = (0, 0);
    for (i, &v) in values.iter().enumerate() {
        if v > values[imax] {
            imax = i;
        }
        if v < values[imin] {
            imin = i;
        }
    }
    let bracket = |i: usize| (grid[i.saturating_sub(1)], grid[(i + 1).min(SCAN)]);
    let (a, b) = bracket(imax);
    let max = golden(|l| w(l).map(|v| -v), a, b)?;
    let max = if -max.1 >= values[imax] { (max.0, -max.1) } else { (grid[imax], values[imax]) };
    let (a, b) = bracket(imin);
    let min = golden(w, a, b)?;
    let min = if min.1 <= values[imin] { min } else { (grid[imin], values[imin]) };
    Ok(BandwidthSummary::new(max, min, (-rho, rho)))
}

// Golden-section minimisation of a unimodal function on [a, b].
fn golden(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x)?;
    Ok(if fx <= fc.min(fd) { (x, fx) } else if fc < fd { (c, fc) } else { (d, fd) })
}

/// Effective receive interval: `[−ρ, ρ]` for `ê_z` and generic directions,
/// `[−min(d, ρ), ρ]` for `ê_x`, `[0, ρ]` for `ê_y`.
pub fn effective_interval(assembly: &Assembly, dir: ReceiveDirection) -> (f64, f64) {
    let rho = assembly.half_length();
    match dir {
        ReceiveDirection::X => (-assembly.placement().transverse().min(rho), rho),
        ReceiveDirection::Y => (0.0, rho),
        ReceiveDirection::Z | ReceiveDirection::Generic(_) => (-rho, rho),
    }
}

/// Largest bandwidth a parallel receive array can see at this placement,
/// `L / √(L²/4 + d²)`.
pub fn peak_parallel_bandwidth(p: &Placement) -> f64 {
    let l = p.length();
    let d = p.transverse();
    l / math::sqrt(0.25 * l * l + d * d)
}

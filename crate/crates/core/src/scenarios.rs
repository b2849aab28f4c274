//! K-number maps over the ground plane for an elevated source, with a fixed
//! or position-dependent receive orientation.

use alloc::vec::Vec;

use crate::dof;
use crate::error::{finite, Error, Result};
use crate::geometry::{
    arctan_star, horizontal_scene_to_local, scene_to_local, sign_star, ReceiveDirection, SceneMode,
    ScenePlacement,
};
use crate::bandwidth;
use crate::math::{self, PI};

/// Grid points closer than this to the source centre are masked.
pub const MASK_RADIUS: f64 = 1.0;

/// Evenly spaced samples `min, …, max` along one ground axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    /// First sample.
    pub min: f64,
    /// Last sample.
    pub max: f64,
    /// Number of samples, at least two.
    pub steps: usize,
}

impl AxisRange {
    /// Validates finiteness, ordering and `steps ≥ 2`.
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        finite(min, "grid minimum")?;
        finite(max, "grid maximum")?;
        if steps < 2 {
            return Err(Error::InvalidParameter {
                name: "grid steps",
                reason: "need at least two samples per axis",
            });
        }
        if max < min {
            return Err(Error::InvalidParameter {
                name: "grid range",
                reason: "maximum below minimum",
            });
        }
        Ok(Self { min, max, steps })
    }

    /// The `k`-th sample.
    pub fn value(&self, k: usize) -> f64 {
        if k + 1 == self.steps {
            self.max
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.steps - 1) as f64
        }
    }
}

/// Rectangular grid over the `y″ ≥ 0` half of the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundGrid {
    /// `x″` samples.
    pub x: AxisRange,
    /// `y″` samples, all non-negative.
    pub y: AxisRange,
}

impl GroundGrid {
    /// Rejects grids reaching below `y″ = 0`.
    pub fn new(x: AxisRange, y: AxisRange) -> Result<Self> {
        if y.min < 0.0 {
            return Err(Error::InvalidParameter {
                name: "grid y range",
                reason: "must not extend below zero",
            });
        }
        Ok(Self { x, y })
    }

    /// Total number of points.
    pub fn len(&self) -> usize {
        self.x.steps * self.y.steps
    }

    /// Always false; grids have at least four points.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ground point at row-major index `iy·steps_x + ix`.
    pub fn point(&self, index: usize) -> (f64, f64) {
        let (iy, ix) = (index / self.x.steps, index % self.x.steps);
        (self.x.value(ix), self.y.value(iy))
    }
}

/// How the receive array is oriented at each ground point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OrientationPolicy {
    /// Same angle `φ ∈ [0, π]` to the `x″` axis everywhere.
    Fixed(f64),
    /// `φ = γ(o)`, pointing the array along the ground ray from the source
    /// foot (vertical scenes).
    Gamma,
    /// `φ = φ_h(o)` (horizontal scenes).
    HControl,
}

/// An orientation angle, flagged when it was fixed by convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyAngle {
    /// Orientation angle in `[0, π]`.
    pub angle: f64,
    /// Set at the origin, where `γ` is undefined and zero is used.
    pub degenerate: bool,
}

/// `γ(o) = arccos(x″/r₁)` with `r₁ = √(x″² + y″²)`.
pub fn phi_policy_gamma(x: f64, y: f64) -> Result<PolicyAngle> {
    finite(x, "receive x")?;
    finite(y, "receive y")?;
    let r1 = math::hypot(x, y);
    Ok(if r1 == 0.0 {
        PolicyAngle { angle: 0.0, degenerate: true }
    } else {
        PolicyAngle { angle: math::acos(x / r1), degenerate: false }
    })
}

/// `φ_h(o) = arctan*(sign*(−x″)·cosψ·w_x(0)/w_z(0))` for a horizontal scene.
pub fn phi_policy_h(scene: &ScenePlacement) -> Result<f64> {
    let local = horizontal_scene_to_local(scene, 0.0)?;
    let p = local.params.assembly.placement();
    let wz = bandwidth::bandwidth_z(0.0, p);
    if wz == 0.0 {
        return Err(Error::ZeroBandwidth);
    }
    let wx = bandwidth::bandwidth_x(0.0, p);
    let sign = f64::from(sign_star(-scene.rx_center().0)?);
    arctan_star(sign * math::cos(local.angle) * wx / wz)
}

/// Orientation angle the policy assigns to `scene`.
pub fn policy_angle(scene: &ScenePlacement, policy: OrientationPolicy) -> Result<f64> {
    match policy {
        OrientationPolicy::Fixed(phi) => Ok(phi),
        OrientationPolicy::Gamma => {
            let (x, y) = scene.rx_center();
            Ok(phi_policy_gamma(x, y)?.angle)
        }
        OrientationPolicy::HControl => phi_policy_h(scene),
    }
}

/// K number at one receive position with orientation `φ`, or `None` inside
/// the masking radius.
pub fn k_at_orientation(scene: &ScenePlacement, phi: f64) -> Result<Option<f64>> {
    if scene.distance() < MASK_RADIUS {
        return Ok(None);
    }
    let local = scene_to_local(scene, phi)?;
    let report = dof::k_number(&local.params.assembly, ReceiveDirection::Generic(local.params.v_hat))?;
    Ok(Some(report.k_exact))
}

/// K number at one receive position under `policy`.
pub fn k_at_point(scene: &ScenePlacement, policy: OrientationPolicy) -> Result<Option<f64>> {
    k_at_orientation(scene, policy_angle(scene, policy)?)
}

/// K numbers over a ground grid.
#[derive(Debug, Clone, PartialEq)]
pub struct KMap {
    /// Sample positions.
    pub grid: GroundGrid,
    /// Row-major by `iy·steps_x + ix`; `None` for masked or failed points.
    pub values: Vec<Option<f64>>,
    /// Orientation policy used.
    pub policy: OrientationPolicy,
    /// Display cutoff carried along for plotting.
    pub cutoff: Option<f64>,
}

impl KMap {
    /// Assembles a map from values computed elsewhere, e.g. in parallel.
    pub fn from_values(
        grid: GroundGrid,
        policy: OrientationPolicy,
        values: Vec<Option<f64>>,
        cutoff: Option<f64>,
    ) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter {
                name: "map values",
                reason: "length does not match the grid",
            });
        }
        Ok(Self { grid, values, policy, cutoff })
    }
}

/// Validates a policy against the scene layout.
pub fn check_policy(scene: &ScenePlacement, policy: OrientationPolicy) -> Result<()> {
    match (policy, scene.mode()) {
        (OrientationPolicy::Fixed(phi), _) => {
            finite(phi, "orientation angle")?;
            if !(0.0..=PI).contains(&phi) {
                return Err(Error::InvalidParameter {
                    name: "orientation angle",
                    reason: "must lie in [0, pi]",
                });
            }
            Ok(())
        }
        (OrientationPolicy::HControl, SceneMode::Vertical) => Err(Error::InvalidParameter {
            name: "policy",
            reason: "h-control needs a horizontal scene",
        }),
        _ => Ok(()),
    }
}

/// K number at one grid index, recording failures as `None`.
pub fn k_map_value(scene: &ScenePlacement, policy: OrientationPolicy, grid: &GroundGrid, index: usize) -> Option<f64> {
    scene
        .at(grid.point(index))
        .and_then(|s| k_at_point(&s, policy))
        .ok()
        .flatten()
}

/// Sequential K map; `scene` supplies the source and receive lengths.
pub fn k_map(scene: &ScenePlacement, policy: OrientationPolicy, grid: &GroundGrid) -> Result<KMap> {
    check_policy(scene, policy)?;
    let values = (0..grid.len()).map(|i| k_map_value(scene, policy, grid, i)).collect();
    KMap::from_values(*grid, policy, values, None)
}

//! Parameterisation of a source/receive linear array assembly.
//!
//! The receiving coordinate system is centred on the receive array. `ê_z` is
//! parallel to the source array, `ê_x` lies in the plane spanned by the
//! source array and the receive centre and points away from the source axis,
//! and `ê_y = ê_z × ê_x` is normal to that plane. The source centre therefore
//! sits at `(-r sinθ, 0, -r cosθ)` where `r` is the centre-to-centre distance
//! and `θ` the polar angle of the receive centre measured from the source
//! axis.
//!
//! Two scene transforms map an elevated source above a ground plane onto this
//! local frame: a vertical source ([`vertical_scene_to_local`]) and a source
//! parallel to the ground `x″` axis ([`horizontal_scene_to_local`]).

use crate::error::{finite, positive, Error, Result};
use crate::math::{self, Vec3, FRAC_PI_2, PI};

/// Distance and direction of the receive centre relative to a source array of
/// a given length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Placement {
    length: f64,
    distance: f64,
    theta: f64,
    cos_theta: f64,
    sin_theta: f64,
}

impl Placement {
    /// Source length `L`, distance `r` and polar angle `θ ∈ [0, π]`.
    pub fn new(length: f64, distance: f64, theta: f64) -> Result<Self> {
        positive(length, "source length")?;
        positive(distance, "distance")?;
        finite(theta, "polar angle")?;
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter {
                name: "polar angle",
                reason: "must lie in [0, pi]",
            });
        }
        // Evaluate on [0, π/2] so that θ and π − θ give mirrored values
        // bit for bit.
        let (cos_theta, sin_theta) = if theta > FRAC_PI_2 {
            let m = PI - theta;
            (-math::cos(m), math::sin(m))
        } else {
            (math::cos(theta), math::sin(theta))
        };
        Ok(Self {
            length,
            distance,
            theta,
            cos_theta,
            sin_theta: sin_theta.max(0.0),
        })
    }

    /// Source array length `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    /// Centre-to-centre distance `r`.
    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// Polar angle `θ`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `cos θ`.
    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    /// Axial offset `r cosθ` of the receive centre from the source centre.
    pub fn axial_offset(&self) -> f64 {
        self.distance * self.cos_theta
    }

    /// Distance `d = r sinθ` of the receive centre from the source axis.
    pub fn transverse(&self) -> f64 {
        self.distance * self.sin_theta
    }

    /// `a = r cosθ + L/2`.
    pub fn upper_end(&self) -> f64 {
        self.axial_offset() + 0.5 * self.length
    }

    /// `b = r cosθ − L/2`.
    pub fn lower_end(&self) -> f64 {
        self.axial_offset() - 0.5 * self.length
    }

    /// `A = r|cosθ| + L/2`, axial distance to the far source end.
    pub fn far_end(&self) -> f64 {
        self.axial_offset().abs() + 0.5 * self.length
    }

    /// `B = r|cosθ| − L/2`, signed axial distance to the near source end.
    /// Negative when the receive centre projects onto the source segment.
    pub fn near_end(&self) -> f64 {
        self.axial_offset().abs() - 0.5 * self.length
    }

    /// True when the receive centre projects onto the source segment,
    /// `|cosθ| ≤ L/(2r)`. Ties go to this branch.
    pub fn projects_onto_source(&self) -> bool {
        self.near_end() <= 0.0
    }

    /// True when `r` is below ten wavelengths, where far-field propagation
    /// stops describing the whole receive array.
    pub fn far_field_warning(&self) -> bool {
        self.distance < 10.0
    }

    /// Same source and angle at a different distance.
    pub fn with_distance(&self, distance: f64) -> Result<Self> {
        Self::new(self.length, distance, self.theta)
    }

    /// Position of the source centre in receiving coordinates.
    pub fn source_center(&self) -> Vec3 {
        [-self.transverse(), 0.0, -self.axial_offset()]
    }
}

/// A [`Placement`] together with the receive half-length `ρ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assembly {
    placement: Placement,
    half_length: f64,
}

impl Assembly {
    /// Source length `L`, receive half-length `ρ`, distance `r`, angle `θ`.
    pub fn new(length: f64, half_length: f64, distance: f64, theta: f64) -> Result<Self> {
        Self::from_placement(Placement::new(length, distance, theta)?, half_length)
    }

    /// Attach a receive half-length to an existing placement.
    pub fn from_placement(placement: Placement, half_length: f64) -> Result<Self> {
        positive(half_length, "receive half-length")?;
        Ok(Self { placement, half_length })
    }

    /// The `(L, r, θ)` part.
    pub fn placement(&self) -> &Placement {
        &self.placement
    }

    /// Receive half-length `ρ`.
    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    /// Same assembly at another distance.
    pub fn with_distance(&self, distance: f64) -> Result<Self> {
        Ok(Self {
            placement: self.placement.with_distance(distance)?,
            half_length: self.half_length,
        })
    }
}

/// Orientation of the receive array in receiving coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReceiveDirection {
    /// `ê_x`.
    X,
    /// `ê_y`.
    Y,
    /// `ê_z`, parallel to the source.
    Z,
    /// Any other unit vector.
    Generic(UnitVector),
}

impl ReceiveDirection {
    /// The unit vector this direction stands for.
    pub fn unit_vector(&self) -> Vec3 {
        match self {
            Self::X => [1.0, 0.0, 0.0],
            Self::Y => [0.0, 1.0, 0.0],
            Self::Z => [0.0, 0.0, 1.0],
            Self::Generic(v) => v.components(),
        }
    }

    /// Short lower-case name (`x`, `y`, `z`, `generic`).
    pub fn name(&self) -> &'static str {
        match self {
            Self::X => "x",
            Self::Y => "y",
            Self::Z => "z",
            Self::Generic(_) => "generic",
        }
    }
}

/// A 3-vector with norm one to within `1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector(Vec3);

impl UnitVector {
    /// Accepts a vector whose norm already is one within `1e-12`.
    pub fn new(v: Vec3) -> Result<Self> {
        for c in v {
            finite(c, "direction component")?;
        }
        if (math::norm(v) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "direction",
                reason: "must have unit norm",
            });
        }
        Ok(Self(v))
    }

    /// Normalises any non-zero finite vector.
    pub fn normalize(v: Vec3) -> Result<Self> {
        for c in v {
            finite(c, "direction component")?;
        }
        let n = math::norm(v);
        if n == 0.0 {
            return Err(Error::InvalidParameter {
                name: "direction",
                reason: "must be non-zero",
            });
        }
        Ok(Self([v[0] / n, v[1] / n, v[2] / n]))
    }

    /// Components in receiving coordinates.
    pub fn components(&self) -> Vec3 {
        self.0
    }

    /// The opposite direction.
    pub fn negated(&self) -> Self {
        Self([-self.0[0], -self.0[1], -self.0[2]])
    }
}

/// An [`Assembly`] plus the receive orientation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssemblyParams {
    /// Lengths, distance and angle.
    pub assembly: Assembly,
    /// Receive orientation in receiving coordinates.
    pub v_hat: UnitVector,
}

/// `π·[x < 0] + arctan x`, an arctangent with range `[0, π)`.
pub fn arctan_star(x: f64) -> Result<f64> {
    finite(x, "arctan* argument")?;
    let shift = if x < 0.0 { PI } else { 0.0 };
    Ok(shift + math::atan(x))
}

/// Three-way sign: `1`, `0` or `-1`.
pub fn sign_star(x: f64) -> Result<i8> {
    finite(x, "sign* argument")?;
    Ok(if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    })
}

/// How the elevated source array is laid out relative to the ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SceneMode {
    /// Source along the world `z″` axis.
    Vertical,
    /// Source parallel to the world `x″` axis.
    Horizontal,
}

/// An elevated source array and a receive array lying on the ground plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenePlacement {
    mode: SceneMode,
    source_length: f64,
    source_height: f64,
    rx_center: (f64, f64),
    rx_length: f64,
}

impl ScenePlacement {
    /// `rx_center` is `(x″, y″)` with `y″ ≥ 0`; `rx_length` is the full
    /// receive length `2ρ`.
    pub fn new(
        mode: SceneMode,
        source_length: f64,
        source_height: f64,
        rx_center: (f64, f64),
        rx_length: f64,
    ) -> Result<Self> {
        positive(source_length, "source length")?;
        positive(source_height, "source height")?;
        positive(rx_length, "receive length")?;
        finite(rx_center.0, "receive x")?;
        finite(rx_center.1, "receive y")?;
        if rx_center.1 < 0.0 {
            return Err(Error::InvalidParameter {
                name: "receive y",
                reason: "must be non-negative",
            });
        }
        if mode == SceneMode::Vertical && source_height <= 0.5 * source_length {
            return Err(Error::InvalidParameter {
                name: "source height",
                reason: "vertical source must clear the ground (height > L/2)",
            });
        }
        Ok(Self {
            mode,
            source_length,
            source_height,
            rx_center,
            rx_length,
        })
    }

    /// Same scene with the receive array moved.
    pub fn at(&self, rx_center: (f64, f64)) -> Result<Self> {
        Self::new(
            self.mode,
            self.source_length,
            self.source_height,
            rx_center,
            self.rx_length,
        )
    }

    /// Layout of the source.
    pub fn mode(&self) -> SceneMode {
        self.mode
    }

    /// Source length `L`.
    pub fn source_length(&self) -> f64 {
        self.source_length
    }

    /// Height `z″` of the source centre.
    pub fn source_height(&self) -> f64 {
        self.source_height
    }

    /// Ground position `(x″, y″)` of the receive centre.
    pub fn rx_center(&self) -> (f64, f64) {
        self.rx_center
    }

    /// Receive length `2ρ`.
    pub fn rx_length(&self) -> f64 {
        self.rx_length
    }

    /// Source-to-receive centre distance.
    pub fn distance(&self) -> f64 {
        let (x, y) = self.rx_center;
        math::sqrt(x * x + y * y + self.source_height * self.source_height)
    }
}

/// A scene mapped into receiving coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalScene {
    /// Local assembly, `ρ = L_r / 2`, and receive orientation.
    pub params: AssemblyParams,
    /// `γ(o)` for vertical scenes, `ψ(o)` for horizontal ones.
    pub angle: f64,
    /// Receive-array projections onto `ê_x`, `ê_y`, `ê_z`.
    pub projections: Vec3,
    /// Set when the receive centre sits directly below a vertical source and
    /// `γ` was fixed to zero by convention.
    pub degenerate: bool,
}

fn check_orientation(phi: f64) -> Result<f64> {
    finite(phi, "orientation angle")?;
    if !(0.0..=PI).contains(&phi) {
        return Err(Error::InvalidParameter {
            name: "orientation angle",
            reason: "must lie in [0, pi]",
        });
    }
    Ok(phi)
}

/// Maps a vertical-source scene and receive orientation `φ` (angle to the
/// `x″` axis) into receiving coordinates.
///
/// `θ = arctan*(r₁ / z″)` and `γ = arccos(x″ / r₁)` with `r₁` the ground
/// distance of the receive centre from the source foot. The receive array is
/// horizontal, so its `ê_z` projection is always zero.
pub fn vertical_scene_to_local(scene: &ScenePlacement, phi: f64) -> Result<LocalScene> {
    if scene.mode != SceneMode::Vertical {
        return Err(Error::InvalidParameter {
            name: "scene mode",
            reason: "expected a vertical scene",
        });
    }
    let phi = check_orientation(phi)?;
    let (x, y) = scene.rx_center;
    let ground = math::hypot(x, y);
    let theta = arctan_star(ground / scene.source_height)?;
    let (gamma, degenerate) = if ground == 0.0 {
        (0.0, true)
    } else {
        (math::acos(x / ground), false)
    };

    let delta = phi - gamma;
    let v = [math::cos(delta), math::sin(delta), 0.0];
    let lr = scene.rx_length;
    let assembly = Assembly::new(scene.source_length, 0.5 * lr, scene.distance(), theta)?;
    Ok(LocalScene {
        params: AssemblyParams {
            assembly,
            v_hat: UnitVector::normalize(v)?,
        },
        angle: gamma,
        projections: [lr * v[0].abs(), lr * v[1].abs(), 0.0],
        degenerate,
    })
}

/// Maps a horizontal-source scene and receive orientation `φ` into receiving
/// coordinates.
///
/// With `r₂ = √(y″² + z″²)`: `θ = arctan*(r₂ / x″)` (`π/2` when `x″ = 0`) and
/// `ψ = arccos(y″ / r₂)` is the tilt of the source/receive plane against the
/// ground.
pub fn horizontal_scene_to_local(scene: &ScenePlacement, phi: f64) -> Result<LocalScene> {
    if scene.mode != SceneMode::Horizontal {
        return Err(Error::InvalidParameter {
            name: "scene mode",
            reason: "expected a horizontal scene",
        });
    }
    let phi = check_orientation(phi)?;
    let (x, y) = scene.rx_center;
    let r2 = math::hypot(y, scene.source_height);
    let theta = if x == 0.0 {
        FRAC_PI_2
    } else {
        arctan_star(r2 / x)?
    };
    let psi = math::acos(y / r2);

    let (sin_phi, cos_phi) = (math::sin(phi), math::cos(phi));
    let (sin_psi, cos_psi) = (math::sin(psi), math::cos(psi));
    let v = [sin_phi * cos_psi, sin_phi * sin_psi, cos_phi];
    let lr = scene.rx_length;
    let assembly = Assembly::new(scene.source_length, 0.5 * lr, scene.distance(), theta)?;
    Ok(LocalScene {
        params: AssemblyParams {
            assembly,
            v_hat: UnitVector::normalize(v)?,
        },
        angle: psi,
        projections: [lr * v[0].abs(), lr * v[1].abs(), lr * cos_phi.abs()],
        degenerate: false,
    })
}

/// Dispatches to the transform matching the scene's mode.
pub fn scene_to_local(scene: &ScenePlacement, phi: f64) -> Result<LocalScene> {
    match scene.mode {
        SceneMode::Vertical => vertical_scene_to_local(scene, phi),
        SceneMode::Horizontal => horizontal_scene_to_local(scene, phi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use core::f64::consts::FRAC_PI_4;

    #[test]
    fn arctan_star_values() {
        assert_eq!(arctan_star(0.0).unwrap(), 0.0);
        assert_relative_eq!(arctan_star(1.0).unwrap(), FRAC_PI_4);
        assert_relative_eq!(arctan_star(-1.0).unwrap(), 3.0 * FRAC_PI_4);
        assert!(arctan_star(f64::NAN).is_err());
        assert!(arctan_star(f64::INFINITY).is_err());
    }

    #[test]
    fn arctan_star_monotone_per_half_line() {
        let xs: alloc::vec::Vec<f64> = (1..2000).map(|i| libm::exp(-10.0 + 0.01 * i as f64)).collect();
        for w in xs.windows(2) {
            assert!(arctan_star(w[1]).unwrap() > arctan_star(w[0]).unwrap());
            assert!(arctan_star(-w[0]).unwrap() > arctan_star(-w[1]).unwrap());
        }
        assert!(arctan_star(1e12).unwrap() < FRAC_PI_2);
        assert!(arctan_star(-1e12).unwrap() > FRAC_PI_2);
        assert!(arctan_star(-1e-12).unwrap() < PI);
    }

    #[test]
    fn sign_star_values() {
        assert_eq!(sign_star(0.0).unwrap(), 0);
        assert_eq!(sign_star(-0.0).unwrap(), 0);
        assert_eq!(sign_star(-3.2).unwrap(), -1);
        assert_eq!(sign_star(1e-300).unwrap(), 1);
        assert!(sign_star(f64::NAN).is_err());
    }

    #[test]
    fn placement_derived_quantities() {
        let p = Placement::new(400.0, 1000.0, PI / 3.0).unwrap();
        assert_relative_eq!(p.transverse(), 1000.0 * (PI / 3.0).sin(), epsilon = 1e-12);
        assert!(p.upper_end() > p.lower_end());
        assert!(p.far_end() > p.near_end());
        assert!(p.far_end() > 0.0);
        assert_relative_eq!(p.upper_end() - p.lower_end(), 400.0, epsilon = 1e-9);
    }

    #[test]
    fn placement_validation() {
        assert!(Placement::new(0.0, 1.0, 0.1).is_err());
        assert!(Placement::new(1.0, -1.0, 0.1).is_err());
        assert!(Placement::new(1.0, 1.0, -0.1).is_err());
        assert!(Placement::new(1.0, 1.0, 3.2).is_err());
        assert!(Placement::new(1.0, 1.0, PI).is_ok());
        assert!(Assembly::new(1.0, 0.0, 1.0, 0.1).is_err());
        assert!(UnitVector::new([1.0, 1.0, 0.0]).is_err());
        assert!(UnitVector::normalize([0.0, 0.0, 0.0]).is_err());
    }

    fn vertical(x: f64, y: f64, h: f64) -> ScenePlacement {
        ScenePlacement::new(SceneMode::Vertical, 400.0, h, (x, y), 40.0).unwrap()
    }

    fn horizontal(x: f64, y: f64) -> ScenePlacement {
        ScenePlacement::new(SceneMode::Horizontal, 400.0, 200.0, (x, y), 40.0).unwrap()
    }

    #[test]
    fn vertical_collinear_case() {
        let s = vertical_scene_to_local(&vertical(100.0, 0.0, 400.0), 0.0).unwrap();
        assert_eq!(s.angle, 0.0);
        assert_relative_eq!(s.params.assembly.placement().theta(), (100.0f64 / 400.0).atan());
        assert_relative_eq!(s.projections[0], 40.0);
        assert_eq!(s.projections[2], 0.0);
        assert!(!s.degenerate);
    }

    #[test]
    fn vertical_symmetric_case() {
        let s = vertical_scene_to_local(&vertical(0.0, 100.0, 400.0), FRAC_PI_2).unwrap();
        assert_relative_eq!(s.angle, FRAC_PI_2);
        assert_relative_eq!(s.projections[0], 40.0);
        assert!(s.projections[1] < 1e-12);
    }

    #[test]
    fn vertical_three_four_five() {
        let s = vertical_scene_to_local(&vertical(3.0, 4.0, 250.0), 1.0).unwrap();
        assert_relative_eq!(s.angle, (0.6f64).acos(), epsilon = 1e-15);
        assert_relative_eq!(s.params.assembly.placement().distance(), (25.0f64 + 62_500.0).sqrt());
    }

    #[test]
    fn vertical_origin_is_flagged() {
        let s = vertical_scene_to_local(&vertical(0.0, 0.0, 400.0), 0.7).unwrap();
        assert!(s.degenerate);
        assert_eq!(s.angle, 0.0);
    }

    #[test]
    fn vertical_rejects_ground_piercing_source() {
        assert!(ScenePlacement::new(SceneMode::Vertical, 400.0, 200.0, (1.0, 1.0), 40.0).is_err());
        assert!(ScenePlacement::new(SceneMode::Horizontal, 400.0, 200.0, (1.0, -1.0), 40.0).is_err());
    }

    #[test]
    fn vertical_rotation_invariance() {
        for k in 0..24 {
            let rot = 0.1 * k as f64;
            let base = vertical(300.0, 0.0, 400.0);
            let (x, y) = (300.0 * rot.cos(), 300.0 * rot.sin());
            if y < 0.0 {
                continue;
            }
            let phi0 = 0.2;
            let phi1 = phi0 + rot;
            if phi1 > PI {
                continue;
            }
            let a = vertical_scene_to_local(&base, phi0).unwrap();
            let b = vertical_scene_to_local(&vertical(x, y, 400.0), phi1).unwrap();
            let (pa, pb) = (a.params.assembly.placement(), b.params.assembly.placement());
            assert_relative_eq!(pa.distance(), pb.distance(), max_relative = 1e-12);
            assert_relative_eq!(pa.theta(), pb.theta(), max_relative = 1e-12);
            assert_relative_eq!(phi0 - a.angle, phi1 - b.angle, epsilon = 1e-12);
        }
    }

    #[test]
    fn horizontal_broadside_and_phi_zero() {
        let s = horizontal_scene_to_local(&horizontal(0.0, 150.0), 0.0).unwrap();
        assert_eq!(s.params.assembly.placement().theta(), FRAC_PI_2);
        assert_relative_eq!(s.projections[2], 40.0);
        assert!(s.projections[0] < 1e-12 && s.projections[1] < 1e-12);
    }

    #[test]
    fn horizontal_on_axis_row() {
        let s = horizontal_scene_to_local(&horizontal(250.0, 0.0), FRAC_PI_2).unwrap();
        assert_relative_eq!(s.angle, FRAC_PI_2);
        assert!(s.projections[0] < 1e-12);
        assert_relative_eq!(s.projections[1], 40.0);
    }

    #[test]
    fn horizontal_projections_sum_and_theta_mirror() {
        for &(x, y) in &[(120.0, 30.0), (-800.0, 5.0), (3.0, 2000.0), (-0.5, 0.0)] {
            for k in 0..=16 {
                let phi = PI * k as f64 / 16.0;
                let s = horizontal_scene_to_local(&horizontal(x, y), phi).unwrap();
                let p = s.projections;
                assert_relative_eq!(p[0] * p[0] + p[1] * p[1] + p[2] * p[2], 1600.0, max_relative = 1e-10);
                let m = horizontal_scene_to_local(&horizontal(-x, y), phi).unwrap();
                assert_relative_eq!(
                    s.params.assembly.placement().theta() + m.params.assembly.placement().theta(),
                    PI,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn vertical_projections_sum() {
        for k in 0..=16 {
            let phi = PI * k as f64 / 16.0;
            let s = vertical_scene_to_local(&vertical(-70.0, 310.0, 400.0), phi).unwrap();
            let p = s.projections;
            assert_relative_eq!(p[0] * p[0] + p[1] * p[1] + p[2] * p[2], 1600.0, max_relative = 1e-10);
        }
    }

    #[test]
    fn orientation_outside_range_rejected() {
        assert!(vertical_scene_to_local(&vertical(1.0, 1.0, 400.0), -0.1).is_err());
        assert!(horizontal_scene_to_local(&horizontal(1.0, 1.0), 3.2).is_err());
        assert!(horizontal_scene_to_local(&vertical(1.0, 1.0, 400.0), 0.0).is_err());
    }
}

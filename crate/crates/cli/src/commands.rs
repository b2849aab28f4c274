//! Subcommand arguments and implementations.
//!
//! Every argument struct doubles as its config-file section: fields are
//! optional so that unset flags fall through to the file, and defaults are
//! applied afterwards. Defaults are in wavelengths and radians and are not
//! rescaled by `--wavelength` or `--degrees`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use losdof::bandwidth;
use losdof::channel::{self, ChannelSpec, NormMode};
use losdof::dof::{self, XInterval};
use losdof::geometry::{Assembly, ReceiveDirection, SceneMode, ScenePlacement, UnitVector};
use losdof::quadrature::DEFAULT_ABS_TOL;
use losdof::regions::{self, CurveSample, RegionKind};
use losdof::scenarios::{self, AxisRange, GroundGrid, KMap, OrientationPolicy, MASK_RADIUS};

use crate::output::{self, num};
use crate::units::Units;
use crate::{CliError, CliResult, DirectionArg, Globals};

const DEFAULT_LENGTH: f64 = 400.0;
const DEFAULT_RHO: f64 = 20.0;
const DEFAULT_RX_LENGTH: f64 = 40.0;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn length_or(v: Option<f64>, default: f64, u: &Units) -> f64 {
    v.map_or(default, |x| u.length_in(x))
}

fn angle_or(v: Option<f64>, default: f64, u: &Units) -> f64 {
    v.map_or(default, |x| u.angle_in(x))
}

/// `n ≥ 2` samples from `lo` to `hi`, hitting both ends exactly and
/// symmetric about the midpoint.
fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (mid, half) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let m = (n - 1) as f64;
    (0..n)
        .map(|k| match k {
            0 => lo,
            _ if k + 1 == n => hi,
            _ => mid + half * ((2 * k) as f64 - m) / m,
        })
        .collect()
}

/// Array geometry flags shared by several subcommands.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct GeometryArgs {
    /// Source array length L [default: 400 wavelengths].
    #[arg(long)]
    pub length: Option<f64>,
    /// Receive half-length ρ [default: 20 wavelengths].
    #[arg(long)]
    pub rho: Option<f64>,
    /// Distance r between the array centres.
    #[arg(long)]
    pub distance: Option<f64>,
    /// Polar angle θ in [0, π] [default: π/2].
    #[arg(long)]
    pub theta: Option<f64>,
    /// Receive orientation [default: z, or generic when --v-hat is given].
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Receive orientation vector `vx,vy,vz` in receiving coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v_hat: Option<Vec<f64>>,
}

impl GeometryArgs {
    fn assembly(&self, u: &Units, distance: Option<f64>) -> CliResult<Assembly> {
        let r = match distance {
            Some(r) => r,
            None => u.length_in(self.distance.ok_or_else(|| usage("missing --distance"))?),
        };
        Ok(Assembly::new(
            length_or(self.length, DEFAULT_LENGTH, u),
            length_or(self.rho, DEFAULT_RHO, u),
            r,
            angle_or(self.theta, FRAC_PI_2, u),
        )?)
    }

    fn direction(&self) -> CliResult<ReceiveDirection> {
        Ok(match (self.direction, &self.v_hat) {
            (None | Some(DirectionArg::Generic), Some(v)) => {
                let v: [f64; 3] = v
                    .as_slice()
                    .try_into()
                    .map_err(|_| usage("--v-hat needs exactly three components"))?;
                ReceiveDirection::Generic(UnitVector::normalize(v)?)
            }
            (Some(DirectionArg::Generic), None) => return Err(usage("--direction generic needs --v-hat")),
            (Some(_), Some(_)) => return Err(usage("--v-hat only applies to --direction generic")),
            (Some(DirectionArg::X), None) => ReceiveDirection::X,
            (Some(DirectionArg::Y), None) => ReceiveDirection::Y,
            (Some(DirectionArg::Z) | None, None) => ReceiveDirection::Z,
        })
    }
}

/// Arguments of `bandwidth-profile`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct BandwidthProfileArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: GeometryArgs,
    /// Number of samples over the effective interval [default: 201].
    #[arg(long)]
    pub samples: Option<usize>,
    /// Output CSV [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn bandwidth_profile(a: &BandwidthProfileArgs, g: &Globals) -> CliResult<()> {
    let u = &g.units;
    let assembly = a.geometry.assembly(u, None)?;
    let dir = a.geometry.direction()?;
    let n = a.samples.unwrap_or(201);
    if n < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let (lo, hi) = dof::summary(&assembly, dir)?.interval;
    let p = assembly.placement();
    let rows = linspace(lo, hi, n)
        .into_iter()
        .map(|l| Ok(vec![num(u.length_out(l)), num(bandwidth::bandwidth(dir, l, p)?)]))
        .collect::<CliResult<Vec<_>>>()?;
    output::write_csv(a.output.as_deref(), &["l", "w"], rows)
}

/// Interval used for the `ê_x` bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XIntervalArg {
    /// `[−min(d, ρ), ρ]`.
    Exact,
    /// `[−ρ, ρ]`.
    Full,
}

/// Arguments of `k-number`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct KNumberArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: GeometryArgs,
    /// Interval for the x-direction bounds [default: exact].
    #[arg(long, value_enum)]
    pub x_interval: Option<XIntervalArg>,
    /// Absolute quadrature tolerance [default: 1e-8].
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output JSON [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct KNumberJson {
    k_exact: f64,
    k_upper: f64,
    k_lower: f64,
    k_linear: f64,
    quadrature_abs_err: f64,
    warnings: Vec<&'static str>,
}

pub fn k_number(a: &KNumberArgs, g: &Globals) -> CliResult<()> {
    let assembly = a.geometry.assembly(&g.units, None)?;
    let dir = a.geometry.direction()?;
    let x = match a.x_interval {
        Some(XIntervalArg::Full) => XInterval::Full,
        _ => XInterval::Exact,
    };
    let r = dof::k_number_with(&assembly, dir, x, a.tol.unwrap_or(DEFAULT_ABS_TOL))?;
    let json = KNumberJson {
        k_exact: r.k_exact,
        k_upper: r.k_upper,
        k_lower: r.k_lower,
        k_linear: r.k_linear,
        quadrature_abs_err: r.quadrature_abs_err,
        warnings: r.warnings.iter().map(|w| w.tag()).collect(),
    };
    output::write_json(a.output.as_deref(), &json)
}

/// Arguments of `k-grid`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct KGridArgs {
    /// Source array length L [default: 400 wavelengths].
    #[arg(long)]
    pub length: Option<f64>,
    /// Receive half-length ρ [default: 20 wavelengths].
    #[arg(long)]
    pub rho: Option<f64>,
    /// Receive orientation [default: z, or generic when --v-hat is given].
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Receive orientation vector `vx,vy,vz` in receiving coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub v_hat: Option<Vec<f64>>,
    /// Smallest distance [default: 10 wavelengths].
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Largest distance [default: 1000 wavelengths].
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of distances [default: 100].
    #[arg(long)]
    pub r_steps: Option<usize>,
    /// First polar angle [default: 0].
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Last polar angle [default: π].
    #[arg(long)]
    pub theta_max: Option<f64>,
    /// Number of polar angles [default: 91].
    #[arg(long)]
    pub theta_steps: Option<usize>,
    /// Interval for the x-direction bounds [default: exact].
    #[arg(long, value_enum)]
    pub x_interval: Option<XIntervalArg>,
    /// Output CSV [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

pub fn k_grid(a: &KGridArgs, g: &Globals) -> CliResult<()> {
    let u = &g.units;
    let geometry = GeometryArgs {
        direction: a.direction,
        v_hat: a.v_hat.clone(),
        ..Default::default()
    };
    let dir = geometry.direction()?;
    let length = length_or(a.length, DEFAULT_LENGTH, u);
    let rho = length_or(a.rho, DEFAULT_RHO, u);
    let x = match a.x_interval {
        Some(XIntervalArg::Full) => XInterval::Full,
        _ => XInterval::Exact,
    };
    let (nr, nt) = (a.r_steps.unwrap_or(100), a.theta_steps.unwrap_or(91));
    if nr < 2 || nt < 2 {
        return Err(usage("--r-steps and --theta-steps must be at least 2"));
    }
    let rs = linspace(length_or(a.r_min, 10.0, u), length_or(a.r_max, 1000.0, u), nr);
    let ts = linspace(angle_or(a.theta_min, 0.0, u), angle_or(a.theta_max, PI, u), nt);
    // Reject bad ranges up front rather than as empty cells.
    for (r, t) in [(rs[0], ts[0]), (rs[nr - 1], ts[nt - 1])] {
        Assembly::new(length, rho, r, t)?;
    }
    let cells = g.install(|| {
        (0..nr * nt)
            .into_par_iter()
            .map(|i| {
                let (r, t) = (rs[i / nt], ts[i % nt]);
                Assembly::new(length, rho, r, t)
                    .and_then(|asm| dof::k_number_with(&asm, dir, x, DEFAULT_ABS_TOL))
                    .ok()
            })
            .collect::<Vec<_>>()
    })?;
    let rows = cells.iter().enumerate().map(|(i, rep)| {
        let mut row = vec![num(u.length_out(rs[i / nt])), num(u.angle_out(ts[i % nt]))];
        match rep {
            Some(k) => row.extend([k.k_exact, k.k_upper, k.k_lower, k.k_linear].map(num)),
            None => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        row
    });
    output::write_csv(
        a.output.as_deref(),
        &["r", "theta", "k_exact", "k_upper", "k_lower", "k_linear"],
        rows,
    )
}

/// Boundary family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    /// Spatial multiplexing region, threshold K₀.
    Smr,
    /// Non-constant-bandwidth region, threshold ΔK.
    Ncsmr,
}

/// Arguments of `region-boundary`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct RegionBoundaryArgs {
    /// Receive direction: x, y or z [default: z].
    #[arg(long, value_enum)]
    pub direction: Option<DirectionArg>,
    /// Boundary family [default: smr].
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// K₀ for smr, ΔK for ncsmr [default: 1].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Source array length L [default: 400 wavelengths].
    #[arg(long)]
    pub length: Option<f64>,
    /// Receive half-length ρ [default: 20 wavelengths].
    #[arg(long)]
    pub rho: Option<f64>,
    /// First polar angle [default: 0].
    #[arg(long)]
    pub theta_min: Option<f64>,
    /// Last polar angle [default: π].
    #[arg(long)]
    pub theta_max: Option<f64>,
    /// Number of polar angles [default: 181].
    #[arg(long)]
    pub theta_steps: Option<usize>,
    /// Explicit increasing list of polar angles; replaces the range.
    #[arg(long, value_delimiter = ',')]
    pub thetas: Option<Vec<f64>>,
    /// Output CSV [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl RegionBoundaryArgs {
    fn grid(&self, u: &Units) -> CliResult<Vec<f64>> {
        if let Some(ts) = &self.thetas {
            if self.theta_min.is_some() || self.theta_max.is_some() || self.theta_steps.is_some() {
                return Err(usage("--thetas cannot be combined with --theta-min/--theta-max/--theta-steps"));
            }
            return Ok(ts.iter().map(|&t| u.angle_in(t)).collect());
        }
        let n = self.theta_steps.unwrap_or(181);
        match n {
            0 => Ok(Vec::new()),
            1 => Ok(vec![angle_or(self.theta_min, 0.0, u)]),
            _ => Ok(linspace(angle_or(self.theta_min, 0.0, u), angle_or(self.theta_max, PI, u), n)),
        }
    }
}

pub fn region_boundary(a: &RegionBoundaryArgs, g: &Globals) -> CliResult<()> {
    let u = &g.units;
    let dir = match a.direction.unwrap_or(DirectionArg::Z) {
        DirectionArg::X => ReceiveDirection::X,
        DirectionArg::Y => ReceiveDirection::Y,
        DirectionArg::Z => ReceiveDirection::Z,
        DirectionArg::Generic => return Err(usage("region boundaries exist for x, y and z only")),
    };
    let kind = match a.kind.unwrap_or(KindArg::Smr) {
        KindArg::Smr => RegionKind::Smr,
        KindArg::Ncsmr => RegionKind::Ncsmr,
    };
    let length = length_or(a.length, DEFAULT_LENGTH, u);
    let rho = length_or(a.rho, DEFAULT_RHO, u);
    let threshold = a.threshold.unwrap_or(1.0);
    let thetas = a.grid(u)?;
    // Validate the whole grid (ordering, range, direction/kind) before
    // fanning out.
    if let Some(&t) = thetas.first() {
        regions::boundary_curve(dir, kind, &[t], length, rho, threshold)?;
    }
    if thetas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(usage("polar angles must be strictly increasing"));
    }
    let samples = g.install(|| {
        thetas
            .par_iter()
            .map(|&t| {
                let curve = regions::boundary_curve(dir, kind, &[t], length, rho, threshold)?;
                Ok(curve.samples.into_iter().next().unwrap_or(CurveSample { theta: t, radii: Vec::new() }))
            })
            .collect::<CliResult<Vec<_>>>()
    })??;
    let rows = samples.iter().flat_map(|s| {
        s.radii
            .iter()
            .enumerate()
            .map(|(i, &r)| vec![num(u.angle_out(s.theta)), num(u.length_out(r)), i.to_string()])
    });
    output::write_csv(a.output.as_deref(), &["theta", "radius", "root_index"], rows)
}

/// Arguments of `channel-svd`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ChannelSvdArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub geometry: GeometryArgs,
    /// Place the arrays at the boresight distance where the z-direction K
    /// number equals this value (instead of --distance).
    #[arg(long)]
    pub boresight_k: Option<f64>,
    /// Source antenna spacing Δ_s [default: 0.5 wavelengths].
    #[arg(long)]
    pub source_spacing: Option<f64>,
    /// Receive antenna spacing Δ_r [default: 0.5 wavelengths].
    #[arg(long)]
    pub receive_spacing: Option<f64>,
    /// Use the Nyquist receive spacing 2ρ/K for this K (instead of
    /// --receive-spacing).
    #[arg(long)]
    pub receive_nyquist: Option<f64>,
    /// Max-normalised level counted as usable [default: 0.3].
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Output CSV [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON sidecar [default: the output path with a .json extension].
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
    /// Also write the channel matrix as CSV with `re_j,im_j` column pairs.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct SvdSidecar {
    n_t: usize,
    n_r: usize,
    usable_count: usize,
    threshold: f64,
}

pub fn channel_svd(a: &ChannelSvdArgs, g: &Globals) -> CliResult<()> {
    let u = &g.units;
    let length = length_or(a.geometry.length, DEFAULT_LENGTH, u);
    let rho = length_or(a.geometry.rho, DEFAULT_RHO, u);
    let distance = match (a.boresight_k, a.geometry.distance) {
        (Some(_), Some(_)) => return Err(usage("--boresight-k and --distance are exclusive")),
        (Some(k), None) => Some(regions::rz_boresight(length, rho, k)?),
        (None, _) => None,
    };
    let assembly = a.geometry.assembly(u, distance)?;
    let receive_spacing = match (a.receive_nyquist, a.receive_spacing) {
        (Some(_), Some(_)) => return Err(usage("--receive-nyquist and --receive-spacing are exclusive")),
        (Some(k), None) => channel::nyquist_spacing(k, rho)?,
        (None, s) => length_or(s, 0.5, u),
    };
    let spec = ChannelSpec {
        assembly,
        direction: a.geometry.direction()?,
        source_spacing: length_or(a.source_spacing, 0.5, u),
        receive_spacing,
    };
    let threshold = a.threshold.unwrap_or(channel::USABLE_THRESHOLD);
    if !(threshold.is_finite() && threshold >= 0.0) {
        return Err(usage("--threshold must be a non-negative number"));
    }
    let h = channel::build_channel(&spec).map_err(|e| match e {
        losdof::Error::NonDivisibleSpacing { spacing, length, below, above } => usage(format!(
            "spacing {} does not divide length {}; nearest valid spacings are {} and {}",
            u.length_out(spacing),
            u.length_out(length),
            u.length_out(below),
            u.length_out(above)
        )),
        e => e.into(),
    })?;
    let s = channel::singular_spectrum(&h)?;
    let max = channel::normalized_spectrum(&s, NormMode::MaxNorm)?;
    let sum = channel::normalized_spectrum(&s, NormMode::SumNorm)?;
    let rows = (0..s.sigmas.len()).map(|i| vec![(i + 1).to_string(), num(s.sigmas[i]), num(max[i]), num(sum[i])]);
    output::write_csv(a.output.as_deref(), &["index", "sigma", "sigma_maxnorm", "sigma_sumnorm"], rows)?;

    let sidecar = SvdSidecar {
        n_t: h.ncols(),
        n_r: h.nrows(),
        usable_count: channel::usable_count(&s, threshold),
        threshold,
    };
    if let Some(p) = output::sidecar_path(a.sidecar.as_deref(), a.output.as_deref()) {
        output::write_json(Some(&p), &sidecar)?;
    }
    if let Some(p) = &a.matrix {
        let header: Vec<String> = (0..h.ncols()).flat_map(|j| [format!("re_{j}"), format!("im_{j}")]).collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = (0..h.nrows()).map(|i| {
            (0..h.ncols())
                .flat_map(|j| {
                    let z = h[(i, j)];
                    [num(z.re), num(z.im)]
                })
                .collect()
        });
        output::write_csv(Some(p), &header, rows)?;
    }
    Ok(())
}

/// Source array layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Vertical,
    Horizontal,
}

/// Receive orientation rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyArg {
    /// The same angle --phi everywhere.
    Fixed,
    /// Point along the ground ray from the source foot.
    Gamma,
    /// Bandwidth-weighted angle for horizontal sources.
    HControl,
}

/// Arguments of `scenario-map`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct ScenarioMapArgs {
    /// Source array layout [default: vertical].
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Source array length L [default: 400 wavelengths].
    #[arg(long)]
    pub length: Option<f64>,
    /// Source centre height [default: 400 vertical, 200 horizontal].
    #[arg(long)]
    pub height: Option<f64>,
    /// Receive array length 2ρ [default: 40 wavelengths].
    #[arg(long)]
    pub rx_length: Option<f64>,
    /// Orientation rule [default: gamma vertical, h-control horizontal;
    /// fixed when --phi is given].
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    /// Orientation angle to the x″ axis for the fixed policy.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Grid x″ minimum [default: −1000 vertical, −16000 horizontal].
    #[arg(long)]
    pub x_min: Option<f64>,
    /// Grid x″ maximum [default: 1000 vertical, 16000 horizontal].
    #[arg(long)]
    pub x_max: Option<f64>,
    /// Grid x″ samples [default: 101].
    #[arg(long)]
    pub x_steps: Option<usize>,
    /// Grid y″ minimum, at least 0 [default: 0].
    #[arg(long)]
    pub y_min: Option<f64>,
    /// Grid y″ maximum [default: 1000 vertical, 16000 horizontal].
    #[arg(long)]
    pub y_max: Option<f64>,
    /// Grid y″ samples [default: 51].
    #[arg(long)]
    pub y_steps: Option<usize>,
    /// Display cutoff recorded in the metadata [default: none vertical, 20
    /// horizontal]. Values are written unclipped.
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Output CSV [default: stdout].
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// JSON metadata [default: the output path with a .json extension].
    #[arg(long)]
    pub metadata: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
struct AxisMeta {
    min: f64,
    max: f64,
    steps: usize,
}

#[derive(Debug, Serialize)]
struct MapEnvelope {
    mode: &'static str,
    source_length: f64,
    source_height: f64,
    rx_length: f64,
    policy: &'static str,
    phi: Option<f64>,
    x: AxisMeta,
    y: AxisMeta,
    order: &'static str,
    cutoff: Option<f64>,
    mask_radius: f64,
    length_unit: &'static str,
    angle_unit: &'static str,
    wavelength_m: Option<f64>,
    points: usize,
    missing: usize,
    k_max: Option<f64>,
}

pub fn scenario_map(a: &ScenarioMapArgs, g: &Globals) -> CliResult<()> {
    let u = &g.units;
    let mode = a.mode.unwrap_or(ModeArg::Vertical);
    let (scene_mode, height, extent, cutoff) = match mode {
        ModeArg::Vertical => (SceneMode::Vertical, 400.0, 1000.0, None),
        ModeArg::Horizontal => (SceneMode::Horizontal, 200.0, 16000.0, Some(20.0)),
    };
    let policy = match (a.policy, a.phi) {
        (Some(PolicyArg::Fixed) | None, Some(phi)) => OrientationPolicy::Fixed(u.angle_in(phi)),
        (Some(PolicyArg::Fixed), None) => return Err(usage("--policy fixed needs --phi")),
        (Some(_), Some(_)) => return Err(usage("--phi only applies to --policy fixed")),
        (Some(PolicyArg::Gamma), None) => OrientationPolicy::Gamma,
        (Some(PolicyArg::HControl), None) => OrientationPolicy::HControl,
        (None, None) => match mode {
            ModeArg::Vertical => OrientationPolicy::Gamma,
            ModeArg::Horizontal => OrientationPolicy::HControl,
        },
    };
    let scene = ScenePlacement::new(
        scene_mode,
        length_or(a.length, DEFAULT_LENGTH, u),
        length_or(a.height, height, u),
        (0.0, 0.0),
        length_or(a.rx_length, DEFAULT_RX_LENGTH, u),
    )?;
    scenarios::check_policy(&scene, policy)?;
    let grid = GroundGrid::new(
        AxisRange::new(
            length_or(a.x_min, -extent, u),
            length_or(a.x_max, extent, u),
            a.x_steps.unwrap_or(101),
        )?,
        AxisRange::new(length_or(a.y_min, 0.0, u), length_or(a.y_max, extent, u), a.y_steps.unwrap_or(51))?,
    )?;
    let values = g.install(|| {
        (0..grid.len())
            .into_par_iter()
            .map(|i| scenarios::k_map_value(&scene, policy, &grid, i))
            .collect::<Vec<_>>()
    })?;
    let map = KMap::from_values(grid, policy, values, a.cutoff.or(cutoff))?;

    let rows = map.values.iter().enumerate().map(|(i, k)| {
        let (x, y) = map.grid.point(i);
        vec![num(u.length_out(x)), num(u.length_out(y)), k.map_or_else(String::new, num)]
    });
    output::write_csv(a.output.as_deref(), &["x", "y", "k"], rows)?;

    let axis = |r: &AxisRange| AxisMeta {
        min: u.length_out(r.min),
        max: u.length_out(r.max),
        steps: r.steps,
    };
    let (policy_name, phi) = match map.policy {
        OrientationPolicy::Fixed(phi) => ("fixed", Some(u.angle_out(phi))),
        OrientationPolicy::Gamma => ("gamma", None),
        OrientationPolicy::HControl => ("h-control", None),
    };
    let envelope = MapEnvelope {
        mode: match mode {
            ModeArg::Vertical => "vertical",
            ModeArg::Horizontal => "horizontal",
        },
        source_length: u.length_out(scene.source_length()),
        source_height: u.length_out(scene.source_height()),
        rx_length: u.length_out(scene.rx_length()),
        policy: policy_name,
        phi,
        x: axis(&map.grid.x),
        y: axis(&map.grid.y),
        order: "row-major, index = iy * x.steps + ix",
        cutoff: map.cutoff,
        mask_radius: u.length_out(MASK_RADIUS),
        length_unit: u.length_unit(),
        angle_unit: u.angle_unit(),
        wavelength_m: u.wavelength,
        points: map.values.len(),
        missing: map.values.iter().filter(|v| v.is_none()).count(),
        k_max: map.values.iter().flatten().copied().reduce(f64::max),
    };
    if let Some(p) = output::sidecar_path(a.metadata.as_deref(), a.output.as_deref()) {
        output::write_json(Some(&p), &envelope)?;
    }
    Ok(())
}

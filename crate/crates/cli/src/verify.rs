//! `verify`: seeded random sweep comparing the library against brute-force
//! oracles that only use vector geometry.

use std::f64::consts::{FRAC_PI_2, PI};

use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use losdof::bandwidth;
use losdof::dof;
use losdof::geometry::{Assembly, Placement, ReceiveDirection, UnitVector};
use losdof::regions;

use crate::{CliError, CliResult, Globals};

/// Arguments of `verify`.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// RNG seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random geometries per check [default: 200].
    #[arg(long)]
    pub draws: Option<usize>,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const AXES: [ReceiveDirection; 3] = [ReceiveDirection::X, ReceiveDirection::Y, ReceiveDirection::Z];

fn golden_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-14 * (1.0 + a.abs().max(b.abs())) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    [fc, fd, f(a), f(b)].into_iter().fold(f64::MIN, f64::max)
}

/// `(max, min)` of `f` on `[lo, hi]` by an `n`-point scan refined around the
/// best samples.
fn scan_extrema(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    if hi <= lo {
        let v = f(lo);
        return (v, v);
    }
    let xs: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let imax = (0..n).max_by(|&i, &j| ys[i].total_cmp(&ys[j])).unwrap_or(0);
    let imin = (0..n).min_by(|&i, &j| ys[i].total_cmp(&ys[j])).unwrap_or(0);
    let nb = |i: usize| (xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)]);
    let (a, b) = nb(imax);
    let max = golden_max(f, a, b).max(ys[imax]);
    let (a, b) = nb(imin);
    let min = (-golden_max(&|x| -f(x), a, b)).min(ys[imin]);
    (max, min)
}

type V3 = [f64; 3];

fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Spread of `⟨r̂, v⟩` over the source segment, seen from `l·v`.
fn brute_bandwidth(p: &Placement, v: V3, l: f64) -> f64 {
    let c = p.source_center();
    let at = [l * v[0], l * v[1], l * v[2]];
    let g = |t: f64| {
        let r = [at[0] - c[0], at[1] - c[1], at[2] - c[2] - t];
        dot(r, v) / dot(r, r).sqrt()
    };
    let half = 0.5 * p.length();
    let (max, min) = scan_extrema(&g, -half, half, 129);
    max - min
}

fn brute_k(a: &Assembly, v: V3, panels: usize) -> f64 {
    let (p, rho) = (a.placement(), a.half_length());
    let h = 2.0 * rho / panels as f64;
    let inner: f64 = (1..panels).map(|k| brute_bandwidth(p, v, -rho + h * k as f64)).sum();
    h * (0.5 * (brute_bandwidth(p, v, -rho) + brute_bandwidth(p, v, rho)) + inner)
}

fn draw(rng: &mut ChaCha8Rng) -> Assembly {
    loop {
        let length = rng.gen_range(10.0..1000.0);
        let rho = rng.gen_range(1.0..50.0);
        let near = 0.5 * length + rho + 1.0;
        let r = near * rng.gen_range(0.0f64..50f64.ln()).exp();
        let theta = rng.gen_range(0.0..PI);
        if let Ok(a) = Assembly::new(length, rho, r, theta) {
            return a;
        }
    }
}

fn unit(rng: &mut ChaCha8Rng) -> UnitVector {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n2 = dot(v, v);
        if n2 > 1e-3 && n2 <= 1.0 {
            if let Ok(u) = UnitVector::normalize(v) {
                return u;
            }
        }
    }
}

struct Check {
    name: &'static str,
    tol: f64,
    worst: f64,
    cases: usize,
}

impl Check {
    fn new(name: &'static str, tol: f64) -> Self {
        Self { name, tol, worst: 0.0, cases: 0 }
    }

    fn record(&mut self, err: f64) {
        self.cases += 1;
        if err.is_nan() || err > self.worst {
            self.worst = err;
        }
    }

    fn pass(&self) -> bool {
        // NaN fails.
        self.worst <= self.tol
    }
}

/// Runs every check and prints one line per check; fails with exit code 3
/// when any check exceeds its tolerance.
pub fn run(a: &VerifyArgs, _g: &Globals) -> CliResult<()> {
    let seed = a.seed.unwrap_or(0);
    let draws = a.draws.unwrap_or(200);
    if draws == 0 {
        return Err(CliError::Usage("--draws must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut extrema = Check::new("closed-form extrema vs source scan", 1e-8);
    let mut sandwich = Check::new("k_lower <= k_exact <= k_upper", 1e-7);
    let mut integral = Check::new("k_exact vs trapezoid of scanned bandwidth", 1e-3);
    let mut symmetry = Check::new("theta <-> pi - theta mirror identities", 1e-12);
    let mut reversal = Check::new("k_exact under v -> -v", 1e-6);
    let mut boresight = Check::new("k_upper = 1 at the R0 distance", 1e-9);

    for i in 0..draws {
        let asm = draw(&mut rng);
        let p = *asm.placement();
        for dir in AXES {
            let s = bandwidth::extrema(&asm, dir).ok_or_else(|| CliError::Usage("no closed form".into()))?;
            let (lo, hi) = bandwidth::effective_interval(&asm, dir);
            let v = dir.unit_vector();
            let (max, min) = scan_extrema(&|l| brute_bandwidth(&p, v, l), lo, hi, 257);
            extrema.record((s.w_max - max).abs().max((s.w_min - min).abs()));

            let r = dof::k_number(&asm, dir)?;
            let slack = r.quadrature_abs_err.max(1e-12);
            sandwich.record((r.k_lower - r.k_exact - slack).max(r.k_exact - r.k_upper - slack).max(0.0));
        }

        let v = unit(&mut rng);
        let gen = dof::k_number(&asm, ReceiveDirection::Generic(v))?;
        let slack = gen.quadrature_abs_err.max(1e-12);
        sandwich.record((gen.k_lower - gen.k_exact - slack).max(gen.k_exact - gen.k_upper - slack).max(0.0));
        let back = dof::k_number(&asm, ReceiveDirection::Generic(v.negated()))?;
        reversal.record((gen.k_exact - back.k_exact).abs());

        if i < 20 {
            let k = dof::k_number(&asm, ReceiveDirection::Z)?.k_exact;
            integral.record((k - brute_k(&asm, [0.0, 0.0, 1.0], 400)).abs() / k.max(1.0));
        }

        let theta = FRAC_PI_2 + rng.gen_range(0.0..FRAC_PI_2);
        let obtuse = Placement::new(p.length(), p.distance(), theta)?;
        let acute = Placement::new(p.length(), p.distance(), PI - theta)?;
        let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        let l = rng.gen_range(-asm.half_length()..asm.half_length());
        symmetry.record(
            rel(bandwidth::bandwidth_z(l, &obtuse), bandwidth::bandwidth_z(-l, &acute))
                .max(rel(bandwidth::bandwidth_x(l, &obtuse), bandwidth::bandwidth_x(l, &acute)))
                .max(rel(bandwidth::bandwidth_y(l, &obtuse), bandwidth::bandwidth_y(l, &acute)))
                .max(rel(bandwidth::bandwidth_y(l, &obtuse), bandwidth::bandwidth_y(-l, &obtuse))),
        );

        let r0 = regions::r0_threshold(p.length(), asm.half_length())?;
        if let Some(r) = r0.exact {
            let at = Assembly::new(p.length(), asm.half_length(), r, FRAC_PI_2)?;
            boresight.record((dof::k_number(&at, ReceiveDirection::Z)?.k_upper - 1.0).abs());
        }
    }

    let checks = [extrema, sandwich, integral, symmetry, reversal, boresight];
    println!("verify: seed {seed}, {draws} draws");
    for c in &checks {
        println!(
            "check [{}] {}: worst {:.3e} (tol {:.0e}, {} cases)",
            if c.pass() { "PASS" } else { "FAIL" },
            c.name,
            c.worst,
            c.tol,
            c.cases
        );
    }
    match checks.iter().filter(|c| !c.pass()).count() {
        0 => Ok(()),
        n => Err(CliError::VerifyFailed(n)),
    }
}

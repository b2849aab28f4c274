//! Adaptive Gauss–Kronrod quadrature (7-point Gauss, 15-point Kronrod).
//!
//! Panels are bisected until each one's Kronrod/Gauss disagreement is below
//! its share of the absolute tolerance, or the refinement depth runs out.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Result of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    /// Integral estimate.
    pub value: f64,
    /// Sum of the per-panel error estimates.
    pub abs_err: f64,
}

/// Default absolute tolerance for K-number integrals.
pub const DEFAULT_ABS_TOL: f64 = 1e-8;
/// Maximum bisection depth of a panel.
pub const MAX_DEPTH: u32 = 30;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += wk * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Integrates `f` over `[a, b]` to absolute tolerance `abs_tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    integrate_with_breaks(f, &[a, b], abs_tol)
}

/// Integrates over consecutive panels delimited by `breaks` (sorted), so
/// that known kinks or peaks start on a panel edge.
pub fn integrate_with_breaks<F>(mut f: F, breaks: &[f64], abs_tol: f64) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if breaks.iter().any(|b| !b.is_finite()) {
        return Err(Error::NonFinite("integration limit"));
    }
    let (Some(&first), Some(&last)) = (breaks.first(), breaks.last()) else {
        return Ok(Integral { value: 0.0, abs_err: 0.0 });
    };
    let total = last - first;
    if total == 0.0 || breaks.len() < 2 {
        return Ok(Integral { value: 0.0, abs_err: 0.0 });
    }

    let mut value = 0.0;
    let mut abs_err = 0.0;
    let mut failed = false;
    // (a, b, depth) work stack.
    let mut stack: Vec<(f64, f64, u32)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| (w[0], w[1], 0))
        .rev()
        .collect();
    while let Some((a, b, depth)) = stack.pop() {
        let (est, err) = gk15(&mut f, a, b)?;
        let budget = abs_tol * (b - a) / total;
        if err <= budget || err <= 50.0 * f64::EPSILON * est.abs() {
            value += est;
            abs_err += err;
        } else if depth >= MAX_DEPTH {
            value += est;
            abs_err += err;
            failed = true;
        } else {
            let m = 0.5 * (a + b);
            stack.push((m, b, depth + 1));
            stack.push((a, m, depth + 1));
        }
    }
    if failed && abs_err > abs_tol {
        return Err(Error::QuadratureFailed { estimate: value, abs_err });
    }
    Ok(Integral { value, abs_err })
}

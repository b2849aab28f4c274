//! Input/output scaling. Internally lengths are in wavelengths and angles in
//! radians; `--wavelength` switches lengths to meters and `--degrees`
//! switches angles to degrees, both on the way in and on the way out.

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Units {
    /// Wavelength in meters, when lengths are given in meters.
    pub wavelength: Option<f64>,
    pub degrees: bool,
}

impl Units {
    pub fn new(wavelength: Option<f64>, degrees: bool) -> CliResult<Self> {
        if let Some(w) = wavelength {
            if !(w.is_finite() && w > 0.0) {
                return Err(CliError::Usage(format!("wavelength must be positive, got {w}")));
            }
        }
        Ok(Self { wavelength, degrees })
    }

    pub fn length_in(&self, x: f64) -> f64 {
        self.wavelength.map_or(x, |w| x / w)
    }

    pub fn length_out(&self, x: f64) -> f64 {
        self.wavelength.map_or(x, |w| x * w)
    }

    pub fn angle_in(&self, a: f64) -> f64 {
        if self.degrees {
            a.to_radians()
        } else {
            a
        }
    }

    pub fn angle_out(&self, a: f64) -> f64 {
        if self.degrees {
            a.to_degrees()
        } else {
            a
        }
    }

    pub fn length_unit(&self) -> &'static str {
        if self.wavelength.is_some() {
            "meter"
        } else {
            "wavelength"
        }
    }

    pub fn angle_unit(&self) -> &'static str {
        if self.degrees {
            "degree"
        } else {
            "radian"
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn round_trips() {
        let u = Units::new(Some(0.01), true).unwrap();
        assert_eq!(u.length_in(4.0), 400.0);
        assert!((u.length_out(u.length_in(3.7)) - 3.7).abs() < 1e-15);
        assert_eq!(u.angle_in(90.0), FRAC_PI_2);
        assert_eq!(Units::default().length_in(5.0), 5.0);
    }

    #[test]
    fn rejects_bad_wavelength() {
        assert!(Units::new(Some(0.0), false).is_err());
        assert!(Units::new(Some(f64::NAN), false).is_err());
    }
}

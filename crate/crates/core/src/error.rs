/// Errors reported by the analysis routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An input was NaN or infinite.
    #[error("{0} must be finite")]
    NonFinite(&'static str),

    /// An input was outside its admissible range.
    #[error("invalid {name}: {reason}")]
    InvalidParameter {
        /// Parameter name.
        name: &'static str,
        /// What was violated.
        reason: &'static str,
    },

    /// `t / sqrt(t^2 + c^2)` evaluated at `t = c = 0`.
    #[error("axial cosine is indeterminate at t = c = 0")]
    Indeterminate,

    /// A receive point lies on the source segment.
    #[error("receive point coincides with a source point")]
    CoincidentPoint,

    /// Adaptive quadrature ran out of refinement levels.
    #[error("quadrature did not converge (estimate {estimate}, error {abs_err})")]
    QuadratureFailed {
        /// Best estimate reached.
        estimate: f64,
        /// Its error estimate.
        abs_err: f64,
    },

    /// No boresight distance yields the requested K number.
    #[error("K0 = {k0} cannot be reached at boresight with this receive length")]
    Unreachable {
        /// The requested threshold.
        k0: f64,
    },

    /// Antenna spacing does not divide the array length.
    #[error("spacing {spacing} does not divide length {length}; nearest valid spacings are {below} and {above}")]
    NonDivisibleSpacing {
        /// Requested spacing.
        spacing: f64,
        /// Array length.
        length: f64,
        /// Nearest valid spacing not larger than the request.
        below: f64,
        /// Nearest valid spacing not smaller than the request.
        above: f64,
    },

    /// Two antennas of different arrays share a position.
    #[error("a receive antenna coincides with a source antenna")]
    CoincidentAntennas,

    /// A spectrum had no positive singular value.
    #[error("singular spectrum is identically zero")]
    ZeroSpectrum,

    /// A ratio of bandwidths had a zero denominator.
    #[error("bandwidth along the source axis vanishes at the array centre")]
    ZeroBandwidth,
}

/// Result alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn finite(value: f64, name: &'static str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite(name))
    }
}

pub(crate) fn positive(value: f64, name: &'static str) -> Result<f64> {
    finite(value, name)?;
    if value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter { name, reason: "must be positive" })
    }
}

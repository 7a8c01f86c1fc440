use core::fmt;

/// Error type shared by all numerical routines in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain { context: &'static str, value: f64 },
    /// A system definition violates one of its invariants.
    InvalidSystem(&'static str),
    /// The law cannot provide its squared-argument form b with V(x) = b(x^2),
    /// or the second derivative of that form.
    UnsupportedSquaredForm,
    /// The stationarity residual has no root that is a local energy minimum
    /// inside the scan window (no bound solution for these quantum numbers).
    NoStationaryPoint { window: (f64, f64) },
    /// Iterative refinement failed to reach the requested tolerance.
    NonConvergence { bracket: (f64, f64), residual: f64 },
    /// The shape equation of the critical-coupling problem has no root in the
    /// scan window.
    NoCriticalPoint { window: (f64, f64) },
    /// No bound state exists for these quantum numbers (Lambert argument below
    /// -1/e, or the two-body oracle found no eigenvalue below threshold).
    NoBoundState,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { context, value } => {
                write!(f, "domain error: {context} (got {value})")
            }
            Error::InvalidSystem(msg) => write!(f, "invalid system: {msg}"),
            Error::UnsupportedSquaredForm => {
                write!(f, "law does not expose a squared-argument form")
            }
            Error::NoStationaryPoint { window } => write!(
                f,
                "no stationary minimum in r0 window [{:e}, {:e}]",
                window.0, window.1
            ),
            Error::NonConvergence { bracket, residual } => write!(
                f,
                "refinement did not converge in [{:e}, {:e}] (residual {:e})",
                bracket.0, bracket.1, residual
            ),
            Error::NoCriticalPoint { window } => write!(
                f,
                "shape equation has no root in [{:e}, {:e}]",
                window.0, window.1
            ),
            Error::NoBoundState => write!(f, "no bound state for these quantum numbers"),
        }
    }
}

impl core::error::Error for Error {}

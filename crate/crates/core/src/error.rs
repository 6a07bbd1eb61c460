use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside the domain of the operation.
    Domain {
        what: &'static str,
        value: f64,
    },
    /// An iterative or adaptive scheme did not reach its tolerance.
    NonConvergence {
        what: &'static str,
        discrepancy: f64,
    },
    /// A time lies beyond the horizon of a simulated path.
    OutOfHorizon {
        t: f64,
        horizon: f64,
    },
    TooFewPoints {
        needed: usize,
        got: usize,
    },
    /// Grid data does not vanish near the spatial boundary.
    BoundarySupport {
        max_abs: f64,
    },
    EmptyInput,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::NonConvergence { what, discrepancy } => {
                write!(f, "{what} did not converge (discrepancy {discrepancy:e})")
            }
            Error::OutOfHorizon { t, horizon } => {
                write!(f, "time {t} beyond path horizon {horizon}")
            }
            Error::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} grid points, got {got}")
            }
            Error::BoundarySupport { max_abs } => write!(
                f,
                "grid function does not vanish near the spatial boundary (max |h| = {max_abs:e})"
            ),
            Error::EmptyInput => f.write_str("empty input"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_domain(ok: bool, what: &'static str, value: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

use core::fmt;

/// Errors raised by the numerical layer.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument sits on a pole of the function (e.g. Γ at a non-positive integer).
    Pole { what: &'static str, at: f64 },
    /// Argument outside the mathematical domain.
    Domain { what: &'static str, value: f64 },
    /// A parameter violates a type invariant.
    InvalidParameter { what: &'static str, value: f64 },
    /// A series or iteration hit its term cap.
    NonConvergence { what: &'static str },
    /// The result is not representable as a finite `f64`.
    Overflow { what: &'static str },
    /// A closed form needs integer-valued fading/pointing parameters.
    IntegerCondition { what: &'static str },
    /// The requested closed form does not exist for this protocol.
    Unsupported { what: &'static str },
    /// Fit produced non-finite raw weights.
    DegenerateFit,
    /// Adaptive quadrature could not reach the requested tolerance.
    Quadrature { value: f64, abs_error: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Pole { what, at } => write!(f, "{what}: pole at {at}"),
            Error::Domain { what, value } => write!(f, "{what}: argument {value} outside domain"),
            Error::InvalidParameter { what, value } => write!(f, "invalid {what}: {value}"),
            Error::NonConvergence { what } => write!(f, "{what}: failed to converge"),
            Error::Overflow { what } => write!(f, "{what}: result overflows f64"),
            Error::IntegerCondition { what } => write!(f, "integer condition violated: {what}"),
            Error::Unsupported { what } => write!(f, "unsupported: {what}"),
            Error::DegenerateFit => write!(f, "mixture fit produced non-finite weights"),
            Error::Quadrature { value, abs_error } => {
                write!(
                    f,
                    "quadrature did not converge (value {value}, error estimate {abs_error})"
                )
            }
        }
    }
}

impl core::error::Error for Error {}

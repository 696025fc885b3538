use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Everything that can go wrong inside the simulation core.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Reflectance outside `[0, 1]`.
    ReflectanceOutOfRange(f64),
    /// A value that must be finite was NaN or infinite.
    NonFinite(&'static str),
    /// A value violated a documented range constraint.
    OutOfRange { field: &'static str, value: f64 },
    /// Matrix failed the unitarity check.
    NotUnitary { max_deviation: f64 },
    /// Tolerance must be strictly positive.
    InvalidTolerance(f64),
    /// Loop phase requested for a splitter with `R` in `{0, 1}`.
    UndefinedPhase,
    /// Visibility or distinguishability with a vanishing denominator.
    UndefinedVisibility,
    /// Probability estimation from zero shots.
    EmptyCounts,
    /// Sweep grid was empty or not strictly increasing.
    InvalidGrid,
    /// Sweep parameter needs information the device does not carry.
    UnsupportedParameter(&'static str),
    /// Fringe fit could not be performed.
    FitFailure {
        reason: &'static str,
        condition: f64,
    },
    /// An error raised while evaluating one row of a sweep.
    Row {
        index: usize,
        source: alloc::boxed::Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ReflectanceOutOfRange(r) => write!(f, "reflectance {r} outside [0, 1]"),
            Error::NonFinite(what) => write!(f, "{what} is not finite"),
            Error::OutOfRange { field, value } => write!(f, "{field} = {value} is out of range"),
            Error::NotUnitary { max_deviation } => {
                write!(
                    f,
                    "matrix is not unitary (max |UU^dag - I| = {max_deviation:e})"
                )
            }
            Error::InvalidTolerance(t) => write!(f, "tolerance must be positive, got {t}"),
            Error::UndefinedPhase => {
                write!(
                    f,
                    "loop phase undefined for a fully reflecting or transmitting splitter"
                )
            }
            Error::UndefinedVisibility => {
                write!(f, "visibility undefined: both path weights vanish")
            }
            Error::EmptyCounts => write!(f, "no shots recorded"),
            Error::InvalidGrid => write!(f, "sweep grid must be non-empty and strictly increasing"),
            Error::UnsupportedParameter(why) => write!(f, "unsupported sweep parameter: {why}"),
            Error::FitFailure { reason, condition } => {
                write!(
                    f,
                    "fringe fit failed: {reason} (condition number {condition:e})"
                )
            }
            Error::Row { index, source } => write!(f, "sweep row {index}: {source}"),
        }
    }
}

impl core::error::Error for Error {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            Error::Row { source, .. } => Some(source.as_ref()),
            _ => None,
        }
    }
}

pub(crate) fn ensure_finite(value: f64, what: &'static str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

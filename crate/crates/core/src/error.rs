use alloc::string::String;
use core::fmt;

use crate::pulses::Drive;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two state vectors (or a state and an operator) live on different bases.
    BasisMismatch,
    /// A basis was given the same state twice.
    DuplicateState(String),
    /// A state label is not a member of the basis it was looked up in.
    UnknownState(String),
    /// A label string could not be parsed.
    Parse(String),
    /// A configuration value violates its documented range.
    InvalidParameter { name: &'static str, value: f64 },
    /// A pulse sits outside (or too close to the edge of) its schedule window.
    PulseOutsideWindow { center: f64, t_start: f64, t_end: f64 },
    /// A drive is active on a level structure that has no such transition.
    UnsupportedDrive(Drive),
    /// An active coupling leads out of the basis.
    BasisNotClosed { from: String, to: String },
    /// Both pump and Stokes drives vanish, so the dark space is not two-dimensional.
    DegenerateDarkSpace,
    /// The vector has (numerically) zero norm: total decay or underflow.
    ZeroNorm,
    /// The initial state of a propagation is not normalized.
    NotNormalized(f64),
    /// The initial state has weight outside the computational subspace.
    NotComputational,
    /// The squared norm grew during a step, which the decay terms forbid.
    Instability { time: f64, growth: f64 },
    /// NaN or infinity appeared in the state.
    NumericalFailure { time: f64 },
    /// A time query outside the stored trajectory.
    OutOfRange { t: f64, t_start: f64, t_end: f64 },
    /// An operator of the wrong dimension was supplied.
    DimensionMismatch { expected: usize, found: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BasisMismatch => write!(f, "state vectors belong to incompatible bases"),
            Error::DuplicateState(s) => write!(f, "duplicate basis state {s}"),
            Error::UnknownState(s) => write!(f, "state {s} is not in the basis"),
            Error::Parse(s) => write!(f, "cannot parse label {s:?}"),
            Error::InvalidParameter { name, value } => {
                write!(f, "invalid value {value} for parameter `{name}`")
            }
            Error::PulseOutsideWindow { center, t_start, t_end } => {
                write!(f, "pulse centered at {center} is not padded inside window [{t_start}, {t_end}]")
            }
            Error::UnsupportedDrive(d) => write!(f, "drive {} has no transition in this system", d.name()),
            Error::BasisNotClosed { from, to } => {
                write!(f, "coupling from {from} leads to {to}, which is not in the basis")
            }
            Error::DegenerateDarkSpace => write!(f, "both drives vanish; the dark space is degenerate"),
            Error::ZeroNorm => write!(f, "state has zero norm (total decay or underflow)"),
            Error::NotNormalized(n) => write!(f, "initial state has squared norm {n}, expected 1"),
            Error::NotComputational => {
                write!(f, "initial state has weight outside the computational subspace")
            }
            Error::Instability { time, growth } => {
                write!(f, "squared norm grew by {growth:e} at t = {time}; step size too large")
            }
            Error::NumericalFailure { time } => write!(f, "non-finite amplitude at t = {time}"),
            Error::OutOfRange { t, t_start, t_end } => {
                write!(f, "time {t} outside trajectory span [{t_start}, {t_end}]")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
        }
    }
}

impl core::error::Error for Error {}

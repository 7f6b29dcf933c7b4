use std::fmt;

/// Which of the three interacting modes a domain error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Signal,
    Idler,
    Pump,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Signal => "signal",
            Mode::Idler => "idler",
            Mode::Pump => "pump",
        })
    }
}

/// Machine-readable reason for an invalid dispersion sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvalidReason {
    /// ω ≥ ω_J, the bare dispersion factor has no positive value.
    PlasmaCutoff,
    /// Inside the resonant phase-matcher gap (Λ_RPM ≤ 0 or at its pole).
    RpmStopband,
    NonpositiveFrequency,
}

impl InvalidReason {
    pub fn token(self) -> &'static str {
        match self {
            InvalidReason::PlasmaCutoff => "plasma-cutoff",
            InvalidReason::RpmStopband => "rpm-stopband",
            InvalidReason::NonpositiveFrequency => "nonpositive-frequency",
        }
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("device file parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid value for `{field}`: {reason}")]
    Constraint { field: &'static str, reason: String },

    #[error("under-determined junction parameters: {0}")]
    Underdetermined(String),

    #[error("plasma cutoff: ω = {omega:.6e} rad/s is not below ω_J = {omega_j:.6e} rad/s")]
    PlasmaCutoff { omega: f64, omega_j: f64 },

    #[error("resonant phase-matcher pole at ω = {omega:.6e} rad/s")]
    StopbandPole { omega: f64 },

    #[error("resonant phase-matcher stopband at ω = {omega:.6e} rad/s (Λ_RPM = {lambda:.6e})")]
    Stopband { omega: f64, lambda: f64 },

    #[error("nonpositive frequency ω = {0:.6e} rad/s")]
    NonpositiveFrequency(f64),

    #[error("device has no resonant phase-matcher block")]
    MissingRpm,

    #[error("{mode} mode invalid: {source}")]
    InvalidMode {
        mode: Mode,
        #[source]
        source: Box<Error>,
    },

    #[error("signal frequency {omega:.6e} rad/s outside (0, 2ω_p) with ω_p = {omega_p:.6e} rad/s")]
    OutsidePumpBand { omega: f64, omega_p: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("cannot read device file {path}: {source}")]
    DeviceFile {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Reason token when the error describes an invalid sweep sample.
    pub fn invalid_token(&self) -> Option<String> {
        match self {
            Error::PlasmaCutoff { .. } => Some(InvalidReason::PlasmaCutoff.token().into()),
            Error::StopbandPole { .. } | Error::Stopband { .. } => {
                Some(InvalidReason::RpmStopband.token().into())
            }
            Error::NonpositiveFrequency(_) => {
                Some(InvalidReason::NonpositiveFrequency.token().into())
            }
            Error::OutsidePumpBand { .. } => Some("outside-pump-band".into()),
            Error::InvalidMode { mode, source } => {
                source.invalid_token().map(|inner| format!("{mode}-{inner}"))
            }
            _ => None,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. }
            | Error::Constraint { .. }
            | Error::Underdetermined(_)
            | Error::DeviceFile { .. }
            | Error::MissingRpm => 2,
            Error::Data(_) | Error::Io(_) => 4,
            _ => 3,
        }
    }

    pub(crate) fn in_mode(self, mode: Mode) -> Error {
        Error::InvalidMode { mode, source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

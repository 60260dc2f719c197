use std::fmt;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Singular(String),
    Io(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Singular(_) => 2,
            CliError::Io(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Singular(m) => write!(f, "singular input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<rpr_core::Error> for CliError {
    fn from(e: rpr_core::Error) -> Self {
        use rpr_core::Error as E;
        match e {
            E::LegAtAnchor { ref legs, .. } if legs.len() == 3 => {
                CliError::Singular("serial singularity, all rho zero".into())
            }
            E::LegAtAnchor { .. }
            | E::ParallelSingular { .. }
            | E::SerialSingular { .. }
            | E::DegenerateLegPair { .. }
            | E::NotReuleaux
            | E::SingularNearby => CliError::Singular(e.to_string()),
            E::InconsistentState { .. } | E::InvalidInput(_) | E::Config(_) => {
                CliError::Usage(e.to_string())
            }
            E::Io(_) => CliError::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        if e.is_io_error() {
            CliError::Io(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

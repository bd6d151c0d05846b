use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = QveError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum QveError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported angular momentum: {element} shell {shell} is not s-type; load the molecule from a Hamiltonian fixture instead")]
    UnsupportedAngularMomentum { element: String, shell: String },

    #[error("degenerate geometry: atoms {0} and {1} coincide")]
    DegenerateGeometry(usize, usize),

    #[error("overlap matrix is numerically singular (smallest eigenvalue {0:e})")]
    LinearDependence(f64),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("term acts with X/Y on symmetry qubit {qubit}; Hamiltonian is not number conserving")]
    SymmetryViolation { qubit: usize },

    #[error("invalid combination: {0}")]
    InvalidCombination(String),

    #[error("generator coefficient {0} is not purely imaginary")]
    InvalidGenerator(String),

    #[error("fold factor must be odd and >= 1, got {0}")]
    InvalidFold(usize),

    #[error("unbound parameter {0}")]
    UnboundParameter(usize),

    #[error("coupling map does not connect qubits {0} and {1}")]
    DisconnectedCoupling(usize, usize),

    #[error("SPSA calibration degenerate: every gradient estimate vanished")]
    CalibrationDegenerate,

    #[error("{source_name}:{line}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        msg: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<QveError>,
    },
}

impl QveError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        QveError::InvalidArgument(msg.into())
    }

    pub fn parse(source_name: &str, line: usize, msg: impl Into<String>) -> Self {
        QveError::Parse {
            source_name: source_name.to_string(),
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QveError::Io {
            path: path.into(),
            source,
        }
    }

    /// Wraps an error with the name of the pipeline stage that produced it.
    pub fn in_stage(self, stage: &str) -> Self {
        QveError::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }

    /// Process exit code: 2 configuration, 3 numeric failure, 4 unsupported angular momentum.
    pub fn exit_code(&self) -> i32 {
        match self {
            QveError::Stage { source, .. } => source.exit_code(),
            QveError::UnsupportedAngularMomentum { .. } => 4,
            QveError::LinearDependence(_)
            | QveError::CalibrationDegenerate
            | QveError::ResourceLimit(_)
            | QveError::DegenerateGeometry(..) => 3,
            _ => 2,
        }
    }
}

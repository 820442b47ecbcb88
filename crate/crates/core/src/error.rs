use thiserror::Error;

use crate::lattice::Eps;

/// Errors raised by the simulator and the no-go checker.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice configuration: {0}")]
    InvalidConfig(String),

    #[error("site (cell {cell}, {eps}) listed more than once")]
    DuplicateSite { cell: usize, eps: Eps },

    #[error("cell {cell} is outside the lattice of {cells} cells")]
    OutOfRange { cell: usize, cells: usize },

    #[error("states live on different lattices")]
    ConfigMismatch,

    #[error("dense dimension {dim} exceeds the cap of {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },

    #[error("Heisenberg image is not a linear combination of ladder operators (relative residual {residual:.3e})")]
    NotLinear { residual: f64 },

    #[error("momentum k*dx = {kdx} is not on the lattice grid")]
    OffGrid { kdx: f64 },

    #[error("operation requires periodic boundary")]
    BoundaryMode,

    #[error("lattice {width}x{height} exceeds the cap for this check ({cap})")]
    LatticeTooLarge {
        width: usize,
        height: usize,
        cap: String,
    },

    #[error("lattice too small: {0}")]
    LatticeTooSmall(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("quantum integer [{0}] is not supported (only [2] and [3])")]
    QuantumIntDomain(u32),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("braid generator {index} out of range for {strands} strands")]
    BraidIndex { index: i32, strands: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("diagram is not planar: Euler characteristic {chi} on a component (expected 2)")]
    NonPlanar { chi: i64 },

    #[error("inconsistent orientation: {0}")]
    Orientation(String),

    #[error("invalid web: {0}")]
    InvalidWeb(String),

    #[error("web has no circle, bigon or square to reduce")]
    Irreducible,

    #[error("OW-move site is not a pair of coherently oriented arcs: {0}")]
    OwSite(String),

    #[error("crossing count {count} exceeds the enumeration cap {cap}")]
    CapExceeded { count: usize, cap: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("exact division failed: {0}")]
    InexactDivision(String),

    #[error("convention calibration failed: {0}")]
    Calibration(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error in {record}: field `{field}`: {message}")]
    Parse {
        record: String,
        field: String,
        message: String,
    },

    #[error("validation error in {record}: {message}")]
    Validation { record: String, message: String },

    #[error("duplicate crystal id `{0}`")]
    DuplicateId(String),

    #[error("unknown crystal `{id}`; available: {available}")]
    UnknownCrystal { id: String, available: String },

    #[error("wavelength {lambda} um outside [{lo}, {hi}] um for {what}")]
    Range {
        what: String,
        lambda: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dispersion model integrity: {0}")]
    ModelIntegrity(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("degenerate grating: zero wave-vector mismatch gives an infinite period")]
    DegenerateGrating,

    #[error("unsupported point group `{0}`")]
    UnsupportedPointGroup(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("axis error: {0}")]
    Axis(String),

    #[error("purity undefined for an all-zero amplitude")]
    UndefinedPurity,

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown chord {0}")]
    UnknownChord(u32),
    #[error("chord {0} is not a real chord")]
    NotReal(u32),
    #[error("chord {0} is not a double chord")]
    NotDouble(u32),
    #[error("tree has no double nodes")]
    NoDoubles,
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("normalization exceeded its iteration bound of {0}")]
    IterationBound(usize),
    #[error("invalid planar diagram: {0}")]
    BadPlanar(String),
    #[error("bad gluing: {0}")]
    BadGluing(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

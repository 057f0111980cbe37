use thiserror::Error;

use crate::surface::BoundaryPoint;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("cut {cut} does not exist on a surface with {holes} inner holes")]
    UnknownCut { cut: usize, holes: usize },
    #[error("boundary component {0} does not exist")]
    UnknownBoundary(usize),
    #[error("slot {0} is not a valid marked point")]
    BadSlot(BoundaryPoint),
    #[error("arc starts and ends at the same point {0}")]
    DegenerateArc(BoundaryPoint),
    #[error("{what} is not embedded ({crossings} self-crossings)")]
    NotEmbedded { what: String, crossings: usize },
    #[error("closed curve is inessential (empty word)")]
    Inessential,
    #[error("surfaces do not match")]
    SurfaceMismatch,
    #[error("unknown curve {0:?}")]
    UnknownCurve(String),
    #[error("operation needs an engine-backed open book, got a symbolic one")]
    Symbolic,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("arcs do not share their start point")]
    DifferentStart,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid movie: {0}")]
    InvalidMovie(String),
    #[error("invalid foliation: {0}")]
    InvalidFoliation(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

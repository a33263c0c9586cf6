use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a complex on {n_vertices} vertices")]
    VertexOutOfRange { vertex: usize, n_vertices: usize },

    #[error("a complex needs at least one vertex")]
    EmptyComplex,

    #[error("empty simplex in generator list")]
    EmptySimplex,

    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("vertex map is not simplicial: {0}")]
    NotSimplicial(String),

    #[error("cannot compose: target of the first map differs from source of the second")]
    CompositionMismatch,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("point configuration must be nonempty")]
    EmptyConfig,

    #[error("points {first} and {second} coincide within tolerance {tolerance}")]
    DuplicatePoints {
        first: usize,
        second: usize,
        tolerance: f64,
    },

    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),

    #[error("radius must be finite and nonnegative, got {0}")]
    InvalidRadius(f64),

    #[error("max_dim must be given for configurations with more than {cap} points (got {size})")]
    MaxDimRequired { size: usize, cap: usize },

    #[error("sup distance {distance} is not below the safe radius {safe_radius}; subdivide the path")]
    OutsideSafeBall { distance: f64, safe_radius: f64 },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("parameter {param} = {value} outside [0, 1]")]
    OutOfRange { param: &'static str, value: f64 },

    #[error("stratum label not constant between t = {from} and t = {to}")]
    ConstancyViolated { from: f64, to: f64 },

    #[error("no stretch ending at t = {0} fits in the safe ball at floating-point resolution")]
    SafeBallUnreachable(f64),

    #[error("labels on both sides of t = {0} are incomparable; the instant is not modelled")]
    IncomparableTransition(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

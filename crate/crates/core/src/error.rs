use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("edge {edge}: {message}")]
    Semantic { edge: usize, message: String },
    #[error("unknown builtin scene `{0}`")]
    UnknownBuiltin(String),
    #[error("invalid builtin parameter: {0}")]
    BadParameter(String),
    #[error("point ({x}, {y}) is not a vertex of the scene")]
    NotAVertex { x: f64, y: f64 },
}

#[derive(Debug, Error, PartialEq)]
pub enum FieldError {
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("sampling pitch {pitch} must be positive and at most r/4 = {limit}")]
    BadPitch { pitch: f64, limit: f64 },
    #[error("pair {0} has coincident points")]
    CoincidentPair(usize),
    #[error("no centers supplied")]
    NoCenters,
}

#[derive(Debug, Error, PartialEq)]
pub enum LevelSetError {
    #[error("window half-width {half_width} with pitch {pitch} is not a usable grid")]
    BadWindow { half_width: f64, pitch: f64 },
    #[error("at least two windows are required for an end census")]
    TooFewWindows,
    #[error("component ids must be distinct, got {0} twice")]
    SameComponent(usize),
    #[error("component {id} does not exist (mesh has {count})")]
    NoSuchComponent { id: usize, count: usize },
    #[error("radius {radius} must exceed four times the pitch {pitch}")]
    ProbeTooSmall { radius: f64, pitch: f64 },
    #[error("window half-width {half_width} must be at least twice the largest radius {max_r}")]
    WindowTooSmall { half_width: f64, max_r: f64 },
    #[error("text format error on line {line}: {message}")]
    Format { line: usize, message: String },
}

#[derive(Debug, Error, PartialEq)]
pub enum CheckError {
    #[error("sweep needs at least 8 steps, got {0}")]
    TooFewSteps(usize),
    #[error("empty or inverted t range [{0}, {1}]")]
    BadRange(f64, f64),
    #[error("level set at t = {0} did not stabilize across the window sequence")]
    NotStabilized(f64),
    #[error("|n| must be at least 2, got {0}")]
    AngleIndex(i64),
    #[error("radius {0} outside (0, 1/10]")]
    RadiusOutOfRange(f64),
    #[error("zigzag truncation N must be at least 10, got {0}")]
    TruncationTooSmall(usize),
    #[error(transparent)]
    LevelSet(#[from] LevelSetError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("bad point `{0}`: expected two finite numbers `x,y`")]
    Point(String),
    #[error("bad t range `{input}`: {reason}")]
    Range { input: String, reason: String },
}

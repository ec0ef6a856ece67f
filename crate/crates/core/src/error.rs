use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("sum graph of the atoms is disconnected")]
    DisconnectedSum,
    #[error("atom {atom}: {reason}")]
    BadAtom { atom: usize, reason: String },
    #[error("atom {atom}: duplicate edge {{{u}, {v}}}")]
    DuplicateEdge { atom: usize, u: usize, v: usize },
    #[error("invalid category classes: {0}")]
    BadClasses(String),
    #[error("invalid vertex address: {0}")]
    InvalidAddress(String),
    #[error("tiling patch reached its growth cap at radius {0}")]
    PatchTooSmall(usize),
    #[error("depth {m} exceeds circuit depth {p}")]
    DepthOverflow { m: usize, p: usize },
    #[error("expectation has imaginary residue {0:e}")]
    NonRealResult(f64),
    #[error("subgraph has {n} vertices, statevector cap is {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("elimination width {width} needs {entries} table entries, budget is {budget}")]
    WidthOverflow { width: usize, entries: u128, budget: u128 },
    #[error("lightcone radius {radius} is smaller than the required {required}")]
    RadiusTooSmall { radius: usize, required: usize },
    #[error("threshold {tau} outside the legal range for degree {degree}")]
    BadRange { degree: usize, tau: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("unknown graph `{0}`")]
    UnknownGraph(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

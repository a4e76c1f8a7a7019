use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A scalar input fell outside the domain of the operation.
    #[error("{name} = {value} is out of domain: {requirement}")]
    Domain {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("element index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    /// The shifted phase sits on (or within 1e-9 rad of) a pole of the
    /// resonance mapping.
    #[error("shifted phase {psi_tilde} is at the tan singularity")]
    Singularity { psi_tilde: f64 },

    /// The requested weight would need an imaginary resonant frequency.
    #[error("element {index}: required resonance is not reachable (f_r^2 = {f_r_squared:e})")]
    InfeasibleElement { index: usize, f_r_squared: f64 },

    #[error("no crossover angle: arcsin argument {argument} outside [-1, 1]")]
    NoCrossover { argument: f64 },

    #[error("binary enumeration over {n} elements exceeds the limit of {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("angle estimate undefined: arcsin argument {argument} outside [-1, 1]")]
    InvalidEstimate { argument: f64 },

    #[error("allowed estimate interval undefined at sector edge: arcsin argument {argument}")]
    SectorEdge { argument: f64 },

    #[error("codebook cannot cover {phi_max_deg:.3} deg: {reason}")]
    CoverageInfeasible { phi_max_deg: f64, reason: String },

    #[error("infeasible design: {0}")]
    InfeasibleDesign(String),

    #[error("invalid scenario: {0}")]
    Config(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(name: &'static str, value: f64, requirement: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        requirement,
    }
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid arc: {0}")]
    InvalidArc(String),

    #[error("arc is the full circle; |P(0)| <= sup |P| there, no small polynomial exists")]
    FullCircleArc,

    #[error("degenerate (zero-length) piece cannot be discretized")]
    DegeneratePiece,

    #[error("quadrature did not converge: achieved {achieved:.3e}, wanted {wanted:.3e}")]
    QuadratureNonConvergence { achieved: f64, wanted: f64 },

    #[error("degree budget {budget} exhausted; best sup-norm achieved {best:.3e}, target {target:.3e}")]
    MaxDegreeExhausted { budget: usize, best: f64, target: f64 },

    #[error("certification budget exhausted; best bound achieved {best:.3e}, target {target:.3e}")]
    CannotCertify { best: f64, target: f64 },

    #[error("cutoff arcs not nested: closure of the inner arc must lie in the interior of the outer")]
    ArcsNotNested,

    #[error("Fourier tail unresolved at grid size {grid}: tail fraction {tail:.3e}")]
    UnresolvedTail { grid: usize, tail: f64 },

    #[error("radius {r} too close to 1 for a window covering |n| <= {cover}")]
    RadiusTooLarge { r: f64, cover: i64 },

    #[error("window too short: have {have}, need at least {need}")]
    WindowTooShort { have: usize, need: usize },

    #[error("predictor error {error:.3e} is not below half the alphabet separation {half_delta:.3e}")]
    PredictorTooWeak { error: f64, half_delta: f64 },

    #[error("ambiguous rounding at position {position}: residual {residual:.3e} >= half separation {half_delta:.3e}")]
    AmbiguousRounding { position: i64, residual: f64, half_delta: f64 },

    #[error("polynomial does not divide z^{n} - 1")]
    NotCyclotomicDivisor { n: u64 },

    #[error("alphabet invalid: {0}")]
    InvalidAlphabet(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

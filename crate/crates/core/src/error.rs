use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole at {0}")]
    Pole(Complex64),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("precision loss: {0}")]
    PrecisionLoss(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("series truncation insufficient: {0}")]
    Truncation(String),
    #[error("invalid discriminant {0}")]
    InvalidDiscriminant(i64),
    #[error("coefficient depth {requested} exceeds cap {cap}")]
    Overflow { requested: usize, cap: usize },
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("no m <= {m_max} found; best exponent {best_exponent}")]
    NotFound { m_max: u32, best_exponent: f64 },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("ordinates not strictly increasing at line {line}")]
    Unsorted { line: usize },
    #[error("candidate poles {0} and {1} closer than twice the contour radius")]
    OverlappingPoles(Complex64, Complex64),
    #[error("residue quadrature disagrees between radii at {at}: {diff:e}")]
    QuadratureInconsistency { at: Complex64, diff: f64 },
    #[error("1/2+i{0} is not a zero (|L| = {1:e})")]
    NotAZero(f64, f64),
    #[error("derivative too small at 1/2+i{0}; possibly a multiple zero")]
    PossiblyMultipleZero(f64),
    #[error("zero data only reaches height {have}, need {need}")]
    MissingZeroData { have: f64, need: f64 },
    #[error("test function support must lie inside (0, inf): {0}")]
    Support(String),
    #[error("integrand does not decay at the truncation point: {0}")]
    EnvelopeViolation(String),
    #[error("Mellin transform of the convolutor vanishes near {0}")]
    ZeroDenominator(Complex64),
    #[error("convolutor does not annihilate h (relative residual {0:e})")]
    UncertifiedConvolutor(f64),
    #[error("line decay slower than |t|^-1.1: {0}")]
    DecayViolation(String),
    #[error("no exponent A <= {0} gives an acceptable excluded measure")]
    AllRejected(f64),
    #[error("zero list does not cover the window [{0}, {1}]")]
    Coverage(f64, f64),
    #[error("no zeros supplied within distance 1 of {0}")]
    MissingLocalZeros(Complex64),
    #[error("missing ledger entry: {0}")]
    MissingLedger(String),
    #[error("divergent transform: Re s = {re_s} is below the growth threshold {threshold}")]
    Divergence { re_s: f64, threshold: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

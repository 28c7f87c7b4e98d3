use thiserror::Error;

pub type Result<T> = std::result::Result<T, VemError>;

#[derive(Debug, Error)]
pub enum VemError {
    #[error("degenerate element: {0}")]
    DegenerateElement(String),

    #[error("polygon is not counter-clockwise (signed area {0:e})")]
    Orientation(f64),

    #[error("evaluation point out of domain: {0}")]
    OutOfDomain(String),

    #[error("angle degenerate: |alpha_{index}| = {angle} reaches pi")]
    AngleDegenerate { index: usize, angle: f64 },

    #[error("degenerate element projection (condition estimate {0:e})")]
    DegenerateProjection(f64),

    #[error("element touches symmetry axis (R_E = {0:e})")]
    AxisContact(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("no convergence at step {step}: {reason}")]
    NonConvergence { step: usize, reason: String },

    #[error("element {index}: {source}")]
    Element {
        index: usize,
        #[source]
        source: Box<VemError>,
    },

    #[error("pressure outside partially-plastic range: p = {p}, admissible ({lo}, {hi}]")]
    PressureOutOfRange { p: f64, lo: f64, hi: f64 },

    #[error("no tabulated limit value for sigma_yield={sigma_yield}, t={thickness}, r_o={radius}")]
    NoTabulatedLimit {
        sigma_yield: f64,
        thickness: f64,
        radius: f64,
    },

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl VemError {
    pub(crate) fn at_element(self, index: usize) -> Self {
        match self {
            e @ VemError::Element { .. } => e,
            e => VemError::Element {
                index,
                source: Box::new(e),
            },
        }
    }

    /// Process exit status: 2 for bad input, 1 for solver failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            VemError::Config { .. } | VemError::Json(_) | VemError::InvalidInput(_) | VemError::Mesh(_) => 2,
            VemError::Element { source, .. } => source.exit_code(),
            _ => 1,
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        VemError::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

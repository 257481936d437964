use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group order: {0}")]
    InvalidOrder(usize),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("group axiom violated ({axiom}) at witness {witness:?}")]
    GroupAxiom {
        axiom: &'static str,
        witness: Vec<usize>,
    },

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("irreducible representations unavailable for {0} groups")]
    IrrepsUnavailable(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("signal of length {found} is incompatible with a group of order {order}")]
    IncompatibleSignal { order: usize, found: usize },

    #[error("degenerate filter: all entries are zero")]
    DegenerateFilter,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("post-selection never succeeds: the block-encoded output is zero")]
    ZeroOutput,

    #[error("singular operation (sigma_min = {sigma_min:e})")]
    SingularOperation { sigma_min: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix norm {norm} exceeds 1")]
    Normalization { norm: f64 },

    #[error("ill-conditioned problem: |lambda| * sum K_i0 = {product} must be < 1 (sum K_i0 = {kernel_sum})")]
    IllConditioned { kernel_sum: f64, product: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable name, used by the CLI on stderr and by the C ABI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidOrder(_) => "invalid-order",
            Error::InvalidInput(_) => "invalid-input",
            Error::GroupAxiom { .. } => "group-axiom",
            Error::IndexOutOfRange { .. } => "index-out-of-range",
            Error::IrrepsUnavailable(_) => "irreps-unavailable",
            Error::Shape { .. } => "shape",
            Error::IncompatibleSignal { .. } => "incompatible-signal",
            Error::DegenerateFilter => "degenerate-filter",
            Error::Precondition(_) => "precondition",
            Error::ZeroOutput => "zero-output",
            Error::SingularOperation { .. } => "singular-operation",
            Error::Domain(_) => "domain",
            Error::Normalization { .. } => "normalization",
            Error::IllConditioned { .. } => "ill-conditioned-problem",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

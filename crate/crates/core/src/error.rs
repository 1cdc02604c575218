use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown subsystem `{0}`")]
    UnknownSubsystem(String),
    #[error("duplicate subsystem `{0}`")]
    DuplicateSubsystem(String),
    #[error("register layout is not a partition of 0..{total}: {reason}")]
    InvalidLayout { total: usize, reason: String },
    #[error("basis label `{label}` has {got} bits, expected {expected}")]
    LabelLength {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("invalid basis label `{0}`")]
    InvalidLabel(String),
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("qubit {0} appears more than once in a gate")]
    RepeatedQubit(usize),
    #[error("matrix is not unitary (max |U^dag U - I| = {deviation:e})")]
    NonUnitary { deviation: f64 },
    #[error("matrix dimension {got} does not match {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("amplitude count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("qubit budget exceeded: {requested} qubits requested, simulator cap is {cap}")]
    QubitBudget { requested: usize, cap: usize },
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("partial trace needs at least one kept subsystem")]
    EmptyKeep,
    #[error("requested projection has zero probability")]
    ZeroProbability,
    #[error("Kraus operators have inconsistent shapes")]
    KrausShape,
    #[error("channel violates completeness (residual {residual:e})")]
    NotCptp { residual: f64 },
    #[error("channel acts on {channel} qubits but subsystem `{subsystem}` has {width}")]
    ArityMismatch {
        subsystem: String,
        channel: usize,
        width: usize,
    },
    #[error("filter strength must be finite and non-negative, got {0}")]
    InvalidLambda(f64),
    #[error("nonlinear filter target `{name}` has {width} qubits; only single-qubit targets are supported")]
    FilterTargetWidth { name: String, width: usize },
    #[error("nonlinear filter annihilated the state")]
    DegenerateFilter,
    #[error("nonlinear filter is only defined on pure global states (purity {purity})")]
    MixedStateFilter { purity: f64 },
    #[error("invalid branch structure: {0}")]
    InvalidBranches(String),
    #[error("brain register is not blank")]
    BrainNotBlank,
    #[error("environment register is not blank")]
    EnvironmentNotBlank,
    #[error("ancilla register is not blank; it must be prepared independently of the observed outcome")]
    AncillaNotBlank,
    #[error("requested {requested} environment copies but only {available} records are free")]
    InsufficientEnvironment { requested: usize, available: usize },
    #[error("invalid scenario field `{field}`: {reason}")]
    InvalidScenario { field: &'static str, reason: String },
    #[error("accessible count {accessible} out of range 0..={record_qubits} (record qubits at most {max})")]
    AccessibleOutOfRange {
        accessible: usize,
        record_qubits: usize,
        max: usize,
    },
    #[error("check precondition violated: {0}")]
    Precondition(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

use thiserror::Error;

/// Errors produced by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("resource cap exceeded: {requested} qubits requested, cap is {cap}")]
    QubitCap { requested: usize, cap: usize },

    #[error("basis index {index} out of range for {num_qubits} qubits")]
    IndexOutOfRange { index: usize, num_qubits: usize },

    #[error("qubit {qubit} is not valid for a {num_qubits}-qubit register")]
    InvalidQubit { qubit: usize, num_qubits: usize },

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("qubit set must not be empty")]
    EmptyQubitSet,

    #[error("control and target must differ (both {0})")]
    ControlIsTarget(usize),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("register layout {n_a}+{n_b} does not match {num_qubits} qubits")]
    LayoutMismatch { n_a: usize, n_b: usize, num_qubits: usize },

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("function arity mismatch: expected {expected} input bits, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("invalid truth table: {0}")]
    InvalidTruthTable(String),

    #[error("promise violated: function is neither constant nor balanced")]
    PromiseViolation,

    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("eigenvalue {0:e} is below the admissible negative tolerance")]
    NegativeEigenvalue(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

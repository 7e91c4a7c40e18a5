use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by simulation, decomposition and training routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operator or state dimensions do not match.
    DimensionMismatch { expected: usize, got: usize },
    /// A qubit index is out of range for the register.
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    /// The same qubit was listed twice in an index list.
    DuplicateQubit(usize),
    /// A matrix expected to be unitary failed the tolerance check.
    NotUnitary { deviation: f64 },
    /// A matrix expected to be Hermitian failed the tolerance check.
    NotHermitian { deviation: f64 },
    /// A parameter vector has the wrong length.
    WrongParamCount { expected: usize, got: usize },
    /// Identity parameters are undefined for this architecture.
    IdentityParamsUndefined,
    /// A probability lies outside [0, 1].
    InvalidProbability(f64),
    /// The operation is not supported for this input.
    Unsupported(&'static str),
    /// An iterative numerical routine failed to reach its tolerance.
    NumericalFailure(&'static str),
    /// A required input was empty.
    EmptyInput(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::QubitOutOfRange { qubit, num_qubits } => {
                write!(f, "qubit index {qubit} out of range for {num_qubits} qubits")
            }
            Error::DuplicateQubit(q) => write!(f, "duplicate qubit index {q}"),
            Error::NotUnitary { deviation } => {
                write!(f, "matrix is not unitary (deviation {deviation:e})")
            }
            Error::NotHermitian { deviation } => {
                write!(f, "matrix is not Hermitian (deviation {deviation:e})")
            }
            Error::WrongParamCount { expected, got } => {
                write!(f, "wrong parameter count: expected {expected}, got {got}")
            }
            Error::IdentityParamsUndefined => write!(
                f,
                "identity parameters are undefined when a hidden layer width differs from the register width"
            ),
            Error::InvalidProbability(p) => write!(f, "probability {p} outside [0, 1]"),
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::NumericalFailure(what) => write!(f, "numerical failure: {what}"),
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
        }
    }
}

impl core::error::Error for Error {}

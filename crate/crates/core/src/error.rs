use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector norm {0:e} is too small to normalize")]
    ZeroVector(f64),
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NotConverged { sweeps: usize, residual: f64 },
    #[error("negative component {value:e} at index {index}")]
    NegativeComponent { index: usize, value: f64 },
    #[error("negative increment {value:e} at index {index}")]
    NegativeIncrement { index: usize, value: f64 },
    #[error("weight vector total must be positive, got {0:e}")]
    NonPositiveTotal(f64),
    #[error("partial sums are not non-decreasing at index {0}")]
    NotCumulative(usize),
    #[error("totals differ: {left} vs {right}")]
    TotalMismatch { left: f64, right: f64 },
    #[error("empty input set")]
    EmptySet,
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("measurement `{label}`: effect {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive {
        label: String,
        index: usize,
        min_eigenvalue: f64,
    },
    #[error("measurement `{label}`: effects do not sum to the identity (max deviation {deviation:e})")]
    NotComplete { label: String, deviation: f64 },
    #[error("unknown measurement `{0}`")]
    UnknownMeasurement(String),
    #[error("probability list does not sum to 1 (sum = {0})")]
    NotProbability(f64),
    #[error("lambda {0} out of range")]
    LambdaOutOfRange(f64),
    #[error("weights: expected {expected} entries summing to 1, got {found} summing to {sum}")]
    WeightMismatch { expected: usize, found: usize, sum: f64 },
    #[error("subset enumeration needs {required} eigenvalue evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("component {0} is zero; log-product measure is undefined")]
    ZeroComponent(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;

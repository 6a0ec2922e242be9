use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("grid function has {got} values, domain expects {expected}")]
    ValueCount { expected: usize, got: usize },
    #[error("grid function value {value} at cell {index} is negative or not finite")]
    NegativeValue { index: usize, value: f64 },
    #[error("grid functions live on different domains")]
    DomainMismatch,
    #[error("invalid constraint: cap and mass must be positive (k={cap}, l={mass})")]
    InvalidConstraint { cap: f64, mass: f64 },
    #[error("infeasible mass: ball needs measure {required}, domain has {available}")]
    InfeasibleMass { required: f64, available: f64 },
    #[error("ball measure l/k = {measure} is not a whole number of cells (cell measure {cell})")]
    NonRepresentableMass { measure: f64, cell: f64 },
    #[error("invalid reflection: {0}")]
    InvalidReflection(String),
    #[error("reflection plane at {offset} does not map cell centers to cell centers (cell width {width})")]
    ReflectionNotGridCompatible { offset: f64, width: f64 },
    #[error("integrand `{0}` is not declared bounded")]
    NotBounded(String),
    #[error("phi_{which} decreases at tabulation point {at}")]
    NonMonotonePhi { which: usize, at: f64 },
    #[error("integrand `{0}` has no derivative path; decompose it first")]
    NotDifferentiable(String),
    #[error("function is not Schwarz symmetric")]
    NotSchwarzSymmetric,
    #[error("comparison function violates the constraint")]
    InfeasibleNu,
    #[error("start pair violates the constraints")]
    InfeasibleStart,
    #[error("enumeration needs {required} evaluations, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("levels must be nonnegative multiples of a common unit and include 0 and 1: {0}")]
    InvalidLevels(String),
    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

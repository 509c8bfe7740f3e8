use thiserror::Error;

/// Errors raised while reading the genome file format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: chromosome is not terminated by '|' or ')'")]
    UnterminatedChromosome { line: usize },
    #[error("line {line}: empty chromosome")]
    EmptyChromosome { line: usize },
    #[error("line {line}: duplicate genome name '{name}'")]
    DuplicateGenome { line: usize, name: String },
    #[error("line {line}: genome header without a name")]
    MissingGenomeName { line: usize },
    #[error("line {line}: marker '{token}' appears before any genome header")]
    MarkerOutsideGenome { line: usize, token: String },
    #[error("line {line}: invalid marker token '{token}'")]
    InvalidMarker { line: usize, token: String },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid marker family '{0}'")]
    InvalidFamily(String),
    #[error("chromosome must contain at least one marker")]
    EmptyChromosome,
    #[error("genomes are not singular: common family '{family}' occurs {occ_a} time(s) in A and {occ_b} in B")]
    NotSingular {
        family: String,
        occ_a: usize,
        occ_b: usize,
    },
    #[error("genome '{0}' contains a linear chromosome")]
    NotCircular(String),
    #[error("invalid sibling set: {0}")]
    InvalidSiblingSet(String),
    #[error("invalid capping: {0}")]
    InvalidCapping(String),
    #[error("{count} maximal sibling sets exceed the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("line {line}: unknown variable '{name}'")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: cannot parse value '{text}'")]
    UnparsableValue { line: usize, text: String },
    #[error("infeasible assignment: {0}")]
    InfeasibleAssignment(String),
    #[error("objective gives distance {objective_distance} but rescoring the decomposition gives {rescored}")]
    ScoreMismatch {
        objective_distance: String,
        rescored: String,
    },
    #[error("model fingerprint mismatch: expected {expected}, found {found}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("LP syntax error on line {line}: {message}")]
    LpSyntax { line: usize, message: String },
    #[error("invalid simulation config: {0}")]
    ConfigInvalid(String),
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("invalid location: {0}")]
    InvalidLocation(String),
    #[error("diagram must be capped")]
    NotCapped,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

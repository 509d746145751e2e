use thiserror::Error;

/// Errors raised by the cohomology toolkit.
///
/// Variants named `*Failure` or `CounterexampleFound` report a violated
/// theorem and therefore indicate a bug rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("size limit exceeded for {what}: {size} > {limit}")]
    SizeLimit {
        what: String,
        size: u128,
        limit: u128,
    },
    #[error("map is not a homomorphism at ({x}, {y})")]
    NotHomomorphism { x: usize, y: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("subgroup is not normal: {g} * {n} * {g}^-1 leaves the subgroup")]
    NotNormal { g: usize, n: usize },
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("subgroup is not stable: element {element} moved outside by gamma {gamma}")]
    NotStable { element: usize, gamma: usize },
    #[error("bijection check failed: {0}")]
    BijectionFailure(String),
    #[error("exactness fails at {node}: {detail}")]
    ExactnessFailure { node: String, detail: String },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducible(usize),
    #[error("fixed space has dimension {found}, expected {expected}")]
    DimensionFailure { expected: usize, found: usize },
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
    #[error("form classification mismatch: {0}")]
    MatchFailure(String),
    #[error("class does not describe a field")]
    NotAField,
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn size_check(what: &str, size: u128, limit: u128) -> Result<()> {
    if size > limit {
        Err(Error::SizeLimit {
            what: what.to_string(),
            size,
            limit,
        })
    } else {
        Ok(())
    }
}

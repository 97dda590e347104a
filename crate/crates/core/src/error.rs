use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid multiplicities: {0}")]
    InvalidMultiplicities(String),
    #[error("not a generalized Stirling permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid degree-weight family: {0}")]
    InvalidFamily(String),
    #[error("degree {degree} is not allowed in this family")]
    DegreeNotAllowed { degree: usize },
    #[error("label sets do not partition 1..={n}: {detail}")]
    NotAPartition { n: usize, detail: String },
    #[error("enumeration would produce {count} objects, above the cap of {cap}")]
    ResourceLimit { count: String, cap: u64 },
    #[error("invalid urn: {0}")]
    InvalidUrn(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("series did not converge within {terms} terms at x = {x}")]
    NonConvergence { terms: usize, x: f64 },
    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Crate-wide error type.
///
/// Verification *outcomes* (axiom counterexamples, failed inequality
/// anchors, non-simplicial facets found by a checker) are ordinary report
/// values, not errors; `Error` is reserved for misuse of an operation or
/// for resources running out.
#[derive(Debug, Error)]
pub enum Error {
    #[error("atom index {index} out of range for a ground set of {atom_count} atoms")]
    AtomOutOfRange { index: u32, atom_count: u32 },
    #[error("subset mask {mask:#x} out of range for {atom_count} atoms")]
    MaskOutOfRange { mask: u64, atom_count: u32 },
    #[error("invalid submeasure: {0}")]
    InvalidSubmeasure(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partitions live on different ground sets ({left} vs {right} atoms)")]
    MismatchedGroundSets { left: u32, right: u32 },
    #[error("infeasible: atom {atom} has submeasure {value}, not below the threshold {threshold}")]
    Infeasible {
        atom: u32,
        value: String,
        threshold: String,
    },
    #[error("vector length {got} does not match block count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("resource limit exceeded: {what} ({value} > {limit})")]
    ResourceLimit {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("complex parameters require n >= l, got n = {n}, l = {l}")]
    BadComplexParams { n: u32, l: u32 },
    #[error("degenerate interval ({lo}, {hi}) contains no candidate primes")]
    DegenerateInterval { lo: u64, hi: u64 },
    #[error("fine partition does not refine the coarse partition")]
    NotARefinement,
    #[error("partial function has an empty domain")]
    EmptyDomain,
    #[error("vertices do not form an inclusion chain")]
    NotAChain,
    #[error("payload is not a vertex of the expected complex: {payload}")]
    NotAVertex { payload: String },
    #[error("vertex payloads collide; tag the complexes before joining")]
    VertexCollision,
    #[error("map is not simplicial on facet {facet}")]
    NotSimplicial { facet: String },
    #[error("complex carries no group action (or the actions are incompatible)")]
    MissingAction,
    #[error("target of the first map does not match the source of the second")]
    CompositionMismatch,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

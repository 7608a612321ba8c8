use thiserror::Error;

use crate::scheme::SchemeViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point set must contain at least one point")]
    EmptyDomain,

    #[error("relations live on different domains ({left} vs {right} points)")]
    DomainMismatch { left: usize, right: usize },

    #[error("point {index} out of range for a domain of {n} points")]
    PointOutOfRange { index: usize, n: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("relation is not strongly connected: no directed path from {from} to {to}")]
    NotStronglyConnected { from: usize, to: usize },

    #[error("relation is disconnected: no path between {from} and {to}")]
    Disconnected { from: usize, to: usize },

    #[error("relation is not symmetric: ({0}, {1}) present without its transpose")]
    NotSymmetric(usize, usize),

    #[error("point subset must be nonempty")]
    EmptySubset,

    #[error(
        "relation is not regular: vertex {vertex} has out-degree {degree}, vertex 0 has {expected}"
    )]
    NotRegular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error(
        "relation is not biregular: vertex {vertex} has in-degree {degree}, expected {expected}"
    )]
    NotBiregular {
        vertex: usize,
        degree: usize,
        expected: usize,
    },

    #[error("relation is not a union of basis relations: basis relation {class} is split")]
    NotInSUnion { class: usize },

    #[error("relation does not commute with its transpose: ({0}, {1}) lies in exactly one of aa* and a*a")]
    NotCommuting(usize, usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("group is not transitive: the orbit of point 0 has {orbit} of {n} points")]
    Intransitive { orbit: usize, n: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("{u} is not invertible modulo {q}")]
    NotInvertible { u: u64, q: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("scheme axiom violated: {0}")]
    Scheme(#[from] SchemeViolation),
}

mod bits;
pub mod constructions;
pub mod error;
pub mod format;
pub mod inequalities;
pub mod metrics;
pub mod relation;
pub mod scheme;
pub mod suites;

pub use error::{Error, Result};
pub use inequalities::BoundReport;
pub use relation::{PointSet, PointSubset, Relation};
pub use scheme::{Permutation, Scheme, SchemeViolation};

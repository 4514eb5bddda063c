//! Percentile-based citation indicators computed in exact rational arithmetic.
//!
//! Publications are scored against the citation distribution of their field.
//! Tied publications whose segment of the distribution straddles a percentile
//! boundary are assigned fractionally to the intervals they overlap, so that a
//! whole field always scores exactly the scheme's expected value. Six older
//! tie-handling approaches are provided alongside for comparison and auditing.

pub mod cli;
pub mod distribution;
pub mod error;
pub mod fractional;
pub mod ingest;
pub mod interval;
pub mod legacy;
pub mod rational;
pub mod report;
pub mod scheme;

pub use distribution::{build_distributions, BandStats, CitationDistribution, PublicationRecord};
pub use error::{Error, Result};
pub use fractional::{
    field_audit, group_indicator, interval_overlap, publication_score, AuditEntry, Score,
};
pub use interval::Interval;
pub use legacy::{ApproachId, CwtsCalibration};
pub use rational::Rational;
pub use scheme::PercentileScheme;

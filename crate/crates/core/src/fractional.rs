//! Fractional assignment of tied publications to percentile intervals.
//!
//! Publications with `i` citations occupy the segment `[q_i, q_{i+1}]` of
//! their field's distribution. Each publication is assigned to percentile
//! interval `k` with the fraction of that segment overlapping the interval,
//! and its score is the correspondingly weighted average of interval scores.
//! Because the segments of a field tile `[0, 1]`, summing over a whole field
//! recovers every interval's length exactly, which makes the whole-field
//! indicator equal to `scheme.expected_value()` for every distribution.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::distribution::{field_average, CitationDistribution, PublicationRecord};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{integer, Rational};
use crate::scheme::PercentileScheme;

/// Length of the intersection of two closed intervals, 0 when disjoint.
pub fn interval_overlap(a: &Interval, b: &Interval) -> Rational {
    let upper = (&a.upper).min(&b.upper);
    let lower = (&a.lower).max(&b.lower);
    if upper > lower {
        upper - lower
    } else {
        Rational::zero()
    }
}

/// Score of publications with a given citation count in a field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Score {
    pub field_id: String,
    pub citations: u64,
    pub value: Rational,
    /// Fraction of the publication assigned to each percentile interval.
    pub breakdown: Vec<Rational>,
}

pub fn publication_score(
    dist: &CitationDistribution,
    scheme: &PercentileScheme,
    citations: u64,
) -> Result<Score> {
    let segment = dist.segment(citations).map_err(|_| Error::UndefinedScore {
        field: dist.field_id().to_string(),
        citations,
    })?;
    let width = segment.length();
    let mut value = Rational::zero();
    let breakdown = scheme
        .intervals()
        .map(|(interval, score)| {
            let fraction = interval_overlap(&interval, &segment) / &width;
            value += &fraction * score;
            fraction
        })
        .collect();
    Ok(Score {
        field_id: dist.field_id().to_string(),
        citations,
        value,
        breakdown,
    })
}

/// Scores for every citation count present in the field.
pub fn score_table(dist: &CitationDistribution, scheme: &PercentileScheme) -> BTreeMap<u64, Score> {
    dist.citation_values()
        .map(|i| {
            (
                i,
                publication_score(dist, scheme, i).expect("stored count has a segment"),
            )
        })
        .collect()
}

/// Average score of a set of publications, each scored against its own field.
pub fn group_indicator<'a, I>(
    members: I,
    dists: &BTreeMap<String, CitationDistribution>,
    scheme: &PercentileScheme,
) -> Result<Rational>
where
    I: IntoIterator<Item = &'a PublicationRecord>,
{
    let mut cache: HashMap<(&str, u64), Rational> = HashMap::new();
    let mut sum = Rational::zero();
    let mut n = 0u64;
    for record in members {
        let key = (record.field_id.as_str(), record.citations);
        let value = match cache.entry(key) {
            Entry::Occupied(e) => e.into_mut(),
            Entry::Vacant(e) => {
                let dist = dists.get(&record.field_id).ok_or_else(|| {
                    Error::InconsistentDataset(format!(
                        "publication `{}` belongs to unknown field `{}`",
                        record.pub_id, record.field_id
                    ))
                })?;
                let score = publication_score(dist, scheme, record.citations).map_err(|_| {
                    Error::InconsistentDataset(format!(
                        "publication `{}` has {} citations, absent from field `{}`",
                        record.pub_id, record.citations, record.field_id
                    ))
                })?;
                e.insert(score.value)
            }
        };
        sum += &*value;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyGroup);
    }
    Ok(sum / integer(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub observed: Rational,
    pub target: Rational,
    pub exact_match: bool,
}

impl AuditEntry {
    pub fn new(observed: Rational, target: Rational) -> Self {
        let exact_match = observed == target;
        AuditEntry {
            observed,
            target,
            exact_match,
        }
    }

    pub fn deviation(&self) -> Rational {
        &self.observed - &self.target
    }
}

/// Indicator of the field as a whole against the scheme's expected value.
pub fn field_audit(dist: &CitationDistribution, scheme: &PercentileScheme) -> AuditEntry {
    let observed = field_average(dist, |i| {
        publication_score(dist, scheme, i).map(|s| s.value)
    })
    .expect("stored counts always have scores");
    AuditEntry::new(observed, scheme.expected_value())
}

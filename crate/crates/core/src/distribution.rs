//! Per-field citation distributions.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{integer, ratio, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicationRecord {
    pub pub_id: String,
    pub field_id: String,
    pub citations: u64,
    pub groups: BTreeSet<String>,
}

impl PublicationRecord {
    pub fn new(pub_id: impl Into<String>, field_id: impl Into<String>, citations: u64) -> Self {
        PublicationRecord {
            pub_id: pub_id.into(),
            field_id: field_id.into(),
            citations,
            groups: BTreeSet::new(),
        }
    }

    pub fn with_groups<I, S>(mut self, groups: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.groups.extend(groups.into_iter().map(Into::into));
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Block {
    count: u64,
    below: u64,
}

/// Histogram of citation counts for one field.
///
/// Only citation counts that occur are stored. The number of publications
/// below each stored count is cached at construction, so cumulative
/// proportions are answered without rescanning the histogram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CitationDistribution {
    field_id: String,
    blocks: BTreeMap<u64, Block>,
    total: u64,
}

/// Shares of a field strictly below, exactly at and strictly above a threshold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandStats {
    pub below: Rational,
    pub at: Rational,
    pub above: Rational,
}

impl CitationDistribution {
    /// Builds a distribution from `(citations, publications)` pairs. Repeated
    /// citation counts are summed; zero publication counts are dropped.
    pub fn from_counts<I>(field_id: impl Into<String>, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, u64)>,
    {
        let mut merged: BTreeMap<u64, u64> = BTreeMap::new();
        for (citations, n) in counts {
            if n > 0 {
                *merged.entry(citations).or_default() += n;
            }
        }
        if merged.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let mut below = 0;
        let blocks = merged
            .into_iter()
            .map(|(citations, count)| {
                let block = Block { count, below };
                below += count;
                (citations, block)
            })
            .collect();
        Ok(CitationDistribution {
            field_id: field_id.into(),
            blocks,
            total: below,
        })
    }

    pub fn field_id(&self) -> &str {
        &self.field_id
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// `c_i`, zero when no publication has exactly `citations` citations.
    pub fn count_at(&self, citations: u64) -> u64 {
        self.blocks.get(&citations).map_or(0, |b| b.count)
    }

    /// Number of publications with fewer than `citations` citations.
    pub fn count_below(&self, citations: u64) -> u64 {
        match self.blocks.range(citations..).next() {
            Some((_, block)) => block.below,
            None => self.total,
        }
    }

    pub fn count_at_or_above(&self, citations: u64) -> u64 {
        self.total - self.count_below(citations)
    }

    /// Stored `(citations, c_i)` pairs in increasing citation order.
    pub fn counts(&self) -> impl DoubleEndedIterator<Item = (u64, u64)> + '_ {
        self.blocks.iter().map(|(&i, b)| (i, b.count))
    }

    pub fn citation_values(&self) -> impl DoubleEndedIterator<Item = u64> + '_ {
        self.blocks.keys().copied()
    }

    pub fn max_citations(&self) -> u64 {
        *self
            .blocks
            .keys()
            .next_back()
            .expect("distribution is non-empty")
    }

    fn share(&self, publications: u64) -> Rational {
        ratio(publications, self.total)
    }

    /// `q_i`: proportion of publications with fewer than `citations` citations.
    pub fn cumulative_below(&self, citations: u64) -> Rational {
        self.share(self.count_below(citations))
    }

    /// Proportion of publications with at least `citations` citations.
    pub fn share_at_or_above(&self, citations: u64) -> Rational {
        self.share(self.count_at_or_above(citations))
    }

    /// `[q_i, q_{i+1}]`, the part of the distribution occupied by publications
    /// with exactly `citations` citations.
    pub fn segment(&self, citations: u64) -> Result<Interval> {
        let block = self
            .blocks
            .get(&citations)
            .ok_or_else(|| Error::UndefinedSegment {
                field: self.field_id.clone(),
                citations,
            })?;
        Ok(Interval::new(
            self.share(block.below),
            self.share(block.below + block.count),
        ))
    }

    /// Smallest stored citation count `t` whose cumulative share of
    /// publications with at most `t` citations reaches `p`. Values of `p`
    /// above 1 yield the maximum stored count.
    pub fn percentile_threshold(&self, p: &Rational) -> u64 {
        self.blocks
            .iter()
            .find(|(_, b)| self.share(b.below + b.count) >= *p)
            .map_or_else(|| self.max_citations(), |(&i, _)| i)
    }

    pub fn band_stats(&self, threshold: u64) -> BandStats {
        let below = self.count_below(threshold);
        let at = self.count_at(threshold);
        let above = self.total - below - at;
        BandStats {
            below: self.share(below),
            at: self.share(at),
            above: self.share(above),
        }
    }
}

impl BandStats {
    pub fn sum(&self) -> Rational {
        &self.below + &self.at + &self.above
    }
}

/// Groups records by field and builds one distribution per field.
pub fn build_distributions(
    records: &[PublicationRecord],
) -> Result<BTreeMap<String, CitationDistribution>> {
    if records.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut seen = HashSet::with_capacity(records.len());
    let mut per_field: BTreeMap<&str, BTreeMap<u64, u64>> = BTreeMap::new();
    for record in records {
        if !seen.insert(record.pub_id.as_str()) {
            return Err(Error::DuplicatePublication(record.pub_id.clone()));
        }
        *per_field
            .entry(&record.field_id)
            .or_default()
            .entry(record.citations)
            .or_default() += 1;
    }
    per_field
        .into_iter()
        .map(|(field, counts)| {
            CitationDistribution::from_counts(field, counts).map(|d| (field.to_string(), d))
        })
        .collect()
}

/// Whole-field proportion helper used by audits: `Σ c_i · score_i / total`.
pub(crate) fn field_average<F>(dist: &CitationDistribution, mut score: F) -> Result<Rational>
where
    F: FnMut(u64) -> Result<Rational>,
{
    let mut sum = Rational::from_integer(0.into());
    for (i, c) in dist.counts() {
        sum += score(i)? * integer(c);
    }
    Ok(sum / integer(dist.total()))
}

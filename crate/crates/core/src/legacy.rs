//! Earlier approaches to tie handling, kept for comparison with fractional
//! assignment.
//!
//! The random tie orderings of the Pudovkin–Garfield and Schreiber
//! procedures are replaced by their exact closed forms: a publication's
//! expected outcome over all orderings of its tied block.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::distribution::{field_average, CitationDistribution, PublicationRecord};
use crate::error::{Error, Result};
use crate::fractional::publication_score;
use crate::rational::{integer, ratio, Rational};
use crate::scheme::PercentileScheme;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproachId {
    Fractional,
    Leydesdorff,
    Nsb,
    PudovkinGarfield,
    Scimago,
    Rousseau,
    Schreiber,
    SchreiberInclusive,
    Cwts,
}

impl ApproachId {
    pub const ALL: [ApproachId; 9] = [
        ApproachId::Fractional,
        ApproachId::Leydesdorff,
        ApproachId::Nsb,
        ApproachId::PudovkinGarfield,
        ApproachId::Scimago,
        ApproachId::Rousseau,
        ApproachId::Schreiber,
        ApproachId::SchreiberInclusive,
        ApproachId::Cwts,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ApproachId::Fractional => "fractional",
            ApproachId::Leydesdorff => "leydesdorff",
            ApproachId::Nsb => "nsb",
            ApproachId::PudovkinGarfield => "pudovkin_garfield",
            ApproachId::Scimago => "scimago",
            ApproachId::Rousseau => "rousseau",
            ApproachId::Schreiber => "schreiber",
            ApproachId::SchreiberInclusive => "schreiber_inclusive",
            ApproachId::Cwts => "cwts",
        }
    }

    /// Whether the approach is defined only for top-x% schemes.
    pub fn requires_top_x(self) -> bool {
        matches!(
            self,
            ApproachId::Scimago
                | ApproachId::Rousseau
                | ApproachId::Schreiber
                | ApproachId::SchreiberInclusive
                | ApproachId::Cwts
        )
    }

    pub fn supports(self, scheme: &PercentileScheme) -> bool {
        !self.requires_top_x() || scheme.top_share().is_some()
    }
}

impl fmt::Display for ApproachId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ApproachId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let wanted = s.trim().to_ascii_lowercase().replace('-', "_");
        ApproachId::ALL
            .into_iter()
            .find(|a| a.as_str() == wanted)
            .ok_or_else(|| format!("unknown approach `{s}`"))
    }
}

fn undefined(dist: &CitationDistribution, citations: u64) -> Error {
    Error::UndefinedScore {
        field: dist.field_id().to_string(),
        citations,
    }
}

fn require_present(dist: &CitationDistribution, citations: u64) -> Result<u64> {
    match dist.count_at(citations) {
        0 => Err(undefined(dist, citations)),
        c => Ok(c),
    }
}

/// Share of publications with fewer citations, `q_i`.
pub fn leydesdorff_percentile(dist: &CitationDistribution, citations: u64) -> Result<Rational> {
    require_present(dist, citations)?;
    Ok(dist.cumulative_below(citations))
}

/// Score of the interval `[p_{k−1}, p_k)` containing `percentile`; the top
/// interval is closed above.
pub fn legacy_interval_score(scheme: &PercentileScheme, percentile: &Rational) -> Rational {
    let k = scheme.boundaries()[1..]
        .iter()
        .position(|upper| percentile < upper)
        .unwrap_or(scheme.len() - 1);
    scheme.scores()[k].clone()
}

/// Mean of the rank percentiles `(below + j) / total`, `j = 1..=c_i`, of a
/// tied block.
pub fn pudovkin_garfield_percentile(
    dist: &CitationDistribution,
    citations: u64,
) -> Result<Rational> {
    let count = require_present(dist, citations)?;
    let below = integer(dist.count_below(citations));
    let mean_rank = below + ratio(count + 1, 2);
    Ok(mean_rank / integer(dist.total()))
}

/// Largest citation count whose share of publications at or above it is at
/// least `x`.
pub fn scimago_threshold(dist: &CitationDistribution, x: &Rational) -> u64 {
    dist.citation_values()
        .rev()
        .find(|&t| dist.share_at_or_above(t) >= *x)
        .unwrap_or_else(|| dist.citation_values().next().expect("non-empty"))
}

pub fn scimago_membership(
    dist: &CitationDistribution,
    x: &Rational,
    citations: u64,
) -> Result<bool> {
    require_present(dist, citations)?;
    Ok(citations >= scimago_threshold(dist, x))
}

/// Smallest stored citation count whose share at or above it is at most `x`;
/// `None` when even the most cited block exceeds `x`.
pub fn nsb_threshold(dist: &CitationDistribution, x: &Rational) -> Option<u64> {
    dist.citation_values()
        .find(|&t| dist.share_at_or_above(t) <= *x)
}

pub fn nsb_membership(dist: &CitationDistribution, x: &Rational, citations: u64) -> Result<bool> {
    require_present(dist, citations)?;
    Ok(nsb_threshold(dist, x).is_some_and(|t| citations >= t))
}

/// Fraction of a tied block whose rank percentile reaches `1 − x`.
///
/// Ranks within the block are `below + j` with `j = 0..c_i` (exclusive: the
/// publication itself is not counted) or `j = 1..=c_i` (inclusive).
pub fn schreiber_fraction(
    dist: &CitationDistribution,
    x: &Rational,
    citations: u64,
    inclusive: bool,
) -> Result<Rational> {
    let count = require_present(dist, citations)?;
    let below = dist.count_below(citations);
    // smallest rank r with r / total >= 1 - x
    let needed = (Rational::one() - x) * integer(dist.total());
    let needed = needed.numer().div_ceil(needed.denom());
    let (first, last) = if inclusive {
        (below + 1, below + count)
    } else {
        (below, below + count - 1)
    };
    let first = BigInt::from(first).max(needed);
    let last = BigInt::from(last);
    let qualifying = if last >= first {
        (last - first + 1u32)
            .to_u64()
            .expect("bounded by block size")
    } else {
        0
    };
    Ok(ratio(qualifying, count))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CwtsCalibration {
    pub threshold: u64,
    pub raw_share: Rational,
    pub factor: Rational,
}

/// Threshold whose share at or above it deviates least from `x`, and the
/// factor rescaling that share to exactly `x`. Equidistant candidates resolve
/// to the larger threshold.
pub fn cwts_calibrate(dist: &CitationDistribution, x: &Rational) -> CwtsCalibration {
    let mut best: Option<(Rational, u64, Rational)> = None;
    for t in dist.citation_values() {
        let share = dist.share_at_or_above(t);
        let deviation = (&share - x).abs();
        if best.as_ref().is_none_or(|(d, _, _)| deviation <= *d) {
            best = Some((deviation, t, share));
        }
    }
    let (_, threshold, raw_share) = best.expect("non-empty distribution");
    let factor = x / &raw_share;
    CwtsCalibration {
        threshold,
        raw_share,
        factor,
    }
}

impl CwtsCalibration {
    pub fn score(&self, citations: u64) -> Rational {
        if citations >= self.threshold {
            self.factor.clone()
        } else {
            Rational::zero()
        }
    }
}

/// Normalized share of the group's publications at or above the threshold.
pub fn cwts_group_indicator<'a, I>(
    members: I,
    dist: &CitationDistribution,
    calibration: &CwtsCalibration,
) -> Result<Rational>
where
    I: IntoIterator<Item = &'a PublicationRecord>,
{
    let (mut n, mut hits) = (0u64, 0u64);
    for record in members {
        if record.field_id != dist.field_id() {
            return Err(Error::InconsistentDataset(format!(
                "publication `{}` is in field `{}`, calibration is for `{}`",
                record.pub_id,
                record.field_id,
                dist.field_id()
            )));
        }
        n += 1;
        hits += u64::from(record.citations >= calibration.threshold);
    }
    if n == 0 {
        return Err(Error::EmptyGroup);
    }
    Ok(&calibration.factor * ratio(hits, n))
}

/// Per-field state for scoring publications under one approach and scheme.
#[derive(Clone, Debug)]
pub struct FieldScorer<'a> {
    approach: ApproachId,
    dist: &'a CitationDistribution,
    scheme: &'a PercentileScheme,
    top_share: Option<Rational>,
    threshold: Option<u64>,
    calibration: Option<CwtsCalibration>,
}

impl<'a> FieldScorer<'a> {
    pub fn new(
        approach: ApproachId,
        dist: &'a CitationDistribution,
        scheme: &'a PercentileScheme,
    ) -> Result<Self> {
        let top_share = scheme.top_share();
        if approach.requires_top_x() && top_share.is_none() {
            return Err(Error::ApproachSchemeMismatch {
                approach: approach.to_string(),
                scheme: scheme.name().to_string(),
            });
        }
        let mut scorer = FieldScorer {
            approach,
            dist,
            scheme,
            top_share,
            threshold: None,
            calibration: None,
        };
        if let Some(x) = &scorer.top_share {
            match approach {
                ApproachId::Scimago | ApproachId::Rousseau => {
                    scorer.threshold = Some(scimago_threshold(dist, x))
                }
                ApproachId::Nsb => scorer.threshold = nsb_threshold(dist, x),
                ApproachId::Cwts => scorer.calibration = Some(cwts_calibrate(dist, x)),
                _ => {}
            }
        }
        Ok(scorer)
    }

    pub fn approach(&self) -> ApproachId {
        self.approach
    }

    pub fn calibration(&self) -> Option<&CwtsCalibration> {
        self.calibration.as_ref()
    }

    /// Score, membership or fraction of a publication with `citations`
    /// citations, expressed in the scheme's score units.
    pub fn score(&self, citations: u64) -> Result<Rational> {
        let dist = self.dist;
        let scheme = self.scheme;
        let member = |flag: bool| -> Rational {
            if flag {
                scheme.highest_score().clone()
            } else {
                scheme.lowest_score().clone()
            }
        };
        let x = self.top_share.as_ref();
        match self.approach {
            ApproachId::Fractional => publication_score(dist, scheme, citations).map(|s| s.value),
            ApproachId::Leydesdorff => {
                leydesdorff_percentile(dist, citations).map(|q| legacy_interval_score(scheme, &q))
            }
            ApproachId::Nsb if x.is_some() => {
                require_present(dist, citations)?;
                Ok(member(self.threshold.is_some_and(|t| citations >= t)))
            }
            ApproachId::Nsb => {
                leydesdorff_percentile(dist, citations).map(|q| legacy_interval_score(scheme, &q))
            }
            ApproachId::PudovkinGarfield => pudovkin_garfield_percentile(dist, citations)
                .map(|p| legacy_interval_score(scheme, &p)),
            ApproachId::Scimago | ApproachId::Rousseau => {
                require_present(dist, citations)?;
                Ok(member(citations >= self.threshold.expect("set for top-x")))
            }
            ApproachId::Schreiber => schreiber_fraction(dist, x.expect("top-x"), citations, false),
            ApproachId::SchreiberInclusive => {
                schreiber_fraction(dist, x.expect("top-x"), citations, true)
            }
            ApproachId::Cwts => {
                require_present(dist, citations)?;
                Ok(self
                    .calibration
                    .as_ref()
                    .expect("set for cwts")
                    .score(citations))
            }
        }
    }

    /// Indicator for the whole field (every publication of the field counted).
    pub fn field_indicator(&self) -> Result<Rational> {
        field_average(self.dist, |i| self.score(i))
    }
}

pub fn field_indicator(
    approach: ApproachId,
    dist: &CitationDistribution,
    scheme: &PercentileScheme,
) -> Result<Rational> {
    FieldScorer::new(approach, dist, scheme)?.field_indicator()
}

/// Mean per-publication score of a group under `approach`, each publication
/// scored against its own field.
pub fn legacy_group_indicator<'a, I>(
    members: I,
    dists: &BTreeMap<String, CitationDistribution>,
    approach: ApproachId,
    scheme: &PercentileScheme,
) -> Result<Rational>
where
    I: IntoIterator<Item = &'a PublicationRecord>,
{
    if !approach.supports(scheme) {
        return Err(Error::ApproachSchemeMismatch {
            approach: approach.to_string(),
            scheme: scheme.name().to_string(),
        });
    }
    let mut scorers: HashMap<&str, FieldScorer<'_>> = HashMap::new();
    let mut sum = Rational::zero();
    let mut n = 0u64;
    for record in members {
        let field = record.field_id.as_str();
        if !scorers.contains_key(field) {
            let dist = dists.get(field).ok_or_else(|| {
                Error::InconsistentDataset(format!(
                    "publication `{}` belongs to unknown field `{field}`",
                    record.pub_id
                ))
            })?;
            scorers.insert(field, FieldScorer::new(approach, dist, scheme)?);
        }
        sum += scorers[field].score(record.citations).map_err(|_| {
            Error::InconsistentDataset(format!(
                "publication `{}` has {} citations, absent from field `{field}`",
                record.pub_id, record.citations
            ))
        })?;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyGroup);
    }
    Ok(sum / integer(n))
}

//! Percentile-interval schemes: boundaries `p_0 < … < p_N` and scores
//! `s_1 < … < s_N`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::rational::{integer, ratio, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PercentileScheme {
    name: String,
    boundaries: Vec<Rational>,
    scores: Vec<Rational>,
}

impl PercentileScheme {
    pub fn new(
        name: impl Into<String>,
        boundaries: Vec<Rational>,
        scores: Vec<Rational>,
    ) -> Result<Self> {
        let scheme = PercentileScheme {
            name: name.into(),
            boundaries,
            scores,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    /// Two intervals split at `1 - x` with scores 0 and 1; the indicator is the
    /// proportion of top-x publications.
    pub fn top_x(x: &Rational) -> Result<Self> {
        if *x <= Rational::zero() || *x >= Rational::one() {
            return Err(Error::InvalidScheme(format!(
                "top share {x} is not in (0, 1)"
            )));
        }
        let name = format!(
            "top{}",
            crate::rational::format_decimal_trimmed(&(x * integer(100)))
        );
        PercentileScheme::new(
            name,
            vec![Rational::zero(), Rational::one() - x, Rational::one()],
            vec![Rational::zero(), Rational::one()],
        )
    }

    /// Six-class scheme of Leydesdorff et al.
    pub fn r6() -> Self {
        let boundaries = [0, 50, 75, 90, 95, 99, 100].map(|p| ratio(p, 100)).to_vec();
        let scores = (1..=6).map(integer).collect();
        PercentileScheme::new("r6", boundaries, scores).expect("built-in scheme is valid")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn boundaries(&self) -> &[Rational] {
        &self.boundaries
    }

    pub fn scores(&self) -> &[Rational] {
        &self.scores
    }

    /// Number of intervals `N`.
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Interval `k` (0-based), i.e. `[p_k, p_{k+1}]`.
    pub fn interval(&self, k: usize) -> Interval {
        Interval::new(self.boundaries[k].clone(), self.boundaries[k + 1].clone())
    }

    pub fn intervals(&self) -> impl Iterator<Item = (Interval, &Rational)> + '_ {
        (0..self.len()).map(move |k| (self.interval(k), &self.scores[k]))
    }

    pub fn lowest_score(&self) -> &Rational {
        &self.scores[0]
    }

    pub fn highest_score(&self) -> &Rational {
        &self.scores[self.len() - 1]
    }

    /// `Some(x)` when this is a top-x scheme (two intervals scored 0 and 1).
    pub fn top_share(&self) -> Option<Rational> {
        let is_top = self.len() == 2 && self.scores[0].is_zero() && self.scores[1].is_one();
        is_top.then(|| Rational::one() - &self.boundaries[1])
    }

    /// `Σ_k (p_k − p_{k−1}) · s_k`: the value every whole field attains under
    /// fractional assignment.
    pub fn expected_value(&self) -> Rational {
        self.intervals().map(|(iv, s)| iv.length() * s).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidScheme(msg));
        if self.boundaries.len() != self.scores.len() + 1 {
            return fail(format!(
                "{} boundaries require {} scores, got {}",
                self.boundaries.len(),
                self.boundaries.len().saturating_sub(1),
                self.scores.len()
            ));
        }
        if self.scores.len() < 2 {
            return fail(format!(
                "at least 2 intervals required, got {}",
                self.scores.len()
            ));
        }
        if !self.boundaries[0].is_zero() {
            return fail(format!(
                "first boundary must be 0, got {}",
                self.boundaries[0]
            ));
        }
        let last = &self.boundaries[self.boundaries.len() - 1];
        if !last.is_one() {
            return fail(format!("last boundary must be 1, got {last}"));
        }
        if let Some(w) = self.boundaries.windows(2).position(|w| w[0] >= w[1]) {
            return fail(format!(
                "boundaries not strictly increasing at positions {} and {}",
                w,
                w + 1
            ));
        }
        if let Some(w) = self.scores.windows(2).position(|w| w[0] >= w[1]) {
            return fail(format!(
                "scores not strictly increasing at intervals {} and {}",
                w + 1,
                w + 2
            ));
        }
        Ok(())
    }
}

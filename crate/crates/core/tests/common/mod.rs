//! Test-only oracles and random corpus generation. Nothing here calls into
//! the closed forms it is used to check.

#![allow(dead_code)]

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use percentile_indicators::{CitationDistribution, PercentileScheme, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn dist(field: &str, counts: &[(u64, u64)]) -> CitationDistribution {
    CitationDistribution::from_counts(field, counts.iter().copied()).unwrap()
}

pub fn main_field() -> CitationDistribution {
    dist("main", &[(0, 90), (10, 10), (20, 5)])
}

pub fn scenario_nine() -> CitationDistribution {
    dist("main", &[(0, 90), (9, 1), (10, 9), (20, 5)])
}

pub fn scenario_eleven() -> CitationDistribution {
    dist("main", &[(0, 90), (10, 8), (11, 2), (20, 5)])
}

pub fn top10() -> PercentileScheme {
    PercentileScheme::top_x(&ratio(1, 10)).unwrap()
}

/// For a block of `m` tied publications, the number of orderings (out of
/// `m!`) that put one fixed publication at each position. Computed by
/// enumerating every permutation with Heap's algorithm; memoized per `m`.
pub fn position_histogram(m: usize) -> &'static [u64] {
    const MAX: usize = 12;
    assert!(
        (1..=MAX).contains(&m),
        "block size {m} too large for enumeration"
    );
    static CACHE: [OnceLock<Vec<u64>>; MAX + 1] = [const { OnceLock::new() }; MAX + 1];
    CACHE[m].get_or_init(|| {
        let mut perm: Vec<usize> = (0..m).collect();
        let mut hist = vec![0u64; m];
        let mut pos0 = 0usize;
        hist[pos0] += 1;
        let mut c = vec![0usize; m];
        let mut i = 1;
        while i < m {
            if c[i] < i {
                let j = if i % 2 == 0 { 0 } else { c[i] };
                perm.swap(j, i);
                if perm[j] == 0 {
                    pos0 = j;
                } else if perm[i] == 0 {
                    pos0 = i;
                }
                hist[pos0] += 1;
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        hist
    })
}

/// Average top-x membership of a tied publication over all orderings of
/// its block, following the random-order procedure literally: the
/// publication at position `j` (0-based) has percentile
/// `(below + j + offset) / total`, with offset 1 when the publication counts
/// itself in the numerator.
pub fn schreiber_permutation_oracle(
    below: u64,
    block: usize,
    total: u64,
    x: &Rational,
    inclusive: bool,
) -> Rational {
    let hist = position_histogram(block);
    let cutoff = Rational::one() - x;
    let offset = u64::from(inclusive);
    let mut hits = BigInt::zero();
    let mut all = BigInt::zero();
    for (pos, &n) in hist.iter().enumerate() {
        let pct = ratio((below + pos as u64 + offset) as i64, total as i64);
        if pct >= cutoff {
            hits += n;
        }
        all += n;
    }
    Rational::new(hits, all)
}

/// Mean rank percentile of a tied block under one explicit ordering.
pub fn pudovkin_garfield_ordering_mean(below: u64, order: &[usize], total: u64) -> Rational {
    let mut ranks = vec![0u64; order.len()];
    for (position, &publication) in order.iter().enumerate() {
        ranks[publication] = below + position as u64 + 1;
    }
    let sum: u64 = ranks.iter().sum();
    ratio(sum as i64, (total * order.len() as u64) as i64)
}

/// All distributions with at most `max_total` publications, as block sizes
/// over citation counts 0, 1, 2, ...
pub fn all_small_distributions(max_total: u64) -> Vec<CitationDistribution> {
    fn compositions(n: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for first in 1..=n {
            prefix.push(first);
            compositions(n - first, prefix, out);
            prefix.pop();
        }
    }
    let mut blocks = Vec::new();
    for n in 1..=max_total {
        compositions(n, &mut Vec::new(), &mut blocks);
    }
    blocks
        .into_iter()
        .map(|b| {
            CitationDistribution::from_counts(
                "small",
                b.into_iter().enumerate().map(|(i, c)| (i as u64 * 3, c)),
            )
            .unwrap()
        })
        .collect()
}

/// 1–50 distinct citation counts, 1–500 publications each.
pub fn random_distribution<R: Rng>(rng: &mut R) -> CitationDistribution {
    let distinct = rng.random_range(1..=50usize);
    let spread = rng.random_range(distinct as u64..=5_000);
    let mut values: Vec<u64> = (0..=spread).collect();
    values.shuffle(rng);
    let counts: Vec<(u64, u64)> = values[..distinct]
        .iter()
        .map(|&v| (v, rng.random_range(1..=500)))
        .collect();
    CitationDistribution::from_counts("random", counts).unwrap()
}

fn random_unit_rational<R: Rng>(rng: &mut R) -> Rational {
    let den = rng.random_range(2..=1000i64);
    ratio(rng.random_range(1..den), den)
}

/// Valid scheme with N = 2..8 intervals. Some boundaries are taken from the
/// distribution's own cumulative proportions so segment edges coincide with
/// interval edges.
pub fn random_scheme<R: Rng>(rng: &mut R, dist: &CitationDistribution) -> PercentileScheme {
    let n = rng.random_range(2..=8usize);
    let edges: Vec<Rational> = dist
        .citation_values()
        .skip(1)
        .map(|i| dist.cumulative_below(i))
        .collect();
    let mut inner: Vec<Rational> = Vec::new();
    let mut guard = 0;
    while inner.len() < n - 1 {
        let candidate = if !edges.is_empty() && rng.random_bool(0.3) {
            edges[rng.random_range(0..edges.len())].clone()
        } else {
            random_unit_rational(rng)
        };
        if !inner.contains(&candidate) {
            inner.push(candidate);
        }
        guard += 1;
        assert!(guard < 10_000);
    }
    inner.sort();
    let mut boundaries = vec![Rational::zero()];
    boundaries.extend(inner);
    boundaries.push(Rational::one());

    let mut score = ratio(rng.random_range(-5..=5), rng.random_range(1..=4));
    let mut scores = Vec::with_capacity(n);
    for _ in 0..n {
        scores.push(score.clone());
        score += ratio(rng.random_range(1..=100), rng.random_range(1..=20));
    }
    PercentileScheme::new("random", boundaries, scores).unwrap()
}

pub fn random_top_x<R: Rng>(rng: &mut R) -> (Rational, PercentileScheme) {
    let x = random_unit_rational(rng);
    let scheme = PercentileScheme::top_x(&x).unwrap();
    (x, scheme)
}

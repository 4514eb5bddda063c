//! Acceptance criteria, one pass/fail line each. Runs as a plain binary so
//! every criterion reports even after an earlier one fails.

mod common;

use std::path::PathBuf;
use std::process::Command;

use common::*;
use num_traits::{One, Zero};
use percentile_indicators::legacy::{
    cwts_calibrate, cwts_group_indicator, field_indicator, legacy_interval_score,
    pudovkin_garfield_percentile, schreiber_fraction, FieldScorer,
};
use percentile_indicators::rational::{format_decimal, to_f64};
use percentile_indicators::{
    field_audit, group_indicator, interval_overlap, publication_score, ApproachId,
    CitationDistribution, PercentileScheme, PublicationRecord, Rational,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(value: &Rational, expected: f64, tol: f64) -> bool {
    (to_f64(value) - expected).abs() <= tol
}

/// Nine uncited publications plus one with `cited` citations.
fn group(cited: u64) -> Vec<PublicationRecord> {
    let mut g: Vec<_> = (0..9)
        .map(|k| PublicationRecord::new(format!("u{k}"), "main", 0))
        .collect();
    g.push(PublicationRecord::new("c", "main", cited));
    g
}

fn dists_of(d: &CitationDistribution) -> std::collections::BTreeMap<String, CitationDistribution> {
    [(d.field_id().to_string(), d.clone())]
        .into_iter()
        .collect()
}

fn c1_main_field() -> Check {
    let d = main_field();
    let s10 = publication_score(&d, &top10(), 10)
        .map_err(|e| e.to_string())?
        .value;
    ensure!(
        within(&s10, 0.550, 0.0005) && s10 == ratio(11, 20),
        "S_10 = {s10}"
    );
    let audit = field_audit(&d, &top10());
    ensure!(
        audit.observed == ratio(1, 10) && audit.exact_match,
        "field share {}",
        audit.observed
    );
    Ok(())
}

fn c2_scenarios() -> Check {
    let s = top10();
    let nine = publication_score(&scenario_nine(), &s, 10).unwrap().value;
    ensure!(within(&nine, 0.611, 0.0005), "scenario 9: S_10 = {nine}");
    let eleven = publication_score(&scenario_eleven(), &s, 10).unwrap().value;
    ensure!(eleven == ratio(4375, 10000), "scenario 11: S_10 = {eleven}");
    for d in [scenario_nine(), scenario_eleven()] {
        ensure!(
            publication_score(&d, &s, 0).unwrap().value.is_zero(),
            "S_0 moved"
        );
        ensure!(
            publication_score(&d, &s, 20).unwrap().value.is_one(),
            "S_20 moved"
        );
    }
    Ok(())
}

fn c3_groups() -> Check {
    let s = top10();
    let top_main = group_indicator(&group(20), &dists_of(&main_field()), &s).unwrap();
    ensure!(top_main == ratio(1, 10), "top group fractional {top_main}");
    let cal = cwts_calibrate(&main_field(), &ratio(1, 10));
    let top_cwts = cwts_group_indicator(&group(20), &main_field(), &cal).unwrap();
    ensure!(
        format_decimal(&top_cwts, 4) == "0.0700",
        "top group cwts {top_cwts}"
    );
    let tie_main = group_indicator(&group(10), &dists_of(&main_field()), &s).unwrap();
    ensure!(
        format_decimal(&tie_main, 4) == "0.0550",
        "tie group {tie_main}"
    );
    let tie_nine = group_indicator(&group(10), &dists_of(&scenario_nine()), &s).unwrap();
    ensure!(
        within(&tie_nine, 0.0611, 0.0001),
        "tie group scenario 9: {tie_nine}"
    );
    let tie_eleven = group_indicator(&group(10), &dists_of(&scenario_eleven()), &s).unwrap();
    ensure!(
        tie_eleven == ratio(4375, 100000),
        "tie group scenario 11: {tie_eleven}"
    );
    Ok(())
}

fn c4_legacy_shares() -> Check {
    let d = main_field();
    let s = top10();
    let expected = [
        (ApproachId::Leydesdorff, ratio(5, 105)),
        (ApproachId::Nsb, ratio(5, 105)),
        (ApproachId::Scimago, ratio(15, 105)),
        (ApproachId::Rousseau, ratio(15, 105)),
        (ApproachId::Schreiber, ratio(10, 105)),
        (ApproachId::SchreiberInclusive, ratio(11, 105)),
        (ApproachId::Cwts, ratio(1, 10)),
    ];
    for (approach, want) in expected {
        let got = field_indicator(approach, &d, &s).unwrap();
        ensure!(got == want, "{approach}: {got} != {want}");
    }
    let factor = cwts_calibrate(&d, &ratio(1, 10)).factor;
    ensure!(
        format_decimal(&factor, 3) == "0.700",
        "cwts factor {factor}"
    );
    Ok(())
}

fn c5_cwts() -> Check {
    let x = ratio(1, 10);
    let cases = [
        (main_field(), 10, "0.700", "7.00"),
        (scenario_nine(), 10, "0.750", "7.50"),
        (scenario_eleven(), 11, "1.500", "15.00"),
    ];
    for (d, threshold, factor, pct) in cases {
        let cal = cwts_calibrate(&d, &x);
        ensure!(
            cal.threshold == threshold,
            "threshold {} != {threshold}",
            cal.threshold
        );
        ensure!(
            format_decimal(&cal.factor, 3) == factor,
            "factor {} != {factor}",
            cal.factor
        );
        let value = cwts_group_indicator(&group(20), &d, &cal).unwrap()
            * Rational::from_integer(100.into());
        ensure!(format_decimal(&value, 2) == pct, "group {value}% != {pct}%");
    }
    Ok(())
}

fn c6_pudovkin_garfield() -> Check {
    let p = pudovkin_garfield_percentile(&main_field(), 10).unwrap();
    let pct = &p * Rational::from_integer(100.into());
    ensure!(
        format_decimal(&pct, 1) == "91.0",
        "displayed {}",
        format_decimal(&pct, 1)
    );
    ensure!(
        to_f64(&pct) > 90.95 && to_f64(&pct) < 90.96,
        "percentile {pct}"
    );
    ensure!(
        legacy_interval_score(&top10(), &p).is_one(),
        "not classified top 10%"
    );
    Ok(())
}

/// 1000 random distributions, each paired with a random general scheme and
/// a random top-x scheme.
fn corpus() -> Vec<(
    CitationDistribution,
    PercentileScheme,
    Rational,
    PercentileScheme,
)> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2012);
    (0..1000)
        .map(|_| {
            let d = random_distribution(&mut rng);
            let general = random_scheme(&mut rng, &d);
            let (x, top) = random_top_x(&mut rng);
            (d, general, x, top)
        })
        .collect()
}

fn c7_invariance(
    corpus: &[(
        CitationDistribution,
        PercentileScheme,
        Rational,
        PercentileScheme,
    )],
) -> Check {
    for (n, (d, general, x, top)) in corpus.iter().enumerate() {
        let audit = field_audit(d, general);
        ensure!(
            audit.exact_match && audit.observed == general.expected_value(),
            "case {n}: {} != {}",
            audit.observed,
            audit.target
        );
        let share = field_audit(d, top).observed;
        ensure!(share == *x, "case {n}: top share {share} != {x}");
    }
    Ok(())
}

fn c8_partitions(
    corpus: &[(
        CitationDistribution,
        PercentileScheme,
        Rational,
        PercentileScheme,
    )],
) -> Check {
    for (n, (d, general, _, top)) in corpus.iter().enumerate() {
        for s in [general, top] {
            let segments: Vec<_> = d.citation_values().map(|i| d.segment(i).unwrap()).collect();
            let intervals: Vec<_> = (0..s.len()).map(|k| s.interval(k)).collect();
            let overlaps: Vec<Vec<Rational>> = segments
                .iter()
                .map(|seg| {
                    intervals
                        .iter()
                        .map(|iv| interval_overlap(iv, seg))
                        .collect()
                })
                .collect();
            for (seg, row) in segments.iter().zip(&overlaps) {
                ensure!(
                    row.iter().sum::<Rational>() == seg.length(),
                    "case {n}: segment {seg} not covered"
                );
            }
            for (k, iv) in intervals.iter().enumerate() {
                let col: Rational = overlaps.iter().map(|row| &row[k]).sum();
                ensure!(col == iv.length(), "case {n}: interval {iv} not covered");
            }
        }
    }
    Ok(())
}

fn c9_oracles() -> Check {
    let xs = [
        ratio(1, 10),
        ratio(1, 12),
        ratio(1, 7),
        ratio(1, 4),
        ratio(1, 3),
        ratio(1, 2),
        ratio(2, 3),
        ratio(9, 10),
    ];
    let small = all_small_distributions(12);
    ensure!(
        small.len() == 4095,
        "enumerated {} distributions",
        small.len()
    );
    for d in &small {
        for x in &xs {
            let top = PercentileScheme::top_x(x).unwrap();
            let leydesdorff = FieldScorer::new(ApproachId::Leydesdorff, d, &top).unwrap();
            let nsb = FieldScorer::new(ApproachId::Nsb, d, &top).unwrap();
            let scimago = FieldScorer::new(ApproachId::Scimago, d, &top).unwrap();
            let rousseau = FieldScorer::new(ApproachId::Rousseau, d, &top).unwrap();
            for (i, c) in d.counts() {
                for inclusive in [false, true] {
                    let closed = schreiber_fraction(d, x, i, inclusive).unwrap();
                    let oracle = schreiber_permutation_oracle(
                        d.count_below(i),
                        c as usize,
                        d.total(),
                        x,
                        inclusive,
                    );
                    ensure!(closed == oracle, "schreiber {closed} != oracle {oracle}");
                }
                ensure!(
                    leydesdorff.score(i).unwrap() == nsb.score(i).unwrap(),
                    "leydesdorff != nsb at {i}"
                );
                ensure!(
                    scimago.score(i).unwrap() == rousseau.score(i).unwrap(),
                    "scimago != rousseau at {i}"
                );
            }
        }
    }
    Ok(())
}

fn c10_monotone_bounds(
    corpus: &[(
        CitationDistribution,
        PercentileScheme,
        Rational,
        PercentileScheme,
    )],
) -> Check {
    for (n, (d, general, _, top)) in corpus.iter().enumerate() {
        let scores: Vec<Rational> = d
            .citation_values()
            .map(|i| publication_score(d, general, i).unwrap().value)
            .collect();
        ensure!(
            scores.windows(2).all(|w| w[0] <= w[1]),
            "case {n}: S_i not monotone"
        );
        ensure!(
            scores
                .iter()
                .all(|v| v >= general.lowest_score() && v <= general.highest_score()),
            "case {n}: S_i out of bounds"
        );
        for approach in ApproachId::ALL
            .into_iter()
            .filter(|a| *a != ApproachId::Fractional)
        {
            let scorer = FieldScorer::new(approach, d, top).unwrap();
            let values: Vec<Rational> = d
                .citation_values()
                .map(|i| scorer.score(i).unwrap())
                .collect();
            ensure!(
                values.windows(2).all(|w| w[0] <= w[1]),
                "case {n}: {approach} not monotone"
            );
            // CWTS scores carry the normalization factor; its membership is the 0/1 indicator
            let memberships: Vec<Rational> = if approach == ApproachId::Cwts {
                let cal = scorer.calibration().unwrap();
                d.citation_values()
                    .map(|i| {
                        if i >= cal.threshold {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            } else {
                values
            };
            ensure!(
                memberships
                    .iter()
                    .all(|v| *v >= Rational::zero() && *v <= Rational::one()),
                "case {n}: {approach} outside [0, 1]"
            );
        }
    }
    Ok(())
}

fn c11_cli_determinism() -> Check {
    let fixture: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "tests",
        "fixtures",
        "main_field.csv",
    ]
    .iter()
    .collect();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pbi"))
            .args([
                "audit",
                "--input",
                fixture.to_str().unwrap(),
                "--approach",
                "all",
            ])
            .output()
            .map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    ensure!(
        first.status.success(),
        "audit failed: {}",
        String::from_utf8_lossy(&first.stderr)
    );
    ensure!(first.stdout == second.stdout, "outputs differ between runs");
    let text = String::from_utf8(first.stdout).map_err(|e| e.to_string())?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| e.to_string())?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (approach_col, exact_col) = (col("approach"), col("observed_exact"));
    let table: Vec<(String, String)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[approach_col].to_string(), r[exact_col].to_string())
        })
        .collect();
    let expected = [
        ("fractional", ratio(1, 10)),
        ("leydesdorff", ratio(5, 105)),
        ("nsb", ratio(5, 105)),
        ("scimago", ratio(15, 105)),
        ("rousseau", ratio(15, 105)),
        ("schreiber", ratio(10, 105)),
        ("schreiber_inclusive", ratio(11, 105)),
        ("cwts", ratio(1, 10)),
    ];
    for (approach, want) in expected {
        let got = table
            .iter()
            .find(|(a, _)| a == approach)
            .map(|(_, v)| v.clone());
        ensure!(
            got.as_deref() == Some(want.to_string().as_str()),
            "{approach}: {got:?} != {want}"
        );
    }
    Ok(())
}

fn c12_thresholds() -> Check {
    let d = main_field();
    let t = d.percentile_threshold(&ratio(9, 10));
    ensure!(t == 10, "threshold {t}");
    let b = d.band_stats(t);
    let pct = |v: &Rational| format_decimal(&(v * Rational::from_integer(100.into())), 2);
    let got = (pct(&b.below), pct(&b.at), pct(&b.above));
    ensure!(
        got == ("85.71".into(), "9.52".into(), "4.76".into()),
        "bands {got:?}"
    );
    Ok(())
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion<'_>> = vec![
        (
            "1  main field S_10 = 0.550, field share exactly 1/10",
            Box::new(c1_main_field),
        ),
        (
            "2  perturbation scenarios 0.611 / 0.4375, S_0 and S_20 fixed",
            Box::new(c2_scenarios),
        ),
        (
            "3  group indicators fractional and CWTS",
            Box::new(c3_groups),
        ),
        (
            "4  legacy whole-field shares on the main field",
            Box::new(c4_legacy_shares),
        ),
        (
            "5  CWTS calibrations and normalized group values",
            Box::new(c5_cwts),
        ),
        (
            "6  Pudovkin-Garfield average percentile 91.0",
            Box::new(c6_pudovkin_garfield),
        ),
        (
            "7  field invariance on 1000 random distributions",
            Box::new(|| c7_invariance(&corpus)),
        ),
        (
            "8  overlap partitions on the random corpus",
            Box::new(|| c8_partitions(&corpus)),
        ),
        (
            "9  permutation oracle and approach equivalences (total <= 12)",
            Box::new(c9_oracles),
        ),
        (
            "10 monotonicity and bounds on the random corpus",
            Box::new(|| c10_monotone_bounds(&corpus)),
        ),
        (
            "11 CLI audit deterministic and reproduces legacy table",
            Box::new(c11_cli_determinism),
        ),
        (
            "-- thresholds on the main field: 10, 85.71/9.52/4.76",
            Box::new(c12_thresholds),
        ),
    ];
    let mut failures = 0;
    for (name, check) in &criteria {
        let started = std::time::Instant::now();
        match check() {
            Ok(()) => println!("[PASS] {name} ({:.2?})", started.elapsed()),
            Err(why) => {
                failures += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}

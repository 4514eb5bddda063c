//! Command-line front end: argument definitions and the four report commands.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use log::warn;
use num_traits::{One, Zero};

use crate::distribution::{build_distributions, CitationDistribution, PublicationRecord};
use crate::error::{Error, Result};
use crate::fractional::publication_score;
use crate::ingest::{
    apply_memberships, parse_publications, parse_scheme_file, Dataset, InputFormat,
};
use crate::legacy::{
    cwts_calibrate, legacy_group_indicator, ApproachId, CwtsCalibration, FieldScorer,
};
use crate::rational::{integer, parse_exact, Rational};
use crate::report::{write_report, Cell, Column, RenderOptions, Report, ReportFormat};
use crate::scheme::PercentileScheme;

#[derive(Debug, Parser)]
#[command(
    name = "pbi",
    version,
    about = "Percentile-based citation indicators with exact fractional tie handling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score every publication against its field.
    Score(CommonArgs),
    /// Indicator per research group.
    Evaluate(CommonArgs),
    /// Whole-field indicator per field and approach versus the scheme target.
    Audit(CommonArgs),
    /// Percentile threshold and below/at/above shares per field.
    Thresholds(ThresholdArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Publications file (CSV, or JSONL for .jsonl/.ndjson). Repeatable.
    #[arg(long = "input", required = true, value_name = "PATH")]
    pub inputs: Vec<PathBuf>,

    /// Extra group memberships as a `pub_id,group_id` CSV. Repeatable.
    #[arg(long = "memberships", value_name = "PATH")]
    pub memberships: Vec<PathBuf>,

    /// Built-in scheme: top10 (default), top<PERCENT> such as top1, topX=<PERCENT>, or r6.
    #[arg(long, value_name = "NAME", group = "scheme_source")]
    pub scheme: Option<String>,

    /// Scheme JSON file with exact boundaries and scores.
    #[arg(long, value_name = "PATH", group = "scheme_source")]
    pub scheme_file: Option<PathBuf>,

    /// Top-x% scheme with the given percentage, in (0, 100).
    #[arg(long, value_name = "PERCENT", group = "scheme_source")]
    pub top: Option<String>,

    /// Approach name or `all`.
    #[arg(long, default_value = "fractional", value_name = "NAME")]
    pub approach: String,

    /// Output path; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Report format: csv or json.
    #[arg(long, default_value = "csv")]
    pub format: ReportFormat,

    /// Decimal places in rendered values (at least 1).
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..))]
    pub precision: u16,

    /// Render proportions as percentages (columns suffixed `_pct`).
    #[arg(long)]
    pub percent: bool,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    /// Cumulative share defining the threshold, in (0, 1).
    #[arg(long, default_value = "0.9", value_name = "P")]
    pub percentile: String,
}

/// Resolved command options.
#[derive(Clone, Debug)]
pub struct CliConfig {
    pub scheme: PercentileScheme,
    pub approaches: Vec<ApproachId>,
    /// `--approach all`: inapplicable approaches yield annotated empty rows
    /// instead of an error.
    pub all_approaches: bool,
    pub render: RenderOptions,
    pub format: ReportFormat,
    pub percentile: Rational,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            scheme: PercentileScheme::top_x(&crate::rational::ratio(1, 10)).expect("valid"),
            approaches: vec![ApproachId::Fractional],
            all_approaches: false,
            render: RenderOptions::default(),
            format: ReportFormat::Csv,
            percentile: crate::rational::ratio(9, 10),
        }
    }
}

fn percent_to_share(text: &str) -> anyhow::Result<Rational> {
    let pct = parse_exact(text).with_context(|| format!("invalid percentage `{text}`"))?;
    if pct <= Rational::zero() || pct >= integer(100) {
        bail!("percentage {text} is not in (0, 100)");
    }
    Ok(pct / integer(100))
}

/// Resolves a built-in scheme name.
pub fn builtin_scheme(name: &str) -> anyhow::Result<PercentileScheme> {
    let lower = name.trim().to_ascii_lowercase();
    if lower == "r6" {
        return Ok(PercentileScheme::r6());
    }
    let pct = lower
        .strip_prefix("topx=")
        .or_else(|| lower.strip_prefix("top="))
        .or_else(|| lower.strip_prefix("top"));
    match pct {
        Some(p) if !p.is_empty() => Ok(PercentileScheme::top_x(&percent_to_share(p)?)?),
        _ => bail!("unknown scheme `{name}` (expected top10, top<PERCENT>, topX=<PERCENT> or r6)"),
    }
}

impl CliConfig {
    pub fn from_args(args: &CommonArgs) -> anyhow::Result<Self> {
        let scheme = if let Some(path) = &args.scheme_file {
            let file =
                File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
            parse_scheme_file(file).with_context(|| format!("in scheme file {}", path.display()))?
        } else if let Some(pct) = &args.top {
            PercentileScheme::top_x(&percent_to_share(pct)?)?
        } else {
            builtin_scheme(args.scheme.as_deref().unwrap_or("top10"))?
        };
        let (approaches, all_approaches) = if args.approach.trim().eq_ignore_ascii_case("all") {
            (ApproachId::ALL.to_vec(), true)
        } else {
            let approach: ApproachId = args.approach.parse().map_err(anyhow::Error::msg)?;
            if !approach.supports(&scheme) {
                return Err(Error::ApproachSchemeMismatch {
                    approach: approach.to_string(),
                    scheme: scheme.name().to_string(),
                }
                .into());
            }
            (vec![approach], false)
        };
        Ok(CliConfig {
            scheme,
            approaches,
            all_approaches,
            render: RenderOptions {
                precision: args.precision as usize,
                percent: args.percent,
            },
            format: args.format,
            percentile: crate::rational::ratio(9, 10),
        })
    }
}

/// Reads and merges all input files plus membership tables.
pub fn load_dataset(args: &CommonArgs) -> anyhow::Result<Dataset> {
    let mut dataset = Dataset::default();
    for path in &args.inputs {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let source = path.display().to_string();
        let part = parse_publications(file, InputFormat::from_path(path), &source)
            .with_context(|| format!("in {source}"))?;
        dataset.merge(part)?;
    }
    for path in &args.memberships {
        let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
        let source = path.display().to_string();
        apply_memberships(&mut dataset, file, &source).with_context(|| format!("in {source}"))?;
    }
    Ok(dataset)
}

fn not_applicable(approach: ApproachId, scheme: &PercentileScheme) -> String {
    format!("{approach} is not defined for scheme {}", scheme.name())
}

fn score_column(name: &str, scheme: &PercentileScheme) -> Column {
    if scheme.top_share().is_some() {
        Column::share(name)
    } else {
        Column::rational(name)
    }
}

fn scorers<'a>(
    dists: &'a BTreeMap<String, CitationDistribution>,
    config: &'a CliConfig,
) -> Result<HashMap<(&'a str, ApproachId), Option<FieldScorer<'a>>>> {
    let mut out = HashMap::new();
    for (field, dist) in dists {
        for &approach in &config.approaches {
            let scorer = if approach.supports(&config.scheme) {
                Some(FieldScorer::new(approach, dist, &config.scheme)?)
            } else {
                None
            };
            out.insert((field.as_str(), approach), scorer);
        }
    }
    Ok(out)
}

/// One row per publication and approach, with the fractional approach's
/// assignment to each percentile interval.
pub fn cmd_score(dataset: &Dataset, config: &CliConfig) -> Result<Report> {
    let dists = build_distributions(&dataset.records)?;
    let scheme = &config.scheme;
    let mut columns = vec![
        Column::text("pub_id"),
        Column::text("field_id"),
        Column::integer("citations"),
        Column::text("approach"),
        Column::text("scheme"),
        score_column("score", scheme),
    ];
    columns.extend((1..=scheme.len()).map(|k| Column::share(&format!("interval_{k}"))));
    columns.push(Column::text("note"));
    let mut report = Report::new(columns);

    let scorers = scorers(&dists, config)?;
    let mut records: Vec<&PublicationRecord> = dataset.records.iter().collect();
    records.sort_by(|a, b| a.pub_id.cmp(&b.pub_id));
    for record in records {
        let dist = &dists[&record.field_id];
        for &approach in &config.approaches {
            let mut row: Vec<Cell> = vec![
                record.pub_id.as_str().into(),
                record.field_id.as_str().into(),
                record.citations.into(),
                approach.as_str().into(),
                scheme.name().into(),
            ];
            let mut note = Cell::Empty;
            match &scorers[&(record.field_id.as_str(), approach)] {
                Some(_) if approach == ApproachId::Fractional => {
                    let score = publication_score(dist, scheme, record.citations)?;
                    row.push(score.value.into());
                    row.extend(score.breakdown.into_iter().map(Cell::from));
                }
                Some(scorer) => {
                    row.push(scorer.score(record.citations)?.into());
                    row.extend((0..scheme.len()).map(|_| Cell::Empty));
                }
                None => {
                    row.push(Cell::Empty);
                    row.extend((0..scheme.len()).map(|_| Cell::Empty));
                    note = not_applicable(approach, scheme).into();
                }
            }
            row.push(note);
            report.push(row);
        }
    }
    Ok(report)
}

fn calibration_cells(calibration: Option<&CwtsCalibration>) -> [Cell; 3] {
    match calibration {
        Some(c) => [
            c.threshold.into(),
            c.raw_share.clone().into(),
            c.factor.clone().into(),
        ],
        None => [Cell::Empty, Cell::Empty, Cell::Empty],
    }
}

fn calibration_columns() -> [Column; 3] {
    [
        Column::integer("cwts_threshold"),
        Column::share("cwts_raw_share"),
        Column::rational("cwts_factor"),
    ]
}

/// One row per research group and approach. Groups without publications are
/// omitted with a warning.
pub fn cmd_evaluate(dataset: &Dataset, config: &CliConfig) -> Result<Report> {
    let dists = build_distributions(&dataset.records)?;
    let scheme = &config.scheme;
    let mut columns = vec![
        Column::text("group_id"),
        Column::text("approach"),
        Column::text("scheme"),
        Column::integer("publications"),
        Column::integer("fields"),
        score_column("indicator", scheme),
    ];
    columns.extend(calibration_columns());
    columns.push(Column::text("note"));
    let mut report = Report::new(columns);

    let mut members: BTreeMap<&str, Vec<&PublicationRecord>> = BTreeMap::new();
    for record in &dataset.records {
        for group in &record.groups {
            members.entry(group).or_default().push(record);
        }
    }
    for group in &dataset.declared_groups {
        if !members.contains_key(group.as_str()) {
            warn!("group `{group}` has no publications in the dataset; omitted");
        }
    }

    for (group, pubs) in &members {
        let mut fields: Vec<&str> = pubs.iter().map(|p| p.field_id.as_str()).collect();
        fields.sort_unstable();
        fields.dedup();
        for &approach in &config.approaches {
            let mut row: Vec<Cell> = vec![
                (*group).into(),
                approach.as_str().into(),
                scheme.name().into(),
                (pubs.len() as u64).into(),
                (fields.len() as u64).into(),
            ];
            let mut note = Cell::Empty;
            if approach.supports(scheme) {
                row.push(
                    legacy_group_indicator(pubs.iter().copied(), &dists, approach, scheme)?.into(),
                );
                let calibration = match (approach, fields.as_slice(), scheme.top_share()) {
                    (ApproachId::Cwts, [field], Some(x)) => {
                        Some(cwts_calibrate(&dists[*field], &x))
                    }
                    (ApproachId::Cwts, _, _) => {
                        note = "publications span several fields; calibrated per field".into();
                        None
                    }
                    _ => None,
                };
                row.extend(calibration_cells(calibration.as_ref()));
            } else {
                row.push(Cell::Empty);
                row.extend(calibration_cells(None));
                note = not_applicable(approach, scheme).into();
            }
            row.push(note);
            report.push(row);
        }
    }
    Ok(report)
}

/// Whole-field indicator per field and approach against the scheme's
/// expected value.
pub fn cmd_audit(dataset: &Dataset, config: &CliConfig) -> Result<Report> {
    let dists = build_distributions(&dataset.records)?;
    let scheme = &config.scheme;
    let target = scheme.expected_value();
    let mut columns = vec![
        Column::text("field_id"),
        Column::text("approach"),
        Column::text("scheme"),
        Column::integer("publications"),
        score_column("observed", scheme),
        score_column("target", scheme),
        score_column("deviation", scheme),
        Column::boolean("exact_match"),
    ];
    columns.extend(calibration_columns());
    columns.push(Column::text("note"));
    let mut report = Report::new(columns);

    let scorers = scorers(&dists, config)?;
    for (field, dist) in &dists {
        for &approach in &config.approaches {
            let mut row: Vec<Cell> = vec![
                field.as_str().into(),
                approach.as_str().into(),
                scheme.name().into(),
                dist.total().into(),
            ];
            let mut note = Cell::Empty;
            match &scorers[&(field.as_str(), approach)] {
                Some(scorer) => {
                    let observed = scorer.field_indicator()?;
                    let deviation = &observed - &target;
                    let exact = deviation.is_zero();
                    row.extend([
                        observed.into(),
                        target.clone().into(),
                        deviation.into(),
                        exact.into(),
                    ]);
                    row.extend(calibration_cells(scorer.calibration()));
                }
                None => {
                    row.extend([Cell::Empty, target.clone().into(), Cell::Empty, Cell::Empty]);
                    row.extend(calibration_cells(None));
                    note = not_applicable(approach, scheme).into();
                }
            }
            row.push(note);
            report.push(row);
        }
    }
    Ok(report)
}

/// Percentile threshold, band shares and the CWTS minimum-deviation threshold
/// (for top share `1 − percentile`) per field.
pub fn cmd_thresholds(dataset: &Dataset, config: &CliConfig) -> Result<Report> {
    let dists = build_distributions(&dataset.records)?;
    let p = &config.percentile;
    if *p <= Rational::zero() || *p >= Rational::one() {
        return Err(Error::InvalidNumber(format!(
            "percentile {p} is not in (0, 1)"
        )));
    }
    let mut columns = vec![
        Column::text("field_id"),
        Column::integer("publications"),
        Column::share("percentile"),
        Column::integer("threshold"),
        Column::share("share_below"),
        Column::share("share_at"),
        Column::share("share_above"),
    ];
    columns.extend(calibration_columns());
    let mut report = Report::new(columns);
    let x = Rational::one() - p;
    for (field, dist) in &dists {
        let threshold = dist.percentile_threshold(p);
        let bands = dist.band_stats(threshold);
        let mut row: Vec<Cell> = vec![
            field.as_str().into(),
            dist.total().into(),
            p.clone().into(),
            threshold.into(),
            bands.below.into(),
            bands.at.into(),
            bands.above.into(),
        ];
        row.extend(calibration_cells(Some(&cwts_calibrate(dist, &x))));
        report.push(row);
    }
    Ok(report)
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    let (args, report) = match &cli.command {
        Command::Score(args) => (
            args,
            cmd_score(&load_dataset(args)?, &CliConfig::from_args(args)?)?,
        ),
        Command::Evaluate(args) => (
            args,
            cmd_evaluate(&load_dataset(args)?, &CliConfig::from_args(args)?)?,
        ),
        Command::Audit(args) => (
            args,
            cmd_audit(&load_dataset(args)?, &CliConfig::from_args(args)?)?,
        ),
        Command::Thresholds(t) => {
            let mut config = CliConfig::from_args(&t.common)?;
            config.percentile = parse_exact(&t.percentile)
                .with_context(|| format!("invalid percentile `{}`", t.percentile))?;
            (
                &t.common,
                cmd_thresholds(&load_dataset(&t.common)?, &config)?,
            )
        }
    };
    let bytes = write_report(
        &report,
        args.format,
        RenderOptions {
            precision: args.precision as usize,
            percent: args.percent,
        },
    );
    match &args.output {
        Some(path) => std::fs::write(path, &bytes)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => std::io::stdout().lock().write_all(&bytes)?,
    }
    Ok(())
}

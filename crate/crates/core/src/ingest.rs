//! Reading publication datasets, memberships and scheme files; writing
//! datasets and schemes back out.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::io::{BufRead, BufReader, Read};
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::distribution::PublicationRecord;
use crate::error::{Error, Result};
use crate::rational::{format_fraction, parse_exact};
use crate::scheme::PercentileScheme;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl InputFormat {
    /// `jsonl` for `.jsonl`/`.ndjson` paths, CSV otherwise.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext)
                if ext.eq_ignore_ascii_case("jsonl") || ext.eq_ignore_ascii_case("ndjson") =>
            {
                InputFormat::Jsonl
            }
            _ => InputFormat::Csv,
        }
    }
}

impl FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" | "ndjson" => Ok(InputFormat::Jsonl),
            other => Err(format!("unknown input format `{other}`")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Dataset {
    pub records: Vec<PublicationRecord>,
    pub source: String,
    /// Groups named in membership files, whether or not any listed
    /// publication was found.
    pub declared_groups: BTreeSet<String>,
}

impl Dataset {
    /// Appends another dataset, keeping publication ids unique.
    pub fn merge(&mut self, other: Dataset) -> Result<()> {
        let mut seen: HashSet<String> = self.records.iter().map(|r| r.pub_id.clone()).collect();
        for record in &other.records {
            if !seen.insert(record.pub_id.clone()) {
                return Err(Error::DuplicatePublication(record.pub_id.clone()));
            }
        }
        self.records.extend(other.records);
        self.declared_groups.extend(other.declared_groups);
        self.source = if self.source.is_empty() {
            other.source
        } else {
            format!("{}, {}", self.source, other.source)
        };
        Ok(())
    }

    /// All group ids carried by records.
    pub fn groups(&self) -> BTreeSet<&str> {
        self.records
            .iter()
            .flat_map(|r| r.groups.iter().map(String::as_str))
            .collect()
    }
}

pub fn parse_publications<R: Read>(
    reader: R,
    format: InputFormat,
    source: &str,
) -> Result<Dataset> {
    let records = match format {
        InputFormat::Csv => parse_csv(reader, source)?,
        InputFormat::Jsonl => parse_jsonl(reader, source)?,
    };
    let mut seen = HashSet::with_capacity(records.len());
    for record in &records {
        if !seen.insert(record.pub_id.as_str()) {
            return Err(Error::DuplicatePublication(record.pub_id.clone()));
        }
    }
    Ok(Dataset {
        records,
        source: source.to_string(),
        declared_groups: BTreeSet::new(),
    })
}

fn csv_error(err: csv::Error) -> Error {
    let line = err.position().map_or(0, |p| p.line());
    match err.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        csv::ErrorKind::Utf8 { err, .. } => Error::Parse {
            line,
            message: format!("invalid UTF-8: {err}"),
        },
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => Error::Parse {
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        other => Error::Parse {
            line,
            message: format!("{other:?}"),
        },
    }
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader)
}

fn column_index(headers: &csv::StringRecord, name: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| Error::Parse {
            line: 1,
            message: format!("missing required column `{name}`"),
        })
}

fn parse_citations(text: &str, line: u64) -> Result<u64> {
    text.parse::<u64>().map_err(|_| Error::Validation {
        line,
        message: if text.starts_with('-') {
            format!("negative citation count `{text}`")
        } else {
            format!("citation count `{text}` is not a non-negative integer")
        },
    })
}

fn require_id(value: &str, column: &str, line: u64) -> Result<String> {
    if value.is_empty() {
        return Err(Error::Validation {
            line,
            message: format!("empty `{column}`"),
        });
    }
    Ok(value.to_string())
}

fn split_groups(text: &str) -> BTreeSet<String> {
    text.split(';')
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .map(String::from)
        .collect()
}

fn parse_csv<R: Read>(reader: R, source: &str) -> Result<Vec<PublicationRecord>> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let pub_col = column_index(&headers, "pub_id")?;
    let field_col = column_index(&headers, "field_id")?;
    let cite_col = column_index(&headers, "citations")?;
    let group_col = headers.iter().position(|h| h == "groups");
    for name in headers.iter() {
        if !["pub_id", "field_id", "citations", "groups"].contains(&name) {
            warn!("{source}: ignoring unknown column `{name}`");
        }
    }

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        records.push(PublicationRecord {
            pub_id: require_id(&row[pub_col], "pub_id", line)?,
            field_id: require_id(&row[field_col], "field_id", line)?,
            citations: parse_citations(&row[cite_col], line)?,
            groups: group_col.map(|c| split_groups(&row[c])).unwrap_or_default(),
        });
    }
    Ok(records)
}

fn parse_jsonl<R: Read>(reader: R, source: &str) -> Result<Vec<PublicationRecord>> {
    let mut records = Vec::new();
    let mut warned: HashSet<String> = HashSet::new();
    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = idx as u64 + 1;
        let line = line.map_err(|e| match e.kind() {
            std::io::ErrorKind::InvalidData => Error::Parse {
                line: line_no,
                message: "invalid UTF-8".into(),
            },
            _ => Error::Io(e),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let value: Value = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        let Value::Object(obj) = value else {
            return Err(parse_err("expected a JSON object".into()));
        };
        let text_field = |key: &str| -> Result<String> {
            match obj.get(key) {
                Some(Value::String(s)) => require_id(s.trim(), key, line_no),
                Some(_) => Err(parse_err(format!("`{key}` must be a string"))),
                None => Err(parse_err(format!("missing key `{key}`"))),
            }
        };
        let pub_id = text_field("pub_id")?;
        let field_id = text_field("field_id")?;
        let citations = match obj.get("citations") {
            Some(Value::Number(n)) => n.as_u64().ok_or_else(|| Error::Validation {
                line: line_no,
                message: format!("citation count `{n}` is not a non-negative integer"),
            })?,
            Some(other) => {
                return Err(Error::Validation {
                    line: line_no,
                    message: format!("citation count `{other}` is not a non-negative integer"),
                })
            }
            None => return Err(parse_err("missing key `citations`".into())),
        };
        let groups = match obj.get("groups") {
            None | Some(Value::Null) => BTreeSet::new(),
            Some(Value::Array(items)) => items
                .iter()
                .map(|g| match g {
                    Value::String(s) => Ok(s.trim().to_string()),
                    _ => Err(parse_err("`groups` entries must be strings".into())),
                })
                .filter(|g| !matches!(g, Ok(s) if s.is_empty()))
                .collect::<Result<_>>()?,
            Some(_) => return Err(parse_err("`groups` must be an array".into())),
        };
        for key in obj.keys() {
            if !["pub_id", "field_id", "citations", "groups"].contains(&key.as_str())
                && warned.insert(key.clone())
            {
                warn!("{source}: ignoring unknown key `{key}`");
            }
        }
        records.push(PublicationRecord {
            pub_id,
            field_id,
            citations,
            groups,
        });
    }
    Ok(records)
}

/// Merges a `pub_id,group_id` membership table into the dataset by union.
/// Rows naming unknown publications are skipped with a warning.
pub fn apply_memberships<R: Read>(dataset: &mut Dataset, reader: R, source: &str) -> Result<()> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers().map_err(csv_error)?.clone();
    let pub_col = column_index(&headers, "pub_id")?;
    let group_col = column_index(&headers, "group_id")?;
    let index: HashMap<String, usize> = dataset
        .records
        .iter()
        .enumerate()
        .map(|(i, r)| (r.pub_id.clone(), i))
        .collect();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        let pub_id = require_id(&row[pub_col], "pub_id", line)?;
        let group = require_id(&row[group_col], "group_id", line)?;
        dataset.declared_groups.insert(group.clone());
        match index.get(&pub_id) {
            Some(&i) => {
                dataset.records[i].groups.insert(group);
            }
            None => warn!("{source}:{line}: membership for unknown publication `{pub_id}` skipped"),
        }
    }
    Ok(())
}

pub fn write_publications(dataset: &Dataset, format: InputFormat) -> Result<Vec<u8>> {
    match format {
        InputFormat::Csv => {
            let mut wtr = csv::Writer::from_writer(Vec::new());
            wtr.write_record(["pub_id", "field_id", "citations", "groups"])
                .map_err(csv_error)?;
            for r in &dataset.records {
                let groups = r.groups.iter().cloned().collect::<Vec<_>>().join(";");
                wtr.write_record([&r.pub_id, &r.field_id, &r.citations.to_string(), &groups])
                    .map_err(csv_error)?;
            }
            wtr.into_inner().map_err(|e| Error::Io(e.into_error()))
        }
        InputFormat::Jsonl => {
            let mut out = Vec::new();
            for r in &dataset.records {
                let line = serde_json::json!({
                    "pub_id": r.pub_id,
                    "field_id": r.field_id,
                    "citations": r.citations,
                    "groups": r.groups,
                });
                out.extend_from_slice(line.to_string().as_bytes());
                out.push(b'\n');
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SchemeFile {
    name: String,
    boundaries: Vec<String>,
    scores: Vec<String>,
}

pub fn parse_scheme_file<R: Read>(reader: R) -> Result<PercentileScheme> {
    let file: SchemeFile = serde_json::from_reader(reader).map_err(|e| Error::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    let exact = |values: &[String], what: &str| {
        values
            .iter()
            .map(|v| {
                parse_exact(v).map_err(|_| Error::Parse {
                    line: 0,
                    message: format!("{what} value `{v}` is not an exact number"),
                })
            })
            .collect::<Result<Vec<_>>>()
    };
    let boundaries = exact(&file.boundaries, "boundary")?;
    let scores = exact(&file.scores, "score")?;
    PercentileScheme::new(file.name, boundaries, scores)
}

/// Scheme JSON with exact `num/den` strings.
pub fn write_scheme_file(scheme: &PercentileScheme) -> Vec<u8> {
    let file = SchemeFile {
        name: scheme.name().to_string(),
        boundaries: scheme.boundaries().iter().map(format_fraction).collect(),
        scores: scheme.scores().iter().map(format_fraction).collect(),
    };
    serde_json::to_vec_pretty(&file).expect("scheme serializes")
}

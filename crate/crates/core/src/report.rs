//! Tabular result reports rendered as CSV or JSON.
//!
//! Every rational column is written twice: a decimal rendering at the
//! requested precision (half-even) and the exact value as `num/den` in a
//! sibling `<name>_exact` column.

use std::str::FromStr;

use serde_json::{Map, Value};

use crate::rational::{format_decimal, format_fraction, integer, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnKind {
    Text,
    Integer,
    Boolean,
    /// Exact value; `share` marks proportions eligible for percent rendering.
    Rational {
        share: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

impl Column {
    pub fn text(name: &str) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Text,
        }
    }

    pub fn integer(name: &str) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Integer,
        }
    }

    pub fn boolean(name: &str) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Boolean,
        }
    }

    pub fn rational(name: &str) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Rational { share: false },
        }
    }

    pub fn share(name: &str) -> Self {
        Column {
            name: name.into(),
            kind: ColumnKind::Rational { share: true },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Text(String),
    Integer(u64),
    Boolean(bool),
    Value(Rational),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Integer(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Boolean(v)
    }
}

impl From<Rational> for Cell {
    fn from(v: Rational) -> Self {
        Cell::Value(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

pub type ReportRow = Vec<Cell>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub columns: Vec<Column>,
    pub rows: Vec<ReportRow>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    pub precision: usize,
    /// Render share columns as `value × 100` under a `_pct` header.
    pub percent: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            precision: 4,
            percent: false,
        }
    }
}

enum Rendered {
    Text(String),
    Integer(u64),
    Boolean(bool),
    Null,
}

impl Report {
    pub fn new(columns: Vec<Column>) -> Self {
        Report {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: ReportRow) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match columns"
        );
        self.rows.push(row);
    }

    fn headers(&self, opts: RenderOptions) -> Vec<String> {
        let mut out = Vec::new();
        for col in &self.columns {
            match col.kind {
                ColumnKind::Rational { share } => {
                    if share && opts.percent {
                        out.push(format!("{}_pct", col.name));
                    } else {
                        out.push(col.name.clone());
                    }
                    out.push(format!("{}_exact", col.name));
                }
                _ => out.push(col.name.clone()),
            }
        }
        out
    }

    fn render_row(&self, row: &ReportRow, opts: RenderOptions) -> Vec<Rendered> {
        let precision = opts.precision.max(1);
        let mut out = Vec::new();
        for (col, cell) in self.columns.iter().zip(row) {
            match (col.kind, cell) {
                (ColumnKind::Rational { share }, Cell::Value(v)) => {
                    let shown = if share && opts.percent {
                        v * integer(100)
                    } else {
                        v.clone()
                    };
                    out.push(Rendered::Text(format_decimal(&shown, precision)));
                    out.push(Rendered::Text(format_fraction(v)));
                }
                (ColumnKind::Rational { .. }, _) => {
                    out.push(Rendered::Null);
                    out.push(Rendered::Null);
                }
                (_, Cell::Text(s)) => out.push(Rendered::Text(s.clone())),
                (_, Cell::Integer(n)) => out.push(Rendered::Integer(*n)),
                (_, Cell::Boolean(b)) => out.push(Rendered::Boolean(*b)),
                (_, Cell::Value(v)) => out.push(Rendered::Text(format_fraction(v))),
                (_, Cell::Empty) => out.push(Rendered::Null),
            }
        }
        out
    }
}

/// Serializes a report; output is a pure function of its arguments.
pub fn write_report(report: &Report, format: ReportFormat, opts: RenderOptions) -> Vec<u8> {
    let headers = report.headers(opts);
    match format {
        ReportFormat::Csv => {
            let mut wtr = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(Vec::new());
            wtr.write_record(&headers).expect("in-memory write");
            for row in &report.rows {
                let fields: Vec<String> = report
                    .render_row(row, opts)
                    .into_iter()
                    .map(|r| match r {
                        Rendered::Text(s) => s,
                        Rendered::Integer(n) => n.to_string(),
                        Rendered::Boolean(b) => b.to_string(),
                        Rendered::Null => String::new(),
                    })
                    .collect();
                wtr.write_record(&fields).expect("in-memory write");
            }
            wtr.into_inner().expect("in-memory write")
        }
        ReportFormat::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = headers
                        .iter()
                        .cloned()
                        .zip(report.render_row(row, opts).into_iter().map(|r| match r {
                            Rendered::Text(s) => Value::String(s),
                            Rendered::Integer(n) => Value::from(n),
                            Rendered::Boolean(b) => Value::Bool(b),
                            Rendered::Null => Value::Null,
                        }))
                        .collect();
                    Value::Object(obj)
                })
                .collect();
            let mut out = serde_json::to_vec_pretty(&Value::Array(rows)).expect("json serializes");
            out.push(b'\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn sample() -> Report {
        let mut r = Report::new(vec![
            Column::text("subject"),
            Column::share("value"),
            Column::integer("threshold"),
        ]);
        r.push(vec!["g1".into(), ratio(11, 210).into(), Cell::Empty]);
        r.push(vec!["g2".into(), ratio(1, 10).into(), 10u64.into()]);
        r.push(vec!["g3".into(), ratio(11, 20).into(), Cell::Empty]);
        r
    }

    #[test]
    fn csv_columns_and_values() {
        let out = String::from_utf8(write_report(
            &sample(),
            ReportFormat::Csv,
            RenderOptions::default(),
        ))
        .unwrap();
        let expected = "subject,value,value_exact,threshold\ng1,0.0524,11/210,\ng2,0.1000,1/10,10\ng3,0.5500,11/20,\n";
        assert_eq!(out, expected);
    }

    #[test]
    fn percent_rendering() {
        let opts = RenderOptions {
            precision: 2,
            percent: true,
        };
        let out = String::from_utf8(write_report(&sample(), ReportFormat::Csv, opts)).unwrap();
        assert!(
            out.starts_with(
                "subject,value_pct,value_exact,threshold\ng1,5.24,11/210,\ng2,10.00,1/10,10\n"
            ),
            "{out}"
        );
    }

    #[test]
    fn json_rows_keep_column_order() {
        let out = write_report(&sample(), ReportFormat::Json, RenderOptions::default());
        let v: Value = serde_json::from_slice(&out).unwrap();
        let first = v[0].as_object().unwrap();
        assert_eq!(
            first.keys().collect::<Vec<_>>(),
            vec!["subject", "value", "value_exact", "threshold"]
        );
        assert_eq!(first["value"], "0.0524");
        assert_eq!(first["value_exact"], "11/210");
        assert!(first["threshold"].is_null());
        assert_eq!(v[1]["threshold"], 10);
    }
}

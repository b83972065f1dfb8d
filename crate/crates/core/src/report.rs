//! Scorecard reports in table, CSV and JSON form.

use std::cmp::Ordering;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{round_half_up, AuthorMetrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ReportFormat {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RankMetric {
    U,
    U10,
    H,
    I10,
    G,
    E,
    Citations,
}

impl RankMetric {
    pub fn label(self) -> &'static str {
        match self {
            RankMetric::U => "u_index",
            RankMetric::U10 => "u10_index",
            RankMetric::H => "h_index",
            RankMetric::I10 => "i10_index",
            RankMetric::G => "g_index",
            RankMetric::E => "e_index",
            RankMetric::Citations => "total_citations",
        }
    }

    fn is_real(self) -> bool {
        matches!(self, RankMetric::U | RankMetric::U10 | RankMetric::E)
    }

    pub fn value(self, m: &AuthorMetrics) -> f64 {
        match self {
            RankMetric::U => m.u_index,
            RankMetric::U10 => m.u10_index,
            RankMetric::H => m.h_index as f64,
            RankMetric::I10 => m.i10_index as f64,
            RankMetric::G => m.g_index as f64,
            RankMetric::E => m.e_index,
            RankMetric::Citations => m.total_citations as f64,
        }
    }
}

/// One report row; the field names are the CSV/JSON column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub author_key: String,
    pub paper_count: usize,
    pub total_citations: u64,
    #[serde(rename = "I_total")]
    pub independent_total: u64,
    #[serde(rename = "S_total")]
    pub self_total: u64,
    pub u_index: f64,
    pub u10_index: f64,
    pub h_index: u64,
    pub i10_index: u64,
    pub g_index: u64,
    pub e_index: f64,
}

pub const COLUMNS: [&str; 11] = [
    "author_key",
    "paper_count",
    "total_citations",
    "I_total",
    "S_total",
    "u_index",
    "u10_index",
    "h_index",
    "i10_index",
    "g_index",
    "e_index",
];

impl From<&AuthorMetrics> for ReportRow {
    fn from(m: &AuthorMetrics) -> Self {
        ReportRow {
            author_key: m.author_key.clone(),
            paper_count: m.paper_count,
            total_citations: m.total_citations,
            independent_total: m.independent_total,
            self_total: m.self_total,
            u_index: m.u_index,
            u10_index: m.u10_index,
            h_index: m.h_index,
            i10_index: m.i10_index,
            g_index: m.g_index,
            e_index: m.e_index,
        }
    }
}

impl From<ReportRow> for AuthorMetrics {
    fn from(r: ReportRow) -> Self {
        AuthorMetrics {
            author_key: r.author_key,
            paper_count: r.paper_count,
            total_citations: r.total_citations,
            independent_total: r.independent_total,
            self_total: r.self_total,
            u_index: r.u_index,
            u10_index: r.u10_index,
            h_index: r.h_index,
            i10_index: r.i10_index,
            g_index: r.g_index,
            e_index: r.e_index,
        }
    }
}

fn by_metric_desc(metric: RankMetric) -> impl Fn(&AuthorMetrics, &AuthorMetrics) -> Ordering {
    move |a, b| {
        metric
            .value(b)
            .total_cmp(&metric.value(a))
            .then_with(|| a.author_key.cmp(&b.author_key))
    }
}

/// Sorts by the metric, descending, ties by author key.
pub fn rank(rows: &[AuthorMetrics], metric: RankMetric) -> Vec<AuthorMetrics> {
    let mut sorted = rows.to_vec();
    sorted.sort_by(by_metric_desc(metric));
    sorted
}

fn one_decimal(x: f64) -> String {
    format!("{:.1}", round_half_up(x, 1))
}

fn table_cells(row: &ReportRow) -> [String; 11] {
    [
        row.author_key.clone(),
        row.paper_count.to_string(),
        row.total_citations.to_string(),
        row.independent_total.to_string(),
        row.self_total.to_string(),
        one_decimal(row.u_index),
        one_decimal(row.u10_index),
        row.h_index.to_string(),
        row.i10_index.to_string(),
        row.g_index.to_string(),
        one_decimal(row.e_index),
    ]
}

/// Left-aligns the first column, right-aligns the rest.
pub fn write_aligned<S: AsRef<str>>(
    header: &[S],
    rows: &[Vec<String>],
    sink: &mut impl Write,
) -> Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.as_ref().chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (cell, &w))| {
                if i == 0 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    writeln!(sink, "{}", line(header.iter().map(AsRef::as_ref).collect()))?;
    for row in rows {
        writeln!(sink, "{}", line(row.iter().map(String::as_str).collect()))?;
    }
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Write(std::io::Error::other(e))
}

/// Writes scorecards sorted by descending u-index, ties by author key.
pub fn write_report(rows: &[AuthorMetrics], format: ReportFormat, sink: &mut impl Write) -> Result<()> {
    let rows: Vec<ReportRow> = rank(rows, RankMetric::U).iter().map(ReportRow::from).collect();
    match format {
        ReportFormat::Table => {
            let cells: Vec<Vec<String>> = rows.iter().map(|r| table_cells(r).to_vec()).collect();
            write_aligned(&COLUMNS, &cells, sink)?;
        }
        ReportFormat::Csv => {
            let mut csv = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(&mut *sink);
            csv.write_record(COLUMNS).map_err(csv_error)?;
            for row in &rows {
                csv.serialize(row).map_err(csv_error)?;
            }
            csv.flush()?;
        }
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut *sink, &rows).map_err(|e| Error::Write(e.into()))?;
            writeln!(sink)?;
        }
    }
    sink.flush()?;
    Ok(())
}

/// Reads back a CSV or JSON report. Table output is for humans only.
pub fn parse_report(text: &str, format: ReportFormat) -> Result<Vec<AuthorMetrics>> {
    let rows: Vec<ReportRow> = match format {
        ReportFormat::Json => serde_json::from_str(text)
            .map_err(|e| Error::parse("<report>", e.line(), e.to_string()))?,
        ReportFormat::Csv => csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .enumerate()
            .map(|(i, r)| r.map_err(|e| Error::parse("<report>", i + 2, e.to_string())))
            .collect::<Result<_>>()?,
        ReportFormat::Table => {
            return Err(Error::Domain("table reports cannot be parsed".into()));
        }
    };
    Ok(rows.into_iter().map(AuthorMetrics::from).collect())
}

/// Writes `rank`, `author_key` and the metric value, best first.
pub fn write_ranking(rows: &[AuthorMetrics], metric: RankMetric, sink: &mut impl Write) -> Result<()> {
    let cells: Vec<Vec<String>> = rank(rows, metric)
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let value = if metric.is_real() {
                one_decimal(metric.value(m))
            } else {
                format!("{}", metric.value(m) as u64)
            };
            vec![(i + 1).to_string(), m.author_key.clone(), value]
        })
        .collect();
    write_aligned(&["rank", "author_key", metric.label()], &cells, sink)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(key: &str, u: f64) -> AuthorMetrics {
        AuthorMetrics {
            author_key: key.into(),
            paper_count: 1,
            total_citations: 100,
            independent_total: 95,
            self_total: 5,
            u_index: u,
            u10_index: u,
            h_index: 1,
            i10_index: 1,
            g_index: 1,
            e_index: 99f64.sqrt(),
        }
    }

    fn render(rows: &[AuthorMetrics], format: ReportFormat) -> String {
        let mut out = Vec::new();
        write_report(rows, format, &mut out).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn table_shows_one_decimal() {
        let text = render(&[row("id:a", 97.5)], ReportFormat::Table);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("author_key"));
        assert!(lines[1].contains("97.5"));
        assert!(lines[1].contains("9.9"));
    }

    #[test]
    fn zero_rows_is_header_only() {
        assert_eq!(render(&[], ReportFormat::Csv).lines().count(), 1);
        assert_eq!(render(&[], ReportFormat::Table).lines().count(), 1);
        assert_eq!(render(&[], ReportFormat::Json).trim(), "[]");
    }

    #[test]
    fn sorted_by_u_then_key() {
        let rows = [row("b", 1.0), row("c", 2.0), row("a", 1.0)];
        let parsed = parse_report(&render(&rows, ReportFormat::Json), ReportFormat::Json).unwrap();
        let keys: Vec<&str> = parsed.iter().map(|m| m.author_key.as_str()).collect();
        assert_eq!(keys, ["c", "a", "b"]);
    }

    #[test]
    fn structured_round_trip() {
        let rows = [row("id:a", 56.291_094_030_704_5), row("name:x/y", 0.1 + 0.2)];
        for format in [ReportFormat::Json, ReportFormat::Csv] {
            let text = render(&rows, format);
            let parsed = parse_report(&text, format).unwrap();
            assert_eq!(parsed, rank(&rows, RankMetric::U), "{format:?}");
            assert_eq!(render(&parsed, format), text);
        }
    }

    #[test]
    fn ranking_by_h() {
        let mut a = row("a", 1.0);
        a.h_index = 7;
        let mut out = Vec::new();
        write_ranking(&[row("b", 5.0), a], RankMetric::H, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].contains("h_index"));
        assert!(lines[1].starts_with("1") && lines[1].contains(" a ") && lines[1].ends_with('7'));
    }
}

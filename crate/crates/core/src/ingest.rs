//! Corpus file formats.
//!
//! Papers are line-delimited JSON, one object per line:
//!
//! ```text
//! {"id":"W1","title":"On things","year":2021,"authors":[{"name":"Keller, Maria","pid":"0000-0002-1825-0097"},{"name":"A. Smith"}]}
//! ```
//!
//! Citations are two-column CSV with a header row (`citing_id,cited_id`).
//! Parsing is fail-fast unless [`ParseOptions::lenient`] is set, in which
//! case every error is collected and returned together.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Location, Result};
use crate::model::{AuthorRef, CitationEdge, Corpus, Paper, RawCorpus};

pub const CITATIONS_HEADER: [&str; 2] = ["citing_id", "cited_id"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub lenient: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub location: Location,
    pub message: String,
}

impl std::fmt::Display for Warning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct AuthorRecord {
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pid: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PaperRecord {
    id: String,
    #[serde(default)]
    title: String,
    year: i32,
    authors: Vec<AuthorRecord>,
}

impl From<&Paper> for PaperRecord {
    fn from(p: &Paper) -> Self {
        PaperRecord {
            id: p.id.clone(),
            title: p.title.clone(),
            year: p.year,
            authors: p
                .authors
                .iter()
                .map(|a| AuthorRecord {
                    name: a.display_name().to_string(),
                    pid: a.persistent_id().map(str::to_string),
                })
                .collect(),
        }
    }
}

/// Collects errors in lenient mode, returns the first one otherwise.
struct Errors {
    lenient: bool,
    collected: Vec<Error>,
}

impl Errors {
    fn new(opts: ParseOptions) -> Self {
        Self {
            lenient: opts.lenient,
            collected: Vec::new(),
        }
    }

    fn push(&mut self, err: Error) -> Result<()> {
        if self.lenient {
            self.collected.push(err);
            Ok(())
        } else {
            Err(err)
        }
    }

    fn into_partial<T>(self, value: T) -> (T, Vec<Error>) {
        (value, self.collected)
    }

    fn finish<T>(mut self, value: T) -> Result<T> {
        match self.collected.len() {
            0 => Ok(value),
            1 => Err(self.collected.pop().unwrap()),
            _ => Err(Error::Multiple(self.collected)),
        }
    }
}

fn paper_from_line(line: &str, file: &str, line_no: usize) -> Result<Paper> {
    let record: PaperRecord =
        serde_json::from_str(line).map_err(|e| Error::parse(file, line_no, e.to_string()))?;
    if record.id.trim().is_empty() {
        return Err(Error::parse(file, line_no, "paper id is empty"));
    }
    if record.authors.is_empty() {
        return Err(Error::parse(
            file,
            line_no,
            format!("paper {:?} has an empty author list", record.id),
        ));
    }
    let authors = record
        .authors
        .into_iter()
        .enumerate()
        .map(|(i, a)| {
            AuthorRef::new(a.name, a.pid).map_err(|e| {
                Error::parse(
                    file,
                    line_no,
                    format!("paper {:?}, author #{}: {e}", record.id, i + 1),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Paper::new(record.id, record.title, record.year, authors))
}

/// Parses a papers file. `file` names the source in error messages.
pub fn parse_papers(reader: impl Read, file: &str, opts: ParseOptions) -> Result<Vec<Paper>> {
    let (papers, errors) = papers_inner(reader, file, opts)?;
    errors.finish(papers)
}

/// Parses every line it can and returns the rest as errors.
pub fn parse_papers_partial(reader: impl Read, file: &str) -> Result<(Vec<Paper>, Vec<Error>)> {
    let (papers, errors) = papers_inner(reader, file, ParseOptions { lenient: true })?;
    Ok(errors.into_partial(papers))
}

fn papers_inner(reader: impl Read, file: &str, opts: ParseOptions) -> Result<(Vec<Paper>, Errors)> {
    let mut errors = Errors::new(opts);
    let mut papers = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for (index, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = index + 1;
        let line = line.map_err(|e| Error::parse(file, line_no, e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        match paper_from_line(&line, file, line_no) {
            Ok(paper) => {
                if let Some(first) = seen.get(&paper.id) {
                    errors.push(Error::parse(
                        file,
                        line_no,
                        format!("duplicate paper id {:?} (first defined on line {first})", paper.id),
                    ))?;
                } else {
                    seen.insert(paper.id.clone(), line_no);
                    papers.push(paper);
                }
            }
            Err(e) => errors.push(e)?,
        }
    }
    Ok((papers, errors))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedCitations {
    pub edges: Vec<CitationEdge>,
    /// Source row of each edge, parallel to `edges`.
    pub rows: Vec<usize>,
    pub warnings: Vec<Warning>,
}

/// Parses a citations file, collapsing repeated rows into one edge.
pub fn parse_citations(reader: impl Read, file: &str, opts: ParseOptions) -> Result<ParsedCitations> {
    let (parsed, errors) = citations_inner(reader, file, opts)?;
    errors.finish(parsed)
}

/// Parses every row it can and returns the rest as errors.
pub fn parse_citations_partial(reader: impl Read, file: &str) -> Result<(ParsedCitations, Vec<Error>)> {
    let (parsed, errors) = citations_inner(reader, file, ParseOptions { lenient: true })?;
    Ok(errors.into_partial(parsed))
}

fn citations_inner(reader: impl Read, file: &str, opts: ParseOptions) -> Result<(ParsedCitations, Errors)> {
    let mut errors = Errors::new(opts);
    let mut out = ParsedCitations::default();
    let mut seen: HashMap<CitationEdge, usize> = HashMap::new();
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);

    match csv.headers() {
        Ok(h) if h.len() != 2 => errors.push(Error::parse(
            file,
            1,
            format!("expected 2 header columns, found {}", h.len()),
        ))?,
        Ok(_) => {}
        Err(e) => return Err(Error::parse(file, 1, e.to_string())),
    }

    for (index, record) in csv.records().enumerate() {
        let fallback_row = index + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let row = e
                    .position()
                    .map(|p| p.line() as usize)
                    .unwrap_or(fallback_row);
                errors.push(Error::parse(file, row, e.to_string()))?;
                continue;
            }
        };
        let row = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(fallback_row);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != 2 {
            errors.push(Error::parse(
                file,
                row,
                format!("expected 2 fields, found {}", record.len()),
            ))?;
            continue;
        }
        let (citing, cited) = (&record[0], &record[1]);
        if citing.is_empty() || cited.is_empty() {
            errors.push(Error::parse(file, row, "empty paper id"))?;
            continue;
        }
        if citing == cited {
            errors.push(Error::parse(
                file,
                row,
                format!("paper {citing:?} cites itself"),
            ))?;
            continue;
        }
        let edge = CitationEdge::new(citing, cited);
        if let Some(first) = seen.get(&edge) {
            out.warnings.push(Warning {
                location: Location {
                    file: file.to_string(),
                    line: row,
                },
                message: format!("duplicate citation {edge} (first on row {first}) ignored"),
            });
            continue;
        }
        seen.insert(edge.clone(), row);
        out.edges.push(edge);
        out.rows.push(row);
    }
    Ok((out, errors))
}

#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub corpus: Corpus,
    pub warnings: Vec<Warning>,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::io(path, e))
}

/// Loads and validates a corpus from a papers file and a citations file.
pub fn load_corpus(papers_path: impl AsRef<Path>, citations_path: impl AsRef<Path>) -> Result<Corpus> {
    load_corpus_with(papers_path, citations_path, ParseOptions::default()).map(|l| l.corpus)
}

pub fn load_corpus_with(
    papers_path: impl AsRef<Path>,
    citations_path: impl AsRef<Path>,
    opts: ParseOptions,
) -> Result<LoadedCorpus> {
    let papers_path = papers_path.as_ref();
    let citations_path = citations_path.as_ref();
    let papers_name = papers_path.display().to_string();
    let citations_name = citations_path.display().to_string();

    let papers = parse_papers(open(papers_path)?, &papers_name, opts);
    let citations = parse_citations(open(citations_path)?, &citations_name, opts);
    let (papers, citations) = match (papers, citations) {
        (Ok(p), Ok(c)) => (p, c),
        (Err(e), Ok(_)) | (Ok(_), Err(e)) => return Err(e),
        (Err(a), Err(b)) => return Err(merge_errors(a, b)),
    };
    assemble(papers, citations, &citations_name, opts)
}

/// Parses both formats from in-memory text.
pub fn corpus_from_text(papers: &str, citations: &str) -> Result<LoadedCorpus> {
    let opts = ParseOptions::default();
    let papers = parse_papers(papers.as_bytes(), "<papers>", opts)?;
    let citations = parse_citations(citations.as_bytes(), "<citations>", opts)?;
    assemble(papers, citations, "<citations>", opts)
}

fn merge_errors(a: Error, b: Error) -> Error {
    let mut all = Vec::new();
    for e in [a, b] {
        match e {
            Error::Multiple(v) => all.extend(v),
            other => all.push(other),
        }
    }
    Error::Multiple(all)
}

fn assemble(
    papers: Vec<Paper>,
    citations: ParsedCitations,
    citations_name: &str,
    opts: ParseOptions,
) -> Result<LoadedCorpus> {
    let mut errors = Errors::new(opts);
    let ids: HashSet<&str> = papers.iter().map(|p| p.id.as_str()).collect();
    for (edge, &row) in citations.edges.iter().zip(&citations.rows) {
        for (side, id) in [("citing", &edge.citing_id), ("cited", &edge.cited_id)] {
            if !ids.contains(id.as_str()) {
                errors.push(Error::parse(
                    citations_name,
                    row,
                    format!("{side} paper {id:?} is not in the papers file"),
                ))?;
            }
        }
    }
    errors.finish(())?;
    let corpus = Corpus::from_raw(RawCorpus::new(papers, citations.edges))?;
    Ok(LoadedCorpus {
        corpus,
        warnings: citations.warnings,
    })
}

pub fn write_papers<'a>(papers: impl IntoIterator<Item = &'a Paper>, mut sink: impl Write) -> Result<()> {
    for paper in papers {
        serde_json::to_writer(&mut sink, &PaperRecord::from(paper))
            .map_err(|e| Error::Write(e.into()))?;
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn write_citations<'a>(
    edges: impl IntoIterator<Item = &'a CitationEdge>,
    sink: impl Write,
) -> Result<()> {
    let mut csv = csv::Writer::from_writer(sink);
    let csv_err = |e: csv::Error| Error::Write(std::io::Error::other(e));
    csv.write_record(CITATIONS_HEADER).map_err(csv_err)?;
    for edge in edges {
        csv.write_record([&edge.citing_id, &edge.cited_id])
            .map_err(csv_err)?;
    }
    csv.flush()?;
    Ok(())
}

/// Serializes a corpus into (papers text, citations text).
pub fn serialize_corpus(corpus: &Corpus) -> Result<(String, String)> {
    let mut papers = Vec::new();
    write_papers(corpus.papers(), &mut papers)?;
    let mut citations = Vec::new();
    write_citations(corpus.edges(), &mut citations)?;
    Ok((
        String::from_utf8(papers).expect("json is utf-8"),
        String::from_utf8(citations).expect("csv of utf-8 ids is utf-8"),
    ))
}

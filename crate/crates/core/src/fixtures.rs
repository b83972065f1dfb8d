//! Synthetic corpus reproducing the six example papers of the u-index
//! reference table: each target paper gets exactly the listed number of
//! independent and self-citing papers.

use crate::error::Result;
use crate::ingest::{corpus_from_text, serialize_corpus};
use crate::model::{AuthorRef, CitationEdge, Corpus, Paper};

/// One reference row: total citations, I, S, N and the published u-index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table1Row {
    pub total: u64,
    pub independent: u64,
    pub self_cites: u64,
    pub authors: u64,
    pub published_u: f64,
}

pub const TABLE1: [Table1Row; 6] = [
    Table1Row { total: 100, independent: 95, self_cites: 5, authors: 1, published_u: 97.5 },
    Table1Row { total: 100, independent: 95, self_cites: 5, authors: 3, published_u: 56.3 },
    Table1Row { total: 100, independent: 80, self_cites: 20, authors: 10, published_u: 28.5 },
    Table1Row { total: 10, independent: 8, self_cites: 2, authors: 2, published_u: 6.4 },
    Table1Row { total: 10, independent: 2, self_cites: 8, authors: 2, published_u: 4.2 },
    Table1Row { total: 500, independent: 10, self_cites: 490, authors: 20, published_u: 57.0 },
];

pub const TABLE1_PAPERS: &str = include_str!("../fixtures/table1_papers.jsonl");
pub const TABLE1_CITATIONS: &str = include_str!("../fixtures/table1_citations.csv");

/// Id of the target paper for row `row` (1-based).
pub fn table1_target_id(row: usize) -> String {
    format!("row{row}")
}

/// Builds the fixture from scratch. Self-citing papers are written by one
/// of the target's authors (cycling through the byline); independent ones
/// by a fresh single author.
pub fn build_table1_corpus() -> Corpus {
    let mut papers = Vec::new();
    let mut citing = Vec::new();
    let mut edges = Vec::new();
    for (index, row) in TABLE1.iter().enumerate() {
        let number = index + 1;
        let target = table1_target_id(number);
        let authors: Vec<AuthorRef> = (1..=row.authors)
            .map(|a| {
                AuthorRef::new(format!("Author {number}-{a}"), Some(format!("T{number}A{a}")))
                    .expect("nonempty name")
            })
            .collect();
        for c in 1..=row.independent {
            let id = format!("row{number}-ind{c:03}");
            let reader = AuthorRef::new(format!("Reader {number}-{c}"), Some(format!("R{number}C{c}")))
                .expect("nonempty name");
            citing.push(Paper::new(&id, "Independent citing paper", 2024, vec![reader]));
            edges.push(CitationEdge::new(id, &target));
        }
        for c in 1..=row.self_cites {
            let id = format!("row{number}-self{c:03}");
            let own = authors[((c - 1) % row.authors) as usize].clone();
            citing.push(Paper::new(&id, "Self-citing paper", 2024, vec![own]));
            edges.push(CitationEdge::new(id, &target));
        }
        papers.push(Paper::new(target, format!("Reference paper {number}"), 2023, authors));
    }
    papers.extend(citing);
    Corpus::new(papers, edges).expect("fixture is valid")
}

/// The fixture as bundled with the crate.
pub fn table1_corpus() -> Result<Corpus> {
    corpus_from_text(TABLE1_PAPERS, TABLE1_CITATIONS).map(|l| l.corpus)
}

/// Serialized (papers, citations) text of [`build_table1_corpus`].
pub fn table1_files() -> Result<(String, String)> {
    serialize_corpus(&build_table1_corpus())
}

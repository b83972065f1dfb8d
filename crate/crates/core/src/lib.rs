//! Citation-corpus analysis centred on the u-index, `(I + S/2) / sqrt(N)`
//! per paper and summed per author, alongside total citations and the h,
//! i10, g and e indices.
//!
//! * [`model`]: author identities, papers, citation edges, corpus validation
//! * [`selfcite`]: independent vs self-citation classification
//! * [`metrics`]: the u-index family and baseline indices
//! * [`ingest`] and [`report`]: file formats in and out
//! * [`harvest`]: OpenAlex-style REST harvesting with an on-disk cache

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod harvest;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod report;
pub mod selfcite;

pub use error::{Error, Location, Result};
pub use ingest::{load_corpus, parse_citations, parse_papers, ParseOptions};
pub use metrics::{
    author_metrics, author_u, author_u10, e_index, g_index, h_index, i10_index, paper_u,
    AuthorMetrics, PaperScore,
};
pub use model::{
    corpus_validate, normalize_author, same_author, AuthorRef, CitationEdge, Corpus, Paper,
    RawCorpus, Violation, ViolationKind,
};
pub use report::{write_report, RankMetric, ReportFormat};
pub use selfcite::{breakdown, classify_citation, CitationBreakdown, CitationClass};

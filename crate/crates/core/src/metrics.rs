//! Per-paper and per-author impact metrics.
//!
//! The u-index of one paper is `(I + S/2) / sqrt(N)`; an author's u-index is
//! the plain sum over their papers and u10 restricts that sum to the ten
//! most-cited ones. The h, i10, g and e indices are computed on total
//! citation counts (self-citations included) so they stay comparable with
//! the figures other tools report.
//!
//! Author-level sums run over papers in rank order (total citations desc,
//! then I desc, then paper id), which makes every result independent of the
//! order papers were loaded in.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Corpus, Paper};
use crate::selfcite::{breakdown, CitationBreakdown};

/// Papers counted by u10.
pub const U10_LIMIT: usize = 10;

/// Citation threshold for the i10-index.
pub const I10_THRESHOLD: u64 = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct PaperScore {
    pub paper_id: String,
    pub u: f64,
}

/// Everything the author-level metrics need about one paper.
#[derive(Debug, Clone, PartialEq)]
pub struct PaperStats {
    pub breakdown: CitationBreakdown,
    pub author_count: usize,
    pub u: f64,
}

impl PaperStats {
    pub fn paper_id(&self) -> &str {
        &self.breakdown.cited_id
    }

    pub fn total(&self) -> u64 {
        self.breakdown.total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuthorMetrics {
    pub author_key: String,
    pub paper_count: usize,
    pub total_citations: u64,
    pub independent_total: u64,
    pub self_total: u64,
    pub u_index: f64,
    pub u10_index: f64,
    pub h_index: u64,
    pub i10_index: u64,
    pub g_index: u64,
    pub e_index: f64,
}

/// u-index of a single paper with `independent` independent citations,
/// `self_cites` self-citations and `authors` authors.
pub fn paper_u(independent: u64, self_cites: u64, authors: u64) -> Result<f64> {
    if authors == 0 {
        return Err(Error::Domain("paper_u: author count must be at least 1".into()));
    }
    Ok((independent as f64 + self_cites as f64 / 2.0) / (authors as f64).sqrt())
}

/// Signed entry point for callers that cannot rule out negative inputs
/// (CLI arguments, the C ABI).
pub fn paper_u_checked(independent: i64, self_cites: i64, authors: i64) -> Result<f64> {
    if independent < 0 || self_cites < 0 || authors < 0 {
        return Err(Error::Domain(format!(
            "paper_u: negative input (I={independent}, S={self_cites}, N={authors})"
        )));
    }
    paper_u(independent as u64, self_cites as u64, authors as u64)
}

/// Converts signed counts, rejecting negatives.
pub fn checked_counts(counts: &[i64]) -> Result<Vec<u64>> {
    counts
        .iter()
        .map(|&c| {
            u64::try_from(c).map_err(|_| Error::Domain(format!("negative citation count {c}")))
        })
        .collect()
}

/// Rounds half-up to `decimals` places, for display only.
pub fn round_half_up(value: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (value * scale).round() / scale
}

fn sorted_desc(counts: &[u64]) -> Vec<u64> {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
}

/// Largest h such that h papers have at least h citations each.
pub fn h_index(counts: &[u64]) -> u64 {
    sorted_desc(counts)
        .iter()
        .enumerate()
        .take_while(|(rank, &c)| c > *rank as u64)
        .count() as u64
}

pub fn i10_index(counts: &[u64]) -> u64 {
    counts.iter().filter(|&&c| c >= I10_THRESHOLD).count() as u64
}

/// Largest g (at most the paper count) whose top-g papers have at least g²
/// citations in total.
pub fn g_index(counts: &[u64]) -> u64 {
    let mut best = 0;
    let mut running: u128 = 0;
    for (rank, c) in sorted_desc(counts).into_iter().enumerate() {
        running += u128::from(c);
        let g = rank as u128 + 1;
        if running >= g * g {
            best = g as u64;
        }
    }
    best
}

/// Square root of the h-core's citations in excess of h².
pub fn e_index(counts: &[u64]) -> f64 {
    let sorted = sorted_desc(counts);
    let h = h_index(&sorted) as usize;
    let core: u128 = sorted[..h].iter().map(|&c| u128::from(c)).sum();
    let excess = core - (h as u128) * (h as u128);
    (excess as f64).sqrt()
}

fn stats_for(corpus: &Corpus, paper: &Paper) -> Result<PaperStats> {
    let breakdown = breakdown(corpus, &paper.id)?;
    let author_count = paper.author_count();
    let u = paper_u(breakdown.independent, breakdown.self_cites, author_count as u64)?;
    Ok(PaperStats {
        breakdown,
        author_count,
        u,
    })
}

pub fn paper_score(corpus: &Corpus, paper_id: &str) -> Result<PaperScore> {
    let paper = corpus
        .paper(paper_id)
        .ok_or_else(|| Error::UnknownPaper(paper_id.to_string()))?;
    Ok(PaperScore {
        paper_id: paper_id.to_string(),
        u: stats_for(corpus, paper)?.u,
    })
}

/// Per-paper statistics for the whole corpus, keyed by paper id.
pub fn score_papers(corpus: &Corpus) -> Result<HashMap<String, PaperStats>> {
    corpus
        .papers()
        .map(|p| Ok((p.id.clone(), stats_for(corpus, p)?)))
        .collect()
}

fn rank_order(papers: &mut [&PaperStats]) {
    papers.sort_by(|a, b| {
        b.total()
            .cmp(&a.total())
            .then(b.breakdown.independent.cmp(&a.breakdown.independent))
            .then_with(|| a.paper_id().cmp(b.paper_id()))
    });
}

fn author_papers(corpus: &Corpus, author_key: &str) -> Result<Vec<PaperStats>> {
    let stats = corpus
        .papers_by_author(author_key)
        .map(|p| stats_for(corpus, p))
        .collect::<Result<Vec<_>>>()?;
    if stats.is_empty() {
        return Err(Error::UnknownAuthor {
            key: author_key.to_string(),
            known: corpus.author_keys().len(),
        });
    }
    Ok(stats)
}

pub fn author_u(corpus: &Corpus, author_key: &str) -> Result<f64> {
    let stats = author_papers(corpus, author_key)?;
    let mut ranked: Vec<&PaperStats> = stats.iter().collect();
    rank_order(&mut ranked);
    Ok(ranked.iter().map(|s| s.u).sum())
}

pub fn author_u10(corpus: &Corpus, author_key: &str) -> Result<f64> {
    let stats = author_papers(corpus, author_key)?;
    let mut ranked: Vec<&PaperStats> = stats.iter().collect();
    rank_order(&mut ranked);
    Ok(ranked.iter().take(U10_LIMIT).map(|s| s.u).sum())
}

/// Builds a scorecard from the statistics of one author's papers.
pub fn metrics_from_stats<'a>(
    author_key: &str,
    papers: impl IntoIterator<Item = &'a PaperStats>,
) -> AuthorMetrics {
    let mut ranked: Vec<&PaperStats> = papers.into_iter().collect();
    rank_order(&mut ranked);
    let counts: Vec<u64> = ranked.iter().map(|s| s.total()).collect();
    AuthorMetrics {
        author_key: author_key.to_string(),
        paper_count: ranked.len(),
        total_citations: counts.iter().sum(),
        independent_total: ranked.iter().map(|s| s.breakdown.independent).sum(),
        self_total: ranked.iter().map(|s| s.breakdown.self_cites).sum(),
        u_index: ranked.iter().map(|s| s.u).sum(),
        u10_index: ranked.iter().take(U10_LIMIT).map(|s| s.u).sum(),
        h_index: h_index(&counts),
        i10_index: i10_index(&counts),
        g_index: g_index(&counts),
        e_index: e_index(&counts),
    }
}

pub fn author_metrics(corpus: &Corpus, author_key: &str) -> Result<AuthorMetrics> {
    let stats = author_papers(corpus, author_key)?;
    Ok(metrics_from_stats(author_key, &stats))
}

/// Scorecards for every author in the corpus, ordered by author key.
pub fn all_author_metrics(corpus: &Corpus) -> Result<Vec<AuthorMetrics>> {
    let table = score_papers(corpus)?;
    let mut by_author: std::collections::BTreeMap<&str, Vec<&PaperStats>> = Default::default();
    for paper in corpus.papers() {
        let mut keys: Vec<&str> = paper.authors.iter().map(|a| a.identity_key()).collect();
        keys.sort_unstable();
        keys.dedup();
        for key in keys {
            by_author.entry(key).or_default().push(&table[&paper.id]);
        }
    }
    Ok(by_author
        .into_iter()
        .map(|(key, papers)| metrics_from_stats(key, papers))
        .collect())
}

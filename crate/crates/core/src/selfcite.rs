//! Independent vs self-citation classification.
//!
//! A citation is a self-citation when any author of the citing paper is the
//! same person as any author of the cited paper.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{same_author, AuthorRef, CitationEdge, Corpus, Paper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CitationClass {
    Independent,
    SelfCitation,
}

impl fmt::Display for CitationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CitationClass::Independent => "independent",
            CitationClass::SelfCitation => "self",
        })
    }
}

/// A classified citation together with the author pair that made it a
/// self-citation, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification<'a> {
    pub class: CitationClass,
    /// (citing-side author, cited-side author) for the first match found.
    pub matched: Option<(&'a AuthorRef, &'a AuthorRef)>,
}

/// I, S and their sum for one cited paper.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CitationBreakdown {
    pub cited_id: String,
    pub independent: u64,
    pub self_cites: u64,
    pub total: u64,
}

fn shared_author<'a>(citing: &'a Paper, cited: &'a Paper) -> Option<(&'a AuthorRef, &'a AuthorRef)> {
    citing.authors.iter().find_map(|a| {
        cited
            .authors
            .iter()
            .find(|b| same_author(a, b))
            .map(|b| (a, b))
    })
}

fn lookup<'a>(corpus: &'a Corpus, id: &str) -> Result<&'a Paper> {
    corpus
        .paper(id)
        .ok_or_else(|| Error::UnknownPaper(id.to_string()))
}

pub fn classify_detailed<'a>(corpus: &'a Corpus, edge: &CitationEdge) -> Result<Classification<'a>> {
    let citing = lookup(corpus, &edge.citing_id)?;
    let cited = lookup(corpus, &edge.cited_id)?;
    let matched = shared_author(citing, cited);
    let class = if matched.is_some() {
        CitationClass::SelfCitation
    } else {
        CitationClass::Independent
    };
    Ok(Classification { class, matched })
}

pub fn classify_citation(corpus: &Corpus, edge: &CitationEdge) -> Result<CitationClass> {
    classify_detailed(corpus, edge).map(|c| c.class)
}

/// Every incoming citation of `cited_id`, classified, in citing-id order.
pub fn incoming_classified<'a>(
    corpus: &'a Corpus,
    cited_id: &str,
) -> Result<Vec<(&'a str, Classification<'a>)>> {
    let cited = lookup(corpus, cited_id)?;
    let citing_ids = corpus
        .incoming(cited_id)
        .ok_or_else(|| Error::UnknownPaper(cited_id.to_string()))?;
    citing_ids
        .iter()
        .map(|citing_id| {
            let citing = lookup(corpus, citing_id)?;
            let matched = shared_author(citing, cited);
            let class = if matched.is_some() {
                CitationClass::SelfCitation
            } else {
                CitationClass::Independent
            };
            Ok((citing_id.as_str(), Classification { class, matched }))
        })
        .collect()
}

pub fn breakdown(corpus: &Corpus, cited_id: &str) -> Result<CitationBreakdown> {
    let mut independent = 0;
    let mut self_cites = 0;
    for (_, c) in incoming_classified(corpus, cited_id)? {
        match c.class {
            CitationClass::Independent => independent += 1,
            CitationClass::SelfCitation => self_cites += 1,
        }
    }
    Ok(CitationBreakdown {
        cited_id: cited_id.to_string(),
        independent,
        self_cites,
        total: independent + self_cites,
    })
}

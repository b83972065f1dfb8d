//! Domain types shared by every other module: author identities, papers,
//! citation edges, and the validated [`Corpus`].
//!
//! Author identity is resolved in two tiers. A persistent identifier (an
//! ORCID or an API-assigned author id) is used verbatim when present. Without
//! one, the author is keyed by folded family name plus first given-name
//! initial, which merges homonyms.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexMap;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

/// One author identity as it appears on a paper's byline.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AuthorRef {
    display_name: String,
    persistent_id: Option<String>,
    identity_key: String,
    name_key: String,
}

impl AuthorRef {
    /// Builds an author reference. A blank `persistent_id` is treated as absent.
    pub fn new(display_name: impl Into<String>, persistent_id: Option<String>) -> Result<Self> {
        let display_name = display_name.into();
        let persistent_id = persistent_id
            .map(|p| p.trim().to_string())
            .filter(|p| !p.is_empty());
        let identity_key = normalize_author(&display_name, persistent_id.as_deref())?;
        let name_key = name_key(&display_name);
        Ok(Self {
            display_name,
            persistent_id,
            identity_key,
            name_key,
        })
    }

    /// Shorthand for an author without a persistent identifier.
    pub fn named(display_name: impl Into<String>) -> Result<Self> {
        Self::new(display_name, None)
    }

    pub fn display_name(&self) -> &str {
        &self.display_name
    }

    pub fn persistent_id(&self) -> Option<&str> {
        self.persistent_id.as_deref()
    }

    /// `id:<pid>` when a persistent id is present, else the name key.
    pub fn identity_key(&self) -> &str {
        &self.identity_key
    }

    /// The `name:<family>/<initial>` key, regardless of persistent id.
    pub fn name_key(&self) -> &str {
        &self.name_key
    }
}

impl fmt::Display for AuthorRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.persistent_id {
            Some(pid) => write!(f, "{} <{}>", self.display_name, pid),
            None => f.write_str(&self.display_name),
        }
    }
}

/// Computes the identity key for an author record.
///
/// With a persistent id the key is `id:` followed by the id verbatim.
/// Otherwise it is `name:` + folded family name + `/` + first initial of the
/// given name. The family name is the segment before the first comma when
/// the name contains one, else its last whitespace-separated token.
pub fn normalize_author(display_name: &str, persistent_id: Option<&str>) -> Result<String> {
    if display_name.trim().is_empty() {
        return Err(Error::EmptyAuthorName {
            persistent_id: persistent_id.map(str::to_string),
        });
    }
    match persistent_id.map(str::trim).filter(|p| !p.is_empty()) {
        Some(pid) => Ok(format!("id:{pid}")),
        None => Ok(name_key(display_name)),
    }
}

fn name_key(display_name: &str) -> String {
    let name = display_name.trim();
    let (family, given) = match name.split_once(',') {
        Some((family, given)) => (family.to_string(), given.to_string()),
        None => {
            let tokens: Vec<&str> = name.split_whitespace().collect();
            match tokens.split_last() {
                Some((last, rest)) => (last.to_string(), rest.join(" ")),
                None => (String::new(), String::new()),
            }
        }
    };
    let family = fold(&family)
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    let initial: String = fold(&given)
        .chars()
        .find(|c| c.is_alphanumeric())
        .into_iter()
        .collect();
    format!("name:{family}/{initial}")
}

/// Strips combining marks after canonical decomposition, then lowercases.
fn fold(s: &str) -> String {
    s.nfd()
        .filter(|c| !is_combining_mark(*c))
        .collect::<String>()
        .to_lowercase()
}

/// Whether two bylines refer to the same person.
///
/// Persistent ids decide when both sides carry one. Otherwise both sides are
/// compared by name key, even if one of them has an id.
pub fn same_author(a: &AuthorRef, b: &AuthorRef) -> bool {
    match (&a.persistent_id, &b.persistent_id) {
        (Some(x), Some(y)) => x == y,
        _ => a.name_key == b.name_key,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paper {
    pub id: String,
    pub title: String,
    pub year: i32,
    /// Byline order is preserved but carries no weight in any metric.
    pub authors: Vec<AuthorRef>,
}

impl Paper {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        year: i32,
        authors: Vec<AuthorRef>,
    ) -> Self {
        Self {
            id: id.into(),
            title: title.into(),
            year,
            authors,
        }
    }

    /// N, the byline length.
    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    /// Whether any byline entry carries this identity key.
    pub fn has_author_key(&self, key: &str) -> bool {
        self.authors.iter().any(|a| a.identity_key == key)
    }
}

/// Directed citation: `citing_id` references `cited_id`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CitationEdge {
    pub citing_id: String,
    pub cited_id: String,
}

impl CitationEdge {
    pub fn new(citing_id: impl Into<String>, cited_id: impl Into<String>) -> Self {
        Self {
            citing_id: citing_id.into(),
            cited_id: cited_id.into(),
        }
    }
}

impl fmt::Display for CitationEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.citing_id, self.cited_id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Endpoint {
    Citing,
    Cited,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ViolationKind {
    DanglingEndpoint,
    DuplicatePaperId,
    DuplicateEdge,
    SelfEdge,
    EmptyAuthorList,
}

/// A broken corpus invariant. Indices are 0-based positions in the raw
/// paper or edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DanglingEndpoint {
        edge_index: usize,
        endpoint: Endpoint,
        missing_id: String,
    },
    DuplicatePaperId {
        paper_index: usize,
        first_index: usize,
        id: String,
    },
    DuplicateEdge {
        edge_index: usize,
        first_index: usize,
        edge: CitationEdge,
    },
    SelfEdge {
        edge_index: usize,
        id: String,
    },
    EmptyAuthorList {
        paper_index: usize,
        id: String,
    },
}

impl Violation {
    pub fn kind(&self) -> ViolationKind {
        match self {
            Violation::DanglingEndpoint { .. } => ViolationKind::DanglingEndpoint,
            Violation::DuplicatePaperId { .. } => ViolationKind::DuplicatePaperId,
            Violation::DuplicateEdge { .. } => ViolationKind::DuplicateEdge,
            Violation::SelfEdge { .. } => ViolationKind::SelfEdge,
            Violation::EmptyAuthorList { .. } => ViolationKind::EmptyAuthorList,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DanglingEndpoint {
                edge_index,
                endpoint,
                missing_id,
            } => {
                let side = match endpoint {
                    Endpoint::Citing => "citing",
                    Endpoint::Cited => "cited",
                };
                write!(
                    f,
                    "edge #{edge_index}: {side} paper {missing_id:?} does not exist"
                )
            }
            Violation::DuplicatePaperId {
                paper_index,
                first_index,
                id,
            } => write!(
                f,
                "paper #{paper_index}: id {id:?} already used by paper #{first_index}"
            ),
            Violation::DuplicateEdge {
                edge_index,
                first_index,
                edge,
            } => write!(
                f,
                "edge #{edge_index}: {edge} repeats edge #{first_index}"
            ),
            Violation::SelfEdge { edge_index, id } => {
                write!(f, "edge #{edge_index}: paper {id:?} cites itself")
            }
            Violation::EmptyAuthorList { paper_index, id } => {
                write!(f, "paper #{paper_index} ({id:?}): author list is empty")
            }
        }
    }
}

/// Unvalidated corpus contents, in source order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawCorpus {
    pub papers: Vec<Paper>,
    pub edges: Vec<CitationEdge>,
}

impl RawCorpus {
    pub fn new(papers: Vec<Paper>, edges: Vec<CitationEdge>) -> Self {
        Self { papers, edges }
    }
}

/// Reports every invariant violation in `raw`. An empty list means the
/// contents can be turned into a [`Corpus`].
pub fn corpus_validate(raw: &RawCorpus) -> Vec<Violation> {
    let mut violations = Vec::new();

    let mut first_seen: HashMap<&str, usize> = HashMap::new();
    for (index, paper) in raw.papers.iter().enumerate() {
        if let Some(&first_index) = first_seen.get(paper.id.as_str()) {
            violations.push(Violation::DuplicatePaperId {
                paper_index: index,
                first_index,
                id: paper.id.clone(),
            });
        } else {
            first_seen.insert(&paper.id, index);
        }
        if paper.authors.is_empty() {
            violations.push(Violation::EmptyAuthorList {
                paper_index: index,
                id: paper.id.clone(),
            });
        }
    }

    let mut seen_edges: HashMap<(&str, &str), usize> = HashMap::new();
    for (index, edge) in raw.edges.iter().enumerate() {
        if edge.citing_id == edge.cited_id {
            violations.push(Violation::SelfEdge {
                edge_index: index,
                id: edge.citing_id.clone(),
            });
        }
        let pair = (edge.citing_id.as_str(), edge.cited_id.as_str());
        if let Some(&first_index) = seen_edges.get(&pair) {
            violations.push(Violation::DuplicateEdge {
                edge_index: index,
                first_index,
                edge: edge.clone(),
            });
        } else {
            seen_edges.insert(pair, index);
        }
        for (endpoint, id) in [
            (Endpoint::Citing, &edge.citing_id),
            (Endpoint::Cited, &edge.cited_id),
        ] {
            // A self-edge on a missing paper is reported once per side; that is fine.
            if !first_seen.contains_key(id.as_str()) {
                violations.push(Violation::DanglingEndpoint {
                    edge_index: index,
                    endpoint,
                    missing_id: id.clone(),
                });
            }
        }
    }

    violations
}

/// A validated, immutable citation corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    papers: IndexMap<String, Paper>,
    edges: BTreeSet<CitationEdge>,
    incoming: BTreeMap<String, BTreeSet<String>>,
}

impl Corpus {
    /// Validates and indexes the given contents.
    pub fn new(papers: Vec<Paper>, edges: Vec<CitationEdge>) -> Result<Self> {
        Self::from_raw(RawCorpus::new(papers, edges))
    }

    pub fn from_raw(raw: RawCorpus) -> Result<Self> {
        let violations = corpus_validate(&raw);
        if !violations.is_empty() {
            return Err(Error::InvalidCorpus(violations));
        }
        let mut incoming: BTreeMap<String, BTreeSet<String>> = raw
            .papers
            .iter()
            .map(|p| (p.id.clone(), BTreeSet::new()))
            .collect();
        for edge in &raw.edges {
            incoming
                .get_mut(&edge.cited_id)
                .expect("validated edge endpoint")
                .insert(edge.citing_id.clone());
        }
        Ok(Self {
            papers: raw.papers.into_iter().map(|p| (p.id.clone(), p)).collect(),
            edges: raw.edges.into_iter().collect(),
            incoming,
        })
    }

    pub fn empty() -> Self {
        Self {
            papers: IndexMap::new(),
            edges: BTreeSet::new(),
            incoming: BTreeMap::new(),
        }
    }

    pub fn paper(&self, id: &str) -> Option<&Paper> {
        self.papers.get(id)
    }

    /// Papers in insertion order.
    pub fn papers(&self) -> impl ExactSizeIterator<Item = &Paper> {
        self.papers.values()
    }

    /// Edges in (citing, cited) order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &CitationEdge> {
        self.edges.iter()
    }

    pub fn paper_count(&self) -> usize {
        self.papers.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Ids of papers citing `cited_id`, or `None` for an unknown paper.
    pub fn incoming(&self, cited_id: &str) -> Option<&BTreeSet<String>> {
        self.incoming.get(cited_id)
    }

    /// Every distinct author identity key in the corpus.
    pub fn author_keys(&self) -> BTreeSet<&str> {
        self.papers
            .values()
            .flat_map(|p| p.authors.iter().map(AuthorRef::identity_key))
            .collect()
    }

    /// Papers whose byline carries `key`, each once.
    pub fn papers_by_author<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a Paper> + 'a {
        self.papers.values().filter(move |p| p.has_author_key(key))
    }

    /// Always empty for a constructed corpus.
    pub fn validate(&self) -> Vec<Violation> {
        corpus_validate(&self.to_raw())
    }

    pub fn to_raw(&self) -> RawCorpus {
        RawCorpus {
            papers: self.papers.values().cloned().collect(),
            edges: self.edges.iter().cloned().collect(),
        }
    }
}

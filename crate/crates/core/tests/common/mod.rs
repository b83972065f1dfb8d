#![allow(dead_code)]

//! Shared test support: a random corpus generator with ground-truth author
//! identities, brute-force metric oracles, and a mock OpenAlex server.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use uindex::{AuthorRef, CitationEdge, Corpus, Paper};

// ---------------------------------------------------------------------------
// Random corpora

/// A corpus together with the person behind every byline entry.
#[derive(Debug, Clone)]
pub struct GenCorpus {
    pub corpus: Corpus,
    pub persons: HashMap<String, Vec<usize>>,
    pub person_count: usize,
}

/// Ground-truth identity key of a generated person.
pub fn person_key(p: usize) -> String {
    if p.is_multiple_of(3) {
        format!("id:P{p}")
    } else {
        format!("name:fam{p}/g")
    }
}

fn render_person(rng: &mut ChaCha8Rng, p: usize) -> AuthorRef {
    if p.is_multiple_of(3) {
        // Family names stay unique so that falling back to names never
        // merges two people.
        let name = match rng.random_range(0..2) {
            0 => format!("Pid{p}, Someone"),
            _ => format!("S. Pid{p}"),
        };
        AuthorRef::new(name, Some(format!("P{p}"))).unwrap()
    } else {
        let name = match rng.random_range(0..4) {
            0 => format!("Fam{p}, Given"),
            1 => format!("G. Fam{p}"),
            2 => format!("Given Middle Fam{p}"),
            _ => format!("Gívèn FÁM{p}"),
        };
        AuthorRef::named(name).unwrap()
    }
}

pub fn random_corpus(rng: &mut ChaCha8Rng, max_papers: usize, max_authors: usize) -> GenCorpus {
    let person_count = rng.random_range(1..=max_authors);
    let paper_count = rng.random_range(1..=max_papers);
    let mut papers = Vec::new();
    let mut persons = HashMap::new();
    for i in 0..paper_count {
        let n = rng.random_range(1..=person_count.min(5));
        let mut people: Vec<usize> = (0..person_count).collect();
        people.shuffle(rng);
        people.truncate(n);
        let id = format!("p{i:03}");
        let authors = people.iter().map(|&p| render_person(rng, p)).collect();
        papers.push(Paper::new(&id, format!("Paper {i}"), 2000 + i as i32, authors));
        persons.insert(id, people);
    }
    let density: f64 = rng.random_range(0.0..0.5);
    let mut edges = Vec::new();
    for a in 0..paper_count {
        for b in 0..paper_count {
            if a != b && rng.random_bool(density) {
                edges.push(CitationEdge::new(format!("p{a:03}"), format!("p{b:03}")));
            }
        }
    }
    GenCorpus {
        corpus: Corpus::new(papers, edges).unwrap(),
        persons,
        person_count,
    }
}

// ---------------------------------------------------------------------------
// Oracles. None of these call into the metrics or selfcite modules.

pub fn oracle_h(counts: &[u64]) -> u64 {
    let n = counts.len() as u64;
    (0..=n)
        .rev()
        .find(|&h| counts.iter().filter(|&&c| c >= h).count() as u64 >= h)
        .unwrap()
}

/// Sum of the `k` largest values by repeated maximum extraction.
fn top_k_sum(counts: &[u64], k: usize) -> u128 {
    let mut left = counts.to_vec();
    let mut sum = 0u128;
    for _ in 0..k {
        let (pos, &max) = left.iter().enumerate().max_by_key(|(_, &c)| c).unwrap();
        sum += max as u128;
        left.swap_remove(pos);
    }
    sum
}

pub fn oracle_g(counts: &[u64]) -> u64 {
    (0..=counts.len())
        .rev()
        .find(|&g| top_k_sum(counts, g) >= (g * g) as u128)
        .unwrap() as u64
}

pub fn oracle_e(counts: &[u64]) -> f64 {
    let h = oracle_h(counts) as usize;
    ((top_k_sum(counts, h) - (h * h) as u128) as f64).sqrt()
}

pub fn oracle_i10(counts: &[u64]) -> u64 {
    let mut n = 0;
    for &c in counts {
        if c >= 10 {
            n += 1;
        }
    }
    n
}

/// (I, S) for every paper, by scanning the full edge list against the
/// ground-truth persons.
pub fn oracle_breakdowns(g: &GenCorpus) -> BTreeMap<String, (u64, u64)> {
    let mut out: BTreeMap<String, (u64, u64)> =
        g.persons.keys().map(|id| (id.clone(), (0, 0))).collect();
    for edge in g.corpus.edges() {
        let citing = &g.persons[&edge.citing_id];
        let cited = &g.persons[&edge.cited_id];
        let shared = citing.iter().any(|p| cited.contains(p));
        let entry = out.get_mut(&edge.cited_id).unwrap();
        if shared {
            entry.1 += 1;
        } else {
            entry.0 += 1;
        }
    }
    out
}

pub fn oracle_paper_u(i: u64, s: u64, n: usize) -> f64 {
    (i as f64 + 0.5 * s as f64) / (n as f64).sqrt()
}

pub struct OracleAuthor {
    pub key: String,
    pub counts: Vec<u64>,
    pub u: f64,
    pub u10: f64,
    pub paper_count: usize,
}

/// Author-level oracle values for person `p`, or `None` if they wrote nothing.
pub fn oracle_author(g: &GenCorpus, p: usize) -> Option<OracleAuthor> {
    let bd = oracle_breakdowns(g);
    let mine: Vec<(&String, u64, u64, usize)> = g
        .persons
        .iter()
        .filter(|(_, people)| people.contains(&p))
        .map(|(id, people)| (id, bd[id].0, bd[id].1, people.len()))
        .collect();
    if mine.is_empty() {
        return None;
    }
    let u: f64 = mine.iter().map(|&(_, i, s, n)| oracle_paper_u(i, s, n)).sum();
    // A paper is in the top ten iff fewer than ten papers precede it in
    // (total desc, I desc, id asc) order.
    let ahead = |a: &(&String, u64, u64, usize), b: &(&String, u64, u64, usize)| {
        let (ta, tb) = (a.1 + a.2, b.1 + b.2);
        ta > tb || (ta == tb && (a.1 > b.1 || (a.1 == b.1 && a.0 < b.0)))
    };
    let u10: f64 = mine
        .iter()
        .filter(|x| mine.iter().filter(|y| ahead(y, x)).count() < 10)
        .map(|&(_, i, s, n)| oracle_paper_u(i, s, n))
        .sum();
    Some(OracleAuthor {
        key: person_key(p),
        counts: mine.iter().map(|&(_, i, s, _)| i + s).collect(),
        u,
        u10,
        paper_count: mine.len(),
    })
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

// ---------------------------------------------------------------------------
// Mock OpenAlex server

#[derive(Debug, Clone)]
pub struct MockAuthor {
    pub id: Option<String>,
    pub name: String,
}

#[derive(Debug, Clone)]
pub struct MockWork {
    pub id: String,
    pub title: String,
    pub year: i32,
    pub authors: Vec<MockAuthor>,
    /// Ids of works this work cites.
    pub cites: Vec<String>,
}

impl MockWork {
    pub fn new(id: &str, authors: &[(&str, &str)], cites: &[&str]) -> Self {
        Self {
            id: id.to_string(),
            title: format!("Work {id}"),
            year: 2020,
            authors: authors
                .iter()
                .map(|(aid, name)| MockAuthor {
                    id: (!aid.is_empty()).then(|| aid.to_string()),
                    name: name.to_string(),
                })
                .collect(),
            cites: cites.iter().map(|s| s.to_string()).collect(),
        }
    }
}

pub struct MockOpenAlex {
    pub base_url: String,
    pub requests: Arc<Mutex<Vec<(Instant, String)>>>,
    server: Arc<tiny_http::Server>,
    handle: Option<JoinHandle<()>>,
}

fn work_json(w: &MockWork, cited_by: usize) -> serde_json::Value {
    json!({
        "id": format!("https://openalex.org/{}", w.id),
        "display_name": w.title,
        "publication_year": w.year,
        "cited_by_count": cited_by,
        "authorships": w.authors.iter().map(|a| json!({
            "author": {
                "id": a.id.as_ref().map(|id| format!("https://openalex.org/{id}")),
                "display_name": a.name,
            }
        })).collect::<Vec<_>>(),
    })
}

fn respond(works: &[MockWork], url: &str) -> (u16, String) {
    let Some(rest) = url.strip_prefix("/api/works?") else {
        return (404, "{\"error\":\"not found\"}".into());
    };
    let params: HashMap<String, String> = url::form_urlencoded::parse(rest.as_bytes())
        .into_owned()
        .collect();
    let per_page: usize = params.get("per-page").and_then(|v| v.parse().ok()).unwrap_or(25);
    let page: usize = params.get("page").and_then(|v| v.parse().ok()).unwrap_or(1);
    let filter = params.get("filter").cloned().unwrap_or_default();
    let cited_by = |id: &str| works.iter().filter(|w| w.cites.iter().any(|c| c == id)).count();
    let mut selected: Vec<&MockWork> = if let Some(author) = filter.strip_prefix("author.id:") {
        works
            .iter()
            .filter(|w| w.authors.iter().any(|a| a.id.as_deref() == Some(author)))
            .collect()
    } else if let Some(target) = filter.strip_prefix("cites:") {
        works.iter().filter(|w| w.cites.iter().any(|c| c == target)).collect()
    } else {
        return (400, "{\"error\":\"bad filter\"}".into());
    };
    if params.get("sort").map(String::as_str) == Some("cited_by_count:desc") {
        selected.sort_by(|a, b| cited_by(&b.id).cmp(&cited_by(&a.id)).then(a.id.cmp(&b.id)));
    } else {
        selected.sort_by(|a, b| a.id.cmp(&b.id));
    }
    let count = selected.len();
    let results: Vec<_> = selected
        .into_iter()
        .skip((page - 1) * per_page)
        .take(per_page)
        .map(|w| work_json(w, cited_by(&w.id)))
        .collect();
    let body = json!({
        "meta": {"count": count, "page": page, "per_page": per_page},
        "results": results,
    });
    (200, body.to_string())
}

impl MockOpenAlex {
    /// Serves `works` under `http://127.0.0.1:<port>/api`. The first
    /// `fail_first` requests get HTTP 503.
    pub fn start(works: Vec<MockWork>, fail_first: usize) -> Self {
        let server = Arc::new(tiny_http::Server::http("127.0.0.1:0").unwrap());
        let port = server.server_addr().to_ip().unwrap().port();
        let requests: Arc<Mutex<Vec<(Instant, String)>>> = Arc::default();
        let log = Arc::clone(&requests);
        let srv = Arc::clone(&server);
        let handle = std::thread::spawn(move || {
            for request in srv.incoming_requests() {
                let url = request.url().to_string();
                let n = {
                    let mut log = log.lock().unwrap();
                    log.push((Instant::now(), url.clone()));
                    log.len()
                };
                let (status, body) = if n <= fail_first {
                    (503, "unavailable".to_string())
                } else {
                    respond(&works, &url)
                };
                let response = tiny_http::Response::from_string(body).with_status_code(status);
                let _ = request.respond(response);
            }
        });
        Self {
            base_url: format!("http://127.0.0.1:{port}/api"),
            requests,
            server,
            handle: Some(handle),
        }
    }

    pub fn request_count(&self) -> usize {
        self.requests.lock().unwrap().len()
    }

    /// Largest number of requests seen in any window of `window` starting
    /// at a request.
    pub fn max_in_window(&self, window: std::time::Duration) -> usize {
        let times: Vec<Instant> = self.requests.lock().unwrap().iter().map(|(t, _)| *t).collect();
        times
            .iter()
            .map(|&start| times.iter().filter(|&&t| t >= start && t < start + window).count())
            .max()
            .unwrap_or(0)
    }
}

impl Drop for MockOpenAlex {
    fn drop(&mut self) {
        self.server.unblock();
        if let Some(h) = self.handle.take() {
            let _ = h.join();
        }
    }
}

/// Two works by author A1 and three usable citing works, one of which is
/// by A1's co-author on W1. A fourth citing work has no
/// author data and must be dropped.
pub fn small_mock_dataset() -> Vec<MockWork> {
    vec![
        MockWork::new("W1", &[("A1", "Maria Keller"), ("A2", "Jane Roe")], &[]),
        MockWork::new("W2", &[("A1", "M. Keller")], &[]),
        MockWork::new("W10", &[("A7", "Ida Other")], &["W1"]),
        MockWork::new("W11", &[("", "Max Mustermann")], &["W2"]),
        MockWork::new("W12", &[("A2", "Roe, Jane")], &["W1"]),
        MockWork::new("W13", &[], &["W1"]),
    ]
}

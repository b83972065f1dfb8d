//! Harvesting from an OpenAlex-compatible `/works` endpoint.
//!
//! Two query shapes are used:
//!
//! * `GET {base}/works?filter=author.id:{id}&sort=cited_by_count:desc&per-page=..&page=..`
//!   for the author's own works, and
//! * `GET {base}/works?filter=cites:{work}&per-page=..&page=..` for the works
//!   citing each of them.
//!
//! Every response body is written to an on-disk cache keyed by the SHA-256
//! of the request line, so a second run with a warm cache issues no network
//! requests and yields byte-identical output.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use url::Url;

use crate::error::{Error, Result};
use crate::ingest::serialize_corpus;
use crate::model::{AuthorRef, CitationEdge, Corpus, Paper};

pub const MAX_ATTEMPTS: u32 = 3;
pub const DEFAULT_PER_PAGE: usize = 200;

#[derive(Debug, Clone)]
pub struct HarvestConfig {
    pub base_url: String,
    pub author_id: String,
    pub max_works: usize,
    /// Requests per second.
    pub rate_limit: f64,
    pub cache_dir: PathBuf,
    pub timeout: Duration,
    pub per_page: usize,
    /// First retry delay; doubles on each further attempt.
    pub backoff: Duration,
}

impl HarvestConfig {
    pub fn new(base_url: impl Into<String>, author_id: impl Into<String>, cache_dir: impl Into<PathBuf>) -> Self {
        Self {
            base_url: base_url.into(),
            author_id: author_id.into(),
            max_works: 100,
            rate_limit: 5.0,
            cache_dir: cache_dir.into(),
            timeout: Duration::from_secs(30),
            per_page: DEFAULT_PER_PAGE,
            backoff: Duration::from_millis(250),
        }
    }

    pub fn validate(&self) -> Result<Url> {
        if !(self.rate_limit.is_finite() && self.rate_limit > 0.0) {
            return Err(Error::Config(format!("rate limit must be positive, got {}", self.rate_limit)));
        }
        if self.max_works == 0 {
            return Err(Error::Config("max works must be at least 1".into()));
        }
        if self.per_page == 0 {
            return Err(Error::Config("page size must be at least 1".into()));
        }
        if self.author_id.trim().is_empty() {
            return Err(Error::Config("author id is empty".into()));
        }
        let url = Url::parse(&self.base_url)
            .map_err(|e| Error::Config(format!("invalid base url {:?}: {e}", self.base_url)))?;
        if url.cannot_be_a_base() || !matches!(url.scheme(), "http" | "https") {
            return Err(Error::Config(format!("base url {:?} is not an http(s) url", self.base_url)));
        }
        Ok(url)
    }
}

/// Sliding-window limiter: at most `capacity` acquisitions in any window.
#[derive(Debug)]
pub struct RateLimiter {
    capacity: usize,
    window: Duration,
    issued: Mutex<VecDeque<Instant>>,
}

/// Slack added to the window so that requests observed by the server, which
/// may be jittered by a few milliseconds, still respect the limit.
const WINDOW_SLACK: Duration = Duration::from_millis(20);

impl RateLimiter {
    /// Rates below one per second become one request per `1/rate` seconds;
    /// fractional rates above one round down.
    pub fn per_second(rate: f64) -> Self {
        let (capacity, window) = if rate >= 1.0 {
            (rate.floor() as usize, Duration::from_secs(1))
        } else {
            (1, Duration::from_secs_f64(1.0 / rate))
        };
        Self {
            capacity,
            window: window + WINDOW_SLACK,
            issued: Mutex::new(VecDeque::new()),
        }
    }

    /// Blocks until a request may be issued and records it.
    pub fn acquire(&self) {
        let mut issued = self.issued.lock().expect("rate limiter poisoned");
        loop {
            let now = Instant::now();
            while issued.front().is_some_and(|&t| now.duration_since(t) >= self.window) {
                issued.pop_front();
            }
            if issued.len() < self.capacity {
                issued.push_back(now);
                return;
            }
            let oldest = *issued.front().expect("nonempty at capacity");
            thread::sleep(self.window - now.duration_since(oldest));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CachedResponse {
    pub request_key: String,
    pub body: Vec<u8>,
    pub fetched_at: SystemTime,
}

#[derive(Serialize, Deserialize)]
struct CacheMeta {
    request_key: String,
    url: String,
    fetched_at: u64,
}

/// Response bodies on disk as `<key>.body` plus a `<key>.json` sidecar.
#[derive(Debug)]
pub struct ResponseCache {
    dir: PathBuf,
    write_lock: Mutex<()>,
}

pub fn request_key(method: &str, url: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(method.as_bytes());
    hasher.update(b" ");
    hasher.update(url.as_bytes());
    hex::encode(hasher.finalize())
}

impl ResponseCache {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        Ok(Self {
            dir,
            write_lock: Mutex::new(()),
        })
    }

    fn body_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.body"))
    }

    fn meta_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Result<Option<CachedResponse>> {
        let meta_path = self.meta_path(key);
        let meta = match fs::read(&meta_path) {
            Ok(bytes) => bytes,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(meta_path, e)),
        };
        let Ok(meta) = serde_json::from_slice::<CacheMeta>(&meta) else {
            warn!("ignoring corrupt cache entry {key}");
            return Ok(None);
        };
        let body_path = self.body_path(key);
        let body = match fs::read(&body_path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(Error::io(body_path, e)),
        };
        Ok(Some(CachedResponse {
            request_key: meta.request_key,
            body,
            fetched_at: UNIX_EPOCH + Duration::from_secs(meta.fetched_at),
        }))
    }

    pub fn put(&self, key: &str, url: &str, body: &[u8]) -> Result<CachedResponse> {
        let _guard = self.write_lock.lock().expect("cache lock poisoned");
        let fetched_at = SystemTime::now();
        let meta = CacheMeta {
            request_key: key.to_string(),
            url: url.to_string(),
            fetched_at: fetched_at.duration_since(UNIX_EPOCH).unwrap_or_default().as_secs(),
        };
        // Body first: an entry counts as present only once its sidecar exists.
        write_atomic(&self.body_path(key), body)?;
        let meta_bytes = serde_json::to_vec(&meta).expect("meta serializes");
        write_atomic(&self.meta_path(key), &meta_bytes)?;
        Ok(CachedResponse {
            request_key: key.to_string(),
            body: body.to_vec(),
            fetched_at: UNIX_EPOCH + Duration::from_secs(meta.fetched_at),
        })
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    let mut file = fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    file.write_all(bytes).map_err(|e| Error::io(&tmp, e))?;
    file.sync_all().map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HttpResponse {
    pub status: u16,
    pub body: Vec<u8>,
}

/// Minimal blocking GET, so tests can substitute a transport.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> std::result::Result<HttpResponse, String>;
}

pub struct UreqTransport {
    agent: ureq::Agent,
}

impl UreqTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(timeout))
            .http_status_as_error(false)
            .user_agent(concat!("uindex/", env!("CARGO_PKG_VERSION")))
            .build()
            .into();
        Self { agent }
    }
}

impl Transport for UreqTransport {
    fn get(&self, url: &str) -> std::result::Result<HttpResponse, String> {
        let mut response = self.agent.get(url).call().map_err(|e| e.to_string())?;
        let status = response.status().as_u16();
        let body = response
            .body_mut()
            .with_config()
            .limit(256 * 1024 * 1024)
            .read_to_vec()
            .map_err(|e| e.to_string())?;
        Ok(HttpResponse { status, body })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HarvestStats {
    pub network_requests: usize,
    pub cache_hits: usize,
}

#[derive(Debug, Clone)]
pub struct Harvest {
    /// The author's works by descending citation count, then citing works
    /// in first-seen order.
    pub papers: Vec<Paper>,
    pub edges: Vec<CitationEdge>,
    pub warnings: Vec<String>,
    pub stats: HarvestStats,
}

impl Harvest {
    pub fn corpus(&self) -> Result<Corpus> {
        Corpus::new(self.papers.clone(), self.edges.clone())
    }
}

#[derive(Debug, Deserialize)]
struct WorksPage {
    #[serde(default)]
    meta: Option<PageMeta>,
    results: Vec<Work>,
}

#[derive(Debug, Deserialize)]
struct PageMeta {
    count: Option<u64>,
}

#[derive(Debug, Deserialize)]
struct Work {
    id: String,
    #[serde(default)]
    display_name: Option<String>,
    #[serde(default)]
    title: Option<String>,
    #[serde(default)]
    publication_year: Option<i32>,
    #[serde(default)]
    authorships: Option<Vec<Authorship>>,
}

#[derive(Debug, Deserialize)]
struct Authorship {
    #[serde(default)]
    author: Option<WorkAuthor>,
    #[serde(default)]
    raw_author_name: Option<String>,
}

#[derive(Debug, Deserialize)]
struct WorkAuthor {
    #[serde(default)]
    id: Option<String>,
    #[serde(default)]
    display_name: Option<String>,
}

/// `https://openalex.org/W123` → `W123`.
fn short_id(id: &str) -> &str {
    id.trim_end_matches('/').rsplit('/').next().unwrap_or(id)
}

pub struct Harvester<T: Transport = UreqTransport> {
    cfg: HarvestConfig,
    base: Url,
    transport: T,
    limiter: RateLimiter,
    cache: ResponseCache,
    stats: Mutex<HarvestStats>,
}

impl Harvester<UreqTransport> {
    pub fn new(cfg: HarvestConfig) -> Result<Self> {
        let transport = UreqTransport::new(cfg.timeout);
        Self::with_transport(cfg, transport)
    }
}

impl<T: Transport> Harvester<T> {
    pub fn with_transport(cfg: HarvestConfig, transport: T) -> Result<Self> {
        let base = cfg.validate()?;
        let limiter = RateLimiter::per_second(cfg.rate_limit);
        let cache = ResponseCache::open(&cfg.cache_dir)?;
        Ok(Self {
            cfg,
            base,
            transport,
            limiter,
            cache,
            stats: Mutex::new(HarvestStats::default()),
        })
    }

    fn works_url(&self, filter: &str, sort: Option<&str>, per_page: usize, page: usize) -> String {
        let mut url = self.base.clone();
        url.path_segments_mut()
            .expect("validated base url")
            .pop_if_empty()
            .push("works");
        {
            let mut q = url.query_pairs_mut();
            q.append_pair("filter", filter);
            if let Some(sort) = sort {
                q.append_pair("sort", sort);
            }
            q.append_pair("per-page", &per_page.to_string());
            q.append_pair("page", &page.to_string());
        }
        url.into()
    }

    /// Cached GET with retries. `Ok(None)` means HTTP 404.
    fn get(&self, url: &str) -> Result<Option<(String, Vec<u8>)>> {
        let key = request_key("GET", url);
        if let Some(hit) = self.cache.get(&key)? {
            self.stats.lock().unwrap().cache_hits += 1;
            debug!("cache hit {url}");
            return Ok(Some((key, hit.body)));
        }
        let mut last_error = String::new();
        for attempt in 0..MAX_ATTEMPTS {
            if attempt > 0 {
                thread::sleep(self.cfg.backoff * 2u32.pow(attempt - 1));
            }
            self.limiter.acquire();
            self.stats.lock().unwrap().network_requests += 1;
            debug!("GET {url} (attempt {})", attempt + 1);
            match self.transport.get(url) {
                Ok(r) if r.status == 200 => {
                    self.cache.put(&key, url, &r.body)?;
                    return Ok(Some((key, r.body)));
                }
                Ok(r) if r.status == 404 => return Ok(None),
                Ok(r) if r.status == 429 || r.status >= 500 => {
                    last_error = format!("HTTP {}", r.status);
                }
                Ok(r) => {
                    return Err(Error::Fetch {
                        url: url.to_string(),
                        reason: format!("HTTP {}", r.status),
                    })
                }
                Err(e) => last_error = e,
            }
            warn!("GET {url} failed: {last_error}");
        }
        Err(Error::Fetch {
            url: url.to_string(),
            reason: format!("{last_error} after {MAX_ATTEMPTS} attempts"),
        })
    }

    fn page(&self, url: &str) -> Result<Option<WorksPage>> {
        let Some((key, body)) = self.get(url)? else {
            return Ok(None);
        };
        serde_json::from_slice(&body)
            .map(Some)
            .map_err(|e| Error::Decode {
                request_key: key,
                reason: e.to_string(),
            })
    }

    /// Pages through a filter until `limit` works or the result set ends.
    fn collect(&self, filter: &str, sort: Option<&str>, limit: usize) -> Result<Option<Vec<Work>>> {
        let per_page = self.cfg.per_page.min(limit).max(1);
        let mut works = Vec::new();
        let mut page = 1;
        loop {
            let url = self.works_url(filter, sort, per_page, page);
            let Some(batch) = self.page(&url)? else {
                return Ok(None);
            };
            let fetched = batch.results.len();
            let total = batch.meta.and_then(|m| m.count);
            works.extend(batch.results);
            let exhausted = fetched < per_page
                || total.is_some_and(|t| works.len() as u64 >= t);
            if works.len() >= limit || exhausted {
                works.truncate(limit);
                return Ok(Some(works));
            }
            page += 1;
        }
    }

    fn to_paper(&self, work: Work, warnings: &mut Vec<String>) -> Option<Paper> {
        let id = short_id(&work.id).to_string();
        let mut authors = Vec::new();
        for (i, a) in work.authorships.unwrap_or_default().into_iter().enumerate() {
            let pid = a
                .author
                .as_ref()
                .and_then(|x| x.id.as_deref())
                .map(|s| short_id(s).to_string());
            let name = a
                .author
                .and_then(|x| x.display_name)
                .or(a.raw_author_name)
                .filter(|n| !n.trim().is_empty())
                .or_else(|| pid.clone());
            match name.map(|n| AuthorRef::new(n, pid)) {
                Some(Ok(author)) => authors.push(author),
                _ => warnings.push(format!("work {id}: authorship #{} has no usable name; skipped", i + 1)),
            }
        }
        if authors.is_empty() {
            return None;
        }
        let title = work.display_name.or(work.title).unwrap_or_default();
        Some(Paper::new(id, title, work.publication_year.unwrap_or(0), authors))
    }

    pub fn run(&self) -> Result<Harvest> {
        let mut warnings = Vec::new();
        let author_filter = format!("author.id:{}", self.cfg.author_id);
        let works = self
            .collect(&author_filter, Some("cited_by_count:desc"), self.cfg.max_works)?
            .unwrap_or_default();
        if works.is_empty() {
            return Err(Error::NotFound(self.cfg.author_id.clone()));
        }

        let mut papers = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut targets = Vec::new();
        for work in works {
            match self.to_paper(work, &mut warnings) {
                Some(p) if !index.contains_key(&p.id) => {
                    index.insert(p.id.clone(), papers.len());
                    targets.push(p.id.clone());
                    papers.push(p);
                }
                Some(p) => warnings.push(format!("work {} listed twice; kept first", p.id)),
                None => warnings.push("one of the author's works has no author data; dropped".into()),
            }
        }

        let mut edges = Vec::new();
        let mut seen_edges = HashSet::new();
        for target in &targets {
            let citing = self
                .collect(&format!("cites:{target}"), None, usize::MAX)?
                .unwrap_or_default();
            for work in citing {
                let citing_id = short_id(&work.id).to_string();
                if citing_id == *target {
                    continue;
                }
                if !index.contains_key(&citing_id) {
                    match self.to_paper(work, &mut warnings) {
                        Some(p) => {
                            index.insert(p.id.clone(), papers.len());
                            papers.push(p);
                        }
                        None => {
                            warnings.push(format!(
                                "citing work {citing_id} of {target} has no author data; excluded from I and S"
                            ));
                            continue;
                        }
                    }
                }
                if seen_edges.insert((citing_id.clone(), target.clone())) {
                    edges.push(CitationEdge::new(citing_id, target.clone()));
                }
            }
        }
        for w in &warnings {
            warn!("{w}");
        }
        Ok(Harvest {
            papers,
            edges,
            warnings,
            stats: self.stats.lock().unwrap().clone(),
        })
    }
}

/// Harvests the configured author over HTTP.
pub fn fetch_author_works(cfg: &HarvestConfig) -> Result<Harvest> {
    Harvester::new(cfg.clone())?.run()
}

pub const PAPERS_FILE: &str = "papers.jsonl";
pub const CITATIONS_FILE: &str = "citations.csv";

/// Writes `papers.jsonl` and `citations.csv` under `out_dir`.
pub fn export_corpus(
    papers: &[Paper],
    edges: &[CitationEdge],
    out_dir: impl AsRef<Path>,
) -> Result<(PathBuf, PathBuf)> {
    let corpus = Corpus::new(papers.to_vec(), edges.to_vec())?;
    export(&corpus, out_dir)
}

pub fn export(corpus: &Corpus, out_dir: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let (papers_text, citations_text) = serialize_corpus(corpus)?;
    let papers_path = out_dir.join(PAPERS_FILE);
    let citations_path = out_dir.join(CITATIONS_FILE);
    fs::write(&papers_path, papers_text).map_err(|e| Error::io(&papers_path, e))?;
    fs::write(&citations_path, citations_text).map_err(|e| Error::io(&citations_path, e))?;
    Ok((papers_path, citations_path))
}

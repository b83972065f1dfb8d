//! C ABI over the `uindex` library.
//!
//! Every fallible function returns a [`UindexStatus`] and writes its result
//! through an out-pointer. On failure a message is available from
//! [`uindex_last_error`] on the same thread. Corpora are opaque handles
//! released with [`uindex_corpus_free`]; strings returned by the library are
//! released with [`uindex_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use uindex::metrics::{self, paper_score};
use uindex::{Corpus, Error, ReportFormat};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UindexStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Domain = 3,
    UnknownPaper = 4,
    UnknownAuthor = 5,
    Parse = 6,
    InvalidCorpus = 7,
    Io = 8,
    Network = 9,
    InvalidArgument = 10,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UindexReportFormat {
    Table = 0,
    Csv = 1,
    Json = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UindexBreakdown {
    pub independent: u64,
    pub self_cites: u64,
    pub total: u64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UindexAuthorMetrics {
    pub paper_count: u64,
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

/// Opaque corpus handle.
pub struct UindexCorpus {
    inner: Corpus,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let msg = CString::new(msg.replace('\0', "\\0")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(UindexStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Domain(_) => UindexStatus::Domain,
            Error::UnknownPaper(_) => UindexStatus::UnknownPaper,
            Error::UnknownAuthor { .. } => UindexStatus::UnknownAuthor,
            Error::Parse { .. } | Error::Multiple(_) | Error::EmptyAuthorName { .. } => UindexStatus::Parse,
            Error::InvalidCorpus(_) => UindexStatus::InvalidCorpus,
            Error::Io { .. } | Error::Write(_) => UindexStatus::Io,
            Error::Fetch { .. } | Error::Decode { .. } | Error::NotFound(_) => UindexStatus::Network,
            Error::Config(_) => UindexStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(UindexStatus::NullArgument, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UindexStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UindexStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            UindexStatus::Panic
        }
    }
}

/// # Safety
/// `s` must be null or point to a nul-terminated string.
unsafe fn borrow_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(UindexStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `out` must be null or valid for writes.
unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `corpus` must be null or a live handle.
unsafe fn borrow_corpus<'a>(corpus: *const UindexCorpus) -> Result<&'a Corpus, Failure> {
    corpus.as_ref().map(|c| &c.inner).ok_or_else(|| null("corpus"))
}

/// # Safety
/// `counts` must be valid for `len` reads, or may be null when `len` is 0.
unsafe fn borrow_counts(counts: *const i64, len: usize) -> Result<Vec<u64>, Failure> {
    if len == 0 {
        return Ok(Vec::new());
    }
    if counts.is_null() {
        return Err(null("counts"));
    }
    Ok(metrics::checked_counts(std::slice::from_raw_parts(counts, len))?)
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn uindex_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn uindex_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// u-index of one paper: `(independent + self_cites / 2) / sqrt(authors)`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_paper_u(independent: i64, self_cites: i64, authors: i64, out: *mut f64) -> UindexStatus {
    guard(|| write_out(out, metrics::paper_u_checked(independent, self_cites, authors)?, "out"))
}

/// h-index of a list of citation counts.
///
/// # Safety
/// `counts` must be valid for `len` reads (may be null if `len` is 0);
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_h_index(counts: *const i64, len: usize, out: *mut u64) -> UindexStatus {
    guard(|| write_out(out, metrics::h_index(&borrow_counts(counts, len)?), "out"))
}

/// Number of counts at or above ten.
///
/// # Safety
/// `counts` must be valid for `len` reads (may be null if `len` is 0);
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_i10_index(counts: *const i64, len: usize, out: *mut u64) -> UindexStatus {
    guard(|| write_out(out, metrics::i10_index(&borrow_counts(counts, len)?), "out"))
}

/// g-index, capped at the number of counts.
///
/// # Safety
/// `counts` must be valid for `len` reads (may be null if `len` is 0);
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_g_index(counts: *const i64, len: usize, out: *mut u64) -> UindexStatus {
    guard(|| write_out(out, metrics::g_index(&borrow_counts(counts, len)?), "out"))
}

/// e-index: square root of the h-core's excess citations.
///
/// # Safety
/// `counts` must be valid for `len` reads (may be null if `len` is 0);
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_e_index(counts: *const i64, len: usize, out: *mut f64) -> UindexStatus {
    guard(|| write_out(out, metrics::e_index(&borrow_counts(counts, len)?), "out"))
}

fn boxed(corpus: Corpus) -> *mut UindexCorpus {
    Box::into_raw(Box::new(UindexCorpus { inner: corpus }))
}

/// Loads a papers file and a citations file.
///
/// # Safety
/// Paths must be nul-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_load(
    papers_path: *const c_char,
    citations_path: *const c_char,
    out: *mut *mut UindexCorpus,
) -> UindexStatus {
    guard(|| {
        let papers = borrow_str(papers_path, "papers_path")?;
        let citations = borrow_str(citations_path, "citations_path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let corpus = uindex::load_corpus(papers, citations)?;
        write_out(out, boxed(corpus), "out")
    })
}

/// Parses corpus contents held in memory.
///
/// # Safety
/// Both texts must be nul-terminated strings; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_from_text(
    papers_text: *const c_char,
    citations_text: *const c_char,
    out: *mut *mut UindexCorpus,
) -> UindexStatus {
    guard(|| {
        let papers = borrow_str(papers_text, "papers_text")?;
        let citations = borrow_str(citations_text, "citations_text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let loaded = uindex::ingest::corpus_from_text(papers, citations)?;
        write_out(out, boxed(loaded.corpus), "out")
    })
}

/// The bundled six-paper reference corpus.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_table1(out: *mut *mut UindexCorpus) -> UindexStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        write_out(out, boxed(uindex::fixtures::table1_corpus()?), "out")
    })
}

/// Releases a corpus. Null is ignored.
///
/// # Safety
/// `corpus` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_free(corpus: *mut UindexCorpus) {
    if !corpus.is_null() {
        drop(Box::from_raw(corpus));
    }
}

/// Number of papers, or 0 for a null handle.
///
/// # Safety
/// `corpus` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_paper_count(corpus: *const UindexCorpus) -> usize {
    corpus.as_ref().map_or(0, |c| c.inner.paper_count())
}

/// # Safety
/// `corpus` must be a live handle, `paper_id` a nul-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_breakdown(
    corpus: *const UindexCorpus,
    paper_id: *const c_char,
    out: *mut UindexBreakdown,
) -> UindexStatus {
    guard(|| {
        let corpus = borrow_corpus(corpus)?;
        let id = borrow_str(paper_id, "paper_id")?;
        let b = uindex::breakdown(corpus, id)?;
        write_out(
            out,
            UindexBreakdown {
                independent: b.independent,
                self_cites: b.self_cites,
                total: b.total,
            },
            "out",
        )
    })
}

/// # Safety
/// As [`uindex_corpus_breakdown`].
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_paper_u(
    corpus: *const UindexCorpus,
    paper_id: *const c_char,
    out: *mut f64,
) -> UindexStatus {
    guard(|| {
        let corpus = borrow_corpus(corpus)?;
        let id = borrow_str(paper_id, "paper_id")?;
        write_out(out, paper_score(corpus, id)?.u, "out")
    })
}

/// Full scorecard for one author identity key.
///
/// # Safety
/// `corpus` must be a live handle, `author_key` a nul-terminated string and
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_author_metrics(
    corpus: *const UindexCorpus,
    author_key: *const c_char,
    out: *mut UindexAuthorMetrics,
) -> UindexStatus {
    guard(|| {
        let corpus = borrow_corpus(corpus)?;
        let key = borrow_str(author_key, "author_key")?;
        let m = uindex::author_metrics(corpus, key)?;
        write_out(
            out,
            UindexAuthorMetrics {
                paper_count: m.paper_count as u64,
                total_citations: m.total_citations,
                independent_total: m.independent_total,
                self_total: m.self_total,
                u_index: m.u_index,
                u10_index: m.u10_index,
                h_index: m.h_index,
                i10_index: m.i10_index,
                g_index: m.g_index,
                e_index: m.e_index,
            },
            "out",
        )
    })
}

/// Renders the all-author report. The returned string must be released
/// with [`uindex_string_free`].
///
/// # Safety
/// `corpus` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn uindex_corpus_report(
    corpus: *const UindexCorpus,
    format: UindexReportFormat,
    out: *mut *mut c_char,
) -> UindexStatus {
    guard(|| {
        let corpus = borrow_corpus(corpus)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let format = match format {
            UindexReportFormat::Table => ReportFormat::Table,
            UindexReportFormat::Csv => ReportFormat::Csv,
            UindexReportFormat::Json => ReportFormat::Json,
        };
        let rows = metrics::all_author_metrics(corpus)?;
        let mut text = Vec::new();
        uindex::write_report(&rows, format, &mut text)?;
        let text = CString::new(text)
            .map_err(|_| Failure(UindexStatus::InvalidUtf8, "report contains a nul byte".into()))?;
        write_out(out, text.into_raw(), "out")
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn uindex_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

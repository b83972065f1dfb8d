use std::ffi::{CStr, CString};
use std::ptr;

use uindex_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = uindex_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

fn table1() -> *mut UindexCorpus {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { uindex_corpus_table1(&mut h) }, UindexStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn paper_u_and_domain_errors() {
    let mut u = 0.0;
    assert_eq!(unsafe { uindex_paper_u(95, 5, 1, &mut u) }, UindexStatus::Ok);
    assert_eq!(u, 97.5);
    assert!(uindex_last_error().is_null());

    assert_eq!(unsafe { uindex_paper_u(1, 0, 0, &mut u) }, UindexStatus::Domain);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { uindex_paper_u(-1, 0, 1, &mut u) }, UindexStatus::Domain);
    assert_eq!(unsafe { uindex_paper_u(1, 0, 1, ptr::null_mut()) }, UindexStatus::NullArgument);
    assert!(last_error().contains("out"));
}

#[test]
fn baseline_indices() {
    let counts = [10i64, 8, 5, 4, 3];
    let (mut h, mut i10, mut g, mut e) = (0u64, 0u64, 0u64, 0.0f64);
    unsafe {
        assert_eq!(uindex_h_index(counts.as_ptr(), counts.len(), &mut h), UindexStatus::Ok);
        assert_eq!(uindex_i10_index(counts.as_ptr(), counts.len(), &mut i10), UindexStatus::Ok);
        assert_eq!(uindex_g_index(counts.as_ptr(), counts.len(), &mut g), UindexStatus::Ok);
        assert_eq!(uindex_e_index(counts.as_ptr(), counts.len(), &mut e), UindexStatus::Ok);
    }
    assert_eq!((h, i10, g), (4, 1, 5));
    assert!((e - 11f64.sqrt()).abs() < 1e-12);

    unsafe {
        assert_eq!(uindex_h_index(ptr::null(), 0, &mut h), UindexStatus::Ok);
        assert_eq!(h, 0);
        assert_eq!(uindex_h_index(ptr::null(), 3, &mut h), UindexStatus::NullArgument);
        let bad = [3i64, -1];
        assert_eq!(uindex_g_index(bad.as_ptr(), 2, &mut g), UindexStatus::Domain);
    }
}

#[test]
fn corpus_queries() {
    let h = table1();
    unsafe {
        assert_eq!(uindex_corpus_paper_count(h), 826);

        let mut b = UindexBreakdown::default();
        assert_eq!(uindex_corpus_breakdown(h, c("row6").as_ptr(), &mut b), UindexStatus::Ok);
        assert_eq!(b, UindexBreakdown { independent: 10, self_cites: 490, total: 500 });

        let mut u = 0.0;
        assert_eq!(uindex_corpus_paper_u(h, c("row2").as_ptr(), &mut u), UindexStatus::Ok);
        assert!((u - 56.292).abs() < 1e-3, "{u}");

        let mut m = UindexAuthorMetrics::default();
        assert_eq!(uindex_corpus_author_metrics(h, c("id:T1A1").as_ptr(), &mut m), UindexStatus::Ok);
        assert_eq!((m.paper_count, m.total_citations, m.independent_total, m.self_total), (6, 100, 95, 5));
        assert_eq!(m.u_index, 97.5);
        assert_eq!(m.u10_index, m.u_index);

        assert_eq!(uindex_corpus_breakdown(h, c("nope").as_ptr(), &mut b), UindexStatus::UnknownPaper);
        assert!(last_error().contains("nope"));
        assert_eq!(
            uindex_corpus_author_metrics(h, c("id:nobody").as_ptr(), &mut m),
            UindexStatus::UnknownAuthor
        );
        assert_eq!(uindex_corpus_breakdown(ptr::null(), c("row1").as_ptr(), &mut b), UindexStatus::NullArgument);
        let bad = [0xffu8, 0];
        assert_eq!(uindex_corpus_breakdown(h, bad.as_ptr().cast(), &mut b), UindexStatus::InvalidUtf8);

        uindex_corpus_free(h);
        uindex_corpus_free(ptr::null_mut());
        assert_eq!(uindex_corpus_paper_count(ptr::null()), 0);
    }
}

#[test]
fn reports_in_every_format() {
    let h = table1();
    for (format, prefix) in [
        (UindexReportFormat::Table, "author_key"),
        (UindexReportFormat::Csv, "author_key,paper_count"),
        (UindexReportFormat::Json, "["),
    ] {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { uindex_corpus_report(h, format, &mut s) }, UindexStatus::Ok);
        let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
        assert!(text.starts_with(prefix), "{text}");
        assert!(text.contains("id:T1A1"));
        unsafe { uindex_string_free(s) };
    }
    unsafe {
        uindex_string_free(ptr::null_mut());
        uindex_corpus_free(h);
    }
}

#[test]
fn load_from_text_and_files() {
    let papers = "{\"id\":\"a\",\"year\":2020,\"authors\":[{\"name\":\"Ann Lone\"}]}\n\
                  {\"id\":\"b\",\"year\":2021,\"authors\":[{\"name\":\"A. Lone\"}]}\n\
                  {\"id\":\"c\",\"year\":2021,\"authors\":[{\"name\":\"Bo Other\"}]}\n";
    let citations = "citing_id,cited_id\nb,a\nc,a\n";
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            uindex_corpus_from_text(c(papers).as_ptr(), c(citations).as_ptr(), &mut h),
            UindexStatus::Ok
        );
        let mut b = UindexBreakdown::default();
        assert_eq!(uindex_corpus_breakdown(h, c("a").as_ptr(), &mut b), UindexStatus::Ok);
        assert_eq!((b.independent, b.self_cites), (1, 1));
        uindex_corpus_free(h);
    }

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("papers.jsonl");
    let cs = dir.path().join("citations.csv");
    std::fs::write(&p, papers).unwrap();
    std::fs::write(&cs, "citing_id,cited_id\nb,ghost\n").unwrap();
    let (p, cs) = (c(p.to_str().unwrap()), c(cs.to_str().unwrap()));
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(uindex_corpus_load(p.as_ptr(), cs.as_ptr(), &mut h), UindexStatus::Parse);
        assert!(h.is_null());
        assert!(last_error().contains("ghost"));
        let missing = c("/does/not/exist");
        assert_eq!(uindex_corpus_load(missing.as_ptr(), cs.as_ptr(), &mut h), UindexStatus::Io);
        assert_eq!(uindex_corpus_load(ptr::null(), cs.as_ptr(), &mut h), UindexStatus::NullArgument);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(uindex_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/uindex.h");
    for name in [
        "uindex_last_error",
        "uindex_version",
        "uindex_paper_u",
        "uindex_h_index",
        "uindex_i10_index",
        "uindex_g_index",
        "uindex_e_index",
        "uindex_corpus_load",
        "uindex_corpus_from_text",
        "uindex_corpus_table1",
        "uindex_corpus_free",
        "uindex_corpus_paper_count",
        "uindex_corpus_breakdown",
        "uindex_corpus_paper_u",
        "uindex_corpus_author_metrics",
        "uindex_corpus_report",
        "uindex_string_free",
        "typedef struct UindexCorpus UindexCorpus;",
        "UINDEX_STATUS_OK = 0",
        "UINDEX_STATUS_PANIC = 99",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

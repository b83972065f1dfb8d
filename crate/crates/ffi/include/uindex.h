#ifndef UINDEX_H
#define UINDEX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum UindexStatus {
  UINDEX_STATUS_OK = 0,
  UINDEX_STATUS_NULL_ARGUMENT = 1,
  UINDEX_STATUS_INVALID_UTF8 = 2,
  UINDEX_STATUS_DOMAIN = 3,
  UINDEX_STATUS_UNKNOWN_PAPER = 4,
  UINDEX_STATUS_UNKNOWN_AUTHOR = 5,
  UINDEX_STATUS_PARSE = 6,
  UINDEX_STATUS_INVALID_CORPUS = 7,
  UINDEX_STATUS_IO = 8,
  UINDEX_STATUS_NETWORK = 9,
  UINDEX_STATUS_INVALID_ARGUMENT = 10,
  UINDEX_STATUS_PANIC = 99,
} UindexStatus;

typedef enum UindexReportFormat {
  UINDEX_REPORT_FORMAT_TABLE = 0,
  UINDEX_REPORT_FORMAT_CSV = 1,
  UINDEX_REPORT_FORMAT_JSON = 2,
} UindexReportFormat;

/**
 * Opaque corpus handle.
 */
typedef struct UindexCorpus UindexCorpus;

typedef struct UindexBreakdown {
  uint64_t independent;
  uint64_t self_cites;
  uint64_t total;
} UindexBreakdown;

typedef struct UindexAuthorMetrics {
  uint64_t paper_count;
  uint64_t total_citations;
  uint64_t independent_total;
  uint64_t self_total;
  double u_index;
  double u10_index;
  uint64_t h_index;
  uint64_t i10_index;
  uint64_t g_index;
  double e_index;
} UindexAuthorMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on this thread.
 */
const char *uindex_last_error(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *uindex_version(void);

/**
 * u-index of one paper: `(independent + self_cites / 2) / sqrt(authors)`.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum UindexStatus uindex_paper_u(int64_t independent,
                                 int64_t self_cites,
                                 int64_t authors,
                                 double *out);

/**
 * h-index of a list of citation counts.
 *
 * # Safety
 * `counts` must be valid for `len` reads (may be null if `len` is 0);
 * `out` must be valid for writes.
 */
enum UindexStatus uindex_h_index(const int64_t *counts, uintptr_t len, uint64_t *out);

/**
 * Number of counts at or above ten.
 *
 * # Safety
 * `counts` must be valid for `len` reads (may be null if `len` is 0);
 * `out` must be valid for writes.
 */
enum UindexStatus uindex_i10_index(const int64_t *counts, uintptr_t len, uint64_t *out);

/**
 * g-index, capped at the number of counts.
 *
 * # Safety
 * `counts` must be valid for `len` reads (may be null if `len` is 0);
 * `out` must be valid for writes.
 */
enum UindexStatus uindex_g_index(const int64_t *counts, uintptr_t len, uint64_t *out);

/**
 * e-index: square root of the h-core's excess citations.
 *
 * # Safety
 * `counts` must be valid for `len` reads (may be null if `len` is 0);
 * `out` must be valid for writes.
 */
enum UindexStatus uindex_e_index(const int64_t *counts, uintptr_t len, double *out);

/**
 * Loads a papers file and a citations file.
 *
 * # Safety
 * Paths must be nul-terminated strings; `out` must be valid for writes.
 */
enum UindexStatus uindex_corpus_load(const char *papers_path,
                                     const char *citations_path,
                                     struct UindexCorpus **out);

/**
 * Parses corpus contents held in memory.
 *
 * # Safety
 * Both texts must be nul-terminated strings; `out` must be valid for writes.
 */
enum UindexStatus uindex_corpus_from_text(const char *papers_text,
                                          const char *citations_text,
                                          struct UindexCorpus **out);

/**
 * The bundled six-paper reference corpus.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum UindexStatus uindex_corpus_table1(struct UindexCorpus **out);

/**
 * Releases a corpus. Null is ignored.
 *
 * # Safety
 * `corpus` must be null or a handle not yet freed.
 */
void uindex_corpus_free(struct UindexCorpus *corpus);

/**
 * Number of papers, or 0 for a null handle.
 *
 * # Safety
 * `corpus` must be null or a live handle.
 */
uintptr_t uindex_corpus_paper_count(const struct UindexCorpus *corpus);

/**
 * # Safety
 * `corpus` must be a live handle, `paper_id` a nul-terminated string and
 * `out` valid for writes.
 */
enum UindexStatus uindex_corpus_breakdown(const struct UindexCorpus *corpus,
                                          const char *paper_id,
                                          struct UindexBreakdown *out);

/**
 * # Safety
 * As [`uindex_corpus_breakdown`].
 */
enum UindexStatus uindex_corpus_paper_u(const struct UindexCorpus *corpus,
                                        const char *paper_id,
                                        double *out);

/**
 * Full scorecard for one author identity key.
 *
 * # Safety
 * `corpus` must be a live handle, `author_key` a nul-terminated string and
 * `out` valid for writes.
 */
enum UindexStatus uindex_corpus_author_metrics(const struct UindexCorpus *corpus,
                                               const char *author_key,
                                               struct UindexAuthorMetrics *out);

/**
 * Renders the all-author report. The returned string must be released
 * with [`uindex_string_free`].
 *
 * # Safety
 * `corpus` must be a live handle and `out` valid for writes.
 */
enum UindexStatus uindex_corpus_report(const struct UindexCorpus *corpus,
                                       enum UindexReportFormat format,
                                       char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void uindex_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UINDEX_H */

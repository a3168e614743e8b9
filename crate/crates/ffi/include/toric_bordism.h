#ifndef TORIC_BORDISM_H
#define TORIC_BORDISM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TbStatus {
  TB_STATUS_OK = 0,
  TB_STATUS_NULL_ARGUMENT = 1,
  TB_STATUS_INVALID_UTF8 = 2,
  /**
   * Bad input: violated block sizes, non-positive weights, malformed descriptions.
   */
  TB_STATUS_PRECONDITION = 3,
  /**
   * An internal certificate failed; this indicates a bug.
   */
  TB_STATUS_INTERNAL = 4,
  TB_STATUS_PANIC = 5,
} TbStatus;

typedef enum TbFlipKind {
  TB_FLIP_KIND_ATIYAH = 0,
  TB_FLIP_KIND_NON_EQUALIZED = 1,
} TbFlipKind;

typedef enum TbVerdict {
  TB_VERDICT_ATIYAH_LOCAL = 0,
  TB_VERDICT_NON_EQUALIZED_LOCAL = 1,
  TB_VERDICT_NOT_APPLICABLE = 2,
} TbVerdict;

/**
 * Opaque result of the action pipeline.
 */
typedef struct TbAnalysis TbAnalysis;

/**
 * Opaque cobordism setup.
 */
typedef struct TbSetup TbSetup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds the setup `v = (−q_neg, 0^zeros, q_pos)`. With `unchecked`, block sizes outside
 * `1 < d1 <= d2 < n+1` are accepted.
 *
 * # Safety
 * `q_neg` and `q_pos` point to `neg_len` and `pos_len` readable values (or are NULL with length
 * 0); `out` is valid for writes.
 */
enum TbStatus tb_setup_new(const uint64_t *q_neg,
                           size_t neg_len,
                           size_t zeros,
                           const uint64_t *q_pos,
                           size_t pos_len,
                           bool unchecked,
                           struct TbSetup **out);

/**
 * # Safety
 * `setup` is NULL or a handle from [`tb_setup_new`] that has not been freed.
 */
void tb_setup_free(struct TbSetup *setup);

/**
 * Flip type by weights, and whether it matches the smoothness of both quotient fans.
 *
 * # Safety
 * `setup` is a live handle; `kind` and `characterizations_agree` are valid for writes.
 */
enum TbStatus tb_setup_classify(const struct TbSetup *setup,
                                enum TbFlipKind *kind,
                                bool *characterizations_agree);

/**
 * The full cobordism report as JSON; free it with [`tb_string_free`].
 *
 * # Safety
 * `setup` is a live handle; `out` is valid for writes.
 */
enum TbStatus tb_setup_report_json(const struct TbSetup *setup, bool canonical_basis, char **out);

/**
 * The weighted blow-up report for `ω = (0^d, q)` as JSON; `legacy` allows `d < 2`.
 *
 * # Safety
 * `q` points to `len` readable values; `out` is valid for writes.
 */
enum TbStatus tb_blowup_report_json(size_t d,
                                    const uint64_t *q,
                                    size_t len,
                                    bool legacy,
                                    char **out);

/**
 * Runs the action pipeline on an action-description JSON document.
 *
 * # Safety
 * `description` is a NUL-terminated string; `out` is valid for writes.
 */
enum TbStatus tb_analysis_from_json(const char *description,
                                    bool picard_rank_one,
                                    struct TbAnalysis **out);

/**
 * The `H_k` action on `Q^{2n−1}`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum TbStatus tb_analysis_quadric_example(size_t n, size_t k, struct TbAnalysis **out);

/**
 * The `H_n` action on the Grassmannian of lines on `Q^{2n−1}`.
 *
 * # Safety
 * `out` is valid for writes.
 */
enum TbStatus tb_analysis_og_example(size_t n, struct TbAnalysis **out);

/**
 * # Safety
 * `analysis` is a live handle; both out-pointers are valid for writes.
 */
enum TbStatus tb_analysis_criticality(const struct TbAnalysis *analysis,
                                      int64_t *criticality,
                                      int64_t *bandwidth);

/**
 * # Safety
 * `analysis` is a live handle; `verdict` is valid for writes.
 */
enum TbStatus tb_analysis_verdict(const struct TbAnalysis *analysis, enum TbVerdict *verdict);

/**
 * The whole analysis as JSON; free it with [`tb_string_free`].
 *
 * # Safety
 * `analysis` is a live handle; `out` is valid for writes.
 */
enum TbStatus tb_analysis_json(const struct TbAnalysis *analysis, char **out);

/**
 * # Safety
 * `analysis` is NULL or a live handle, which is invalid afterwards.
 */
void tb_analysis_free(struct TbAnalysis *analysis);

/**
 * # Safety
 * `s` is NULL or a string returned by this library that has not been freed.
 */
void tb_string_free(char *s);

/**
 * A copy of the last failure message on this thread, or NULL; free it with [`tb_string_free`].
 */
char *tb_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORIC_BORDISM_H */

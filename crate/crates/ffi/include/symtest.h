#ifndef SYMTEST_H
#define SYMTEST_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SymtestStatus {
  SYMTEST_STATUS_OK = 0,
  SYMTEST_STATUS_INVALID_ARGUMENT = 1,
  SYMTEST_STATUS_NULL_POINTER = 2,
  SYMTEST_STATUS_SIZE_GUARD = 3,
  SYMTEST_STATUS_NUMERICAL = 4,
  SYMTEST_STATUS_BUFFER_TOO_SMALL = 5,
  SYMTEST_STATUS_PANIC = 6,
} SymtestStatus;

typedef enum SymtestSubgroup {
  SYMTEST_SUBGROUP_IDENTITY = 0,
  SYMTEST_SUBGROUP_Z = 1,
  SYMTEST_SUBGROUP_T = 2,
} SymtestSubgroup;

/**
 * Optimal parallel protocol.
 */
typedef struct SymtestProtocol SymtestProtocol;

/**
 * Branching table of one subgroup at `n` queries.
 */
typedef struct SymtestTable SymtestTable;

/**
 * Outcome of [`symtest_protocol_simulate`].
 */
typedef struct SymtestSimulation {
  double type_i_worst;
  double type_ii_mean;
  double type_ii_stderr;
  double target_beta;
} SymtestSimulation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Size of the last error message on this thread, including the NUL.
 */
size_t symtest_last_error_length(void);

/**
 * Copies the last error message on this thread into `buf`.
 *
 * # Safety
 * `buf` must be null or valid for `cap` bytes; `out_len` must be valid.
 */
enum SymtestStatus symtest_last_error_message(char *buf, size_t cap, size_t *out_len);

/**
 * `β(ε)` as a double. `numeric` selects the eigenvalue path.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum SymtestStatus symtest_beta(enum SymtestSubgroup subgroup,
                                uint32_t n,
                                double eps,
                                bool numeric,
                                double *out);

/**
 * Exact `β(ε)` as `"p/q = decimal"`. `eps` is a decimal or fraction string.
 *
 * # Safety
 * `eps` must be a NUL-terminated string, `buf` null or valid for `cap`
 * bytes, and `out_len` valid.
 */
enum SymtestStatus symtest_beta_exact(enum SymtestSubgroup subgroup,
                                      uint32_t n,
                                      const char *eps,
                                      char *buf,
                                      size_t cap,
                                      size_t *out_len);

/**
 * Fewest queries with `β ≤ delta`.
 *
 * # Safety
 * `out_n` and `out_beta` must be valid for writes.
 */
enum SymtestStatus symtest_sample_complexity(enum SymtestSubgroup subgroup,
                                             double delta,
                                             uint32_t *out_n,
                                             double *out_beta);

/**
 * # Safety
 * `out` must be valid for a write.
 */
enum SymtestStatus symtest_table_new(enum SymtestSubgroup subgroup,
                                     uint32_t n,
                                     struct SymtestTable **out);

/**
 * # Safety
 * `table` must be null or come from [`symtest_table_new`], freed once.
 */
void symtest_table_free(struct SymtestTable *table);

/**
 * Table as JSON.
 *
 * # Safety
 * `table` must be a live handle, `buf` null or valid for `cap` bytes, and
 * `out_len` valid.
 */
enum SymtestStatus symtest_table_json(const struct SymtestTable *table,
                                      char *buf,
                                      size_t cap,
                                      size_t *out_len);

/**
 * `e^{Dmax}` of the table as `"p/q = decimal"`.
 *
 * # Safety
 * As for [`symtest_table_json`].
 */
enum SymtestStatus symtest_table_exp_dmax(const struct SymtestTable *table,
                                          char *buf,
                                          size_t cap,
                                          size_t *out_len);

/**
 * # Safety
 * `out` must be valid for a write.
 */
enum SymtestStatus symtest_protocol_new(enum SymtestSubgroup subgroup,
                                        uint32_t n,
                                        struct SymtestProtocol **out);

/**
 * # Safety
 * `protocol` must be null or come from [`symtest_protocol_new`], freed once.
 */
void symtest_protocol_free(struct SymtestProtocol *protocol);

/**
 * # Safety
 * `protocol` must be a live handle and `out` valid for a write.
 */
enum SymtestStatus symtest_protocol_reference_free(const struct SymtestProtocol *protocol,
                                                   bool *out);

/**
 * Protocol as JSON, complex entries as `[re, im]`.
 *
 * # Safety
 * As for [`symtest_table_json`].
 */
enum SymtestStatus symtest_protocol_json(const struct SymtestProtocol *protocol,
                                         char *buf,
                                         size_t cap,
                                         size_t *out_len);

/**
 * Simulates the protocol under both hypotheses.
 *
 * # Safety
 * `protocol` must be a live handle and `out` valid for a write.
 */
enum SymtestStatus symtest_protocol_simulate(const struct SymtestProtocol *protocol,
                                             size_t shots_null,
                                             size_t shots_alt,
                                             uint64_t seed,
                                             uint64_t stream,
                                             struct SymtestSimulation *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYMTEST_H */

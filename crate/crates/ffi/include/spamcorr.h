#ifndef SPAMCORR_H
#define SPAMCORR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum SpamcorrStatus {
  SPAMCORR_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SPAMCORR_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SPAMCORR_STATUS_INVALID_UTF8 = 2,
  /**
   * Input was rejected: malformed JSON, bad probabilities, inconsistent tables.
   */
  SPAMCORR_STATUS_VALIDATION = 3,
  /**
   * The operation could not complete, for example the enumeration guard tripped.
   */
  SPAMCORR_STATUS_RUNTIME = 4,
  /**
   * A qubit index was not below the number of qubits.
   */
  SPAMCORR_STATUS_OUT_OF_RANGE = 5,
  /**
   * The requested matrix entry is on the masked diagonal.
   */
  SPAMCORR_STATUS_MASKED = 6,
  /**
   * The value does not exist for this object, such as bounds of an exact set.
   */
  SPAMCORR_STATUS_UNAVAILABLE = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  SPAMCORR_STATUS_PANIC = 8,
} SpamcorrStatus;

/**
 * Bit order of counts JSON. `Auto` takes the order from the document's own field.
 */
typedef enum SpamcorrBitOrder {
  SPAMCORR_BIT_ORDER_AUTO = 0,
  SPAMCORR_BIT_ORDER_MSB = 1,
  SPAMCORR_BIT_ORDER_LSB = 2,
} SpamcorrBitOrder;

/**
 * Estimated or exact epsilon, A and C.
 */
typedef struct SpamcorrCorrelators SpamcorrCorrelators;

/**
 * Counts for the ground and single-excitation preparations.
 */
typedef struct SpamcorrCounts SpamcorrCounts;

/**
 * All-pairs shortest-path distances of a topology.
 */
typedef struct SpamcorrDistances SpamcorrDistances;

/**
 * Readout noise model.
 */
typedef struct SpamcorrModel SpamcorrModel;

/**
 * Coupling graph.
 */
typedef struct SpamcorrTopology SpamcorrTopology;

/**
 * Worst-case standard errors at a given number of shots.
 */
typedef struct SpamcorrSamplingBounds {
  double single_prob;
  double eps_or_a;
  double c;
  double global;
} SpamcorrSamplingBounds;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null after a successful call.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *spamcorr_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string produced by this library and not yet freed.
 */
void spamcorr_string_free(char *s);

/**
 * Fills `out` with the sampling bounds for `shots` (must be positive).
 *
 * # Safety
 * `out` must be null or point to writable memory for one `SpamcorrSamplingBounds`.
 */
enum SpamcorrStatus spamcorr_sampling_bounds(uint64_t shots, struct SpamcorrSamplingBounds *out);

/**
 * Parses a noise-model JSON document.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be null or writable.
 */
enum SpamcorrStatus spamcorr_model_from_json(const char *json, struct SpamcorrModel **out);

/**
 * # Safety
 * `model` must be null or a handle from this library not yet freed.
 */
void spamcorr_model_free(struct SpamcorrModel *model);

/**
 * # Safety
 * `model` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_model_num_qubits(const struct SpamcorrModel *model, size_t *out);

/**
 * Samples `shots` readouts of every preparation. Identical arguments give identical counts.
 *
 * # Safety
 * `model` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_model_simulate(const struct SpamcorrModel *model,
                                            uint64_t shots,
                                            uint64_t seed,
                                            struct SpamcorrCounts **out);

/**
 * Exact infinite-shot correlators. Fails with `Runtime` when the enumeration
 * size exceeds `max_enum` (pass 0 for the default of 2^24).
 *
 * # Safety
 * `model` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_model_exact_correlators(const struct SpamcorrModel *model,
                                                     uint64_t max_enum,
                                                     struct SpamcorrCorrelators **out);

/**
 * Parses a counts JSON document. With `Auto` the document must state its `bit_order`;
 * otherwise a stated order must agree with `order`.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_counts_from_json(const char *json,
                                              enum SpamcorrBitOrder order,
                                              struct SpamcorrCounts **out);

/**
 * Serializes counts. `Auto` writes the canonical `msb` order.
 *
 * # Safety
 * `counts` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_counts_to_json(const struct SpamcorrCounts *counts,
                                            enum SpamcorrBitOrder order,
                                            char **out);

/**
 * # Safety
 * `counts` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_counts_shots(const struct SpamcorrCounts *counts, uint64_t *out);

/**
 * # Safety
 * `counts` must be null or a handle from this library not yet freed.
 */
void spamcorr_counts_free(struct SpamcorrCounts *counts);

/**
 * Estimates epsilon, A and C with their sampling bounds.
 *
 * # Safety
 * `counts` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_characterize(const struct SpamcorrCounts *counts,
                                          struct SpamcorrCorrelators **out);

/**
 * Parses a correlator JSON document as written by `characterize` or `oracle`.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_correlators_from_json(const char *json,
                                                   struct SpamcorrCorrelators **out);

/**
 * # Safety
 * `corr` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_correlators_to_json(const struct SpamcorrCorrelators *corr,
                                                 char **out);

/**
 * # Safety
 * `corr` must be null or a handle from this library not yet freed.
 */
void spamcorr_correlators_free(struct SpamcorrCorrelators *corr);

/**
 * # Safety
 * `corr` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_correlators_num_qubits(const struct SpamcorrCorrelators *corr,
                                                    size_t *out);

/**
 * Average assignment error of qubit `i`.
 *
 * # Safety
 * `corr` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_correlators_epsilon(const struct SpamcorrCorrelators *corr,
                                                 size_t i,
                                                 double *out);

/**
 * Excitation correlator `A_ij`: change of qubit `i`'s false-1 rate when qubit `j` is excited.
 * Returns `Masked` for `i == j`.
 *
 * # Safety
 * `corr` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_correlators_a(const struct SpamcorrCorrelators *corr,
                                           size_t i,
                                           size_t j,
                                           double *out);

/**
 * Ground-state covariance `C_ij` of the zero outcomes. Returns `Masked` for `i == j`.
 *
 * # Safety
 * `corr` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_correlators_c(const struct SpamcorrCorrelators *corr,
                                           size_t i,
                                           size_t j,
                                           double *out);

/**
 * Sampling bounds attached to an estimated set. Exact sets have none and return `Unavailable`.
 *
 * # Safety
 * `corr` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_correlators_bounds(const struct SpamcorrCorrelators *corr,
                                                struct SpamcorrSamplingBounds *out);

/**
 * Parses a topology JSON document `{"num_qubits": n, "edges": [[i, j], ...]}`.
 *
 * # Safety
 * `json` must be null or a NUL-terminated string; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_topology_from_json(const char *json, struct SpamcorrTopology **out);

/**
 * # Safety
 * `topo` must be null or a handle from this library not yet freed.
 */
void spamcorr_topology_free(struct SpamcorrTopology *topo);

/**
 * All-pairs shortest-path distances.
 *
 * # Safety
 * `topo` must be a live handle or null; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_topology_distances(const struct SpamcorrTopology *topo,
                                                struct SpamcorrDistances **out);

/**
 * # Safety
 * `dist` must be null or a handle from this library not yet freed.
 */
void spamcorr_distances_free(struct SpamcorrDistances *dist);

/**
 * Distance between qubits `i` and `j`. For disconnected pairs `reachable` is set
 * to false and `out` to 0.
 *
 * # Safety
 * `dist` must be a live handle or null; `out` and `reachable` must be writable or null.
 */
enum SpamcorrStatus spamcorr_distances_get(const struct SpamcorrDistances *dist,
                                           size_t i,
                                           size_t j,
                                           uint32_t *out,
                                           bool *reachable);

/**
 * Runs the full analysis and returns the summary JSON. `edges` may be null to use
 * the default log-spaced edges; otherwise it holds `num_edges` increasing,
 * non-negative values.
 *
 * # Safety
 * `corr` and `dist` must be live handles or null; `edges` must be null or point to
 * `num_edges` readable doubles; `out` must be writable or null.
 */
enum SpamcorrStatus spamcorr_analyze(const struct SpamcorrCorrelators *corr,
                                     const struct SpamcorrDistances *dist,
                                     const double *edges,
                                     size_t num_edges,
                                     double floor_multiplier,
                                     char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPAMCORR_H */

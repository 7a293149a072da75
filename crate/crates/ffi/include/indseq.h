#ifndef INDSEQ_H
#define INDSEQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum IndseqStatus {
  INDSEQ_STATUS_OK = 0,
  INDSEQ_STATUS_NULL_POINTER = 1,
  INDSEQ_STATUS_INVALID_ARGUMENT = 2,
  INDSEQ_STATUS_SIZE_GUARD = 3,
  INDSEQ_STATUS_NOT_INDEPENDENT = 4,
  INDSEQ_STATUS_NO_INDEPENDENT_SET = 5,
  INDSEQ_STATUS_REJECTION_CAP_EXCEEDED = 6,
  INDSEQ_STATUS_PARSE = 7,
  INDSEQ_STATUS_OVERFLOW = 8,
  INDSEQ_STATUS_INTERNAL = 9,
} IndseqStatus;

typedef enum IndseqFamily {
  INDSEQ_FAMILY_TREE = 0,
  /**
   * G(n, p) with the parameter read as `p`.
   */
  INDSEQ_FAMILY_GNP_P = 1,
  /**
   * G(n, d/n) with the parameter read as `d`.
   */
  INDSEQ_FAMILY_GNP_D = 2,
  /**
   * Random `d`-regular graph; the parameter must be integral.
   */
  INDSEQ_FAMILY_REGULAR = 3,
} IndseqFamily;

/**
 * Opaque labelled simple graph.
 */
typedef struct IndseqGraph IndseqGraph;

/**
 * Opaque independence sequence.
 */
typedef struct IndseqSequence IndseqSequence;

typedef struct IndseqPittel {
  double rho;
  double mean_correction;
  double variance_rate;
  double variance_rate_squared;
} IndseqPittel;

typedef struct IndseqKarp {
  double d;
  double a;
  double b;
  double matching_fraction;
  double independent_fraction;
} IndseqKarp;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Description of the last error on the calling thread. The pointer stays
 * valid until the next failing call on the same thread; never free it.
 */
const char *indseq_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *indseq_version(void);

/**
 * # Safety
 * `s` is null or a string returned by this library and not yet freed.
 */
void indseq_string_free(char *s);

/**
 * Builds a graph on `n` vertices from `m` edges `(us[i], vs[i])`.
 * Duplicate and reversed pairs collapse; self-loops and out-of-range
 * endpoints are errors.
 *
 * # Safety
 * `us` and `vs` are valid for `m` reads (or `m == 0`); `out` is writable.
 */
enum IndseqStatus indseq_graph_from_edges(size_t n,
                                          const size_t *us,
                                          const size_t *vs,
                                          size_t m,
                                          struct IndseqGraph **out);

/**
 * Parses the edge-list text format (`n m` header, then `u v` lines).
 *
 * # Safety
 * `text` is a valid nul-terminated string; `out` is writable.
 */
enum IndseqStatus indseq_graph_parse_edge_list(const char *text, struct IndseqGraph **out);

/**
 * Samples one graph of the family with parameter `param` (ignored for
 * trees) from the stream `(seed, trial)`.
 *
 * # Safety
 * `out` is writable.
 */
enum IndseqStatus indseq_graph_sample(enum IndseqFamily family,
                                      size_t n,
                                      double param,
                                      uint64_t seed,
                                      uint64_t trial,
                                      struct IndseqGraph **out);

/**
 * # Safety
 * `g` is null or a graph handle not yet freed.
 */
void indseq_graph_free(struct IndseqGraph *g);

/**
 * Vertex count, or 0 for a null handle.
 *
 * # Safety
 * `g` is null or a live graph handle.
 */
size_t indseq_graph_vertex_count(const struct IndseqGraph *g);

/**
 * Edge count, or 0 for a null handle.
 *
 * # Safety
 * `g` is null or a live graph handle.
 */
size_t indseq_graph_edge_count(const struct IndseqGraph *g);

/**
 * Edge-list text of the graph; free with [`indseq_string_free`].
 *
 * # Safety
 * `g` is a live graph handle; `out` is writable.
 */
enum IndseqStatus indseq_graph_to_edge_list(const struct IndseqGraph *g, char **out);

/**
 * Independence number.
 *
 * # Safety
 * `g` is a live graph handle; `out` is writable.
 */
enum IndseqStatus indseq_max_independent_set_size(const struct IndseqGraph *g, size_t *out);

/**
 * Whether `Σ_{|S|=k} N_S = (k+1) x_{k+1}` holds at every `k`.
 *
 * # Safety
 * `g` is a live graph handle; `out` is writable.
 */
enum IndseqStatus indseq_counting_identity_holds(const struct IndseqGraph *g, bool *out);

/**
 * Exact independence sequence of `g`.
 *
 * # Safety
 * `g` is a live graph handle; `out` is writable.
 */
enum IndseqStatus indseq_sequence_compute(const struct IndseqGraph *g, struct IndseqSequence **out);

/**
 * # Safety
 * `s` is null or a sequence handle not yet freed.
 */
void indseq_sequence_free(struct IndseqSequence *s);

/**
 * Number of stored coefficients, `α + 1`; 0 for a null handle.
 *
 * # Safety
 * `s` is null or a live sequence handle.
 */
size_t indseq_sequence_len(const struct IndseqSequence *s);

/**
 * Coefficient `x_k` as a decimal string; free with [`indseq_string_free`].
 * Indices beyond `α` give `"0"`.
 *
 * # Safety
 * `s` is a live sequence handle; `out` is writable.
 */
enum IndseqStatus indseq_sequence_coefficient_string(const struct IndseqSequence *s,
                                                     size_t k,
                                                     char **out);

/**
 * Coefficient `x_k` as a 64-bit integer; `INDSEQ_STATUS_OVERFLOW` if it
 * does not fit.
 *
 * # Safety
 * `s` is a live sequence handle; `out` is writable.
 */
enum IndseqStatus indseq_sequence_coefficient_u64(const struct IndseqSequence *s,
                                                  size_t k,
                                                  uint64_t *out);

/**
 * The sequence as count JSON; free with [`indseq_string_free`].
 *
 * # Safety
 * `s` is a live sequence handle; `out` is writable.
 */
enum IndseqStatus indseq_sequence_to_json(const struct IndseqSequence *s, char **out);

/**
 * Weak unimodality of the sequence.
 *
 * # Safety
 * `s` is a live sequence handle; `out` is writable.
 */
enum IndseqStatus indseq_sequence_is_unimodal(const struct IndseqSequence *s, bool *out);

/**
 * Log-concavity of the sequence.
 *
 * # Safety
 * `s` is a live sequence handle; `out` is writable.
 */
enum IndseqStatus indseq_sequence_is_log_concave(const struct IndseqSequence *s, bool *out);

/**
 * # Safety
 * `out` is writable.
 */
enum IndseqStatus indseq_pittel_constants(struct IndseqPittel *out);

/**
 * # Safety
 * `out` is writable.
 */
enum IndseqStatus indseq_karp_constants(double d, struct IndseqKarp *out);

/**
 * # Safety
 * `out` is writable.
 */
enum IndseqStatus indseq_frieze_beta(double d, double *out);

/**
 * # Safety
 * `out` is writable.
 */
enum IndseqStatus indseq_dani_degree_bound(double alpha, double *out);

/**
 * # Safety
 * `increasing` and `decreasing` are writable.
 */
enum IndseqStatus indseq_tree_thresholds(double *increasing, double *decreasing);

/**
 * Labelled trees on `n` vertices in which `{0, ..., k-1}` is independent,
 * as a decimal string; free with [`indseq_string_free`].
 *
 * # Safety
 * `out` is writable.
 */
enum IndseqStatus indseq_trees_with_independent_prefix(size_t n, size_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* INDSEQ_H */

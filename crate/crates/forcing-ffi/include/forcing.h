#ifndef FORCING_H
#define FORCING_H

/* Generated by cbindgen from crates/forcing-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call; numeric values match the CLI exit
 * codes.
 */
typedef enum ForcingStatus {
  FORCING_STATUS_OK = 0,
  FORCING_STATUS_PARSE_ERROR = 2,
  FORCING_STATUS_PRECONDITION_FAILED = 3,
  FORCING_STATUS_VERIFICATION_FAILED = 4,
  FORCING_STATUS_BUDGET_EXCEEDED = 5,
  FORCING_STATUS_INTERNAL_ERROR = 6,
  FORCING_STATUS_NULL_ARGUMENT = 7,
  FORCING_STATUS_INVALID_UTF8 = 8,
} ForcingStatus;

/**
 * Opaque handle around a bipartite graph.
 */
typedef struct ForcingGraph ForcingGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *forcing_version(void);

/**
 * Message for the most recent failure on this thread; do not free.
 */
const char *forcing_last_error(void);

/**
 * Release a string returned by this library.
 *
 * # Safety
 * `s` must come from this library and must not be used afterwards.
 */
void forcing_string_free(char *s);

/**
 * Build a graph from a family expression (e.g. "prod(Kmn:2,2;C:6)").
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out_graph` a valid
 * pointer; on success the caller owns the handle and must release it
 * with [`forcing_graph_free`].
 */
enum ForcingStatus forcing_graph_build(const char *expr, struct ForcingGraph **out_graph);

/**
 * Parse a graph from the line-oriented graph file format.
 *
 * # Safety
 * Same contract as [`forcing_graph_build`].
 */
enum ForcingStatus forcing_graph_parse(const char *text, struct ForcingGraph **out_graph);

/**
 * Vertex, edge, and side counts of a graph handle.
 *
 * # Safety
 * `graph` must be a live handle; out pointers may be null to skip a
 * count.
 */
enum ForcingStatus forcing_graph_counts(const struct ForcingGraph *graph,
                                        size_t *vertices,
                                        size_t *edges,
                                        size_t *x_size,
                                        size_t *y_size);

/**
 * The graph file text for a handle.
 *
 * # Safety
 * `graph` must be a live handle and `out_text` a valid pointer; the
 * returned string is freed with [`forcing_string_free`].
 */
enum ForcingStatus forcing_graph_to_text(const struct ForcingGraph *graph, char **out_text);

/**
 * Release a graph handle.
 *
 * # Safety
 * `graph` must come from this library and must not be used afterwards.
 */
void forcing_graph_free(struct ForcingGraph *graph);

/**
 * Certify f(G x C_2k) (k >= 2) or, with k = 0, f(G x K2) for the base
 * family `expr`. `field` selects the scalar field ("Q", "GFp:7",
 * "Qsqrt:2") or may be null for the per-family default. The full report
 * document is written even when a verification stage fails.
 *
 * # Safety
 * `expr` must be a NUL-terminated string; `field` may be null;
 * `out_report_json` must be a valid pointer.
 */
enum ForcingStatus forcing_certify(const char *expr,
                                   size_t k,
                                   const char *field,
                                   uint64_t trials,
                                   uint64_t seed,
                                   char **out_report_json);

/**
 * Exact minimum forcing number by exhaustion; `cap` of 0 means
 * unlimited, and a cap that truncates the enumeration yields
 * `BudgetExceeded` with the partial report still written.
 *
 * # Safety
 * `expr` must be a NUL-terminated string and `out_report_json` a valid
 * pointer.
 */
enum ForcingStatus forcing_oracle(const char *expr, size_t cap, char **out_report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FORCING_H */

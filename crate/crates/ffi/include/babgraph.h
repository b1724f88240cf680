#ifndef BABGRAPH_H
#define BABGRAPH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  BAB_STATUS_OK = 0,
  BAB_STATUS_NULL_ARGUMENT = 1,
  BAB_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed edge list or edge array.
   */
  BAB_STATUS_INVALID_GRAPH = 3,
  /**
   * The graph is larger than the exact routine accepts.
   */
  BAB_STATUS_SIZE_GUARD = 4,
  BAB_STATUS_CAP_EXCEEDED = 5,
  /**
   * Independent computation routes disagreed.
   */
  BAB_STATUS_ROUTES_DISAGREE = 6,
  BAB_STATUS_INTERNAL = 7,
} BabStatus;

/**
 * Opaque graph handle.
 */
typedef struct BabGraph BabGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an edge list (`n m` header, then one `u v` pair per line).
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a valid pointer.
 */
BabStatus bab_graph_parse(const char *text, BabGraph **out);

/**
 * Builds a graph from `edge_count` pairs stored flat in `edges`.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` values (it may be null when
 * `edge_count` is zero) and `out` must be valid.
 */
BabStatus bab_graph_from_edges(size_t n, const size_t *edges, size_t edge_count, BabGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void bab_graph_free(BabGraph *g);

/**
 * Number of vertices, or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t bab_graph_order(const BabGraph *g);

/**
 * Number of edges, or 0 for null.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t bab_graph_size(const BabGraph *g);

/**
 * Independence number.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
BabStatus bab_alpha(const BabGraph *g, size_t *out);

/**
 * Matching number.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
BabStatus bab_matching_number(const BabGraph *g, size_t *out);

/**
 * Number of vertices left exposed by a maximum matching.
 *
 * # Safety
 * `g` must be a live handle and `out` valid.
 */
BabStatus bab_deficiency(const BabGraph *g, size_t *out);

/**
 * Exact adjacency determinant as a decimal string.
 *
 * # Safety
 * `g` must be a live handle and `out` valid; free the result with
 * `bab_string_free`.
 */
BabStatus bab_determinant(const BabGraph *g, char **out);

/**
 * Full analysis report as JSON. `oracle` additionally cross-checks every
 * fast path; `max_n` of 0 means the default size guard.
 *
 * # Safety
 * `g` must be a live handle and `out` valid; free the result with
 * `bab_string_free`.
 */
BabStatus bab_analyze_json(const BabGraph *g, bool oracle, size_t max_n, char **out);

/**
 * BAB structure as JSON, or the string `null` when none was found.
 *
 * # Safety
 * `g` must be a live handle and `out` valid; free the result with
 * `bab_string_free`.
 */
BabStatus bab_recognize_json(const BabGraph *g, char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void bab_string_free(char *s);

/**
 * Message of the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *bab_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BABGRAPH_H */

#ifndef SIZEMATCH_H
#define SIZEMATCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SmStatus {
  SM_STATUS_OK = 0,
  SM_STATUS_NULL_POINTER = 1,
  SM_STATUS_EMPTY_GRAPH = 2,
  SM_STATUS_DISCONNECTED = 3,
  SM_STATUS_NON_FINITE = 4,
  SM_STATUS_INVALID_GRAPH = 5,
  SM_STATUS_OUTSIDE_HALF_PLANE = 6,
  SM_STATUS_INVALID_DIAGRAM = 7,
  SM_STATUS_PARSE = 8,
  SM_STATUS_NON_ISOMORPHIC = 9,
  SM_STATUS_SIZE_CAP = 10,
  SM_STATUS_OUT_OF_RANGE = 11,
  SM_STATUS_INTERNAL = 12,
} SmStatus;

// A cornerpoint diagram.
typedef struct SmDiagram SmDiagram;

// A connected graph with real vertex values.
typedef struct SmSizePair SmSizePair;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty if none. The
// pointer stays valid until the next failing call on the same thread.
const char *sm_last_error(void);

// Builds a size pair on vertices `0..n_vertices` with `values[i]` on vertex
// `i`. `edges` holds `2 * n_edges` vertex indices, two per edge.
//
// # Safety
// `values` must point to `n_vertices` doubles, `edges` to `2 * n_edges`
// indices, and `out` must be writable.
enum SmStatus sm_sizepair_new(const double *values,
                              size_t n_vertices,
                              const size_t *edges,
                              size_t n_edges,
                              struct SmSizePair **out);

// # Safety
// `sp` must be null or a handle from `sm_sizepair_new` not yet freed.
void sm_sizepair_free(struct SmSizePair *sp);

// Number of vertices; 0 for a null handle.
//
// # Safety
// `sp` must be null or a live handle.
size_t sm_sizepair_len(const struct SmSizePair *sp);

// Evaluates the reduced size function at `(x, y)`, `x < y`.
//
// # Safety
// `sp` must be a live handle and `out` writable.
enum SmStatus sm_reduced_size_function(const struct SmSizePair *sp,
                                       double x,
                                       double y,
                                       size_t *out);

// Extracts the cornerpoint diagram of a size pair.
//
// # Safety
// `sp` must be a live handle and `out` writable.
enum SmStatus sm_diagram_extract(const struct SmSizePair *sp, struct SmDiagram **out);

// Builds a diagram from its point at infinity and `n_points` proper points
// `(xs[i], ys[i])` with multiplicities `mults[i] ≥ 1`.
//
// # Safety
// The three arrays must hold `n_points` entries and `out` must be writable.
enum SmStatus sm_diagram_new(double infinity_x,
                             const double *xs,
                             const double *ys,
                             const size_t *mults,
                             size_t n_points,
                             struct SmDiagram **out);

// Parses Diagram JSON.
//
// # Safety
// `json` must be a NUL-terminated string and `out` writable.
enum SmStatus sm_diagram_from_json(const char *json, struct SmDiagram **out);

// Serializes a diagram to JSON; null for a null handle. Release the result
// with `sm_string_free`.
//
// # Safety
// `d` must be null or a live handle.
char *sm_diagram_to_json(const struct SmDiagram *d);

// # Safety
// `s` must be null or a string returned by this library not yet freed.
void sm_string_free(char *s);

// # Safety
// `d` must be null or a live diagram handle.
void sm_diagram_free(struct SmDiagram *d);

// Abscissa of the point at infinity; NaN for a null handle.
//
// # Safety
// `d` must be null or a live handle.
double sm_diagram_infinity_x(const struct SmDiagram *d);

// Number of distinct proper points; 0 for a null handle.
//
// # Safety
// `d` must be null or a live handle.
size_t sm_diagram_point_count(const struct SmDiagram *d);

// The `index`-th proper point in `(x, y)` order.
//
// # Safety
// `d` must be a live handle; the out-pointers must be writable.
enum SmStatus sm_diagram_point(const struct SmDiagram *d,
                               size_t index,
                               double *x,
                               double *y,
                               size_t *mult);

// Matching distance between two diagrams.
//
// # Safety
// Both handles must be live and `out` writable.
enum SmStatus sm_matching_distance(const struct SmDiagram *d1,
                                   const struct SmDiagram *d2,
                                   double *out);

// Lower bound for the matching distance from jumps of the size functions.
//
// # Safety
// Both handles must be live and `out` writable.
enum SmStatus sm_earlier_bound(const struct SmDiagram *d1, const struct SmDiagram *d2, double *out);

// Minimum over graph isomorphisms of the largest value change; fails with
// `SM_STATUS_NON_ISOMORPHIC` or `SM_STATUS_SIZE_CAP`.
//
// # Safety
// Both handles must be live and `out` writable.
enum SmStatus sm_exact_graph_pseudo_distance(const struct SmSizePair *sp1,
                                             const struct SmSizePair *sp2,
                                             double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SIZEMATCH_H */

#ifndef BICLAW_H
#define BICLAW_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by all functions.
 */
typedef enum BiclawStatus {
  BICLAW_STATUS_OK = 0,
  BICLAW_STATUS_NULL_POINTER = 1,
  BICLAW_STATUS_INVALID_UTF8 = 2,
  BICLAW_STATUS_PARSE_ERROR = 3,
  BICLAW_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A pipeline stage failed; no cycle was produced.
   */
  BICLAW_STATUS_STAGE_FAILURE = 5,
  BICLAW_STATUS_TIMEOUT = 6,
  /**
   * A Rust panic was caught at the boundary.
   */
  BICLAW_STATUS_PANIC = 7,
} BiclawStatus;

/**
 * Opaque graph handle.
 */
typedef struct BiclawGraph BiclawGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph from `edge_count` pairs stored flat in `edges` as
 * `x0, y0, x1, y1, ...`. `edges` may be null when `edge_count` is 0.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values; `out` must be
 * writable.
 */
enum BiclawStatus biclaw_graph_new(size_t nx,
                                   size_t ny,
                                   const size_t *edges,
                                   size_t edge_count,
                                   struct BiclawGraph **out);

/**
 * Parses the `bip nx ny m` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum BiclawStatus biclaw_graph_parse(const char *text, struct BiclawGraph **out);

/**
 * Generates a graph from a spec such as `"complete_minus_sparse:n=20,removal=3,t=3,seed=1"`.
 *
 * # Safety
 * `spec` must be a NUL-terminated string; `out` must be writable.
 */
enum BiclawStatus biclaw_graph_generate(const char *spec, struct BiclawGraph **out);

/**
 * Releases a graph. Null is ignored.
 *
 * # Safety
 * `g` must be null or a handle not yet freed.
 */
void biclaw_graph_free(struct BiclawGraph *g);

/**
 * Size of the X side, or 0 for a null handle.
 *
 * # Safety
 * `g` must be null or a live handle.
 */
size_t biclaw_graph_nx(const struct BiclawGraph *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t biclaw_graph_ny(const struct BiclawGraph *g);

/**
 * # Safety
 * `g` must be null or a live handle.
 */
size_t biclaw_graph_edge_count(const struct BiclawGraph *g);

/**
 * Serializes to the text format.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum BiclawStatus biclaw_graph_to_text(const struct BiclawGraph *g, char **out);

/**
 * Writes whether `g` has no induced `S_{a,b}`. `budget_ms` of 0 means no limit.
 *
 * # Safety
 * `g` must be a live handle; `out_free` must be writable.
 */
enum BiclawStatus biclaw_is_biclaw_free(const struct BiclawGraph *g,
                                        size_t a,
                                        size_t b,
                                        uint64_t budget_ms,
                                        bool *out_free);

/**
 * Writes a witness record such as `"biclaw x=0 y=0 A=1 B=2"`, or null when
 * the graph has no induced `S_{a,b}`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum BiclawStatus biclaw_find_induced_biclaw(const struct BiclawGraph *g,
                                             size_t a,
                                             size_t b,
                                             uint64_t budget_ms,
                                             char **out);

/**
 * Runs the Hamiltonian pipeline and writes the cycle as
 * whitespace-separated tokens. Returns `BICLAW_STATUS_STAGE_FAILURE` if
 * no cycle was produced; the message names the failing stage.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum BiclawStatus biclaw_hamiltonian_cycle(const struct BiclawGraph *g, double epsilon, char **out);

/**
 * Checks a cycle given as tokens (`"X0 Y0 X1 Y1"`). On a rejected cycle
 * the status is still OK, `*out_valid` is false and `biclaw_last_error`
 * describes the violation.
 *
 * # Safety
 * `g` must be a live handle; `cycle` a NUL-terminated string; `out_valid`
 * writable.
 */
enum BiclawStatus biclaw_verify_cycle(const struct BiclawGraph *g,
                                      const char *cycle,
                                      bool *out_valid);

/**
 * Writes the diameter, or -1 when the graph is disconnected or empty.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum BiclawStatus biclaw_diameter(const struct BiclawGraph *g, int64_t *out);

/**
 * Writes the density report for one epsilon as a JSON object.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum BiclawStatus biclaw_density_report_json(const struct BiclawGraph *g,
                                             double epsilon,
                                             uint64_t seed,
                                             char **out);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void biclaw_string_free(char *s);

/**
 * Message for the most recent failure on this thread, or null. The
 * pointer stays valid until the next call into the library on this thread.
 */
const char *biclaw_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BICLAW_H */

/* C interface to er-lab: Erdős–Rényi component-counting lab. */

#ifndef ER_LAB_H
#define ER_LAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef struct ErLabGraph ErLabGraph;

/**
 * Status codes returned by every fallible call.
 */
typedef enum ErLabStatus {
  ER_LAB_STATUS_OK = 0,
  ER_LAB_STATUS_NULL_POINTER = 1,
  ER_LAB_STATUS_INVALID_ARGUMENT = 2,
  ER_LAB_STATUS_INVALID_CONFIG = 3,
  ER_LAB_STATUS_IO = 4,
  ER_LAB_STATUS_PARSE = 5,
  ER_LAB_STATUS_BUFFER_TOO_SMALL = 6,
  ER_LAB_STATUS_UTF8 = 7,
  ER_LAB_STATUS_INTERNAL = 8,
} ErLabStatus;

/**
 * Giant-size and probability constants of the large-C estimate.
 */
typedef struct ErLabTheorem2Constants {
  double giant_lower;
  double prob_lower;
  double prob_lower_proof;
  double small_sum_upper;
} ErLabTheorem2Constants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static string; do not free.
 */
const char *er_lab_version(void);

/**
 * Message of the most recent error on this thread, or null. Free the
 * returned string with `er_lab_string_free`.
 */
char *er_lab_last_error_message(void);

/**
 * Free a string allocated by this library. Null is a no-op.
 */
void er_lab_string_free(char *s);

/**
 * Sample G(n, p) with the given seed into a new graph handle.
 */
enum ErLabStatus er_lab_graph_sample(uint64_t n, double p, uint64_t seed, ErLabGraph **out);

/**
 * Sample G(n, C/n) with the given seed into a new graph handle.
 */
enum ErLabStatus er_lab_graph_sample_mean_degree(uint64_t n,
                                                 double c,
                                                 uint64_t seed,
                                                 ErLabGraph **out);

/**
 * Read an edge-list file ("n m" header, then "i j" lines) into a handle.
 */
enum ErLabStatus er_lab_graph_read_edge_list(const char *path, ErLabGraph **out);

/**
 * Write a graph to an edge-list file.
 */
enum ErLabStatus er_lab_graph_write_edge_list(const ErLabGraph *g, const char *path);

/**
 * Release a graph handle. Null is a no-op.
 */
void er_lab_graph_free(ErLabGraph *g);

enum ErLabStatus er_lab_graph_vertex_count(const ErLabGraph *g, uint64_t *out);

enum ErLabStatus er_lab_graph_edge_count(const ErLabGraph *g, uint64_t *out);

/**
 * Copy edges as 1-based (i, j) pairs flattened into `buf` (capacity in
 * u64 slots, so 2 * edge_count slots are needed). `written` receives the
 * number of slots filled.
 */
enum ErLabStatus er_lab_graph_copy_edges(const ErLabGraph *g,
                                         uint64_t *buf,
                                         size_t capacity,
                                         size_t *written);

/**
 * Number of connected components.
 */
enum ErLabStatus er_lab_graph_component_count(const ErLabGraph *g, uint64_t *out);

/**
 * Component sizes sorted descending, copied into `buf` (capacity in u64
 * slots). `written` receives the number of sizes.
 */
enum ErLabStatus er_lab_graph_component_sizes(const ErLabGraph *g,
                                              uint64_t *buf,
                                              size_t capacity,
                                              size_t *written);

/**
 * Size of the component containing the 1-based `vertex`.
 */
enum ErLabStatus er_lab_graph_component_size_containing(const ErLabGraph *g,
                                                        uint64_t vertex,
                                                        uint64_t *out);

/**
 * ln of the tree-counting bound on P(#C1 = r).
 */
enum ErLabStatus er_lab_tree_bound_log(uint64_t n, double p, uint64_t r, double *out);

/**
 * ln of the simplified chain bound for r >= 2.
 */
enum ErLabStatus er_lab_simplified_bound_log(uint64_t n, double c, uint64_t r, double *out);

/**
 * delta = C(1 - theta) - 1 - ln C.
 */
enum ErLabStatus er_lab_delta(double c, double theta, double *out);

/**
 * gamma = 1/(C(e^delta - 1)), requiring delta > 0.
 */
enum ErLabStatus er_lab_gamma(double c, double delta_val, double *out);

/**
 * delta_1 = -1 - ln C, requiring C < 1/e.
 */
enum ErLabStatus er_lab_delta1(double c, double *out);

/**
 * Smallest positive integer M with e^{-rate M log n} <= n^{-target}.
 */
enum ErLabStatus er_lab_min_m(double rate, uint64_t n, double target_exponent, uint64_t *out);

/**
 * Markov threshold gamma(1+alpha)n and failure bound 1/(1+alpha).
 */
enum ErLabStatus er_lab_markov_bound(double gamma_val,
                                     double alpha,
                                     uint64_t n,
                                     double *out_threshold,
                                     double *out_prob_bound);

/**
 * Probe for "C large enough": delta(C, default theta) >= C/4.
 */
bool er_lab_theorem2_c_passes(double c);

/**
 * Giant-size and probability constants of the large-C estimate.
 */
enum ErLabStatus er_lab_theorem2_constants(double c,
                                           uint64_t n,
                                           struct ErLabTheorem2Constants *out);

/**
 * Probability that G(k, p) is connected (float recursion, k <= 64).
 */
enum ErLabStatus er_lab_connectivity_probability(uint64_t k, double p, double *out);

/**
 * Exact distribution of the vertex-1 component size (float recursion,
 * 2 <= n <= 64). `out_probs` must hold n doubles; slot r-1 receives
 * P(#C1 = r).
 */
enum ErLabStatus er_lab_exact_distribution(uint64_t n,
                                           double p,
                                           double *out_probs,
                                           size_t capacity);

/**
 * Run a Monte Carlo experiment from a JSON config (same schema as the CLI).
 * On success `out_report_csv` and `out_trials_csv` receive newly allocated
 * CSV strings; free both with `er_lab_string_free`.
 */
enum ErLabStatus er_lab_experiment_run_json(const char *config_json,
                                            char **out_report_csv,
                                            char **out_trials_csv);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ER_LAB_H */

/* bfq - exact cellular BF theory and Poisson sigma model toolkit.
 *
 * C interface of the shared library. All functions returning bfq_status set a
 * thread-local error message retrievable via bfq_last_error() on failure.
 * Strings returned through out-parameters are heap-allocated and must be
 * released with bfq_string_free(). Verification failures are not API errors:
 * the returned report JSON carries a "pass" field; the status only signals
 * malformed input or internal problems.
 */
#ifndef BFQ_H
#define BFQ_H

#include <stddef.h>
#include <stdint.h>

#if defined _WIN32 || defined __CYGWIN__
#define BFQ_API __declspec(dllexport)
#else
#define BFQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bfq_status {
  BFQ_OK = 0,
  BFQ_ERR_PARSE = 1,
  BFQ_ERR_INVALID = 2,
  BFQ_ERR_NON_SQUARE_ZERO = 3,
  BFQ_ERR_DANGLING_FACE = 4,
  BFQ_ERR_BOUNDARY_MARKING = 5,
  BFQ_ERR_BASIS_MISMATCH = 6,
  BFQ_ERR_NOT_EXACT = 7,
  BFQ_ERR_DEGENERATE_OMEGA = 8,
  BFQ_ERR_UNSUPPORTED_EXPONENT = 9,
  BFQ_ERR_DEGENERATE_HESSIAN = 10,
  BFQ_ERR_INTERFACE_MISMATCH = 11,
  BFQ_ERR_NOT_COMPARABLE = 12,
  BFQ_ERR_INDEX_MISMATCH = 13,
  BFQ_ERR_BOUNDS = 14,
  BFQ_ERR_NON_CONVERGENT = 15,
  BFQ_ERR_ORDER_UNAVAILABLE = 16,
  BFQ_ERR_IDENTITY_FAILED = 17,
  BFQ_ERR_INTERNAL = 18
} bfq_status;

/* Opaque validated cell complex. */
typedef struct bfq_complex bfq_complex;

BFQ_API const char* bfq_version(void);
BFQ_API const char* bfq_last_error(void);
BFQ_API void bfq_string_free(char* s);

/* Parse and validate a complex from its JSON description. */
BFQ_API bfq_status bfq_complex_from_json(const char* json, bfq_complex** out);
BFQ_API void bfq_complex_free(bfq_complex* x);
BFQ_API int bfq_complex_dimension(const bfq_complex* x);
BFQ_API size_t bfq_complex_cell_count(const bfq_complex* x);

/* rel: "out", "in" or "none". Reports are JSON; see the project README. */
BFQ_API bfq_status bfq_cohomology(const bfq_complex* x, const char* rel, char** report);
BFQ_API bfq_status bfq_torsion(const bfq_complex* x, const char* rel, char** report);
BFQ_API bfq_status bfq_classical_check(const bfq_complex* x, char** report);
BFQ_API bfq_status bfq_partition(const bfq_complex* x, char** report);
BFQ_API bfq_status bfq_qme(const bfq_complex* x, char** report);

/* interface_json: {"identify": [["out-cell of a", "in-cell of b"], ...]} */
BFQ_API bfq_status bfq_glue(const bfq_complex* a, const bfq_complex* b, const char* interface_json,
                            int compare_direct, char** report);

/* realization_json: {"keep": ["cell", ...], "coarsen_to": ["cell", ...]?} */
BFQ_API bfq_status bfq_realize(const bfq_complex* x, const char* realization_json, char** report);

BFQ_API bfq_status bfq_psm_graphs(int in_vertices, int out_vertices, int internal_vertices,
                                  int max_valence, int max_leaves, const char* emit, char** report);

/* graph_json: {"internal": q, "edges": [[src, "g0"|"g1"|vertex], ...]}.
 * tolerance < 0 disables the convergence gate. threads = 0 uses the hardware
 * count; the estimate itself depends only on the seed. */
BFQ_API bfq_status bfq_psm_weight(const char* graph_json, uint64_t samples, uint64_t seed,
                                  int threads, double tolerance, char** report);

/* pi_json: {"dim": m, "terms": [{"alpha": a, "beta": b, "monomial": [e1..em],
 * "coeff": "p/q"}, ...]} */
BFQ_API bfq_status bfq_psm_star(const char* pi_json, long long order, int check_assoc,
                                char** report);

BFQ_API bfq_status bfq_selftest(uint64_t seed, char** report);

#ifdef __cplusplus
}
#endif

#endif /* BFQ_H */

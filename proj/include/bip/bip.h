/* bip - bilinear inverse problem identifiability library, C API.
 *
 * All functions return a bip_status; outputs go through pointers. A nonzero
 * status leaves outputs untouched and records a message retrievable with
 * bip_last_error() (thread-local). Objects are opaque handles released with
 * the matching _destroy function. Matrices cross this boundary in row-major
 * order.
 */
#ifndef BIP_BIP_H
#define BIP_BIP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bip_status {
    BIP_OK = 0,
    BIP_ERR_INVALID_ARGUMENT = 1,
    BIP_ERR_DIMENSION_MISMATCH = 2,
    BIP_ERR_DOMAIN = 3,     /* math precondition failed (rank, feasibility, ...) */
    BIP_ERR_BUDGET = 4,     /* size guard exceeded */
    BIP_ERR_IO = 5,         /* file could not be read or written */
    BIP_ERR_PARSE = 6,      /* malformed config or data file */
    BIP_ERR_INTERNAL = 7
} bip_status;

const char* bip_status_name(bip_status status);

/* Message for the most recent failing call on this thread; empty if none. */
const char* bip_last_error(void);

/* ------------------------------------------------------------------ */
/* Lifted operators                                                    */

typedef struct bip_operator bip_operator;

bip_status bip_operator_create_convolution(int m, int n, bip_operator** out);
/* basis: q stacked m x n matrices, row-major, length q*m*n. */
bip_status bip_operator_create_from_basis(const double* basis, int q, int m, int n,
                                          bip_operator** out);
void bip_operator_destroy(bip_operator* op);

bip_status bip_operator_dims(const bip_operator* op, int* m, int* n, int* q);
/* z_j = <W, S_j>; w has length m*n (row-major), z has length q. */
bip_status bip_operator_apply(const bip_operator* op, const double* w, double* z);
bip_status bip_operator_apply_bilinear(const bip_operator* op, const double* x,
                                       const double* y, double* z);
/* w_out = sum_j z_j S_j, length m*n row-major. */
bip_status bip_operator_adjoint(const bip_operator* op, const double* z, double* w_out);
/* a: m x p, b: n x r (row-major); new operator acts on p x r matrices. */
bip_status bip_operator_transform(const bip_operator* op, const double* a, int p,
                                  const double* b, int r, bip_operator** out);

/* q = m+n-1, kernel_dim = mn-(m+n-1), dof = m+n-3 (dof = -1 when m or n < 2). */
bip_status bip_conv_lift_info(int m, int n, int* q, int* kernel_dim, int* dof);

/* ------------------------------------------------------------------ */
/* Null-space families and instance checks                             */

typedef struct bip_family bip_family;

bip_status bip_family_create_empty(int m, int n, bip_family** out);
bip_status bip_family_create_biorthogonal(int m, int n, bip_family** out);
bip_status bip_family_create_bernoulli(int m, int n, double tau, bip_family** out);
bip_status bip_family_create_convolution(int m, int n, bip_family** out);
void bip_family_destroy(bip_family* family);

bip_status bip_family_is_finite(const bip_family* family, int* finite);
/* Finite families only. */
bip_status bip_family_cardinality(const bip_family* family, long long* count);
/* Parametric families only. */
bip_status bip_family_dof(const bip_family* family, int* dof);

typedef enum bip_verdict {
    BIP_VERDICT_IDENTIFIABLE = 0,
    BIP_VERDICT_SUFFICIENT_CONDITION_FAILED = 1,
    BIP_VERDICT_UNKNOWN = 2
} bip_verdict;

/* Exhaustive sufficient-condition check of x y^T against a finite family.
 * witness_i/witness_j (optional) receive the first failing part. */
bip_status bip_check_instance(const bip_family* family, const double* x, int m,
                              const double* y, int n, double delta_test,
                              bip_verdict* verdict, int* witness_i, int* witness_j);

/* Solver-based event-E2 probe of x y^T (normalized internally) against the
 * lifted convolution operator: SUFFICIENT_CONDITION_FAILED when a nearby
 * numerically rank-two kernel point is found, UNKNOWN otherwise. */
bip_status bip_check_instance_solver(int m, int n, const double* x, const double* y,
                                     double mu, bip_verdict* verdict);

/* ------------------------------------------------------------------ */
/* Closed-form bounds                                                  */

bip_status bip_lemma1_bound(int m, double delta, double* out);
bip_status bip_lemma2_bound(double r, double delta, double* out);
bip_status bip_lemma3_gaussian_bound(int m, double delta, double* out);
bip_status bip_lemma4_bernoulli_bound(int m, double delta, double* out);
bip_status bip_theorem3_prob(double f, int m, int n, double delta, double* out);
bip_status bip_corollary3_prob(double f, double r_x, double r_y, double delta, double* out);
bip_status bip_delta_from_prime(double delta_prime, double epsilon, double* out);
bip_status bip_theorem4_prob(double p, int m, int n, double epsilon, double delta_prime,
                             double theta_constant, double* out);
bip_status bip_theorem5_prob(double p, int m, int n, double epsilon, double delta_prime,
                             double theta_constant, double* out);
bip_status bip_covering_number_bounds(int n, double epsilon, double* lower, double* upper);
/* Writes CSV columns n,failure_bound for n in [n_min, n_max]. */
bip_status bip_figure1_curve_csv(int m, int n_min, int n_max, double epsilon, double delta,
                                 double theta_constant, const char* csv_path);

/* ------------------------------------------------------------------ */
/* Experiments                                                         */

/* Runs the JSON experiment config at config_path and writes the failure
 * curve CSV to csv_path. When slopes_out is non-null it receives a
 * newline-separated block of per-m slope records, truncated to
 * slopes_capacity bytes (always NUL-terminated). */
bip_status bip_run_experiment_file(const char* config_path, const char* csv_path,
                                   char* slopes_out, size_t slopes_capacity);

/* Per-m slope fit of a curve CSV produced by bip_run_experiment_file.
 * mode is "loglog" or "semilog". */
bip_status bip_fit_csv(const char* csv_path, const char* mode, int m, double* slope,
                       double* intercept, double* r_squared, int* cells_used,
                       int* cells_excluded);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BIP_BIP_H */

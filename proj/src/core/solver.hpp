#pragma once

#include "core/lifting.hpp"
#include "core/rank_one.hpp"

#include <vector>

namespace bip {

/// Orthonormal basis (trace inner product) for ker S = {W : S(W) = 0},
/// stored flattened with column-major vec convention: flat is (m*n) x k.
struct NullSpaceBasis {
    int m = 0;
    int n = 0;
    Matrix flat;

    int dim() const { return static_cast<int>(flat.cols()); }
    /// Basis as a list of m x n matrices.
    std::vector<Matrix> matrices() const;
};

/// Dense kernel computation; rejects problems with m*n > 10^4.
NullSpaceBasis kernel_basis(const LiftedOperator& op);

Matrix project_onto_kernel(const NullSpaceBasis& basis, const Matrix& w);
double kernel_distance(const NullSpaceBasis& basis, const Matrix& w);

struct SolverConfig {
    double mu = 0.8;
    /// Relative weight smoothing: gamma = max(weight_smoothing * sigma1(X0), 1e-8).
    double weight_smoothing = 1e-2;
    int outer_iters = 20;
    int inner_iters = 500;
    double primal_tol = 1e-7;
    double dual_tol = 1e-7;
    double rank_rel_threshold = 1e-3;
};

struct SolverResult {
    Matrix x;
    std::vector<double> singular_values;  // descending
    int numerical_rank = 0;
    bool converged = false;
    double kernel_residual_inf = 0.0;  // ||S(X)||_inf
    double ball_excess = 0.0;          // max(0, ||X - M||_F - mu)
    double gamma = 0.0;                // effective weight smoothing used
    int outer_iterations = 0;
    int inner_iterations = 0;
};

/// Approximate solution of: minimize rank(X) subject to ||X - M||_F <= mu and
/// S(X) = 0, by the reweighted nuclear norm heuristic. Each outer pass
/// refreshes weights w_i = 1 / (sigma_i^{prev} + gamma) and solves the
/// weighted problem by operator splitting, alternating weighted singular
/// value shrinkage with the exact projection onto ker S intersected with the
/// Frobenius ball (the ball center is first projected into the kernel, which
/// makes the composite projection exact in closed form).
///
/// Infeasible inputs (dist(M, ker S) > mu) are rejected up front with a
/// std::domain_error carrying the computed distance.
SolverResult solve_min_rank_near(const LiftedOperator& op, const NullSpaceBasis& basis,
                                 const Matrix& m_target, const SolverConfig& cfg);
SolverResult solve_min_rank_near(const LiftedOperator& op, const Matrix& m_target,
                                 const SolverConfig& cfg);

/// Event E2 for the unit-Frobenius representative u v^T of the instance:
/// true iff the heuristic converges to a nonzero solution of numerical rank
/// exactly two. An infeasible ball (no kernel point within mu at all) means
/// the event cannot occur and yields false.
bool detect_event_E2(const LiftedOperator& op, const NullSpaceBasis& basis,
                     const RankOneInstance& inst, const SolverConfig& cfg);

}  // namespace bip

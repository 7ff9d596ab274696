#include "core/solver.hpp"

#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bip {

namespace {

Vector vec(const Matrix& w) { return Eigen::Map<const Vector>(w.data(), w.size()); }

Matrix unvec(const Vector& v, int m, int n) {
    return Eigen::Map<const Matrix>(v.data(), m, n);
}

struct Svd {
    Matrix u;
    Vector sv;
    Matrix v;
};

Svd thin_svd(const Matrix& a) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// Shrink singular values by per-index thresholds and rebuild.
Matrix weighted_shrink(const Svd& f, const Vector& thresholds) {
    Vector shrunk = (f.sv - thresholds).cwiseMax(0.0);
    return f.u * shrunk.asDiagonal() * f.v.transpose();
}

int numerical_rank_of(const Vector& sv, double rel_threshold, double scale_floor) {
    if (sv.size() == 0 || sv(0) <= scale_floor) return 0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) >= rel_threshold * sv(0)) ++rank;
    return rank;
}

}  // namespace

std::vector<Matrix> NullSpaceBasis::matrices() const {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(dim()));
    for (int k = 0; k < dim(); ++k) out.push_back(unvec(flat.col(k), m, n));
    return out;
}

NullSpaceBasis kernel_basis(const LiftedOperator& op) {
    const long mn = static_cast<long>(op.m()) * op.n();
    if (mn > 10'000) throw std::length_error("kernel_basis: m*n exceeds the dense factorization budget");
    const Matrix flat_op = op.flattened();
    Eigen::FullPivLU<Matrix> lu(flat_op);
    const Matrix raw_kernel = lu.kernel();  // mn x k, or a zero column when k = 0

    NullSpaceBasis basis;
    basis.m = op.m();
    basis.n = op.n();
    if (lu.dimensionOfKernel() == 0) {
        basis.flat = Matrix::Zero(mn, 0);
        return basis;
    }
    Eigen::HouseholderQR<Matrix> qr(raw_kernel);
    basis.flat = qr.householderQ() * Matrix::Identity(mn, raw_kernel.cols());
    return basis;
}

Matrix project_onto_kernel(const NullSpaceBasis& basis, const Matrix& w) {
    if (w.rows() != basis.m || w.cols() != basis.n)
        throw std::invalid_argument("project_onto_kernel: shape mismatch");
    if (basis.dim() == 0) return Matrix::Zero(basis.m, basis.n);
    const Vector coeffs = basis.flat.transpose() * vec(w);
    return unvec(basis.flat * coeffs, basis.m, basis.n);
}

double kernel_distance(const NullSpaceBasis& basis, const Matrix& w) {
    return (w - project_onto_kernel(basis, w)).norm();
}

SolverResult solve_min_rank_near(const LiftedOperator& op, const NullSpaceBasis& basis,
                                 const Matrix& m_target, const SolverConfig& cfg) {
    if (m_target.rows() != op.m() || m_target.cols() != op.n())
        throw std::invalid_argument("solve_min_rank_near: target shape mismatch");
    const double m_norm = m_target.norm();
    if (m_norm == 0.0) throw std::invalid_argument("solve_min_rank_near: target matrix is zero");
    if (!(cfg.mu > 0.0)) throw std::invalid_argument("solve_min_rank_near: mu must be positive");
    if (!(cfg.rank_rel_threshold > 0.0 && cfg.rank_rel_threshold < 1.0))
        throw std::invalid_argument("solve_min_rank_near: rank_rel_threshold must be in (0, 1)");

    SolverResult result;
    const double scale_floor = 1e-12 * std::max(1.0, m_norm);

    // X = 0 lies in every kernel; when it is also inside the ball it is the
    // exact optimum.
    if (m_norm <= cfg.mu) {
        result.x = Matrix::Zero(op.m(), op.n());
        result.singular_values.assign(static_cast<std::size_t>(std::min(op.m(), op.n())), 0.0);
        result.numerical_rank = 0;
        result.converged = true;
        result.kernel_residual_inf = 0.0;
        result.ball_excess = 0.0;
        return result;
    }

    const Vector m_vec = vec(m_target);
    const Vector center = basis.dim() == 0 ? Vector(Vector::Zero(m_vec.size()))
                                           : Vector(basis.flat * (basis.flat.transpose() * m_vec));
    const double dist = (m_vec - center).norm();
    if (dist > cfg.mu) {
        std::ostringstream msg;
        msg << "solve_min_rank_near: infeasible, dist(M, ker S) = " << dist << " exceeds mu = " << cfg.mu;
        throw std::domain_error(msg.str());
    }
    const double ball_radius = std::sqrt(std::max(cfg.mu * cfg.mu - dist * dist, 0.0));

    // Exact projection onto {S(X) = 0} intersected with ||X - M||_F <= mu:
    // project into the kernel, then radially toward the projected center.
    auto project_feasible = [&](const Vector& w) {
        Vector wp = basis.flat * (basis.flat.transpose() * w);
        Vector dev = wp - center;
        const double r = dev.norm();
        if (r > ball_radius) {
            if (ball_radius == 0.0) return center;
            wp = center + (ball_radius / r) * dev;
        }
        return wp;
    };

    Vector z = center;  // feasible start: projection of M onto the feasible set
    Vector u_dual = Vector::Zero(z.size());
    Matrix z_mat = unvec(z, op.m(), op.n());
    Vector sigma_prev = thin_svd(z_mat).sv;
    const double sigma1_initial = sigma_prev.size() > 0 ? sigma_prev(0) : 0.0;
    result.gamma = std::max(cfg.weight_smoothing * sigma1_initial, 1e-8);
    double rho = std::clamp(50.0 / std::max(sigma1_initial, 1e-12), 1.0, 1e6);

    bool monotone_ok = true;
    bool inner_converged = false;
    bool outer_stable = false;
    double prev_weighted_obj = 0.0;

    for (int outer = 0; outer < cfg.outer_iters; ++outer) {
        result.outer_iterations = outer + 1;
        Vector weights(sigma_prev.size());
        for (Eigen::Index i = 0; i < weights.size(); ++i) weights(i) = 1.0 / (sigma_prev(i) + result.gamma);
        weights /= weights(0);  // scale-free objective, w_1 = 1
        prev_weighted_obj = weights.dot(sigma_prev);

        inner_converged = false;
        for (int inner = 0; inner < cfg.inner_iters; ++inner) {
            ++result.inner_iterations;
            const Matrix shrink_input = unvec(z - u_dual, op.m(), op.n());
            const Vector x = vec(weighted_shrink(thin_svd(shrink_input), weights / rho));
            const Vector z_old = z;
            z = project_feasible(x + u_dual);
            u_dual += x - z;
            const double primal = (x - z).norm();
            const double dual = rho * (z - z_old).norm();
            const double scale = std::max(1.0, z.norm());
            if (primal <= cfg.primal_tol * scale && dual <= cfg.dual_tol * scale) {
                inner_converged = true;
                break;
            }
        }

        z_mat = unvec(z, op.m(), op.n());
        const Vector sigma_now = thin_svd(z_mat).sv;
        const double new_obj = weights.dot(sigma_now);
        if (new_obj > prev_weighted_obj * (1.0 + 1e-6) + 1e-12) monotone_ok = false;
        const double sigma_change = (sigma_now - sigma_prev).cwiseAbs().maxCoeff();
        sigma_prev = sigma_now;
        // Reweighting has settled once the spectrum moves at the inner
        // tolerance scale only.
        if (sigma_change <= 1e-9 * std::max(sigma_now(0), 1e-12)) {
            outer_stable = true;
            break;
        }
    }

    result.x = z_mat;
    result.singular_values.assign(sigma_prev.data(), sigma_prev.data() + sigma_prev.size());
    result.numerical_rank = numerical_rank_of(sigma_prev, cfg.rank_rel_threshold, scale_floor);
    result.kernel_residual_inf = op.apply(result.x).cwiseAbs().maxCoeff();
    result.ball_excess = std::max(0.0, (result.x - m_target).norm() - cfg.mu);
    result.converged = inner_converged && outer_stable && monotone_ok &&
                       result.kernel_residual_inf <= 1e-8 &&
                       (result.x - m_target).norm() <= cfg.mu * (1.0 + 1e-6);
    return result;
}

SolverResult solve_min_rank_near(const LiftedOperator& op, const Matrix& m_target,
                                 const SolverConfig& cfg) {
    return solve_min_rank_near(op, kernel_basis(op), m_target, cfg);
}

bool detect_event_E2(const LiftedOperator& op, const NullSpaceBasis& basis,
                     const RankOneInstance& inst, const SolverConfig& cfg) {
    const Matrix m_unit = inst.u * inst.v.transpose();  // ||M||_F = 1 exactly
    if (kernel_distance(basis, m_unit) > cfg.mu) return false;
    const SolverResult result = solve_min_rank_near(op, basis, m_unit, cfg);
    return result.converged && result.numerical_rank == 2 && result.x.norm() > 0.0;
}

}  // namespace bip

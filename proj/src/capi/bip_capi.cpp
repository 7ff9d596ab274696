#include "bip/bip.h"

#include "core/bounds.hpp"
#include "core/experiments.hpp"
#include "core/identifiability.hpp"
#include "core/null_space.hpp"
#include "core/solver.hpp"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

using bip::Matrix;
using bip::Vector;

struct bip_operator {
    bip::LiftedOperator op;
};

struct bip_family {
    bip::NullSpaceFamily family;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

/// Maps core exceptions onto status codes. Budget guards throw
/// std::length_error, math preconditions std::domain_error, bad inputs
/// std::invalid_argument, I/O problems std::runtime_error.
template <typename Fn>
bip_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return BIP_OK;
    } catch (const std::length_error& err) {
        set_error(err.what());
        return BIP_ERR_BUDGET;
    } catch (const std::domain_error& err) {
        set_error(err.what());
        return BIP_ERR_DOMAIN;
    } catch (const std::invalid_argument& err) {
        set_error(err.what());
        const std::string what = err.what();
        return what.rfind("config:", 0) == 0 ? BIP_ERR_PARSE : BIP_ERR_INVALID_ARGUMENT;
    } catch (const std::logic_error& err) {
        set_error(err.what());
        return BIP_ERR_INVALID_ARGUMENT;
    } catch (const std::runtime_error& err) {
        set_error(err.what());
        return BIP_ERR_IO;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return BIP_ERR_INTERNAL;
    } catch (const std::exception& err) {
        set_error(err.what());
        return BIP_ERR_INTERNAL;
    }
}

bip_status require(bool condition, const char* message) {
    if (condition) return BIP_OK;
    set_error(message);
    return BIP_ERR_INVALID_ARGUMENT;
}

Matrix matrix_from_row_major(const double* data, int rows, int cols) {
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        data, rows, cols);
}

void matrix_to_row_major(const Matrix& m, double* out) {
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        out, m.rows(), m.cols()) = m;
}

}  // namespace

extern "C" {

const char* bip_status_name(bip_status status) {
    switch (status) {
        case BIP_OK: return "ok";
        case BIP_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case BIP_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case BIP_ERR_DOMAIN: return "domain_error";
        case BIP_ERR_BUDGET: return "budget_exceeded";
        case BIP_ERR_IO: return "io_error";
        case BIP_ERR_PARSE: return "parse_error";
        case BIP_ERR_INTERNAL: return "internal_error";
    }
    return "unknown";
}

const char* bip_last_error(void) { return g_last_error.c_str(); }

bip_status bip_operator_create_convolution(int m, int n, bip_operator** out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = new bip_operator{bip::LiftedOperator::linear_convolution(m, n)}; });
}

bip_status bip_operator_create_from_basis(const double* basis, int q, int m, int n,
                                          bip_operator** out) {
    if (bip_status st = require(out && basis, "null pointer argument"); st != BIP_OK) return st;
    if (bip_status st = require(q >= 1 && m >= 1 && n >= 1, "q, m, n must be positive"); st != BIP_OK)
        return st;
    return guarded([&] {
        std::vector<Matrix> list;
        list.reserve(static_cast<std::size_t>(q));
        for (int k = 0; k < q; ++k)
            list.push_back(matrix_from_row_major(basis + static_cast<std::size_t>(k) * m * n, m, n));
        *out = new bip_operator{bip::LiftedOperator::from_matrices(list)};
    });
}

void bip_operator_destroy(bip_operator* op) { delete op; }

bip_status bip_operator_dims(const bip_operator* op, int* m, int* n, int* q) {
    if (bip_status st = require(op != nullptr, "operator handle is null"); st != BIP_OK) return st;
    if (m) *m = op->op.m();
    if (n) *n = op->op.n();
    if (q) *q = op->op.q();
    return BIP_OK;
}

bip_status bip_operator_apply(const bip_operator* op, const double* w, double* z) {
    if (bip_status st = require(op && w && z, "null pointer argument"); st != BIP_OK) return st;
    return guarded([&] {
        const Vector result = op->op.apply(matrix_from_row_major(w, op->op.m(), op->op.n()));
        std::memcpy(z, result.data(), sizeof(double) * static_cast<std::size_t>(result.size()));
    });
}

bip_status bip_operator_apply_bilinear(const bip_operator* op, const double* x, const double* y,
                                       double* z) {
    if (bip_status st = require(op && x && y && z, "null pointer argument"); st != BIP_OK) return st;
    return guarded([&] {
        const Vector xv = Eigen::Map<const Vector>(x, op->op.m());
        const Vector yv = Eigen::Map<const Vector>(y, op->op.n());
        const Vector result = op->op.apply_bilinear(xv, yv);
        std::memcpy(z, result.data(), sizeof(double) * static_cast<std::size_t>(result.size()));
    });
}

bip_status bip_operator_adjoint(const bip_operator* op, const double* z, double* w_out) {
    if (bip_status st = require(op && z && w_out, "null pointer argument"); st != BIP_OK) return st;
    return guarded([&] {
        const Vector zv = Eigen::Map<const Vector>(z, op->op.q());
        matrix_to_row_major(op->op.adjoint(zv), w_out);
    });
}

bip_status bip_operator_transform(const bip_operator* op, const double* a, int p, const double* b,
                                  int r, bip_operator** out) {
    if (bip_status st = require(op && a && b && out, "null pointer argument"); st != BIP_OK) return st;
    if (bip_status st = require(p >= 1 && r >= 1, "p and r must be positive"); st != BIP_OK) return st;
    return guarded([&] {
        const Matrix am = matrix_from_row_major(a, op->op.m(), p);
        const Matrix bm = matrix_from_row_major(b, op->op.n(), r);
        *out = new bip_operator{op->op.transform_with_dictionaries(am, bm)};
    });
}

bip_status bip_conv_lift_info(int m, int n, int* q, int* kernel_dim, int* dof) {
    if (bip_status st = require(m >= 1 && n >= 1, "m and n must be positive"); st != BIP_OK) return st;
    if (q) *q = m + n - 1;
    if (kernel_dim) *kernel_dim = m * n - (m + n - 1);
    if (dof) *dof = (m >= 2 && n >= 2) ? m + n - 3 : -1;
    return BIP_OK;
}

bip_status bip_family_create_empty(int m, int n, bip_family** out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = new bip_family{bip::NullSpaceFamily::empty(m, n)}; });
}

bip_status bip_family_create_biorthogonal(int m, int n, bip_family** out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = new bip_family{bip::NullSpaceFamily::biorthogonal(m, n)}; });
}

bip_status bip_family_create_bernoulli(int m, int n, double tau, bip_family** out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = new bip_family{bip::NullSpaceFamily::bernoulli(m, n, tau)}; });
}

bip_status bip_family_create_convolution(int m, int n, bip_family** out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = new bip_family{bip::NullSpaceFamily::convolution(m, n)}; });
}

void bip_family_destroy(bip_family* family) { delete family; }

bip_status bip_family_is_finite(const bip_family* family, int* finite) {
    if (bip_status st = require(family && finite, "null pointer argument"); st != BIP_OK) return st;
    *finite = family->family.is_finite() ? 1 : 0;
    return BIP_OK;
}

bip_status bip_family_cardinality(const bip_family* family, long long* count) {
    if (bip_status st = require(family && count, "null pointer argument"); st != BIP_OK) return st;
    return guarded([&] { *count = static_cast<long long>(family->family.cardinality()); });
}

bip_status bip_family_dof(const bip_family* family, int* dof) {
    if (bip_status st = require(family && dof, "null pointer argument"); st != BIP_OK) return st;
    return guarded([&] { *dof = family->family.dof(); });
}

bip_status bip_check_instance(const bip_family* family, const double* x, int m, const double* y,
                              int n, double delta_test, bip_verdict* verdict, int* witness_i,
                              int* witness_j) {
    if (bip_status st = require(family && x && y && verdict, "null pointer argument"); st != BIP_OK)
        return st;
    if (family->family.m() != m || family->family.n() != n) {
        set_error("signal dimensions do not match the family");
        return BIP_ERR_DIMENSION_MISMATCH;
    }
    return guarded([&] {
        const Vector xv = Eigen::Map<const Vector>(x, m);
        const Vector yv = Eigen::Map<const Vector>(y, n);
        const bip::RankOneInstance inst = bip::RankOneInstance::from_pair(xv, yv);
        const auto witness = bip::detect_ambiguity_exhaustive(inst, family->family, delta_test);
        if (witness) {
            *verdict = BIP_VERDICT_SUFFICIENT_CONDITION_FAILED;
            if (witness_i) *witness_i = witness->i;
            if (witness_j) *witness_j = witness->j;
        } else {
            *verdict = BIP_VERDICT_IDENTIFIABLE;
        }
    });
}

bip_status bip_check_instance_solver(int m, int n, const double* x, const double* y, double mu,
                                     bip_verdict* verdict) {
    if (bip_status st = require(x && y && verdict, "null pointer argument"); st != BIP_OK) return st;
    return guarded([&] {
        const bip::LiftedOperator op = bip::LiftedOperator::linear_convolution(m, n);
        const bip::NullSpaceBasis basis = bip::kernel_basis(op);
        const Vector xv = Eigen::Map<const Vector>(x, m);
        const Vector yv = Eigen::Map<const Vector>(y, n);
        const bip::RankOneInstance inst = bip::RankOneInstance::from_pair(xv, yv);
        bip::SolverConfig cfg;
        cfg.mu = mu;
        *verdict = bip::detect_event_E2(op, basis, inst, cfg)
                       ? BIP_VERDICT_SUFFICIENT_CONDITION_FAILED
                       : BIP_VERDICT_UNKNOWN;
    });
}

bip_status bip_lemma1_bound(int m, double delta, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::lemma1_bound(m, delta); });
}

bip_status bip_lemma2_bound(double r, double delta, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::lemma2_bound(r, delta); });
}

bip_status bip_lemma3_gaussian_bound(int m, double delta, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::lemma3_gaussian_bound(m, delta); });
}

bip_status bip_lemma4_bernoulli_bound(int m, double delta, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::lemma4_bernoulli_bound(m, delta); });
}

bip_status bip_theorem3_prob(double f, int m, int n, double delta, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::theorem3_prob(f, m, n, delta); });
}

bip_status bip_corollary3_prob(double f, double r_x, double r_y, double delta, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::corollary3_prob(f, r_x, r_y, delta); });
}

bip_status bip_delta_from_prime(double delta_prime, double epsilon, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::delta_from_prime(delta_prime, epsilon); });
}

bip_status bip_theorem4_prob(double p, int m, int n, double epsilon, double delta_prime,
                             double theta_constant, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::theorem4_prob(p, m, n, epsilon, delta_prime, theta_constant); });
}

bip_status bip_theorem5_prob(double p, int m, int n, double epsilon, double delta_prime,
                             double theta_constant, double* out) {
    if (bip_status st = require(out != nullptr, "out pointer is null"); st != BIP_OK) return st;
    return guarded([&] { *out = bip::theorem5_prob(p, m, n, epsilon, delta_prime, theta_constant); });
}

bip_status bip_covering_number_bounds(int n, double epsilon, double* lower, double* upper) {
    if (bip_status st = require(lower && upper, "null pointer argument"); st != BIP_OK) return st;
    return guarded([&] {
        const auto [lo, hi] = bip::covering_number_bounds(n, epsilon);
        *lower = lo;
        *upper = hi;
    });
}

bip_status bip_figure1_curve_csv(int m, int n_min, int n_max, double epsilon, double delta,
                                 double theta_constant, const char* csv_path) {
    if (bip_status st = require(csv_path != nullptr, "csv_path is null"); st != BIP_OK) return st;
    if (bip_status st = require(n_min <= n_max, "n_min must not exceed n_max"); st != BIP_OK) return st;
    return guarded([&] {
        std::vector<int> n_range;
        for (int n = n_min; n <= n_max; ++n) n_range.push_back(n);
        const auto curve = bip::figure1_curve(m, n_range, epsilon, delta, theta_constant);
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw std::runtime_error(std::string("cannot open ") + csv_path);
        out << "n,failure_bound\n";
        char buf[48];
        for (const auto& [n, bound] : curve) {
            std::snprintf(buf, sizeof(buf), "%.12g", bound);
            out << n << ',' << buf << '\n';
        }
        if (!out) throw std::runtime_error(std::string("write failed for ") + csv_path);
    });
}

bip_status bip_run_experiment_file(const char* config_path, const char* csv_path, char* slopes_out,
                                   size_t slopes_capacity) {
    if (bip_status st = require(config_path && csv_path, "null path argument"); st != BIP_OK) return st;
    return guarded([&] {
        const bip::ExperimentConfig cfg = bip::load_config_file(config_path);
        const bip::FailureCurve curve = bip::run_experiment(cfg);
        bip::write_csv(curve, csv_path);
        if (slopes_out && slopes_capacity > 0) {
            std::string block;
            for (int m : curve.distinct_m()) {
                try {
                    const bip::SlopeFit fit =
                        bip::fit_slope(curve.cells_for_m(m), bip::default_fit_mode(cfg.example));
                    block += bip::slope_record(cfg.example, m, fit);
                } catch (const std::domain_error& err) {
                    block += "slope example=" + std::string(1, bip::example_letter(cfg.example)) +
                             " m=" + std::to_string(m) + " error=\"" + err.what() + "\"";
                }
                block += '\n';
            }
            std::strncpy(slopes_out, block.c_str(), slopes_capacity - 1);
            slopes_out[slopes_capacity - 1] = '\0';
        }
    });
}

bip_status bip_fit_csv(const char* csv_path, const char* mode, int m, double* slope,
                       double* intercept, double* r_squared, int* cells_used,
                       int* cells_excluded) {
    if (bip_status st = require(csv_path && mode && slope, "null pointer argument"); st != BIP_OK)
        return st;
    bip::FitMode fit_mode;
    if (std::strcmp(mode, "loglog") == 0)
        fit_mode = bip::FitMode::LogLog;
    else if (std::strcmp(mode, "semilog") == 0)
        fit_mode = bip::FitMode::Semilog;
    else {
        set_error("mode must be \"loglog\" or \"semilog\"");
        return BIP_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const bip::FailureCurve curve = bip::read_csv(csv_path);
        const auto cells = curve.cells_for_m(m);
        if (cells.empty()) throw std::domain_error("fit: no cells with the requested m");
        const bip::SlopeFit fit = bip::fit_slope(cells, fit_mode);
        *slope = fit.slope;
        if (intercept) *intercept = fit.intercept;
        if (r_squared) *r_squared = fit.r_squared;
        if (cells_used) *cells_used = fit.cells_used;
        if (cells_excluded) *cells_excluded = fit.cells_excluded;
    });
}

}  // extern "C"

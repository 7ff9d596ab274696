#include "core/ensembles.hpp"

#include <cmath>
#include <stdexcept>

namespace bip {

EnsembleSpec EnsembleSpec::biorthogonal(int dim, MagnitudeLaw law, std::optional<Matrix> basis) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::BiorthogonalUniform;
    spec.dim = dim;
    spec.magnitude_law = law;
    spec.basis = std::move(basis);
    spec.validate();
    return spec;
}

EnsembleSpec EnsembleSpec::gaussian(int dim) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::GaussianIid;
    spec.dim = dim;
    spec.validate();
    return spec;
}

EnsembleSpec EnsembleSpec::bernoulli(int dim) {
    EnsembleSpec spec;
    spec.kind = EnsembleKind::BernoulliIid;
    spec.dim = dim;
    spec.validate();
    return spec;
}

void EnsembleSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("EnsembleSpec: dim must be positive");
    if (basis) {
        if (kind != EnsembleKind::BiorthogonalUniform)
            throw std::invalid_argument("EnsembleSpec: basis only applies to the bi-orthogonal kind");
        if (basis->rows() != dim || basis->cols() != dim)
            throw std::invalid_argument("EnsembleSpec: basis must be dim x dim");
        const double dev = (basis->transpose() * (*basis) - Matrix::Identity(dim, dim)).norm();
        if (dev > 1e-10) throw std::invalid_argument("EnsembleSpec: basis is not orthonormal");
    }
}

namespace {

double draw_magnitude(const EnsembleSpec& spec, Philox& rng) {
    const double dim = static_cast<double>(spec.dim);
    switch (spec.magnitude_law) {
        case MagnitudeLaw::ConstantSqrtDim:
            return std::sqrt(dim);
        case MagnitudeLaw::TwoPointThirds:
            return rng.uniform() < 0.5 ? std::sqrt(dim / 3.0) : std::sqrt(5.0 * dim / 3.0);
    }
    throw std::logic_error("draw_magnitude: unknown law");
}

}  // namespace

Vector sample(const EnsembleSpec& spec, Philox& rng) {
    spec.validate();
    switch (spec.kind) {
        case EnsembleKind::BiorthogonalUniform: {
            const int index = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(spec.dim)));
            const double sign = rng.rademacher();
            const double magnitude = draw_magnitude(spec, rng);
            Vector x = Vector::Zero(spec.dim);
            if (spec.basis)
                x = sign * magnitude * spec.basis->col(index);
            else
                x(index) = sign * magnitude;
            return x;
        }
        case EnsembleKind::GaussianIid: {
            Vector x(spec.dim);
            for (int i = 0; i < spec.dim; ++i) x(i) = rng.normal();
            return x;
        }
        case EnsembleKind::BernoulliIid: {
            Vector x(spec.dim);
            for (int i = 0; i < spec.dim; ++i) x(i) = rng.rademacher();
            return x;
        }
    }
    throw std::logic_error("sample: unknown ensemble kind");
}

ValidationReport validate_assumptions(const EnsembleSpec& spec, long trials, Philox& rng) {
    if (trials < 1000) throw std::invalid_argument("validate_assumptions: trials must be >= 1000");
    const int dim = spec.dim;
    Vector mean_acc = Vector::Zero(dim);
    Matrix cov_acc = Matrix::Zero(dim, dim);
    double min_norm = std::numeric_limits<double>::infinity();
    double sum_norm = 0.0, sum_norm_sq = 0.0, sum_dir = 0.0, sum_dir_sq = 0.0, sum_cross = 0.0;

    for (long t = 0; t < trials; ++t) {
        const Vector x = sample(spec, rng);
        mean_acc += x;
        cov_acc.noalias() += x * x.transpose();
        const double norm = x.norm();
        min_norm = std::min(min_norm, norm);
        const double dir = norm > 0.0 ? x(0) / norm : 0.0;
        sum_norm += norm;
        sum_norm_sq += norm * norm;
        sum_dir += dir;
        sum_dir_sq += dir * dir;
        sum_cross += norm * dir;
    }

    ValidationReport report;
    report.trials = trials;
    report.empirical_mean_norm = (mean_acc / static_cast<double>(trials)).norm();
    report.covariance_deviation =
        (cov_acc / static_cast<double>(trials) - Matrix::Identity(dim, dim)).norm() / std::sqrt(static_cast<double>(dim));
    report.min_norm_observed = min_norm;

    const double inv = 1.0 / static_cast<double>(trials);
    const double var_norm = sum_norm_sq * inv - (sum_norm * inv) * (sum_norm * inv);
    const double var_dir = sum_dir_sq * inv - (sum_dir * inv) * (sum_dir * inv);
    const double cov_nd = sum_cross * inv - (sum_norm * inv) * (sum_dir * inv);
    report.norm_direction_corr =
        (var_norm > 0.0 && var_dir > 0.0) ? cov_nd / std::sqrt(var_norm * var_dir) : 0.0;
    return report;
}

double default_mean_norm_threshold(int dim, long trials) {
    return 3.0 * std::sqrt(static_cast<double>(dim) / static_cast<double>(trials));
}

double default_covariance_threshold(int dim, long trials) {
    return 5.0 * std::sqrt(static_cast<double>(dim)) / std::sqrt(static_cast<double>(trials));
}

}  // namespace bip

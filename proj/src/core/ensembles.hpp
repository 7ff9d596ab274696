#pragma once

#include "core/lifting.hpp"
#include "core/rng.hpp"

#include <optional>

namespace bip {

enum class EnsembleKind {
    BiorthogonalUniform,
    GaussianIid,
    BernoulliIid,
};

/// Magnitude law for the bi-orthogonal ensemble; both satisfy E||x||^2 = dim.
/// ConstantSqrtDim draws ||x|| = sqrt(dim) always (almost-sure norm floor
/// r = sqrt(dim)); TwoPointThirds draws ||x||^2 in {dim/3, 5 dim/3} with
/// equal probability (floor r = sqrt(dim/3)).
enum class MagnitudeLaw {
    ConstantSqrtDim,
    TwoPointThirds,
};

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::GaussianIid;
    int dim = 0;
    /// Orthonormal basis for the bi-orthogonal case; canonical when absent.
    std::optional<Matrix> basis;
    MagnitudeLaw magnitude_law = MagnitudeLaw::ConstantSqrtDim;

    static EnsembleSpec biorthogonal(int dim, MagnitudeLaw law = MagnitudeLaw::ConstantSqrtDim,
                                     std::optional<Matrix> basis = std::nullopt);
    static EnsembleSpec gaussian(int dim);
    static EnsembleSpec bernoulli(int dim);

    void validate() const;
};

/// One draw. Bi-orthogonal: x = sign * magnitude * b_J with J uniform on the
/// basis columns, fair sign, and magnitude independent of both (draw order:
/// index, sign, magnitude). Gaussian/Bernoulli: i.i.d. entries.
Vector sample(const EnsembleSpec& spec, Philox& rng);

struct ValidationReport {
    double empirical_mean_norm = 0.0;   // ||mean of draws||_2
    double covariance_deviation = 0.0;  // ||Cov_hat - I||_F / sqrt(dim)
    double min_norm_observed = 0.0;
    double norm_direction_corr = 0.0;   // corr(||x||, first coordinate of x/||x||)
    long trials = 0;
};

/// Monte Carlo estimates for the random-model assumptions (zero mean,
/// identity covariance, norm/direction independence, norm floor). Pass
/// thresholds are caller policy; see default_mean_norm_threshold and
/// default_covariance_threshold for the defaults used by the tests.
ValidationReport validate_assumptions(const EnsembleSpec& spec, long trials, Philox& rng);

double default_mean_norm_threshold(int dim, long trials);    // 3 sqrt(dim/trials)
double default_covariance_threshold(int dim, long trials);   // 5 sqrt(dim) / sqrt(trials)

}  // namespace bip

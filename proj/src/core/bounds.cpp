#include "core/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace bip {

namespace {

void require_delta_open(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("bounds: delta must lie in (0, 1)");
}

void require_delta_half_open(double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("bounds: delta must lie in [0, 1)");
}

}  // namespace

double lemma1_bound(int m, double delta) {
    if (m < 1) throw std::invalid_argument("lemma1_bound: m must be positive");
    require_delta_half_open(delta);
    return 2.0 / (static_cast<double>(m) * (1.0 - delta));
}

double lemma2_bound(double r, double delta) {
    if (!(r > 0.0)) throw std::invalid_argument("lemma2_bound: r must be positive");
    require_delta_half_open(delta);
    return 2.0 / (r * r * (1.0 - delta));
}

double lemma3_gaussian_bound(int m, double delta) {
    if (m < 1) throw std::invalid_argument("lemma3_gaussian_bound: m must be positive");
    require_delta_open(delta);
    const double md = static_cast<double>(m);
    const double exponent = -md * std::log(1.0 / std::sqrt(delta)) + 2.0 * std::log(md) -
                            2.0 / md + 2.0 - std::log(2.0 * delta / (1.0 - delta));
    return std::exp(exponent);
}

double lemma4_bernoulli_bound(int m, double delta) {
    if (m < 1) throw std::invalid_argument("lemma4_bernoulli_bound: m must be positive");
    if (!(delta >= 0.0 && delta <= 1.0))
        throw std::invalid_argument("lemma4_bernoulli_bound: delta must lie in [0, 1]");
    return std::exp(-static_cast<double>(m) * (1.0 - delta) / 4.0 + std::log(4.0));
}

double theorem3_prob(double f, int m, int n, double delta) {
    if (f < 0.0) throw std::invalid_argument("theorem3_prob: f must be nonnegative");
    if (m < 1 || n < 1) throw std::invalid_argument("theorem3_prob: m, n must be positive");
    require_delta_half_open(delta);
    return 1.0 - 4.0 * f / (static_cast<double>(m) * n * (1.0 - delta));
}

double corollary3_prob(double f, double r_x, double r_y, double delta) {
    if (f < 0.0) throw std::invalid_argument("corollary3_prob: f must be nonnegative");
    if (!(r_x > 0.0 && r_y > 0.0)) throw std::invalid_argument("corollary3_prob: norm floors must be positive");
    require_delta_half_open(delta);
    return 1.0 - 4.0 * f / (r_x * r_x * r_y * r_y * (1.0 - delta));
}

double delta_from_prime(double delta_prime, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon < 1.0))
        throw std::invalid_argument("delta_from_prime: epsilon must lie in [0, 1)");
    if (!(delta_prime > 0.0 && delta_prime < 1.0))
        throw std::invalid_argument("delta_from_prime: delta_prime must lie in (0, 1)");
    const double root = std::sqrt(1.0 - delta_prime) - std::sqrt(2.0) * epsilon;
    if (root < 0.0)
        throw std::invalid_argument("delta_from_prime: requires delta_prime <= 1 - 2 epsilon^2");
    return 1.0 - root * root;
}

double covering_factor(double epsilon, double theta_constant) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("covering_factor: epsilon must lie in (0, 1)");
    if (!(theta_constant > 0.0)) throw std::invalid_argument("covering_factor: theta_constant must be positive");
    return theta_constant + 1.0 / epsilon;
}

double theorem4_prob(double p, int m, int n, double epsilon, double delta_prime,
                     double theta_constant) {
    if (p < 0.0) throw std::invalid_argument("theorem4_prob: p must be nonnegative");
    if (m < 1 || n < 1) throw std::invalid_argument("theorem4_prob: m, n must be positive");
    const double delta = delta_from_prime(delta_prime, epsilon);
    const double exponent =
        p * std::log(covering_factor(epsilon, theta_constant)) -
        static_cast<double>(m + n) * (1.0 - delta) / 4.0;
    return 1.0 - 16.0 * std::exp(exponent);
}

double theorem5_failure_term(double p, int m, int n, double epsilon, double delta,
                             double theta_constant) {
    if (p < 0.0) throw std::invalid_argument("theorem5_failure_term: p must be nonnegative");
    if (m < 1 || n < 1) throw std::invalid_argument("theorem5_failure_term: m, n must be positive");
    require_delta_open(delta);
    const double mn = static_cast<double>(m) * n;
    const double log_c = 2.0 * std::log(mn) + 4.0 - 2.0 * std::log(2.0 * delta / (1.0 - delta));
    const double exponent = p * std::log(covering_factor(epsilon, theta_constant)) -
                            static_cast<double>(m + n) * std::log(1.0 / std::sqrt(delta));
    return std::exp(log_c + exponent);
}

double theorem5_prob(double p, int m, int n, double epsilon, double delta_prime,
                     double theta_constant) {
    const double delta = delta_from_prime(delta_prime, epsilon);
    return 1.0 - theorem5_failure_term(p, m, n, epsilon, delta, theta_constant);
}

std::pair<double, double> covering_number_bounds(int n, double epsilon) {
    if (n < 0) throw std::invalid_argument("covering_number_bounds: n must be nonnegative");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("covering_number_bounds: epsilon must lie in (0, 1)");
    return {std::pow(1.0 / epsilon, n), std::pow(2.0 + 1.0 / epsilon, n)};
}

int convolution_entropy_dof(int m, int n) {
    if (m < 2 || n < 2) throw std::invalid_argument("convolution_entropy_dof: requires m, n >= 2");
    return m + n - 3;
}

std::vector<std::pair<int, double>> figure1_curve(int m, const std::vector<int>& n_range,
                                                  double epsilon, double delta,
                                                  double theta_constant) {
    std::vector<std::pair<int, double>> curve;
    curve.reserve(n_range.size());
    for (int n : n_range) {
        const double p = static_cast<double>(convolution_entropy_dof(m, n));
        curve.emplace_back(n, theorem5_failure_term(p, m, n, epsilon, delta, theta_constant));
    }
    return curve;
}

}  // namespace bip

#pragma once

#include <utility>
#include <vector>

namespace bip {

// Closed-form probability bounds and scaling laws. Raw values are returned
// unclamped: a "probability" below 0 or a failure term above 1 marks the
// regime where the bound is vacuous, and the reporting layer decides how to
// present that.

/// Markov bound for dependent-but-uncorrelated draws: 2 / (m (1 - delta)).
double lemma1_bound(int m, double delta);

/// Norm-floor variant: 2 / (r^2 (1 - delta)).
double lemma2_bound(double r, double delta);

/// Gaussian Chernoff bound:
/// exp{-m log(1/sqrt(delta)) + 2 log m - 2/m + 2 - log(2 delta/(1-delta))}.
double lemma3_gaussian_bound(int m, double delta);

/// Bernoulli Chernoff bound: exp{-m (1-delta)/4 + log 4}.
double lemma4_bernoulli_bound(int m, double delta);

/// Finite-complexity identifiability probability: 1 - 4 f / (m n (1-delta)).
double theorem3_prob(double f, int m, int n, double delta);

/// Norm-floor variant: 1 - 4 f / (r_x^2 r_y^2 (1-delta)).
double corollary3_prob(double f, double r_x, double r_y, double delta);

/// delta = 1 - (sqrt(1 - delta_prime) - sqrt(2) epsilon)^2; requires
/// delta_prime in (0, 1 - 2 epsilon^2].
double delta_from_prime(double delta_prime, double epsilon);

/// Covering-number factor Theta(1/eps) = theta_constant + 1/eps; the default
/// constant 2 matches the covering upper bound (2 + 1/eps)^n.
double covering_factor(double epsilon, double theta_constant = 2.0);

/// Bernoulli-prior scaling law:
/// 1 - 16 exp{p log Theta(1/eps) - (m+n)(1-delta)/4}, delta from delta_prime.
double theorem4_prob(double p, int m, int n, double epsilon, double delta_prime,
                     double theta_constant = 2.0);

/// Gaussian-prior failure term with delta supplied directly:
/// C(m,n,delta) exp{p log Theta(1/eps) - (m+n) log(1/sqrt(delta))},
/// C = exp{2 log(mn) + 4 - 2 log(2 delta/(1-delta))}.
double theorem5_failure_term(double p, int m, int n, double epsilon, double delta,
                             double theta_constant = 2.0);

/// Gaussian-prior scaling law, 1 - failure term, with delta from delta_prime.
double theorem5_prob(double p, int m, int n, double epsilon, double delta_prime,
                     double theta_constant = 2.0);

/// ((1/eps)^n, (2 + 1/eps)^n).
std::pair<double, double> covering_number_bounds(int n, double epsilon);

/// Metric entropy parameter of the convolution rank-two null space.
int convolution_entropy_dof(int m, int n);

/// Theorem-5 theory curve at fixed m over a range of n, with p = m+n-3 and
/// delta plugged in directly (the illustration fixes delta, not delta').
std::vector<std::pair<int, double>> figure1_curve(int m, const std::vector<int>& n_range,
                                                  double epsilon = 0.1, double delta = 1e-4,
                                                  double theta_constant = 2.0);

}  // namespace bip

#pragma once

#include "core/ensembles.hpp"
#include "core/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bip {

enum class ExampleId { A, B, C };

/// Monte Carlo experiment description. Example A draws canonical
/// bi-orthogonal signal pairs against the floor(sqrt(m)) x floor(sqrt(n))
/// family, Example B Bernoulli pairs against the 2^floor(tau m) x
/// 2^floor(tau n) family with the delta'-relaxed detection event, Example C
/// Gaussian pairs against the lifted convolution operator with the solver's
/// event-E2 detector. Example C keeps only cells with n >= m.
struct ExperimentConfig {
    ExampleId example = ExampleId::A;
    std::vector<int> m_values;
    std::vector<int> n_values;
    long trials_per_cell = 0;
    std::uint64_t master_seed = 0;
    double tau = 0.2;          // Example B
    double delta_prime = 0.3;  // Example B
    double mu = 0.8;           // Example C
    double delta_test = 1e-9;  // Example A
    MagnitudeLaw magnitude_law = MagnitudeLaw::ConstantSqrtDim;  // Example A
    SolverConfig solver;       // Example C
    int workers = 1;

    void validate() const;
};

struct FailureCell {
    int m = 0;
    int n = 0;
    long trials = 0;
    long failures = 0;
    double failure_rate = 0.0;
    double binomial_stderr = 0.0;
};

struct FailureCurve {
    ExampleId example = ExampleId::A;
    std::vector<FailureCell> cells;

    std::vector<FailureCell> cells_for_m(int m) const;
    std::vector<int> distinct_m() const;
};

enum class FitMode { LogLog, Semilog };

struct SlopeFit {
    FitMode mode = FitMode::LogLog;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    int cells_used = 0;
    int cells_excluded = 0;  // zero-failure cells left out of the fit
};

/// Runs the configured example. Deterministic in (config, master_seed): every
/// trial draws from a substream keyed by (master seed, m, n, trial index), so
/// the curve is bit-identical for any worker count.
FailureCurve run_experiment(const ExperimentConfig& cfg);

/// OLS fit of log(failure_rate) against log n (LogLog) or n (Semilog) over
/// the cells of one fixed m. Zero-failure cells are excluded and counted;
/// fewer than 3 nonzero cells is an error.
SlopeFit fit_slope(const std::vector<FailureCell>& cells_fixed_m, FitMode mode);

FitMode default_fit_mode(ExampleId example);
char example_letter(ExampleId example);

/// CSV with header example,m,n,trials,failures,failure_rate,stderr.
std::string to_csv(const FailureCurve& curve);
void write_csv(const FailureCurve& curve, const std::string& path);
FailureCurve read_csv(const std::string& path);

std::string slope_record(ExampleId example, int m, const SlopeFit& fit);

/// Strict JSON config: schema_version must equal 1, unknown keys are
/// rejected. Numeric keys match the ExperimentConfig field names; solver
/// options nest under "solver".
ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace bip

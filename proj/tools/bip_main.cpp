// bip command line tool. Talks to the library exclusively through the C API.
//
// Exit codes: 0 success / identifiable, 2 usage, config or input-file error,
// 3 check failed (ambiguity witnessed), 4 check inconclusive, 1 internal
// error.

#include <bip/bip.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCheckFailed = 3;
constexpr int kExitCheckUnknown = 4;

int exit_code_for(bip_status status) {
    switch (status) {
        case BIP_OK: return kExitOk;
        case BIP_ERR_INVALID_ARGUMENT:
        case BIP_ERR_DIMENSION_MISMATCH:
        case BIP_ERR_IO:
        case BIP_ERR_PARSE:
        case BIP_ERR_BUDGET:
        case BIP_ERR_DOMAIN:
            return kExitUsage;
        default:
            return kExitInternal;
    }
}

int report_failure(const char* action, bip_status status) {
    std::cerr << "error: " << action << ": " << bip_status_name(status) << ": " << bip_last_error()
              << "\n";
    return exit_code_for(status);
}

std::string format_value(double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    std::string text(buf);
    if (value < 0.0 || value > 1.0) text += " (vacuous)";
    return text;
}

/// Signal file: header line "m n", then m reals for x and n reals for y,
/// whitespace separated.
bool read_signal_file(const std::string& path, std::vector<double>& x, std::vector<double>& y) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "error: cannot open signal file " << path << "\n";
        return false;
    }
    long m = 0, n = 0;
    if (!(in >> m >> n) || m < 1 || n < 1) {
        std::cerr << "error: malformed signal file header in " << path << "\n";
        return false;
    }
    x.resize(static_cast<std::size_t>(m));
    y.resize(static_cast<std::size_t>(n));
    for (double& value : x)
        if (!(in >> value)) {
            std::cerr << "error: signal file " << path << " is shorter than its header claims\n";
            return false;
        }
    for (double& value : y)
        if (!(in >> value)) {
            std::cerr << "error: signal file " << path << " is shorter than its header claims\n";
            return false;
        }
    double extra;
    if (in >> extra) {
        std::cerr << "error: signal file " << path << " has trailing values\n";
        return false;
    }
    return true;
}

int cmd_lift_info(int m, int n) {
    int q = 0, kernel_dim = 0, dof = 0;
    const bip_status status = bip_conv_lift_info(m, n, &q, &kernel_dim, &dof);
    if (status != BIP_OK) return report_failure("lift-info", status);
    std::cout << "linear convolution lift: m=" << m << " n=" << n << "\n"
              << "observations q = " << q << "\n"
              << "kernel dimension = " << kernel_dim << "\n";
    if (dof >= 0)
        std::cout << "rank-two null space parametrization dof = " << dof << "\n";
    else
        std::cout << "rank-two null space parametrization dof = n/a (needs m, n >= 2)\n";
    return kExitOk;
}

int cmd_check(const std::string& signal_path, const std::string& family_name, double tau,
              double delta, double mu) {
    std::vector<double> x, y;
    if (!read_signal_file(signal_path, x, y)) return kExitUsage;
    const int m = static_cast<int>(x.size());
    const int n = static_cast<int>(y.size());

    if (family_name == "convolution") {
        bip_verdict verdict = BIP_VERDICT_UNKNOWN;
        const bip_status status = bip_check_instance_solver(m, n, x.data(), y.data(), mu, &verdict);
        if (status != BIP_OK) return report_failure("check", status);
        if (verdict == BIP_VERDICT_SUFFICIENT_CONDITION_FAILED) {
            std::cout << "non-identifiability witnessed: a rank-two kernel point lies within mu=" << mu
                      << " of the instance\n";
            return kExitCheckFailed;
        }
        std::cout << "inconclusive: the heuristic found no rank-two kernel point within mu=" << mu
                  << "\n";
        return kExitCheckUnknown;
    }

    bip_family* family = nullptr;
    bip_status status;
    if (family_name == "none")
        status = bip_family_create_empty(m, n, &family);
    else if (family_name == "biorthogonal")
        status = bip_family_create_biorthogonal(m, n, &family);
    else if (family_name == "bernoulli")
        status = bip_family_create_bernoulli(m, n, tau, &family);
    else {
        std::cerr << "error: unknown family \"" << family_name << "\"\n";
        return kExitUsage;
    }
    if (status != BIP_OK) return report_failure("check", status);

    bip_verdict verdict = BIP_VERDICT_UNKNOWN;
    int wi = -1, wj = -1;
    status = bip_check_instance(family, x.data(), m, y.data(), n, delta, &verdict, &wi, &wj);
    bip_family_destroy(family);
    if (status != BIP_OK) return report_failure("check", status);

    if (verdict == BIP_VERDICT_IDENTIFIABLE) {
        std::cout << "identifiable (sufficient condition holds at delta_test=" << delta << ")\n";
        return kExitOk;
    }
    std::cout << "sufficient condition failed at part (" << wi << "," << wj << ")\n";
    return kExitCheckFailed;
}

int cmd_bounds(const std::string& which, int m, int n, double delta, double delta_prime,
               double epsilon, double r, double r_x, double r_y, double f, double p, double theta,
               int n_min, int n_max, const std::string& output) {
    double value = 0.0;
    bip_status status = BIP_OK;
    if (which == "lemma1") {
        status = bip_lemma1_bound(m, delta, &value);
    } else if (which == "lemma2") {
        status = bip_lemma2_bound(r, delta, &value);
    } else if (which == "lemma3") {
        status = bip_lemma3_gaussian_bound(m, delta, &value);
    } else if (which == "lemma4") {
        status = bip_lemma4_bernoulli_bound(m, delta, &value);
    } else if (which == "theorem3") {
        status = bip_theorem3_prob(f, m, n, delta, &value);
    } else if (which == "corollary3") {
        status = bip_corollary3_prob(f, r_x, r_y, delta, &value);
    } else if (which == "delta") {
        status = bip_delta_from_prime(delta_prime, epsilon, &value);
        if (status == BIP_OK) {
            std::cout << "delta(" << delta_prime << ", " << epsilon << ") = " << value << "\n";
            return kExitOk;
        }
    } else if (which == "theorem4") {
        status = bip_theorem4_prob(p, m, n, epsilon, delta_prime, theta, &value);
    } else if (which == "theorem5") {
        status = bip_theorem5_prob(p, m, n, epsilon, delta_prime, theta, &value);
    } else if (which == "covering") {
        double lower = 0.0, upper = 0.0;
        status = bip_covering_number_bounds(n, epsilon, &lower, &upper);
        if (status == BIP_OK) {
            std::cout << "covering(" << n << ", " << epsilon << ") in [" << lower << ", " << upper
                      << "]\n";
            return kExitOk;
        }
    } else if (which == "figure1") {
        if (output.empty()) {
            std::cerr << "error: figure1 requires --output\n";
            return kExitUsage;
        }
        status = bip_figure1_curve_csv(m, n_min, n_max, epsilon, delta, theta, output.c_str());
        if (status == BIP_OK) {
            std::cout << "wrote theory curve to " << output << "\n";
            return kExitOk;
        }
    } else {
        std::cerr << "error: unknown bound \"" << which << "\"\n";
        return kExitUsage;
    }
    if (status != BIP_OK) return report_failure("bounds", status);
    std::cout << which << " = " << format_value(value) << "\n";
    return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& output) {
    std::vector<char> slopes(1 << 16);
    const bip_status status =
        bip_run_experiment_file(config_path.c_str(), output.c_str(), slopes.data(), slopes.size());
    if (status != BIP_OK) return report_failure("run", status);
    std::cout << "wrote " << output << "\n" << slopes.data();
    return kExitOk;
}

int cmd_fit(const std::string& csv_path, const std::string& mode, int m) {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0;
    int used = 0, excluded = 0;
    const bip_status status =
        bip_fit_csv(csv_path.c_str(), mode.c_str(), m, &slope, &intercept, &r_squared, &used,
                    &excluded);
    if (status != BIP_OK) return report_failure("fit", status);
    std::cout << "slope m=" << m << " mode=" << mode << " slope=" << format_value(slope).c_str()
              << " intercept=" << intercept << " r_squared=" << r_squared << " cells_used=" << used
              << " cells_excluded=" << excluded << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bilinear inverse problem identifiability toolkit"};
    app.require_subcommand(1);

    int m = 0, n = 0;
    auto* lift_info = app.add_subcommand("lift-info", "dimensions of the lifted convolution map");
    lift_info->add_option("m", m, "left signal length")->required();
    lift_info->add_option("n", n, "right signal length")->required();

    std::string signal_path, family_name = "biorthogonal";
    double tau = 0.2, delta = 1e-9, mu = 0.8;
    auto* check = app.add_subcommand("check", "identifiability check of a signal pair");
    check->add_option("signal", signal_path, "signal file: header 'm n', then x then y")->required();
    check->add_option("--family", family_name, "none|biorthogonal|bernoulli|convolution");
    check->add_option("--tau", tau, "bernoulli family density");
    check->add_option("--delta", delta, "soft membership tolerance");
    check->add_option("--mu", mu, "ball radius for the convolution/solver route");

    std::string which, output;
    double delta_prime = 0.3, epsilon = 0.1, r = 1.0, r_x = 1.0, r_y = 1.0, f = 0.0, p = 0.0;
    double theta = 2.0;
    int n_min = 10, n_max = 50;
    auto* bounds = app.add_subcommand("bounds", "evaluate closed-form bounds");
    bounds->add_option("which", which,
                       "lemma1|lemma2|lemma3|lemma4|theorem3|corollary3|delta|theorem4|theorem5|"
                       "covering|figure1")
        ->required();
    bounds->add_option("--m", m);
    bounds->add_option("--n", n);
    bounds->add_option("--delta", delta);
    bounds->add_option("--delta-prime", delta_prime);
    bounds->add_option("--epsilon", epsilon);
    bounds->add_option("--r", r);
    bounds->add_option("--rx", r_x);
    bounds->add_option("--ry", r_y);
    bounds->add_option("--f", f);
    bounds->add_option("--p", p);
    bounds->add_option("--theta", theta, "additive constant inside the covering factor");
    bounds->add_option("--n-min", n_min);
    bounds->add_option("--n-max", n_max);
    bounds->add_option("--output", output, "CSV path (figure1)");

    std::string config_path, run_output = "curve.csv";
    auto* run = app.add_subcommand("run", "run a Monte Carlo experiment config");
    run->add_option("config", config_path, "JSON experiment config")->required();
    run->add_option("--output", run_output, "output CSV path");

    std::string fit_csv, fit_mode = "loglog";
    int fit_m = 0;
    auto* fit = app.add_subcommand("fit", "fit a slope to a failure-curve CSV");
    fit->add_option("csv", fit_csv, "CSV produced by run")->required();
    fit->add_option("--mode", fit_mode, "loglog|semilog");
    fit->add_option("--m", fit_m, "fixed m series to fit")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (lift_info->parsed()) return cmd_lift_info(m, n);
        if (check->parsed()) return cmd_check(signal_path, family_name, tau, delta, mu);
        if (bounds->parsed())
            return cmd_bounds(which, m, n, delta, delta_prime, epsilon, r, r_x, r_y, f, p, theta,
                              n_min, n_max, output);
        if (run->parsed()) return cmd_run(config_path, run_output);
        if (fit->parsed()) return cmd_fit(fit_csv, fit_mode, fit_m);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInternal;
    }
    return kExitUsage;
}

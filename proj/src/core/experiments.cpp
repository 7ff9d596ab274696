#include "core/experiments.hpp"

#include "core/identifiability.hpp"
#include "core/null_space.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bip {

namespace {

std::uint64_t trial_stream(int m, int n, long trial) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(m)) << 48) |
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32) |
           static_cast<std::uint32_t>(trial);
}

/// Runs `trials` independent trials of `trial_fn` split across `workers`
/// threads; returns the failure count. Aggregation is an integer sum, so the
/// result is independent of the thread schedule.
long run_cell(long trials, int workers, const std::function<bool(long)>& trial_fn) {
    if (workers <= 1) {
        long failures = 0;
        for (long t = 0; t < trials; ++t) failures += trial_fn(t) ? 1 : 0;
        return failures;
    }
    const int count = std::min<long>(workers, std::max<long>(trials, 1));
    std::vector<long> partial(static_cast<std::size_t>(count), 0);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int w = 0; w < count; ++w) {
        pool.emplace_back([&, w]() {
            long local = 0;
            for (long t = w; t < trials; t += count) local += trial_fn(t) ? 1 : 0;
            partial[static_cast<std::size_t>(w)] = local;
        });
    }
    for (std::thread& th : pool) th.join();
    long failures = 0;
    for (long p : partial) failures += p;
    return failures;
}

FailureCell make_cell(int m, int n, long trials, long failures) {
    FailureCell cell;
    cell.m = m;
    cell.n = n;
    cell.trials = trials;
    cell.failures = failures;
    cell.failure_rate = static_cast<double>(failures) / static_cast<double>(trials);
    cell.binomial_stderr =
        std::sqrt(cell.failure_rate * (1.0 - cell.failure_rate) / static_cast<double>(trials));
    return cell;
}

Vector biorthogonal_draw(int dim, MagnitudeLaw law, Philox& rng) {
    EnsembleSpec spec = EnsembleSpec::biorthogonal(dim, law);
    return sample(spec, rng);
}

FailureCurve run_example_A(const ExperimentConfig& cfg) {
    FailureCurve curve;
    curve.example = ExampleId::A;
    for (int m : cfg.m_values) {
        for (int n : cfg.n_values) {
            const NullSpaceFamily family = NullSpaceFamily::biorthogonal(m, n);
            auto trial = [&](long t) {
                Philox rng(cfg.master_seed, trial_stream(m, n, t));
                const Vector x = biorthogonal_draw(m, cfg.magnitude_law, rng);
                const Vector y = biorthogonal_draw(n, cfg.magnitude_law, rng);
                const RankOneInstance inst = RankOneInstance::from_pair(x, y);
                return detect_ambiguity_exhaustive(inst, family, cfg.delta_test).has_value();
            };
            curve.cells.push_back(make_cell(m, n, cfg.trials_per_cell,
                                            run_cell(cfg.trials_per_cell, cfg.workers, trial)));
        }
    }
    return curve;
}

FailureCurve run_example_B(const ExperimentConfig& cfg) {
    FailureCurve curve;
    curve.example = ExampleId::B;
    for (int m : cfg.m_values) {
        for (int n : cfg.n_values) {
            const NullSpaceFamily family = NullSpaceFamily::bernoulli(m, n, cfg.tau);
            auto trial = [&](long t) {
                Philox rng(cfg.master_seed, trial_stream(m, n, t));
                Vector x(m);
                for (int i = 0; i < m; ++i) x(i) = rng.rademacher();
                Vector y(n);
                for (int i = 0; i < n; ++i) y(i) = rng.rademacher();
                const RankOneInstance inst = RankOneInstance::from_pair(x, y);
                // ||P x||^2 >= (1 - delta') ||x||^2 is the unit-direction
                // event with threshold delta', on a common part.
                return detect_ambiguity_exhaustive(inst, family, cfg.delta_prime).has_value();
            };
            curve.cells.push_back(make_cell(m, n, cfg.trials_per_cell,
                                            run_cell(cfg.trials_per_cell, cfg.workers, trial)));
        }
    }
    return curve;
}

FailureCurve run_example_C(const ExperimentConfig& cfg) {
    FailureCurve curve;
    curve.example = ExampleId::C;
    SolverConfig solver_cfg = cfg.solver;
    solver_cfg.mu = cfg.mu;
    for (int m : cfg.m_values) {
        for (int n : cfg.n_values) {
            if (n < m) continue;  // convolution is symmetric in its inputs
            const LiftedOperator op = LiftedOperator::linear_convolution(m, n);
            const NullSpaceBasis basis = kernel_basis(op);
            auto trial = [&](long t) {
                Philox rng(cfg.master_seed, trial_stream(m, n, t));
                Vector x(m);
                for (int i = 0; i < m; ++i) x(i) = rng.normal();
                Vector y(n);
                for (int i = 0; i < n; ++i) y(i) = rng.normal();
                const RankOneInstance inst = RankOneInstance::from_pair(x, y);
                return detect_event_E2(op, basis, inst, solver_cfg);
            };
            curve.cells.push_back(make_cell(m, n, cfg.trials_per_cell,
                                            run_cell(cfg.trials_per_cell, cfg.workers, trial)));
        }
    }
    return curve;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (m_values.empty() || n_values.empty())
        throw std::invalid_argument("ExperimentConfig: m_values and n_values must be nonempty");
    for (int v : m_values)
        if (v < 1) throw std::invalid_argument("ExperimentConfig: m_values must be positive");
    for (int v : n_values)
        if (v < 1) throw std::invalid_argument("ExperimentConfig: n_values must be positive");
    if (trials_per_cell < 100)
        throw std::invalid_argument("ExperimentConfig: trials_per_cell must be >= 100");
    if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
    if (example == ExampleId::B && !(tau > 0.0 && tau < 1.0))
        throw std::invalid_argument("ExperimentConfig: tau must lie in (0, 1)");
    if (example == ExampleId::B && !(delta_prime > 0.0 && delta_prime < 1.0))
        throw std::invalid_argument("ExperimentConfig: delta_prime must lie in (0, 1)");
    if (example == ExampleId::C && !(mu > 0.0))
        throw std::invalid_argument("ExperimentConfig: mu must be positive");
    if (example == ExampleId::A && !(delta_test >= 0.0 && delta_test < 1.0))
        throw std::invalid_argument("ExperimentConfig: delta_test must lie in [0, 1)");
    if (example == ExampleId::C) {
        bool any = false;
        for (int m : m_values)
            for (int n : n_values) any = any || n >= m;
        if (!any) throw std::invalid_argument("ExperimentConfig: example C requires cells with n >= m");
    }
}

std::vector<FailureCell> FailureCurve::cells_for_m(int m) const {
    std::vector<FailureCell> out;
    for (const FailureCell& cell : cells)
        if (cell.m == m) out.push_back(cell);
    return out;
}

std::vector<int> FailureCurve::distinct_m() const {
    std::set<int> seen;
    for (const FailureCell& cell : cells) seen.insert(cell.m);
    return {seen.begin(), seen.end()};
}

FailureCurve run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    switch (cfg.example) {
        case ExampleId::A: return run_example_A(cfg);
        case ExampleId::B: return run_example_B(cfg);
        case ExampleId::C: return run_example_C(cfg);
    }
    throw std::logic_error("run_experiment: unknown example");
}

SlopeFit fit_slope(const std::vector<FailureCell>& cells_fixed_m, FitMode mode) {
    std::vector<double> xs, ys;
    int excluded = 0;
    for (const FailureCell& cell : cells_fixed_m) {
        if (cell.failures == 0) {
            ++excluded;
            continue;
        }
        xs.push_back(mode == FitMode::LogLog ? std::log(static_cast<double>(cell.n))
                                             : static_cast<double>(cell.n));
        ys.push_back(std::log(cell.failure_rate));
    }
    if (xs.size() < 3)
        throw std::domain_error("fit_slope: fewer than 3 cells with nonzero failures");

    const double count = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mean_x += xs[k];
        mean_y += ys[k];
    }
    mean_x /= count;
    mean_y /= count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double dx = xs[k] - mean_x;
        const double dy = ys[k] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::domain_error("fit_slope: degenerate abscissa");

    SlopeFit fit;
    fit.mode = mode;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    fit.cells_used = static_cast<int>(xs.size());
    fit.cells_excluded = excluded;
    return fit;
}

FitMode default_fit_mode(ExampleId example) {
    return example == ExampleId::A ? FitMode::LogLog : FitMode::Semilog;
}

char example_letter(ExampleId example) {
    switch (example) {
        case ExampleId::A: return 'A';
        case ExampleId::B: return 'B';
        case ExampleId::C: return 'C';
    }
    return '?';
}

namespace {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

}  // namespace

std::string to_csv(const FailureCurve& curve) {
    std::ostringstream out;
    out << "example,m,n,trials,failures,failure_rate,stderr\n";
    for (const FailureCell& cell : curve.cells) {
        out << example_letter(curve.example) << ',' << cell.m << ',' << cell.n << ','
            << cell.trials << ',' << cell.failures << ',' << format_double(cell.failure_rate)
            << ',' << format_double(cell.binomial_stderr) << '\n';
    }
    return out.str();
}

void write_csv(const FailureCurve& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << to_csv(curve);
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

FailureCurve read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "example,m,n,trials,failures,failure_rate,stderr")
        throw std::runtime_error("read_csv: unexpected header in " + path);
    FailureCurve curve;
    bool example_set = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        FailureCell cell;
        if (!std::getline(row, field, ',') || field.size() != 1)
            throw std::runtime_error("read_csv: malformed example column");
        switch (field[0]) {
            case 'A': curve.example = ExampleId::A; break;
            case 'B': curve.example = ExampleId::B; break;
            case 'C': curve.example = ExampleId::C; break;
            default: throw std::runtime_error("read_csv: unknown example tag");
        }
        example_set = true;
        try {
            std::getline(row, field, ',');
            cell.m = std::stoi(field);
            std::getline(row, field, ',');
            cell.n = std::stoi(field);
            std::getline(row, field, ',');
            cell.trials = std::stol(field);
            std::getline(row, field, ',');
            cell.failures = std::stol(field);
            std::getline(row, field, ',');
            cell.failure_rate = std::stod(field);
            std::getline(row, field, ',');
            cell.binomial_stderr = std::stod(field);
        } catch (const std::exception&) {
            throw std::runtime_error("read_csv: malformed row: " + line);
        }
        curve.cells.push_back(cell);
    }
    if (!example_set) throw std::runtime_error("read_csv: no data rows in " + path);
    return curve;
}

std::string slope_record(ExampleId example, int m, const SlopeFit& fit) {
    std::ostringstream out;
    out << "slope example=" << example_letter(example) << " m=" << m << " mode="
        << (fit.mode == FitMode::LogLog ? "loglog" : "semilog") << " slope=" << format_double(fit.slope)
        << " intercept=" << format_double(fit.intercept) << " r_squared=" << format_double(fit.r_squared)
        << " cells_used=" << fit.cells_used << " cells_excluded=" << fit.cells_excluded;
    return out.str();
}

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& object, const std::set<std::string>& known,
                         const std::string& context) {
    for (auto it = object.begin(); it != object.end(); ++it) {
        if (!known.count(it.key()))
            throw std::invalid_argument("config: unknown key \"" + it.key() + "\" in " + context);
    }
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + err.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("config: top level must be an object");

    static const std::set<std::string> known = {
        "schema_version", "example", "m_values", "n_values", "trials_per_cell", "master_seed",
        "tau", "delta_prime", "mu", "delta_test", "magnitude_law", "solver", "workers"};
    reject_unknown_keys(doc, known, "config");

    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
        doc["schema_version"].get<int>() != 1)
        throw std::invalid_argument("config: schema_version must be the integer 1");

    ExperimentConfig cfg;
    const std::string example = doc.value("example", std::string());
    if (example == "A")
        cfg.example = ExampleId::A;
    else if (example == "B")
        cfg.example = ExampleId::B;
    else if (example == "C")
        cfg.example = ExampleId::C;
    else
        throw std::invalid_argument("config: example must be \"A\", \"B\" or \"C\"");

    try {
        cfg.m_values = doc.at("m_values").get<std::vector<int>>();
        cfg.n_values = doc.at("n_values").get<std::vector<int>>();
        cfg.trials_per_cell = doc.at("trials_per_cell").get<long>();
        cfg.master_seed = doc.at("master_seed").get<std::uint64_t>();
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("config: missing or mistyped required key: ") + err.what());
    }

    try {
        if (doc.contains("tau")) cfg.tau = doc["tau"].get<double>();
        if (doc.contains("delta_prime")) cfg.delta_prime = doc["delta_prime"].get<double>();
        if (doc.contains("mu")) cfg.mu = doc["mu"].get<double>();
        if (doc.contains("delta_test")) cfg.delta_test = doc["delta_test"].get<double>();
        if (doc.contains("workers")) cfg.workers = doc["workers"].get<int>();
        if (doc.contains("magnitude_law")) {
            const std::string law = doc["magnitude_law"].get<std::string>();
            if (law == "constant")
                cfg.magnitude_law = MagnitudeLaw::ConstantSqrtDim;
            else if (law == "two_point")
                cfg.magnitude_law = MagnitudeLaw::TwoPointThirds;
            else
                throw std::invalid_argument("config: magnitude_law must be \"constant\" or \"two_point\"");
        }
        if (doc.contains("solver")) {
            const json& solver = doc["solver"];
            if (!solver.is_object()) throw std::invalid_argument("config: solver must be an object");
            static const std::set<std::string> solver_keys = {
                "mu", "weight_smoothing", "outer_iters", "inner_iters",
                "primal_tol", "dual_tol", "rank_rel_threshold"};
            reject_unknown_keys(solver, solver_keys, "solver");
            if (solver.contains("mu")) cfg.solver.mu = solver["mu"].get<double>();
            if (solver.contains("weight_smoothing"))
                cfg.solver.weight_smoothing = solver["weight_smoothing"].get<double>();
            if (solver.contains("outer_iters")) cfg.solver.outer_iters = solver["outer_iters"].get<int>();
            if (solver.contains("inner_iters")) cfg.solver.inner_iters = solver["inner_iters"].get<int>();
            if (solver.contains("primal_tol")) cfg.solver.primal_tol = solver["primal_tol"].get<double>();
            if (solver.contains("dual_tol")) cfg.solver.dual_tol = solver["dual_tol"].get<double>();
            if (solver.contains("rank_rel_threshold"))
                cfg.solver.rank_rel_threshold = solver["rank_rel_threshold"].get<double>();
        }
    } catch (const json::exception& err) {
        throw std::invalid_argument(std::string("config: mistyped key: ") + err.what());
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_json(buffer.str());
}

}  // namespace bip

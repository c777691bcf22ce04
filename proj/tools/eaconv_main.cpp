// eaconv command line: analyze | simulate | compare | power over a JSON run config.
#include <CLI11.hpp>

#include "eaconv/analytics.hpp"
#include "eaconv/config.hpp"
#include "eaconv/csv.hpp"
#include "eaconv/simulator.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace eaconv;

constexpr int kExitSuccess = 0;
constexpr int kExitRuntimeFailure = 1;
constexpr int kExitBadInput = 2;

/// Display form of a number in report text: shortest round-trip decimal with
/// a typographic minus on the sign.
std::string display_number(double v) {
    std::string s = format_scalar(v);
    if (!s.empty() && s.front() == '-') s.replace(0, 1, "−");
    return s;
}

template <typename T>
std::string tuple_line(const std::vector<T>& values) {
    std::string s = "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        s += display_number(to_double(values[i]));
    }
    return s + ")";
}

template <typename T>
std::string render_model_report(const SpectralErrorModel<T>& model, const ReportOptions& opts) {
    std::ostringstream os;
    os << "label: " << model.label << "\n";
    os << "backend: " << scalar_traits<T>::backend_name() << "\n";
    os << "states: " << model.dim() << "\n";
    os << "f_opt: " << display_number(to_double(model.f_opt)) << "\n";
    os << "lambda: " << tuple_line(model.eigenvalues) << "\n";
    os << "c: " << tuple_line(model.coefficients) << "\n";
    os << "E_0: " << display_number(to_double(model.initial_error)) << "\n";
    for (const auto& w : model.warnings) os << "warning: " << w << "\n";
    os << closed_form_report(model, opts);
    return os.str();
}

/// Writes `emit(stream)` to the configured path, or to stdout when none.
template <typename Emit>
void write_output(const std::string& path, Emit emit) {
    if (path.empty()) {
        emit(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    emit(out);
}

template <typename T>
int run_analyze(const RunConfig& config) {
    LevelProblem<T> problem = build_problem<T>(config);
    PowerFactors<T> factors = compute_power_factors(
        problem.kernel, scalar_traits<T>::exact ? T(0) : T(config.eps_diag));
    SpectralErrorModel<T> model = coefficients(problem, factors);
    TrajectoryMetrics<T> trajectory = series(model, config.horizon);

    std::cout << render_model_report(model, ReportOptions{config.report_digits,
                                                          config.report_cutoff});
    write_output(config.out_path,
                 [&trajectory](std::ostream& os) { write_trajectory_csv(os, trajectory); });
    return kExitSuccess;
}

EmpiricalSeries run_simulation(const RunConfig& config) {
    std::string mode = config.sim_mode;
    if (mode.empty()) mode = config.family_spec ? "bitstring" : "chain";

    SimOptions options;
    options.threads = config.threads;

    if (mode == "bitstring") {
        const auto& spec = *config.family_spec;
        FitnessFamily<double> family = [&]() {
            if (spec.family == "onemax") return FitnessFamily<double>::onemax(spec.n);
            if (spec.family == "square") return FitnessFamily<double>::square(spec.n);
            if (spec.family == "log") return FitnessFamily<double>::logarithmic(spec.n);
            return FitnessFamily<double>::custom(detail::parse_all<double>(spec.fitness_table));
        }();
        Mutation mutation = spec.mutation == "onebit"
                                ? Mutation::onebit()
                                : Mutation::bitwise(parse_scalar<double>(spec.p_mut));
        options.initial_levels = initial_level_distribution(config);
        return run_bitstring(family, mutation, config.horizon, config.runs, config.seed, options);
    }
    LevelProblem<double> problem = build_problem<double>(config);
    return run_chain(problem, config.horizon, config.runs, config.seed, options);
}

int run_simulate(const RunConfig& config) {
    EmpiricalSeries series = run_simulation(config);
    write_output(config.out_path,
                 [&series](std::ostream& os) { write_empirical_csv(os, series); });
    return kExitSuccess;
}

int run_compare(const RunConfig& config, double perturb_coeff) {
    LevelProblem<double> problem = build_problem<double>(config);
    PowerFactors<double> factors = compute_power_factors(problem.kernel, config.eps_diag);
    SpectralErrorModel<double> model = coefficients(problem, factors);
    if (perturb_coeff != 0 && !model.coefficients.empty())
        model.coefficients[0] += perturb_coeff;
    TrajectoryMetrics<double> analytic = series(model, config.horizon);
    EmpiricalSeries empirical = run_simulation(config);
    ComparisonReport report = compare(analytic, empirical, config.z_threshold);

    write_output(config.out_path,
                 [&report](std::ostream& os) { write_comparison_csv(os, report); });
    std::cout << "max_abs_z," << format_scalar(report.max_abs_z) << "\n";
    std::cout << "threshold," << format_scalar(report.threshold) << "\n";
    std::cout << "RESULT," << (report.pass ? "PASS" : "FAIL") << "\n";
    return report.pass ? kExitSuccess : kExitRuntimeFailure;
}

template <typename T>
int run_power(const RunConfig& config, long long t, bool oracle) {
    LevelProblem<T> problem = build_problem<T>(config);
    PowerFactors<T> factors = compute_power_factors(
        problem.kernel, scalar_traits<T>::exact ? T(0) : T(config.eps_diag));
    SquareMatrix<T> closed = kernel_power(factors, problem.kernel, t);

    if (!oracle) {
        write_output(config.out_path,
                     [&closed](std::ostream& os) { write_matrix_csv(os, closed); });
        return kExitSuccess;
    }

    SquareMatrix<T> brute = brute_force_power(problem.kernel, t);
    double max_dev = 0;
    for (int i = 0; i < closed.dim; ++i)
        for (int j = 0; j < closed.dim; ++j) {
            const double d = std::abs(to_double(closed.at(i, j)) - to_double(brute.at(i, j)));
            max_dev = std::max(max_dev, d);
        }
    write_output(config.out_path, [&](std::ostream& os) {
        os << "closed_form\n";
        write_matrix_csv(os, closed);
        os << "brute_force\n";
        write_matrix_csv(os, brute);
        os << "max_deviation," << format_scalar(max_dev) << "\n";
    });
    return kExitSuccess;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convergence analytics for (1+1) strictly elitist EAs"};
    app.require_subcommand(0, 1);

    bool print_defaults = false;
    app.add_flag("--print-defaults", print_defaults, "print the default config as JSON and exit");

    std::string config_path;
    std::string out_path;
    bool rational = false;
    std::optional<std::uint64_t> seed;
    std::optional<long long> runs;
    std::optional<int> horizon;
    std::optional<int> threads;
    long long power_t = 1;
    bool oracle = false;
    double perturb_coeff = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run config (JSON)")->required();
        cmd->add_option("--out", out_path, "output CSV path (default: config output.path/stdout)");
        cmd->add_option("--seed", seed, "override simulation.seed");
        cmd->add_option("--runs", runs, "override simulation.runs");
        cmd->add_option("--horizon", horizon, "override the trajectory horizon");
        cmd->add_option("--threads", threads, "override simulation.threads");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "closed-form trajectory and report");
    add_common(analyze);
    analyze->add_flag("--rational", rational, "exact rational backend");

    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo trajectory");
    add_common(simulate);

    CLI::App* comparison = app.add_subcommand("compare", "analytic vs Monte-Carlo z-table");
    add_common(comparison);
    comparison->add_option("--perturb-coeff", perturb_coeff,
                           "add a bias to the leading analytic coefficient (comparison "
                           "self-check control)");

    CLI::App* power = app.add_subcommand("power", "t-th kernel power via the closed form");
    add_common(power);
    power->add_option("-t,--t", power_t, "exponent (>= 1)")->required();
    power->add_flag("--oracle", oracle, "also print the brute-force power and the max deviation");
    power->add_flag("--rational", rational, "exact rational backend");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    if (print_defaults) {
        std::cout << eaconv::defaults_json();
        return kExitSuccess;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << "error: a subcommand is required (analyze|simulate|compare|power)\n";
        return kExitBadInput;
    }

    try {
        eaconv::RunConfig config = eaconv::load_config(config_path);
        if (seed) config.seed = *seed;
        if (runs) config.runs = *runs;
        if (horizon) config.horizon = *horizon;
        if (threads) config.threads = *threads;
        if (!out_path.empty()) config.out_path = out_path;

        if (analyze->parsed())
            return rational ? run_analyze<eaconv::Rational>(config) : run_analyze<double>(config);
        if (simulate->parsed()) return run_simulate(config);
        if (comparison->parsed()) return run_compare(config, perturb_coeff);
        if (power->parsed()) {
            if (power_t < 1) throw eaconv::ConfigError("power: t must be >= 1");
            return rational ? run_power<eaconv::Rational>(config, power_t, oracle)
                            : run_power<double>(config, power_t, oracle);
        }
    } catch (const eaconv::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntimeFailure;
    }
    return kExitBadInput;
}

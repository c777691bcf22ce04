#pragma once

#include "eaconv/level_model.hpp"
#include "eaconv/simulator.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eaconv {

/// Invalid configuration or problem input; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One run of the pipeline, as described by a JSON config file. Numeric
/// problem data are kept as raw strings so the rational backend can parse
/// them exactly ("3/4" and "0.75" both round-trip).
struct RunConfig {
    struct FamilySpec {
        std::string family;                      // onemax | square | log | custom
        int n = 0;                               // inferred from the table for custom
        std::string mutation = "onebit";         // onebit | bitwise
        std::string p_mut;                       // required for bitwise
        std::vector<std::string> fitness_table;  // custom: fitness at level 0..n
    };

    struct ExplicitSpec {
        int dim = 0;
        std::vector<std::string> matrix;  // row-major, dim*dim entries
        std::vector<std::string> errors;
        std::string f_opt;
        std::vector<std::string> q0;
    };

    std::string label;
    std::optional<FamilySpec> family_spec;
    std::optional<ExplicitSpec> explicit_spec;

    // initial distribution for family problems: worst | uniform | explicit
    std::string initial = "worst";
    std::vector<std::string> initial_values;

    int horizon = 35;

    long long runs = 100000;
    std::uint64_t seed = 42;
    int threads = 0;
    std::string sim_mode;  // bitstring | chain; empty = pick by problem kind

    std::string out_path;
    std::string format = "csv";

    double eps_diag = 1e-9;
    double z_threshold = 4.0;

    int report_digits = 3;
    double report_cutoff = 5e-4;
};

RunConfig default_config();

/// The defaults as a JSON document (what --print-defaults emits).
std::string defaults_json();

/// Parses and validates a config file. Throws ConfigError with a diagnostic.
RunConfig load_config(const std::string& path);

namespace detail {

template <typename T>
std::vector<T> parse_all(const std::vector<std::string>& raw) {
    std::vector<T> out;
    out.reserve(raw.size());
    for (const auto& s : raw) out.push_back(parse_scalar<T>(s));
    return out;
}

}  // namespace detail

/// Materialises the configured problem in the requested backend.
template <typename T>
LevelProblem<T> build_problem(const RunConfig& config) {
    const T eps = scalar_traits<T>::exact ? T(0) : T(config.eps_diag);
    LevelProblem<T> problem = [&]() {
        if (config.explicit_spec) {
            const auto& spec = *config.explicit_spec;
            TriangularKernel<T> kernel(spec.dim, detail::parse_all<T>(spec.matrix));
            return from_explicit(std::move(kernel), detail::parse_all<T>(spec.errors),
                                 parse_scalar<T>(spec.f_opt), detail::parse_all<T>(spec.q0),
                                 config.label.empty() ? "explicit" : config.label, eps);
        }
        const auto& spec = *config.family_spec;
        FitnessFamily<T> family = [&]() {
            if (spec.family == "onemax") return FitnessFamily<T>::onemax(spec.n);
            if (spec.family == "square") return FitnessFamily<T>::square(spec.n);
            if (spec.family == "log") return FitnessFamily<T>::logarithmic(spec.n);
            if (spec.family == "custom")
                return FitnessFamily<T>::custom(detail::parse_all<T>(spec.fitness_table));
            throw ConfigError("unknown fitness family '" + spec.family + "'");
        }();
        if (spec.mutation == "onebit") return onebit_level_chain(family);
        if (spec.mutation == "bitwise")
            return bitwise_level_chain(family, parse_scalar<T>(spec.p_mut), eps);
        throw ConfigError("unknown mutation '" + spec.mutation + "'");
    }();

    if (!config.label.empty()) problem.label = config.label;

    if (config.family_spec) {
        const int L = problem.dim();
        if (config.initial == "uniform") {
            std::vector<T> q0(L, T(1) / T(L));
            problem.q0 = std::move(q0);
        } else if (config.initial == "explicit") {
            auto q0 = detail::parse_all<T>(config.initial_values);
            if (static_cast<int>(q0.size()) != L)
                throw ConfigError("initial distribution needs " + std::to_string(L) + " entries");
            // run the usual invariant checks on the replacement
            problem = from_explicit(problem.kernel, problem.errors, problem.f_opt, std::move(q0),
                                    problem.label, eps);
        } else if (config.initial != "worst") {
            throw ConfigError("initial must be worst, uniform or explicit");
        }
    }
    return problem;
}

/// Initial level distribution for the bitstring simulator (doubles), matching
/// build_problem's q0 handling.
std::vector<double> initial_level_distribution(const RunConfig& config);

}  // namespace eaconv

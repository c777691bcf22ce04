#pragma once

#include "eaconv/analytics.hpp"
#include "eaconv/level_model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eaconv {

/// Mutation operator for the bitstring simulation.
struct Mutation {
    enum class Kind { onebit, bitwise };
    Kind kind = Kind::onebit;
    double p = 0.0;  // per-bit flip rate, bitwise only

    static Mutation onebit() { return {Kind::onebit, 0.0}; }
    static Mutation bitwise(double p) { return {Kind::bitwise, p}; }

    std::string label() const;
};

struct SimOptions {
    int threads = 0;  // 0 = one worker per hardware thread (capped)
    /// Initial mass over levels 1..n; the deficit starts on the optimum.
    /// Empty means the all-zeros start (all mass on the worst level).
    std::vector<double> initial_levels;
};

/// Monte-Carlo estimate of the F/E/R trajectory over N independent runs.
/// Identical (seed, parameters) give bit-identical series regardless of the
/// worker count: runs draw from per-run generator streams and the per-level
/// occupancy counts aggregate in integers.
struct EmpiricalSeries {
    struct Row {
        int t;
        double mean_fitness;
        double stderr_fitness;
        double error;                // E_t = 1 - mean/f_opt
        double stderr_error;         // stderr_fitness / f_opt
        std::optional<double> rate;  // R_t, undefined at t = 0 or when E_0 = 0
    };

    int horizon = 0;
    long long runs = 0;
    std::uint64_t seed = 0;
    double f_opt = 0;
    std::string label;
    std::vector<Row> rows;

    bool operator==(const EmpiricalSeries&) const = default;
};

/// Simulates the (1+1) strictly elitist EA on actual n-bit strings for
/// exactly `horizon` generations per run (the optimum is absorbing, so the
/// fixed horizon is equivalent to stopping at the optimum).
EmpiricalSeries run_bitstring(const FitnessFamily<double>& family, const Mutation& mutation,
                              int horizon, long long runs, std::uint64_t seed,
                              const SimOptions& options = {});

/// Simulates the lumped level chain: state jumps follow the kernel columns
/// and the residual column mass jumps to the absorbing optimum.
EmpiricalSeries run_chain(const LevelProblem<double>& problem, int horizon, long long runs,
                          std::uint64_t seed, const SimOptions& options = {});

/// Per-generation z-scores of the empirical mean fitness against the
/// analytic prediction. z is 0 when both the deviation and the standard
/// error vanish.
struct ComparisonReport {
    struct Row {
        int t;
        double analytic_fitness;
        double empirical_fitness;
        double stderr_fitness;
        double z;
    };

    std::vector<Row> rows;
    double max_abs_z = 0;
    double threshold = 4.0;
    bool pass = false;
};

ComparisonReport compare(const TrajectoryMetrics<double>& analytic,
                         const EmpiricalSeries& empirical, double z_threshold = 4.0);

}  // namespace eaconv

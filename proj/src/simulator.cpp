#include "eaconv/simulator.hpp"

#include "eaconv/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace eaconv {

std::string Mutation::label() const {
    if (kind == Kind::onebit) return "onebit";
    return "bitwise-p" + format_scalar(p);
}

namespace {

// Occupancy counts per (generation, level); levels run 0 (optimum) .. L.
using CountGrid = std::vector<std::uint64_t>;

struct LevelSpace {
    int levels;  // L: number of non-optimal levels
    std::vector<double> fitness;  // fitness[level], level = 0..L
};

int pick_threads(int requested, long long runs) {
    int t = requested;
    if (t <= 0) t = static_cast<int>(std::thread::hardware_concurrency());
    t = std::clamp(t, 1, 16);
    if (runs < t) t = static_cast<int>(std::max<long long>(runs, 1));
    return t;
}

/// Runs `simulate_one(rng, record)` for every run index in parallel chunks
/// and sums the per-thread grids. Integer merging keeps the result exactly
/// independent of the partition.
template <typename SimulateOne>
CountGrid accumulate_runs(int horizon, int levels, long long runs, std::uint64_t seed,
                          int threads, SimulateOne simulate_one) {
    const std::size_t grid_size = static_cast<std::size_t>(horizon + 1) * (levels + 1);
    const int workers = pick_threads(threads, runs);
    std::vector<CountGrid> partial(workers, CountGrid(grid_size, 0));

    auto work = [&](int w) {
        CountGrid& grid = partial[w];
        for (long long r = w; r < runs; r += workers) {
            RunRng rng(seed, static_cast<std::uint64_t>(r));
            simulate_one(rng, [&grid, levels](int t, int level) {
                grid[static_cast<std::size_t>(t) * (levels + 1) + level] += 1;
            });
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }

    CountGrid total(grid_size, 0);
    for (const auto& grid : partial)
        for (std::size_t i = 0; i < grid_size; ++i) total[i] += grid[i];
    return total;
}

EmpiricalSeries summarize(const CountGrid& counts, const LevelSpace& space, int horizon,
                          long long runs, std::uint64_t seed, std::string label) {
    EmpiricalSeries series;
    series.horizon = horizon;
    series.runs = runs;
    series.seed = seed;
    series.f_opt = space.fitness[0];
    series.label = std::move(label);
    series.rows.reserve(horizon + 1);

    const int width = space.levels + 1;
    double initial_error = 0;
    for (int t = 0; t <= horizon; ++t) {
        double sum = 0, sum_sq = 0;
        for (int level = 0; level < width; ++level) {
            const double f = space.fitness[level];
            const double c = static_cast<double>(counts[static_cast<std::size_t>(t) * width + level]);
            sum += c * f;
            sum_sq += c * f * f;
        }
        const double n = static_cast<double>(runs);
        const double mean = sum / n;
        double variance = 0;
        if (runs > 1) variance = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        const double se = std::sqrt(variance / n);

        EmpiricalSeries::Row row;
        row.t = t;
        row.mean_fitness = mean;
        row.stderr_fitness = se;
        row.error = 1.0 - mean / series.f_opt;
        row.stderr_error = se / series.f_opt;
        if (t == 0) {
            initial_error = row.error;
            row.rate = std::nullopt;
        } else if (initial_error > 0) {
            // fitness never exceeds f_opt, so the error ratio is >= 0
            row.rate = 1.0 - std::pow(row.error / initial_error, 1.0 / static_cast<double>(t));
        } else {
            row.rate = std::nullopt;
        }
        series.rows.push_back(row);
    }
    return series;
}

/// Samples a level from `mass` over levels 1..L (deficit -> level 0), or the
/// worst level when `mass` is empty. Consumes exactly one draw when sampling.
int initial_level(RunRng& rng, const std::vector<double>& mass, int levels) {
    if (mass.empty()) return levels;
    const double u = rng.uniform01();
    double cum = 0;
    for (int level = 1; level <= levels; ++level) {
        cum += mass[level - 1];
        if (u < cum) return level;
    }
    return 0;
}

void check_run_params(int horizon, long long runs) {
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (runs < 1) throw std::invalid_argument("at least one run is required");
}

}  // namespace

EmpiricalSeries run_bitstring(const FitnessFamily<double>& family, const Mutation& mutation,
                              int horizon, long long runs, std::uint64_t seed,
                              const SimOptions& options) {
    check_run_params(horizon, runs);
    const int n = family.n();
    if (n > 62) throw std::invalid_argument("bitstring simulation supports n <= 62");
    if (mutation.kind == Mutation::Kind::bitwise && !(mutation.p > 0.0 && mutation.p < 1.0))
        throw std::invalid_argument("bitwise mutation rate must lie strictly between 0 and 1");
    if (!options.initial_levels.empty() &&
        static_cast<int>(options.initial_levels.size()) != n)
        throw std::invalid_argument("initial level distribution must have one entry per level");

    LevelSpace space;
    space.levels = n;
    space.fitness.resize(n + 1);
    for (int level = 0; level <= n; ++level) space.fitness[level] = family.fitness_at_level(level);

    const std::uint64_t full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    const auto& q0 = options.initial_levels;

    auto simulate_one = [&](RunRng& rng, auto record) {
        const int start_level = initial_level(rng, q0, n);
        // a fixed arrangement within the level; the dynamics only see counts
        std::uint64_t ones = full & ~((start_level == 64) ? ~0ULL : ((1ULL << start_level) - 1));
        int level = start_level;
        record(0, level);
        for (int t = 1; t <= horizon; ++t) {
            std::uint64_t candidate = ones;
            if (mutation.kind == Mutation::Kind::onebit) {
                candidate ^= 1ULL << rng.below(static_cast<std::uint64_t>(n));
            } else {
                for (int b = 0; b < n; ++b)
                    if (rng.bernoulli(mutation.p)) candidate ^= 1ULL << b;
            }
            const int cand_level = n - __builtin_popcountll(candidate);
            if (space.fitness[cand_level] > space.fitness[level]) {
                ones = candidate;
                level = cand_level;
            }
            record(t, level);
        }
    };

    CountGrid counts =
        accumulate_runs(horizon, n, runs, seed, options.threads, simulate_one);
    return summarize(counts, space, horizon, runs, seed,
                     family.label() + "-" + mutation.label() + "-mc");
}

EmpiricalSeries run_chain(const LevelProblem<double>& problem, int horizon, long long runs,
                          std::uint64_t seed, const SimOptions& options) {
    check_run_params(horizon, runs);
    const int L = problem.dim();
    ValidationReport report = validate_kernel(problem.kernel);
    if (!report.ok()) throw std::invalid_argument("invalid kernel: " + report.summary());

    LevelSpace space;
    space.levels = L;
    space.fitness.resize(L + 1);
    space.fitness[0] = problem.f_opt;
    for (int s = 1; s <= L; ++s) space.fitness[s] = problem.state_fitness(s - 1);

    std::vector<double> q0(L);
    for (int s = 0; s < L; ++s) q0[s] = problem.q0[s];

    auto simulate_one = [&](RunRng& rng, auto record) {
        int state = initial_level(rng, q0, L);
        record(0, state);
        for (int t = 1; t <= horizon; ++t) {
            if (state != 0) {  // the optimum is absorbing
                const int col = state - 1;
                const double u = rng.uniform01();
                double cum = 0;
                int next = 0;  // residual mass goes to the optimum
                for (int row = 0; row <= col; ++row) {
                    cum += problem.kernel.entry(row, col);
                    if (u < cum) {
                        next = row + 1;
                        break;
                    }
                }
                state = next;
            }
            record(t, state);
        }
    };

    CountGrid counts =
        accumulate_runs(horizon, L, runs, seed, options.threads, simulate_one);
    return summarize(counts, space, horizon, runs, seed, problem.label + "-chain-mc");
}

ComparisonReport compare(const TrajectoryMetrics<double>& analytic,
                         const EmpiricalSeries& empirical, double z_threshold) {
    if (analytic.horizon() != empirical.horizon)
        throw std::invalid_argument("horizon mismatch between analytic and empirical series");

    ComparisonReport report;
    report.threshold = z_threshold;
    report.rows.reserve(analytic.rows.size());
    for (std::size_t idx = 0; idx < analytic.rows.size(); ++idx) {
        const auto& a = analytic.rows[idx];
        const auto& e = empirical.rows[idx];
        const double diff = e.mean_fitness - a.fitness;
        double z;
        if (e.stderr_fitness > 0)
            z = diff / e.stderr_fitness;
        else
            z = (diff == 0) ? 0.0 : std::copysign(HUGE_VAL, diff);
        report.rows.push_back({a.t, a.fitness, e.mean_fitness, e.stderr_fitness, z});
        report.max_abs_z = std::max(report.max_abs_z, std::abs(z));
    }
    report.pass = report.max_abs_z <= z_threshold;
    return report;
}

}  // namespace eaconv

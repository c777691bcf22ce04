#pragma once

#include "eaconv/kernel.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace eaconv {

enum class Family { onemax, square, logarithmic, custom };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::onemax: return "onemax";
        case Family::square: return "square";
        case Family::logarithmic: return "log";
        case Family::custom: return "custom";
    }
    return "?";
}

/// Fitness of a bitstring as a function of its level (= number of zero bits).
/// Level 0 is the optimum. Built-ins on n bits: onemax n-i, square (n-i)^2,
/// log ln(n-i+1). Custom tables must be strictly decreasing in the level so
/// that strict elitism keeps the level chain triangular.
template <typename T>
class FitnessFamily {
public:
    static FitnessFamily onemax(int n) { return FitnessFamily(Family::onemax, n, {}); }
    static FitnessFamily square(int n) { return FitnessFamily(Family::square, n, {}); }

    static FitnessFamily logarithmic(int n) {
        if constexpr (scalar_traits<T>::exact)
            throw std::invalid_argument(
                "the log family has irrational fitness values; use the floating backend");
        return FitnessFamily(Family::logarithmic, n, {});
    }

    /// table[i] = fitness at level i, for i = 0..n.
    static FitnessFamily custom(std::vector<T> table) {
        const int n = static_cast<int>(table.size()) - 1;
        if (n < 1) throw std::invalid_argument("custom fitness table needs at least two levels");
        for (int i = 0; i < n; ++i)
            if (!(table[i] > table[i + 1]))
                throw std::invalid_argument(
                    "custom fitness table must be strictly decreasing in the level; levels " +
                    std::to_string(i) + " and " + std::to_string(i + 1) + " are not");
        return FitnessFamily(Family::custom, n, std::move(table));
    }

    static FitnessFamily built_in(Family f, int n) {
        switch (f) {
            case Family::onemax: return onemax(n);
            case Family::square: return square(n);
            case Family::logarithmic: return logarithmic(n);
            default: throw std::invalid_argument("custom families need an explicit table");
        }
    }

    Family kind() const noexcept { return kind_; }
    int n() const noexcept { return n_; }

    T fitness_at_level(int level) const {
        if (level < 0 || level > n_) throw std::out_of_range("level out of range");
        switch (kind_) {
            case Family::onemax: return T(n_ - level);
            case Family::square: return T(n_ - level) * T(n_ - level);
            case Family::logarithmic:
                if constexpr (scalar_traits<T>::exact)
                    throw std::invalid_argument("log family requires the floating backend");
                else
                    return std::log(static_cast<double>(n_ - level + 1));
            case Family::custom: return table_[level];
        }
        throw std::logic_error("unreachable");
    }

    T optimum() const { return fitness_at_level(0); }

    std::string label() const { return std::string(family_name(kind_)) + "-n" + std::to_string(n_); }

private:
    FitnessFamily(Family kind, int n, std::vector<T> table)
        : kind_(kind), n_(n), table_(std::move(table)) {
        if (n_ < 1) throw std::invalid_argument("bitstring length must be >= 1");
    }

    Family kind_;
    int n_;
    std::vector<T> table_;
};

/// A fitness landscape reduced to its level chain: the kernel over the L
/// non-optimal states, the fitness errors e (positive, nondecreasing), the
/// optimal fitness, and the initial distribution over non-optimal states
/// (the deficit 1 - sum q0 starts on the optimum).
template <typename T>
struct LevelProblem {
    TriangularKernel<T> kernel;
    std::vector<T> errors;
    T f_opt;
    std::vector<T> q0;
    std::string label;

    int dim() const noexcept { return kernel.dim(); }

    /// Fitness of non-optimal state s (0-based); the optimum has fitness f_opt.
    T state_fitness(int s) const { return f_opt - errors[s]; }
};

/// Assembles a problem from explicit data, verifying every invariant. No
/// silent normalisation: offending inputs are rejected with the violated
/// condition spelled out.
template <typename T>
LevelProblem<T> from_explicit(TriangularKernel<T> kernel, std::vector<T> errors, T f_opt,
                              std::vector<T> q0, std::string label = "explicit",
                              const T& eps_diag = scalar_traits<T>::default_eps_diag()) {
    const int n = kernel.dim();
    if (static_cast<int>(errors.size()) != n)
        throw std::invalid_argument("error vector length does not match kernel dimension");
    if (static_cast<int>(q0.size()) != n)
        throw std::invalid_argument("initial distribution length does not match kernel dimension");

    ValidationReport report = validate_kernel(kernel, eps_diag);
    if (!report.ok()) throw std::invalid_argument("invalid kernel: " + report.summary());

    for (int i = 0; i < n; ++i)
        if (!(errors[i] > T(0)))
            throw std::invalid_argument("fitness error of state " + std::to_string(i + 1) +
                                        " must be positive (every modeled state is non-optimal)");
    for (int i = 0; i + 1 < n; ++i)
        if (errors[i] > errors[i + 1])
            throw std::invalid_argument(
                "fitness errors must be nondecreasing (states sorted by decreasing fitness); "
                "states " +
                std::to_string(i + 1) + " and " + std::to_string(i + 2) + " are out of order");

    T mass(0);
    for (int i = 0; i < n; ++i) {
        if (q0[i] < T(0))
            throw std::invalid_argument("initial distribution has a negative entry at state " +
                                        std::to_string(i + 1));
        mass += q0[i];
    }
    if (mass > T(1) + scalar_traits<T>::column_slack())
        throw std::invalid_argument("initial distribution mass " + format_scalar(mass) +
                                    " exceeds 1");

    return LevelProblem<T>{std::move(kernel), std::move(errors), std::move(f_opt), std::move(q0),
                           std::move(label)};
}

namespace detail {

template <typename T>
std::vector<T> level_errors(const FitnessFamily<T>& family) {
    const int n = family.n();
    std::vector<T> e(n);
    const T f_opt = family.optimum();
    for (int s = 0; s < n; ++s) e[s] = f_opt - family.fitness_at_level(s + 1);
    return e;
}

}  // namespace detail

/// Level chain of the (1+1) strictly elitist EA with onebit mutation (flip
/// one uniformly chosen bit). For a strictly monotone level fitness the only
/// accepted move from level j is flipping one of the j zero bits, so
///
///     r(j-1, j) = j/n,   r(j, j) = 1 - j/n    (1-based levels),
///
/// and the chain is independent of the particular family. Starts from the
/// all-zeros string by default (all mass on the worst state).
template <typename T>
LevelProblem<T> onebit_level_chain(const FitnessFamily<T>& family) {
    const int n = family.n();
    std::vector<T> flat(static_cast<std::size_t>(n) * n, T(0));
    for (int j = 1; j <= n; ++j) {
        const T up = T(j) / T(n);
        if (j >= 2) flat[static_cast<std::size_t>(j - 2) * n + (j - 1)] = up;
        flat[static_cast<std::size_t>(j - 1) * n + (j - 1)] = T(1) - up;
    }
    TriangularKernel<T> kernel(n, std::move(flat));
    std::vector<T> q0(n, T(0));
    q0[n - 1] = T(1);
    return LevelProblem<T>{std::move(kernel), detail::level_errors(family), family.optimum(),
                           std::move(q0), family.label() + "-onebit"};
}

/// Level chain for bitwise mutation: every bit flips independently with rate
/// p. The move probability from level j to a strictly better level i < j sums
/// over b, the number of one bits flipped back to zero:
///
///     sum_b C(j, j-i+b) p^(j-i+b) (1-p)^(i-b) * C(n-j, b) p^b (1-p)^(n-j-b),
///
/// equal or worse offspring are rejected, and the diagonal keeps the rest of
/// the mass minus the jump to the optimum. Fails with a diagnostic if the
/// resulting diagonal violates the unique condition.
template <typename T>
LevelProblem<T> bitwise_level_chain(const FitnessFamily<T>& family, const T& p_mut,
                                    const T& eps_diag = scalar_traits<T>::default_eps_diag()) {
    if (!(p_mut > T(0)) || !(p_mut < T(1)))
        throw std::invalid_argument("bitwise mutation rate must lie strictly between 0 and 1");
    const int n = family.n();
    if (n > 62) throw std::invalid_argument("bitwise level chains support n <= 62");

    // binomials fit comfortably in 64 bits for n <= 62
    std::vector<std::vector<unsigned long long>> choose(n + 1,
                                                        std::vector<unsigned long long>(n + 1, 0));
    for (int a = 0; a <= n; ++a) {
        choose[a][0] = 1;
        for (int b = 1; b <= a; ++b)
            choose[a][b] = choose[a - 1][b - 1] + (b <= a - 1 ? choose[a - 1][b] : 0);
    }
    std::vector<T> p_pow(n + 1), q_pow(n + 1);
    p_pow[0] = T(1);
    q_pow[0] = T(1);
    const T q = T(1) - p_mut;
    for (int a = 1; a <= n; ++a) {
        p_pow[a] = p_pow[a - 1] * p_mut;
        q_pow[a] = q_pow[a - 1] * q;
    }

    auto jump = [&](int j, int i) {  // 1-based levels, i < j
        T total(0);
        const int b_max = std::min(i, n - j);
        for (int b = 0; b <= b_max; ++b) {
            const int f0 = j - i + b;  // zero bits flipped to one
            total += T(choose[j][f0]) * p_pow[f0] * q_pow[i - b] * T(choose[n - j][b]) * p_pow[b] *
                     q_pow[n - j - b];
        }
        return total;
    };

    std::vector<T> flat(static_cast<std::size_t>(n) * n, T(0));
    for (int j = 1; j <= n; ++j) {
        T leaving = jump(j, 0);  // straight to the optimum
        for (int i = 1; i < j; ++i) {
            const T r = jump(j, i);
            flat[static_cast<std::size_t>(i - 1) * n + (j - 1)] = r;
            leaving += r;
        }
        flat[static_cast<std::size_t>(j - 1) * n + (j - 1)] = T(1) - leaving;
    }
    TriangularKernel<T> kernel(n, std::move(flat));

    ValidationReport report = validate_kernel(kernel, eps_diag);
    if (!report.ok())
        throw std::invalid_argument("bitwise level chain is not a valid kernel: " +
                                    report.summary());

    std::vector<T> q0(n, T(0));
    q0[n - 1] = T(1);
    return LevelProblem<T>{std::move(kernel), detail::level_errors(family), family.optimum(),
                           std::move(q0),
                           family.label() + "-bitwise-p" + format_scalar(p_mut)};
}

/// The conservative bidiagonal bound kernel S: same diagonal as K (hence the
/// same eigenvalues and unique condition), and all off-diagonal movement
/// collapsed onto the superdiagonal, s(i, i+1) = 1 - r(i+1, i+1).
template <typename T>
TriangularKernel<T> bound_kernel(const TriangularKernel<T>& k) {
    const int n = k.dim();
    std::vector<T> flat(static_cast<std::size_t>(n) * n, T(0));
    for (int i = 0; i < n; ++i) {
        flat[static_cast<std::size_t>(i) * n + i] = k.entry(i, i);
        if (i + 1 < n) flat[static_cast<std::size_t>(i) * n + (i + 1)] = T(1) - k.entry(i + 1, i + 1);
    }
    return TriangularKernel<T>(n, std::move(flat));
}

}  // namespace eaconv

#pragma once

#include "eaconv/level_model.hpp"
#include "eaconv/power_factors.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace eaconv {

/// Spectral form of the error trajectory: E_t = sum_k c_k * lambda_k^(t-1)
/// for t >= 1, where lambda_k are the kernel's diagonal entries (its
/// eigenvalues) and the c_k fold the fitness errors, the power factors and
/// the initial distribution into one coefficient per eigenvalue.
template <typename T>
struct SpectralErrorModel {
    std::vector<T> eigenvalues;
    std::vector<T> coefficients;
    T f_opt;
    T initial_error;    // E_0 = e^T q0 / f_opt
    T initial_fitness;  // F_0 = f_opt * (1 - E_0)
    std::string label;
    std::vector<std::string> warnings;

    int dim() const noexcept { return static_cast<int>(eigenvalues.size()); }
};

/// Analytic F/E/R series over t = 0..horizon. R is undefined at t = 0.
template <typename T>
struct TrajectoryMetrics {
    struct Row {
        int t;
        T fitness;
        T error;
        std::optional<double> rate;
    };

    T f_opt;
    std::string label;
    std::vector<Row> rows;

    int horizon() const noexcept { return static_cast<int>(rows.size()) - 1; }
};

/// Folds a problem and its power factors into the spectral model:
///
///     c_k = sum_{i<=j} e_i * p(i,j,k) * q0_j / f_opt.
///
/// Eigenvalues outside [0, 1) and an initial error outside [0, 1] are
/// reported as warnings rather than errors; they signal a chain that cannot
/// converge (an absorbing non-optimal state) or fitness values below zero.
template <typename T>
SpectralErrorModel<T> coefficients(const LevelProblem<T>& problem,
                                   const PowerFactors<T>& factors) {
    const int n = problem.dim();
    if (factors.dim() != n)
        throw std::invalid_argument("power factors do not match the problem dimension");
    if (!(problem.f_opt > T(0)))
        throw std::invalid_argument("optimal fitness must be positive");

    SpectralErrorModel<T> model;
    model.label = problem.label;
    model.f_opt = problem.f_opt;
    model.eigenvalues = problem.kernel.diagonal();
    model.coefficients.assign(n, T(0));

    for (int k = 0; k < n; ++k) {
        T acc(0);
        for (int j = k; j < n; ++j) {
            if (problem.q0[j] == T(0)) continue;
            T inner(0);
            for (int i = 0; i <= k; ++i) inner += problem.errors[i] * factors.at(i, j, k);
            acc += inner * problem.q0[j];
        }
        model.coefficients[k] = acc / problem.f_opt;
    }

    T e0(0);
    for (int i = 0; i < n; ++i) e0 += problem.errors[i] * problem.q0[i];
    model.initial_error = e0 / problem.f_opt;
    model.initial_fitness = problem.f_opt * (T(1) - model.initial_error);

    for (int k = 0; k < n; ++k) {
        const T& lam = model.eigenvalues[k];
        if (lam < T(0) || !(lam < T(1)))
            model.warnings.push_back("eigenvalue " + std::to_string(k + 1) + " = " +
                                     format_scalar(lam) +
                                     " lies outside [0,1); the error cannot decay from state " +
                                     std::to_string(k + 1));
    }
    if (model.initial_error < T(0) || model.initial_error > T(1))
        model.warnings.push_back("initial relative error " + format_scalar(model.initial_error) +
                                 " lies outside [0,1]");
    return model;
}

/// E_t. For t = 0 this is the stored initial error; the spectral formula
/// applies from t = 1 on, with 0^0 = 1 so singular eigenvalues are fine.
template <typename T>
T error_at(const SpectralErrorModel<T>& model, long long t) {
    if (t < 0) throw std::invalid_argument("error_at: t must be >= 0");
    if (t == 0) return model.initial_error;
    T s(0);
    for (int k = 0; k < model.dim(); ++k)
        s += model.coefficients[k] * pow_nonneg(model.eigenvalues[k], t - 1);
    return s;
}

/// F_t = f_opt * (1 - E_t).
template <typename T>
T fitness_at(const SpectralErrorModel<T>& model, long long t) {
    return model.f_opt * (T(1) - error_at(model, t));
}

/// Average convergence rate R_t = 1 - (E_t / E_0)^(1/t), t >= 1. Undefined
/// when the run starts on the optimum (E_0 = 0).
template <typename T>
double avg_rate_at(const SpectralErrorModel<T>& model, long long t) {
    if (t < 1) throw std::invalid_argument("avg_rate_at: t must be >= 1");
    if (model.initial_error == T(0))
        throw std::domain_error("average convergence rate is undefined when E_0 = 0");
    const double ratio = to_double(error_at(model, t)) / to_double(model.initial_error);
    return 1.0 - std::pow(ratio, 1.0 / static_cast<double>(t));
}

/// Evaluates the whole trajectory for t = 0..horizon. Keeps running powers of
/// the eigenvalues, so each additional generation costs at most 2L
/// multiplications (counted in `ops` when supplied).
template <typename T>
TrajectoryMetrics<T> series(const SpectralErrorModel<T>& model, int horizon,
                            OpCount* ops = nullptr) {
    if (horizon < 1) throw std::invalid_argument("series: horizon must be >= 1");
    const int n = model.dim();
    if (model.initial_error == T(0))
        throw std::domain_error("average convergence rate is undefined when E_0 = 0");

    TrajectoryMetrics<T> out;
    out.f_opt = model.f_opt;
    out.label = model.label;
    out.rows.reserve(horizon + 1);
    out.rows.push_back({0, model.initial_fitness, model.initial_error, std::nullopt});

    const double e0 = to_double(model.initial_error);
    std::vector<T> pw(n, T(1));  // lambda_k^(t-1), seeded at t = 1 (0^0 = 1)
    for (int t = 1; t <= horizon; ++t) {
        if (t > 1) {
            for (int k = 0; k < n; ++k) pw[k] = pw[k] * model.eigenvalues[k];
            if (ops) ops->mul += n;
        }
        T err(0);
        for (int k = 0; k < n; ++k) err += model.coefficients[k] * pw[k];
        if (ops) ops->mul += n;
        const T fit = model.f_opt * (T(1) - err);
        const double rate = 1.0 - std::pow(to_double(err) / e0, 1.0 / static_cast<double>(t));
        out.rows.push_back({t, fit, err, rate});
    }
    return out;
}

/// Oracle: E_t by t sparse matrix-vector iterations q <- R q, then
/// e^T q / f_opt. Never touches the power factors.
template <typename T>
T exact_error_via_matrix(const LevelProblem<T>& problem, long long t) {
    if (t < 0) throw std::invalid_argument("exact_error_via_matrix: t must be >= 0");
    const int n = problem.dim();
    std::vector<T> q = problem.q0;
    std::vector<T> next(n);
    for (long long step = 0; step < t; ++step) {
        for (int i = 0; i < n; ++i) {
            T s(0);
            for (int j = i; j < n; ++j) s += problem.kernel.entry(i, j) * q[j];
            next[i] = s;
        }
        q.swap(next);
    }
    T e(0);
    for (int i = 0; i < n; ++i) e += problem.errors[i] * q[i];
    return e / problem.f_opt;
}

struct ReportOptions {
    int digits = 3;        // decimals shown for coefficients
    double cutoff = 5e-4;  // terms with 0 < |c| < cutoff are omitted (and noted)
};

namespace detail {

/// Fixed-decimal formatting with ties rounded away from zero, so 1.3125
/// prints as 1.313 (glibc's round-to-even would give 1.312).
inline std::string fixed_decimals(double v, int digits) {
    double scale = 1.0;
    for (int i = 0; i < digits; ++i) scale *= 10.0;
    long long scaled = std::llround(std::abs(v) * scale);
    std::string body = std::to_string(scaled);
    if (digits > 0) {
        if (static_cast<int>(body.size()) <= digits)
            body.insert(body.begin(), digits + 1 - body.size(), '0');
        body.insert(body.size() - digits, ".");
    }
    return (v < 0 ? "-" : "") + body;
}

inline std::string trim_trailing_zeros(std::string s) {
    if (s.find('.') == std::string::npos) return s;
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

/// "c1×l1^(t−1) + c2×l2^(t−1) − ..." over the kept terms; empty if none.
inline std::string exponential_mixture(const std::vector<double>& cs,
                                       const std::vector<double>& lambdas, int digits,
                                       double cutoff, int* omitted) {
    std::string expr;
    int skipped = 0;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const double c = cs[k];
        if (c == 0.0) continue;  // exact zeros contribute nothing, drop silently
        if (std::abs(c) < cutoff) {
            ++skipped;
            continue;
        }
        if (expr.empty())
            expr += c < 0 ? "−" : "";
        else
            expr += c < 0 ? " − " : " + ";
        expr += fixed_decimals(std::abs(c), digits);
        expr += "×";
        expr += fixed_decimals(lambdas[k], 2);
        expr += "^(t−1)";
    }
    if (omitted) *omitted = skipped;
    return expr;
}

}  // namespace detail

/// Human-readable closed forms for F_t, E_t and R_t, one per line, with
/// coefficients rounded for display only. Terms whose coefficient is tiny but
/// nonzero are dropped and the omission is noted on the line.
template <typename T>
std::string closed_form_report(const SpectralErrorModel<T>& model,
                               const ReportOptions& opts = {}) {
    const int n = model.dim();
    std::vector<double> cs(n), lambdas(n);
    for (int k = 0; k < n; ++k) {
        cs[k] = to_double(model.coefficients[k]);
        lambdas[k] = to_double(model.eigenvalues[k]);
    }

    auto note_omissions = [&opts](int omitted) {
        if (omitted == 0) return std::string();
        std::ostringstream os;
        os << "   (" << omitted << (omitted == 1 ? " term" : " terms") << " with |c| < "
           << opts.cutoff << " omitted)";
        return os.str();
    };

    int omitted = 0;
    std::string mixture =
        detail::exponential_mixture(cs, lambdas, opts.digits, opts.cutoff, &omitted);
    const std::string f_opt_str =
        detail::trim_trailing_zeros(detail::fixed_decimals(to_double(model.f_opt), opts.digits));

    std::ostringstream os;
    if (mixture.empty()) {
        os << "F_t = " << f_opt_str << note_omissions(omitted) << "\n";
        os << "E_t = 0" << note_omissions(omitted) << "\n";
    } else {
        os << "F_t = " << f_opt_str << "×(1 − " << mixture << ")"
           << note_omissions(omitted) << "\n";
        os << "E_t = " << mixture << note_omissions(omitted) << "\n";
    }

    if (model.initial_error == T(0)) {
        os << "R_t undefined (E_0 = 0)\n";
    } else {
        // R_t = 1 - (E_t / E_0)^(1/t): fold the division into the coefficients
        const double e0 = to_double(model.initial_error);
        std::vector<double> scaled(cs);
        for (double& c : scaled) c /= e0;
        int omitted_r = 0;
        std::string rate_mix =
            detail::exponential_mixture(scaled, lambdas, opts.digits, opts.cutoff, &omitted_r);
        if (rate_mix.empty())
            os << "R_t = 1\n";
        else
            os << "R_t = 1 − (" << rate_mix << ")^(1/t)" << note_omissions(omitted_r) << "\n";
    }
    return os.str();
}

}  // namespace eaconv

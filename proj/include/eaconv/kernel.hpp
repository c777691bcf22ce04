#pragma once

#include "eaconv/scalar.hpp"

#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

namespace eaconv {

/// Transition submatrix among the non-optimal states of a strictly elitist
/// (1+1) EA. entry(i, j) is the one-step probability of moving from state j
/// (column) to state i (row); indices are 0-based and states are sorted by
/// increasing fitness error. Strict elitism makes the matrix upper triangular
/// and substochastic: the column deficit 1 - sum_i entry(i, j) is the
/// probability of jumping from state j straight to the optimum.
///
/// Immutable after construction; cheap to copy for the sizes that matter.
template <typename T>
class TriangularKernel {
public:
    TriangularKernel(int dim, std::vector<T> row_major) : dim_(dim), a_(std::move(row_major)) {
        if (dim_ <= 0) throw std::invalid_argument("kernel dimension must be positive");
        if (a_.size() != static_cast<std::size_t>(dim_) * dim_)
            throw std::invalid_argument("kernel storage does not match dimension");
    }

    static TriangularKernel from_rows(const std::vector<std::vector<T>>& rows) {
        const int n = static_cast<int>(rows.size());
        std::vector<T> flat;
        flat.reserve(static_cast<std::size_t>(n) * n);
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != n)
                throw std::invalid_argument("kernel rows must form a square matrix");
            for (const auto& v : row) flat.push_back(v);
        }
        return TriangularKernel(n, std::move(flat));
    }

    int dim() const noexcept { return dim_; }

    const T& entry(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

    T column_sum(int j) const {
        T s(0);
        for (int i = 0; i <= j; ++i) s += entry(i, j);
        return s;
    }

    std::vector<T> diagonal() const {
        std::vector<T> d(dim_);
        for (int i = 0; i < dim_; ++i) d[i] = entry(i, i);
        return d;
    }

    const std::vector<T>& data() const noexcept { return a_; }

    bool operator==(const TriangularKernel& other) const = default;

private:
    int dim_;
    std::vector<T> a_;
};

/// Dense square matrix used for kernel powers and oracle results.
template <typename T>
struct SquareMatrix {
    int dim = 0;
    std::vector<T> a;  // row-major

    SquareMatrix() = default;
    explicit SquareMatrix(int n) : dim(n), a(static_cast<std::size_t>(n) * n, T(0)) {}

    static SquareMatrix identity(int n) {
        SquareMatrix m(n);
        for (int i = 0; i < n; ++i) m.at(i, i) = T(1);
        return m;
    }

    T& at(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }
    const T& at(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }

    bool operator==(const SquareMatrix& other) const = default;
};

/// Diagnostic outcome of kernel validation. Empty means valid; otherwise each
/// entry names one violated invariant.
struct ValidationReport {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }

    std::string summary() const {
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "; ";
            s += v;
        }
        return s;
    }
};

/// Checks triangularity, entry range, column substochasticity and the unique
/// condition (pairwise distinct diagonal entries beyond eps_diag). Purely
/// diagnostic; the computing operations reject kernels whose report is
/// non-empty. State numbers in messages are 1-based.
template <typename T>
ValidationReport validate_kernel(const TriangularKernel<T>& k, const T& eps_diag) {
    ValidationReport report;
    const int n = k.dim();
    auto note = [&report](const std::string& msg) { report.violations.push_back(msg); };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (k.entry(i, j) != T(0)) {
                std::ostringstream os;
                os << "entry (" << i + 1 << "," << j + 1 << ") = " << format_scalar(k.entry(i, j))
                   << " lies below the diagonal and must be zero";
                note(os.str());
            }

    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            const T& v = k.entry(i, j);
            if (v < T(0) || v > T(1)) {
                std::ostringstream os;
                os << "entry (" << i + 1 << "," << j + 1 << ") = " << format_scalar(v)
                   << " is not a probability in [0,1]";
                note(os.str());
            }
        }

    const T slack = scalar_traits<T>::column_slack();
    for (int j = 0; j < n; ++j) {
        T s = k.column_sum(j);
        if (s > T(1) + slack) {
            std::ostringstream os;
            os << "column " << j + 1 << " sums to " << format_scalar(s)
               << " which exceeds 1 (kernel must be substochastic)";
            note(os.str());
        }
    }

    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            T gap = k.entry(i, i) - k.entry(j, j);
            if (gap < T(0)) gap = -gap;
            if (!(gap > eps_diag)) {
                std::ostringstream os;
                os << "states " << i + 1 << " and " << j + 1
                   << " have colliding diagonal entries (" << format_scalar(k.entry(i, i)) << " vs "
                   << format_scalar(k.entry(j, j)) << "); the unique condition requires a gap > "
                   << format_scalar(eps_diag);
                note(os.str());
            }
        }

    return report;
}

template <typename T>
ValidationReport validate_kernel(const TriangularKernel<T>& k) {
    return validate_kernel(k, scalar_traits<T>::default_eps_diag());
}

/// t repeated matrix multiplications; t = 0 gives the identity. Independent
/// oracle for the closed-form power path.
template <typename T>
SquareMatrix<T> brute_force_power(const TriangularKernel<T>& k, long long t) {
    if (t < 0) throw std::invalid_argument("brute_force_power: t must be >= 0");
    const int n = k.dim();
    SquareMatrix<T> result = SquareMatrix<T>::identity(n);
    for (long long step = 0; step < t; ++step) {
        SquareMatrix<T> next(n);
        // both factors are upper triangular, so l runs i..j
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                T s(0);
                for (int l = i; l <= j; ++l) s += result.at(i, l) * k.entry(l, j);
                next.at(i, j) = s;
            }
        result = std::move(next);
    }
    return result;
}

}  // namespace eaconv

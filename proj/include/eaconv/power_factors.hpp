#pragma once

#include "eaconv/kernel.hpp"

#include <cstdint>
#include <vector>

namespace eaconv {

/// Multiplication/division counter used by the cost-scaling tests.
struct OpCount {
    std::uint64_t mul = 0;
    std::uint64_t div = 0;

    std::uint64_t total() const noexcept { return mul + div; }
};

/// The tensor p(i,j,k) that expresses every entry of the t-th kernel power as
/// a mixture of diagonal powers:
///
///     (R^t)(i,j) = sum_{k=i..j} p(i,j,k) * r(k,k)^(t-1),   t >= 1,
///
/// with the 0^0 = 1 convention so t = 1 reproduces R itself. p(i,j,k) is zero
/// outside i <= k <= j, and p(j,j,j) = r(j,j).
template <typename T>
class PowerFactors {
public:
    PowerFactors(int dim, std::vector<T> dense)
        : dim_(dim), p_(std::move(dense)) {
        const auto n = static_cast<std::size_t>(dim_);
        if (dim_ <= 0 || p_.size() != n * n * n)
            throw std::invalid_argument("power factor storage does not match dimension");
    }

    int dim() const noexcept { return dim_; }

    const T& at(int i, int j, int k) const {
        return p_[(static_cast<std::size_t>(i) * dim_ + j) * dim_ + k];
    }

private:
    int dim_;
    std::vector<T> p_;
};

/// Computes the power factors of a valid kernel.
///
/// The factors of a triangular matrix with pairwise distinct diagonal are
/// rank-one in (i,j): p(i,j,k) = r(k,k) * u_k(i) * v_k(j), where u_k and v_k
/// are the right and left eigenvectors for eigenvalue r(k,k), normalised to
/// u_k(k) = v_k(k) = 1. Both are obtained by back substitution, so the whole
/// tensor costs about two multiplications per stored entry. The recursive
/// definition of the factors is kept in the test suite as an independent
/// oracle for this routine.
///
/// The divisions are by diagonal gaps r(k,k) - r(j,j) only, never by a
/// diagonal entry itself, so a singular kernel (some r(j,j) = 0) is fine;
/// only the unique condition is required. The multiplication schedule is
/// data independent: `ops`, when supplied, counts the same totals for every
/// kernel of a given dimension.
template <typename T>
PowerFactors<T> compute_power_factors(const TriangularKernel<T>& kernel, const T& eps_diag,
                                      OpCount* ops = nullptr) {
    ValidationReport report = validate_kernel(kernel, eps_diag);
    if (!report.ok())
        throw std::invalid_argument("invalid kernel: " + report.summary());

    const int n = kernel.dim();
    const auto nn = static_cast<std::size_t>(n);
    std::vector<T> dense(nn * nn * nn, T(0));
    auto slot = [&dense, n](int i, int j, int k) -> T& {
        return dense[(static_cast<std::size_t>(i) * n + j) * n + k];
    };

    OpCount local;
    std::vector<T> u(nn), w(nn);  // u_k and r(k,k) * v_k
    for (int k = 0; k < n; ++k) {
        const T lambda = kernel.entry(k, k);

        u[k] = T(1);
        for (int i = k - 1; i >= 0; --i) {
            T s(0);
            for (int l = i + 1; l <= k; ++l) {
                s += kernel.entry(i, l) * u[l];
                ++local.mul;
            }
            u[i] = s / (lambda - kernel.entry(i, i));
            ++local.div;
        }

        w[k] = lambda;
        for (int j = k + 1; j < n; ++j) {
            T s(0);
            for (int l = k; l < j; ++l) {
                s += w[l] * kernel.entry(l, j);
                ++local.mul;
            }
            w[j] = s / (lambda - kernel.entry(j, j));
            ++local.div;
        }
        // w now holds lambda * v_k componentwise: w[k] = lambda seeds the
        // recursion, and the left-eigenvector relation is linear.

        for (int j = k; j < n; ++j) {
            slot(k, j, k) = w[j];
            for (int i = 0; i < k; ++i) {
                slot(i, j, k) = u[i] * w[j];
                ++local.mul;
            }
        }
    }

    if (ops) {
        ops->mul += local.mul;
        ops->div += local.div;
    }
    return PowerFactors<T>(n, std::move(dense));
}

template <typename T>
PowerFactors<T> compute_power_factors(const TriangularKernel<T>& kernel, OpCount* ops = nullptr) {
    return compute_power_factors(kernel, scalar_traits<T>::default_eps_diag(), ops);
}

/// Entry (i,j) of the t-th power of the kernel, t >= 1, via the closed form.
template <typename T>
T power_entry(const PowerFactors<T>& factors, const TriangularKernel<T>& kernel, int i, int j,
              long long t) {
    const int n = factors.dim();
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw std::out_of_range("power_entry: index out of range");
    if (kernel.dim() != n)
        throw std::invalid_argument("power_entry: kernel and factors disagree on dimension");
    if (t < 1) throw std::invalid_argument("power_entry: t must be >= 1");
    T s(0);
    for (int k = i; k <= j; ++k)
        s += factors.at(i, j, k) * pow_nonneg(kernel.entry(k, k), t - 1);
    return s;
}

/// Full t-th power assembled from power_entry; upper triangular by
/// construction.
template <typename T>
SquareMatrix<T> kernel_power(const PowerFactors<T>& factors, const TriangularKernel<T>& kernel,
                             long long t) {
    if (t < 1) throw std::invalid_argument("kernel_power: t must be >= 1");
    const int n = factors.dim();
    SquareMatrix<T> m(n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) m.at(i, j) = power_entry(factors, kernel, i, j, t);
    return m;
}

}  // namespace eaconv

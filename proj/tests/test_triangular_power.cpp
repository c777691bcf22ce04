#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eaconv/analytics.hpp"
#include "eaconv/power_factors.hpp"
#include "support/fixtures.hpp"
#include "support/reference.hpp"

#include <cmath>

using namespace eaconv;
using fixtures::matrix24;

namespace {

double max_entry_deviation(const SquareMatrix<double>& a, const SquareMatrix<double>& b) {
    double dev = 0;
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < a.dim; ++j) dev = std::max(dev, std::abs(a.at(i, j) - b.at(i, j)));
    return dev;
}

}  // namespace

TEST_CASE("validate_kernel accepts the worked 4-state kernel") {
    CHECK(validate_kernel(matrix24<double>()).ok());
    CHECK(validate_kernel(matrix24<Rational>()).ok());
}

TEST_CASE("validate_kernel reports colliding diagonals") {
    auto k = TriangularKernel<double>::from_rows({{0.5, 0.1}, {0.0, 0.5}});
    auto report = validate_kernel(k);
    REQUIRE_FALSE(report.ok());
    CHECK(report.summary().find("colliding diagonal") != std::string::npos);
    CHECK(report.summary().find("states 1 and 2") != std::string::npos);
}

TEST_CASE("validate_kernel reports entries below the diagonal") {
    auto k = TriangularKernel<double>::from_rows({{0.5, 0.2}, {0.3, 0.4}});
    auto report = validate_kernel(k);
    REQUIRE_FALSE(report.ok());
    CHECK(report.summary().find("below the diagonal") != std::string::npos);
}

TEST_CASE("validate_kernel reports range and column-sum violations") {
    auto k = TriangularKernel<double>::from_rows({{0.9, 1.2}, {0.0, 0.3}});
    auto report = validate_kernel(k);
    REQUIRE_FALSE(report.ok());
    CHECK(report.summary().find("not a probability") != std::string::npos);
    CHECK(report.summary().find("exceeds 1") != std::string::npos);
}

TEST_CASE("validate_kernel honours the configurable diagonal tolerance") {
    auto k = TriangularKernel<double>::from_rows({{0.50, 0.1}, {0.0, 0.45}});
    CHECK(validate_kernel(k).ok());
    CHECK_FALSE(validate_kernel(k, 0.1).ok());
}

TEST_CASE("power factors of the worked kernel match the published tensors exactly") {
    auto check_backend = [](auto zero) {
        using T = decltype(zero);
        auto factors = compute_power_factors(matrix24<T>());
        for (int i = 0; i < 4; ++i) {
            auto slice = fixtures::expected_tensor_slice<T>(i);
            for (int k = 0; k < 4; ++k)
                for (int j = 0; j < 4; ++j) {
                    CAPTURE(i);
                    CAPTURE(j);
                    CAPTURE(k);
                    CHECK(factors.at(i, j, k) == slice[k][j]);
                }
        }
    };
    check_backend(Rational(0));
    check_backend(0.0);  // every value is dyadic, so doubles are exact here too
}

TEST_CASE("the defining recursion and the production path agree") {
    auto factors = compute_power_factors(matrix24<Rational>());
    auto direct = reference::power_factors_by_recursion(matrix24<Rational>());
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) CHECK(factors.at(i, j, k) == direct.at(i, j, k));

    reference::ProblemGen gen(2024);
    for (int trial = 0; trial < 25; ++trial) {
        auto kernel = gen.rational_kernel(gen.uniform_int(1, 7));
        auto a = compute_power_factors(kernel);
        auto b = reference::power_factors_by_recursion(kernel);
        for (int i = 0; i < kernel.dim(); ++i)
            for (int j = 0; j < kernel.dim(); ++j)
                for (int k = 0; k < kernel.dim(); ++k) {
                    CAPTURE(trial);
                    REQUIRE(a.at(i, j, k) == b.at(i, j, k));
                }
    }
}

TEST_CASE("diagonal kernels have no cross coupling") {
    auto k = TriangularKernel<double>::from_rows({{0.7, 0.0}, {0.0, 0.2}});
    auto factors = compute_power_factors(k);
    CHECK(factors.at(0, 0, 0) == 0.7);
    CHECK(factors.at(1, 1, 1) == 0.2);
    CHECK(factors.at(0, 1, 0) == 0.0);
    CHECK(factors.at(0, 1, 1) == 0.0);
}

TEST_CASE("factor completeness: the factors of each entry sum to the entry") {
    reference::ProblemGen gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto kernel = gen.kernel(gen.uniform_int(1, 8));
        auto factors = compute_power_factors(kernel);
        for (int i = 0; i < kernel.dim(); ++i)
            for (int j = i; j < kernel.dim(); ++j) {
                double sum = 0;
                for (int k = i; k <= j; ++k) sum += factors.at(i, j, k);
                CHECK(std::abs(sum - kernel.entry(i, j)) <= 1e-12);
            }
    }
    // and exactly, on rational inputs
    auto kernel = gen.rational_kernel(6);
    auto factors = compute_power_factors(kernel);
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) {
            Rational sum(0);
            for (int k = i; k <= j; ++k) sum += factors.at(i, j, k);
            CHECK(sum == kernel.entry(i, j));
        }
}

TEST_CASE("compute_power_factors rejects kernels failing the unique condition") {
    auto k = TriangularKernel<double>::from_rows({{0.5, 0.1}, {0.0, 0.5 + 1e-12}});
    CHECK_THROWS_AS(compute_power_factors(k), std::invalid_argument);
}

TEST_CASE("power_entry on the worked kernel") {
    auto k = matrix24<double>();
    auto factors = compute_power_factors(k);
    CHECK(power_entry(factors, k, 0, 1, 1) == doctest::Approx(0.5).epsilon(1e-14));
    // brute force gives 0.75*0.5 + 0.5*0.5 = 0.625
    CHECK(power_entry(factors, k, 0, 1, 2) == doctest::Approx(0.625).epsilon(1e-14));
    // brute force gives 0.25*1.0 + 1.0*0.0 = 0.25
    CHECK(power_entry(factors, k, 2, 3, 2) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK_THROWS_AS(power_entry(factors, k, 0, 4, 1), std::out_of_range);
    CHECK_THROWS_AS(power_entry(factors, k, -1, 0, 1), std::out_of_range);
    CHECK_THROWS_AS(power_entry(factors, k, 0, 0, 0), std::invalid_argument);
}

TEST_CASE("kernel_power reproduces the kernel at t = 1 despite the zero eigenvalue") {
    auto k = matrix24<Rational>();
    auto factors = compute_power_factors(k);
    auto p1 = kernel_power(factors, k, 1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(p1.at(i, j) == k.entry(i, j));
}

TEST_CASE("brute_force_power basics") {
    auto k = matrix24<double>();
    CHECK(brute_force_power(k, 0) == SquareMatrix<double>::identity(4));
    auto p1 = brute_force_power(k, 1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(p1.at(i, j) == k.entry(i, j));
    CHECK(brute_force_power(k, 2).at(0, 1) == doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("closed form equals brute force over randomized kernels") {
    reference::ProblemGen gen(31337);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = gen.uniform_int(1, 8);
        auto kernel = gen.kernel(dim);
        auto factors = compute_power_factors(kernel);
        SquareMatrix<double> brute = SquareMatrix<double>::identity(dim);
        for (int t = 1; t <= 100; ++t) {
            SquareMatrix<double> next(dim);
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j) {
                    double s = 0;
                    for (int l = i; l <= j; ++l) s += brute.at(i, l) * kernel.entry(l, j);
                    next.at(i, j) = s;
                }
            brute = next;
            if (t > 1 && t % 7 != 0 && t != 50 && t != 100) continue;  // sample the horizon
            auto closed = kernel_power(factors, kernel, t);
            CAPTURE(trial);
            CAPTURE(t);
            REQUIRE(max_entry_deviation(closed, brute) <= 1e-9);
            // powers of a substochastic kernel stay substochastic
            for (int j = 0; j < dim; ++j) {
                double col = 0;
                for (int i = 0; i <= j; ++i) col += closed.at(i, j);
                REQUIRE(col <= 1.0 + 1e-9);
            }
        }
    }
}

TEST_CASE("closed form equals brute force exactly on rational kernels") {
    reference::ProblemGen gen(99);
    for (int trial = 0; trial < 6; ++trial) {
        const int dim = gen.uniform_int(1, 6);
        auto kernel = gen.rational_kernel(dim);
        auto factors = compute_power_factors(kernel);
        for (long long t : {1, 2, 3, 7, 20}) {
            auto closed = kernel_power(factors, kernel, t);
            auto brute = brute_force_power(kernel, t);
            CAPTURE(trial);
            REQUIRE(closed == brute);
        }
    }
}

TEST_CASE("induction step: one more application of the kernel") {
    reference::ProblemGen gen(5150);
    for (int trial = 0; trial < 15; ++trial) {
        const int dim = gen.uniform_int(2, 8);
        auto kernel = gen.kernel(dim);
        auto factors = compute_power_factors(kernel);
        for (long long t : {1, 2, 5, 17, 60}) {
            auto pt = kernel_power(factors, kernel, t);
            auto pt1 = kernel_power(factors, kernel, t + 1);
            for (int i = 0; i < dim; ++i)
                for (int j = i; j < dim; ++j) {
                    double s = 0;
                    for (int l = i; l <= j; ++l) s += pt.at(i, l) * kernel.entry(l, j);
                    CHECK(std::abs(pt1.at(i, j) - s) <= 1e-10);
                }
        }
    }
}

TEST_CASE("factor computation cost is data independent and within budget") {
    reference::ProblemGen gen(8);
    for (int dim : {4, 8, 16}) {
        OpCount a, b;
        compute_power_factors(gen.kernel(dim), &a);
        compute_power_factors(gen.kernel(dim), &b);
        CHECK(a.total() == b.total());

        // twice the number of tensor entries, the classical operation count
        const std::uint64_t L = dim;
        const std::uint64_t budget = 2 * ((L + 2) * (L + 1) * L / 6);
        CAPTURE(dim);
        CHECK(a.total() <= 2 * budget);
        CHECK(a.total() >= budget / 2);
    }
}

TEST_CASE("series evaluation costs at most 2L multiplications per generation") {
    auto k = matrix24<double>();
    auto factors = compute_power_factors(k);
    auto problem = fixtures::onemax4_problem<double>();
    auto model = coefficients(problem, factors);

    OpCount ops;
    std::uint64_t last = 0;
    auto run = [&](int horizon) {
        ops = OpCount{};
        (void)series(model, horizon, &ops);
        return ops.total();
    };
    last = run(1);
    for (int horizon = 2; horizon <= 20; ++horizon) {
        const std::uint64_t now = run(horizon);
        CHECK(now - last <= 2ull * k.dim());
        last = now;
    }
}

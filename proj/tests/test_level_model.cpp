#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "eaconv/analytics.hpp"
#include "eaconv/level_model.hpp"
#include "support/fixtures.hpp"
#include "support/reference.hpp"

#include <cmath>

using namespace eaconv;

TEST_CASE("onebit OneMax chain on 4 bits is the worked kernel, exactly") {
    auto problem = onebit_level_chain(FitnessFamily<Rational>::onemax(4));
    CHECK(problem.kernel == fixtures::matrix24<Rational>());
    CHECK(problem.errors == std::vector<Rational>{1, 2, 3, 4});
    CHECK(problem.f_opt == 4);
    CHECK(problem.q0 == std::vector<Rational>{0, 0, 0, 1});
}

TEST_CASE("onebit log chain shares the kernel and swaps the errors") {
    auto problem = onebit_level_chain(FitnessFamily<double>::logarithmic(4));
    CHECK(problem.kernel == fixtures::matrix24<double>());
    const double ln5 = std::log(5.0);
    REQUIRE(problem.errors.size() == 4);
    CHECK(problem.errors[0] == doctest::Approx(ln5 - std::log(4.0)).epsilon(1e-15));
    CHECK(problem.errors[1] == doctest::Approx(ln5 - std::log(3.0)).epsilon(1e-15));
    CHECK(problem.errors[2] == doctest::Approx(ln5 - std::log(2.0)).epsilon(1e-15));
    CHECK(problem.errors[3] == doctest::Approx(ln5).epsilon(1e-15));
    CHECK(problem.f_opt == doctest::Approx(ln5));
}

TEST_CASE("a single bit always flips straight to the optimum") {
    auto problem = onebit_level_chain(FitnessFamily<Rational>::onemax(1));
    CHECK(problem.kernel.dim() == 1);
    CHECK(problem.kernel.entry(0, 0) == 0);
    CHECK(problem.errors == std::vector<Rational>{1});
}

TEST_CASE("onebit chain column structure") {
    for (int n : {2, 3, 5, 9, 16}) {
        auto problem = onebit_level_chain(FitnessFamily<Rational>::onemax(n));
        const auto& k = problem.kernel;
        CHECK(k.column_sum(0) == Rational(1) - Rational(1, n));
        for (int j = 1; j < n; ++j) {
            CHECK(k.column_sum(j) == 1);
            int nonzeros = 0;
            for (int i = 0; i <= j; ++i) nonzeros += (k.entry(i, j) != 0) ? 1 : 0;
            CHECK(nonzeros == 2);
        }
    }
}

TEST_CASE("log family refuses the rational backend") {
    CHECK_THROWS_AS(FitnessFamily<Rational>::logarithmic(4), std::invalid_argument);
}

TEST_CASE("custom tables must strictly decrease in the level") {
    CHECK_THROWS_WITH_AS(FitnessFamily<double>::custom({3.0, 1.0, 1.0}),
                         doctest::Contains("strictly decreasing"), std::invalid_argument);
    auto family = FitnessFamily<double>::custom({4, 3, 2, 1, 0});
    auto problem = onebit_level_chain(family);
    CHECK(problem.kernel == fixtures::matrix24<double>());
}

TEST_CASE("bitwise chain on 2 bits at rate 1/2, against the hand enumeration") {
    auto problem = bitwise_level_chain(FitnessFamily<Rational>::onemax(2), Rational(1, 2));
    // the equal-fitness swap 01 -> 10 is rejected, so state 1 keeps 3/4
    CHECK(problem.kernel.entry(0, 0) == Rational(3, 4));
    CHECK(problem.kernel.entry(0, 1) == Rational(1, 2));
    CHECK(problem.kernel.entry(1, 1) == Rational(1, 4));
}

TEST_CASE("bitwise chain on 1 bit") {
    auto problem = bitwise_level_chain(FitnessFamily<double>::onemax(1), 0.3);
    CHECK(problem.kernel.entry(0, 0) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("bitwise chain matches exhaustive bitmask enumeration") {
    for (int n = 1; n <= 10; ++n) {
        auto problem = bitwise_level_chain(FitnessFamily<double>::onemax(n), 1.0 / 3.0);
        auto oracle = reference::bitwise_kernel_by_enumeration<double>(n, 1.0 / 3.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                CAPTURE(n);
                REQUIRE(problem.kernel.entry(i, j) ==
                        doctest::Approx(oracle.entry(i, j)).epsilon(1e-12));
            }
        for (int j = 0; j < n; ++j) CHECK(problem.kernel.column_sum(j) <= 1.0 + 1e-12);
    }
    // exact agreement on the rational backend
    for (int n : {2, 4, 6}) {
        auto problem = bitwise_level_chain(FitnessFamily<Rational>::onemax(n), Rational(1, 3));
        auto oracle = reference::bitwise_kernel_by_enumeration<Rational>(n, Rational(1, 3));
        CHECK(problem.kernel == oracle);
    }
}

TEST_CASE("bitwise chain column sums fall short exactly by the jump to the optimum") {
    auto problem = bitwise_level_chain(FitnessFamily<Rational>::onemax(5), Rational(1, 4));
    const Rational p(1, 4), q(3, 4);
    for (int j = 1; j <= 5; ++j) {
        const Rational to_opt = pow_nonneg(p, j) * pow_nonneg(q, 5 - j);
        CHECK(problem.kernel.column_sum(j - 1) + to_opt == 1);
    }
}

TEST_CASE("bitwise chain rejects out-of-range rates and colliding diagonals") {
    CHECK_THROWS_AS(bitwise_level_chain(FitnessFamily<double>::onemax(3), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(bitwise_level_chain(FitnessFamily<double>::onemax(3), 1.0),
                    std::invalid_argument);
    // with a wide tolerance the diagonal gaps count as collisions
    CHECK_THROWS_WITH_AS(bitwise_level_chain(FitnessFamily<double>::onemax(3), 0.5, 0.4),
                         doctest::Contains("colliding diagonal"), std::invalid_argument);
}

TEST_CASE("bound kernel of the worked kernel is the kernel itself") {
    auto k = fixtures::matrix24<Rational>();
    CHECK(bound_kernel(k) == k);
}

TEST_CASE("bound kernel collapses movement onto the superdiagonal") {
    auto k = TriangularKernel<double>::from_rows({{0.5, 0.2}, {0.0, 0.3}});
    auto s = bound_kernel(k);
    CHECK(s.entry(0, 0) == 0.5);
    CHECK(s.entry(0, 1) == doctest::Approx(0.7));
    CHECK(s.entry(1, 1) == 0.3);

    auto diag = TriangularKernel<double>::from_rows({{0.6, 0.0}, {0.0, 0.25}});
    auto sd = bound_kernel(diag);
    CHECK(sd.entry(0, 1) == 0.75);
}

TEST_CASE("bound kernel slows every monotone-error problem down (empirical)") {
    // e^T S^t q0 >= e^T R^t q0; counterexamples would be reported, not hidden
    reference::ProblemGen gen(11);
    int violations = 0;
    for (int trial = 0; trial < 30; ++trial) {
        auto problem = gen.problem(gen.uniform_int(1, 6));
        auto bounded = from_explicit(bound_kernel(problem.kernel), problem.errors, problem.f_opt,
                                     problem.q0, "bounded");
        for (int t = 1; t <= 50; ++t) {
            const double lhs = to_double(exact_error_via_matrix(bounded, t));
            const double rhs = to_double(exact_error_via_matrix(problem, t));
            if (lhs < rhs - 1e-12) {
                ++violations;
                MESSAGE("domination violated: trial ", trial, " t ", t, " S-path ", lhs,
                        " R-path ", rhs);
            }
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("from_explicit assembles the worked problems") {
    auto onemax = fixtures::onemax4_problem<Rational>();
    CHECK(onemax.dim() == 4);
    auto square = fixtures::square4_problem<Rational>();
    CHECK(square.errors == std::vector<Rational>{7, 12, 15, 16});
    auto tiny = from_explicit(TriangularKernel<double>(1, {0.5}), {1.0}, 1.0, {1.0});
    CHECK(tiny.dim() == 1);
}

TEST_CASE("from_explicit rejects malformed problems with specific diagnostics") {
    auto k = fixtures::matrix24<double>();
    CHECK_THROWS_WITH_AS(from_explicit(k, {1, 2, 3}, 4.0, {0, 0, 0, 1}),
                         doctest::Contains("length"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(from_explicit(k, {1, 2, 3, 4}, 4.0, {0, 0, 1}),
                         doctest::Contains("length"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(from_explicit(k, {0.0, 2, 3, 4}, 4.0, {0, 0, 0, 1}),
                         doctest::Contains("positive"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(from_explicit(k, {2, 1, 3, 4}, 4.0, {0, 0, 0, 1}),
                         doctest::Contains("nondecreasing"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(from_explicit(k, {1, 2, 3, 4}, 4.0, {0, 0, -0.1, 1}),
                         doctest::Contains("negative"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(from_explicit(k, {1, 2, 3, 4}, 4.0, {0.5, 0, 0.6, 0.2}),
                         doctest::Contains("exceeds 1"), std::invalid_argument);
    auto bad = TriangularKernel<double>::from_rows({{0.5, 0.2}, {0.1, 0.3}});
    CHECK_THROWS_WITH_AS(from_explicit(bad, {1.0, 2.0}, 4.0, {0.0, 1.0}),
                         doctest::Contains("below the diagonal"), std::invalid_argument);
}

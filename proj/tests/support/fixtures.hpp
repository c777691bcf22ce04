#pragma once

#include "eaconv/level_model.hpp"

#include <string>
#include <vector>

namespace fixtures {

using eaconv::Rational;
using eaconv::TriangularKernel;

/// The 4-state onebit/OneMax kernel used as the worked example everywhere:
/// superdiagonal j/4, diagonal 1 - j/4.
template <typename T>
TriangularKernel<T> matrix24() {
    auto q = [](int num, int den) { return T(num) / T(den); };
    return TriangularKernel<T>::from_rows({
        {q(3, 4), q(1, 2), T(0), T(0)},
        {T(0), q(1, 2), q(3, 4), T(0)},
        {T(0), T(0), q(1, 4), T(1)},
        {T(0), T(0), T(0), T(0)},
    });
}

template <typename T>
eaconv::LevelProblem<T> onemax4_problem() {
    return eaconv::from_explicit(matrix24<T>(), {T(1), T(2), T(3), T(4)}, T(4),
                                 {T(0), T(0), T(0), T(1)}, "onemax-n4");
}

template <typename T>
eaconv::LevelProblem<T> square4_problem() {
    return eaconv::from_explicit(matrix24<T>(), {T(7), T(12), T(15), T(16)}, T(16),
                                 {T(0), T(0), T(0), T(1)}, "square-n4");
}

inline eaconv::LevelProblem<double> log4_problem() {
    const double ln5 = std::log(5.0);
    return eaconv::from_explicit(matrix24<double>(),
                                 {ln5 - std::log(4.0), ln5 - std::log(3.0), ln5 - std::log(2.0),
                                  ln5},
                                 ln5, {0, 0, 0, 1}, "log-n4");
}

/// The power-factor tensors of matrix24 as published: paper_tensor(i)[k][j]
/// is p(i,j,k), 0-based, laid out rows k / columns j.
template <typename T>
std::vector<std::vector<T>> expected_tensor_slice(int i) {
    auto h = [](double num) { return T(num); };  // dyadic values, exact in either backend
    switch (i) {
        case 0:
            return {{h(0.75), h(1.5), h(2.25), h(3.0)},
                    {h(0.0), h(-1.0), h(-3.0), h(-6.0)},
                    {h(0.0), h(0.0), h(0.75), h(3.0)},
                    {h(0.0), h(0.0), h(0.0), h(0.0)}};
        case 1:
            return {{h(0.0), h(0.0), h(0.0), h(0.0)},
                    {h(0.0), h(0.5), h(1.5), h(3.0)},
                    {h(0.0), h(0.0), h(-0.75), h(-3.0)},
                    {h(0.0), h(0.0), h(0.0), h(0.0)}};
        case 2:
            return {{h(0.0), h(0.0), h(0.0), h(0.0)},
                    {h(0.0), h(0.0), h(0.0), h(0.0)},
                    {h(0.0), h(0.0), h(0.25), h(1.0)},
                    {h(0.0), h(0.0), h(0.0), h(0.0)}};
        default:
            return {{h(0.0), h(0.0), h(0.0), h(0.0)},
                    {h(0.0), h(0.0), h(0.0), h(0.0)},
                    {h(0.0), h(0.0), h(0.0), h(0.0)},
                    {h(0.0), h(0.0), h(0.0), h(0.0)}};
    }
}

}  // namespace fixtures

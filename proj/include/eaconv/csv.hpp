#pragma once

#include "eaconv/analytics.hpp"
#include "eaconv/simulator.hpp"

#include <ostream>
#include <string>

namespace eaconv {

// CSV output is locale independent: dot decimal separator, '\n' row
// terminators, fixed header rows. Doubles print in shortest round-trip form,
// rationals as exact fractions.

template <typename T>
void write_trajectory_csv(std::ostream& os, const TrajectoryMetrics<T>& series) {
    os << "t,F,E,R\n";
    for (const auto& row : series.rows) {
        os << row.t << ',' << format_scalar(row.fitness) << ',' << format_scalar(row.error) << ',';
        if (row.rate) os << format_scalar(*row.rate);
        os << '\n';
    }
}

void write_empirical_csv(std::ostream& os, const EmpiricalSeries& series);

void write_comparison_csv(std::ostream& os, const ComparisonReport& report);

template <typename T>
void write_matrix_csv(std::ostream& os, const SquareMatrix<T>& m) {
    for (int i = 0; i < m.dim; ++i) {
        for (int j = 0; j < m.dim; ++j) {
            if (j) os << ',';
            os << format_scalar(m.at(i, j));
        }
        os << '\n';
    }
}

}  // namespace eaconv

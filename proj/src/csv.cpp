#include "eaconv/csv.hpp"

namespace eaconv {

void write_empirical_csv(std::ostream& os, const EmpiricalSeries& series) {
    os << "t,mean_F,stderr,E_emp,R_emp\n";
    for (const auto& row : series.rows) {
        os << row.t << ',' << format_scalar(row.mean_fitness) << ','
           << format_scalar(row.stderr_fitness) << ',' << format_scalar(row.error) << ',';
        if (row.rate) os << format_scalar(*row.rate);
        os << '\n';
    }
}

void write_comparison_csv(std::ostream& os, const ComparisonReport& report) {
    os << "t,analytic_F,empirical_F,stderr,z\n";
    for (const auto& row : report.rows) {
        os << row.t << ',' << format_scalar(row.analytic_fitness) << ','
           << format_scalar(row.empirical_fitness) << ',' << format_scalar(row.stderr_fitness)
           << ',' << format_scalar(row.z) << '\n';
    }
}

}  // namespace eaconv

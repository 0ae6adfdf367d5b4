#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nlfem {

struct RateFit {
    std::vector<double> pairwise;  // log(e_k / e_{k+1}) / log(h_k / h_{k+1})
    double slope = 0.0;            // least-squares slope of log e against log h
    double residual = 0.0;         // RMS deviation of the fit in log space
};

/// Convergence rates of `errors` measured at mesh sizes `steps` (at least 3 points, errors > 0).
RateFit estimate_rates(const std::vector<double>& errors, const std::vector<double>& steps);

/// Least-squares slope of log y against log x (x, y > 0, at least 2 points).
RateFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Rows of numbers under named columns. NaN cells are written empty.
class StudyReport {
public:
    explicit StudyReport(std::vector<std::string> columns);

    void add_row(std::vector<double> row);
    std::vector<double> column(const std::string& name) const;
    /// Appends `<name>` with pairwise rates (first row empty) and `<name>_fit` with the fitted slope.
    void add_rate_columns(const std::string& name, const RateFit& fit);

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<double>>& rows() const { return rows_; }

    void write_csv(std::ostream& out) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

}  // namespace nlfem

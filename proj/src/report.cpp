#include "nlfem/report.hpp"

#include "nlfem/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace nlfem {

RateFit loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("rates: need matching lists of at least 2 points");
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("rates: values must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    RateFit fit;
    for (std::size_t i = 0; i + 1 < n; ++i) fit.pairwise.push_back((ly[i] - ly[i + 1]) / (lx[i] - lx[i + 1]));
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (lx[i] - mx) * (ly[i] - my);
        sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    fit.slope = sxy / sxx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (my + fit.slope * (lx[i] - mx));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

RateFit estimate_rates(const std::vector<double>& errors, const std::vector<double>& steps) {
    if (errors.size() < 3) throw std::invalid_argument("estimate_rates: need at least 3 points");
    for (double e : errors)
        if (!(e > 0.0)) throw std::invalid_argument("estimate_rates: errors must be positive");
    return loglog_fit(steps, errors);
}

StudyReport::StudyReport(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void StudyReport::add_row(std::vector<double> row) {
    if (row.size() != columns_.size()) throw std::invalid_argument("report: row width does not match the columns");
    rows_.push_back(std::move(row));
}

std::vector<double> StudyReport::column(const std::string& name) const {
    const auto it = std::find(columns_.begin(), columns_.end(), name);
    if (it == columns_.end()) throw std::out_of_range("report: no column '" + name + "'");
    const auto c = static_cast<std::size_t>(it - columns_.begin());
    std::vector<double> out;
    out.reserve(rows_.size());
    for (const auto& r : rows_) out.push_back(r[c]);
    return out;
}

void StudyReport::add_rate_columns(const std::string& name, const RateFit& fit) {
    if (fit.pairwise.size() + 1 != rows_.size()) throw std::invalid_argument("report: rate count does not match rows");
    columns_.push_back(name);
    columns_.push_back(name + "_fit");
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        rows_[i].push_back(i == 0 ? std::numeric_limits<double>::quiet_NaN() : fit.pairwise[i - 1]);
        rows_[i].push_back(fit.slope);
    }
}

void StudyReport::write_csv(std::ostream& out) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
    out << '\n';
    for (const auto& r : rows_) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) out << ',';
            if (!std::isnan(r[c])) out << format_real(r[c]);
        }
        out << '\n';
    }
}

}  // namespace nlfem

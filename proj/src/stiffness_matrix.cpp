#include "nlfem/stiffness_matrix.hpp"

#include "nlfem/io.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace nlfem {

StiffnessMatrix::StiffnessMatrix(Index n, Index half_bandwidth) : n_(n), beta_(std::min(half_bandwidth, n - 1)) {
    if (n < 1) throw std::invalid_argument("stiffness matrix: dimension must be positive");
    if (4 * beta_ < n) {
        storage_ = Storage::Banded;
        data_ = Matrix::Zero(beta_ + 1, n);
    } else {
        storage_ = Storage::Dense;
        data_ = Matrix::Zero(n, n);
    }
}

StiffnessMatrix StiffnessMatrix::from_dense(const Matrix& a) {
    const Index n = a.rows();
    Index beta = 0;
    for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < j; ++i)
            if (a(i, j) != 0.0) beta = std::max(beta, j - i);
    StiffnessMatrix s(n, beta);
    for (Index j = 0; j < n; ++j)
        for (Index i = std::max<Index>(0, j - s.beta_); i <= j; ++i) s.set(i, j, a(i, j));
    return s;
}

double StiffnessMatrix::operator()(Index i, Index j) const {
    if (storage_ == Storage::Dense) return data_(i, j);
    if (i > j) std::swap(i, j);
    return j - i > beta_ ? 0.0 : data_(j - i, i);
}

void StiffnessMatrix::set(Index i, Index j, double value) {
    if (storage_ == Storage::Dense) {
        data_(i, j) = value;
        data_(j, i) = value;
        return;
    }
    if (i > j) std::swap(i, j);
    if (j - i > beta_) throw std::out_of_range("stiffness matrix: entry outside the band");
    data_(j - i, i) = value;
}

Matrix StiffnessMatrix::dense() const {
    if (storage_ == Storage::Dense) return data_;
    Matrix a = Matrix::Zero(n_, n_);
    for (Index i = 0; i < n_; ++i)
        for (Index d = 0; d <= beta_ && i + d < n_; ++d) a(i, i + d) = a(i + d, i) = data_(d, i);
    return a;
}

Eigen::SparseMatrix<double> StiffnessMatrix::sparse() const {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(n_ * (2 * beta_ + 1)));
    for (Index i = 0; i < n_; ++i)
        for (Index j = std::max<Index>(0, i - beta_); j <= std::min(n_ - 1, i + beta_); ++j) {
            const double v = (*this)(i, j);
            if (v != 0.0) trip.emplace_back(i, j, v);
        }
    Eigen::SparseMatrix<double> s(n_, n_);
    s.setFromTriplets(trip.begin(), trip.end());
    return s;
}

Vector StiffnessMatrix::operator*(const Vector& x) const {
    if (x.size() != n_) throw std::invalid_argument("stiffness matrix: vector size mismatch");
    if (storage_ == Storage::Dense) return data_ * x;
    Vector y = data_.row(0).transpose().cwiseProduct(x);
    for (Index d = 1; d <= beta_; ++d) {
        const Index len = n_ - d;
        y.head(len) += data_.row(d).head(len).transpose().cwiseProduct(x.tail(len));
        y.tail(len) += data_.row(d).head(len).transpose().cwiseProduct(x.head(len));
    }
    return y;
}

double StiffnessMatrix::max_abs() const { return data_.cwiseAbs().maxCoeff(); }

void write_coordinate(std::ostream& out, const StiffnessMatrix& s) {
    for (Index i = 0; i < s.rows(); ++i)
        for (Index j = std::max<Index>(0, i - s.half_bandwidth()); j <= std::min(s.rows() - 1, i + s.half_bandwidth()); ++j) {
            const double v = s(i, j);
            if (v != 0.0) out << i + 1 << ' ' << j + 1 << ' ' << format_real(v) << '\n';
        }
}

Matrix read_coordinate(std::istream& in, Index n) {
    Matrix a = Matrix::Zero(n, n);
    Index i = 0, j = 0;
    double v = 0.0;
    while (in >> i >> j >> v) {
        if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("coordinate file: index out of range");
        a(i - 1, j - 1) = v;
    }
    return a;
}

void write_toeplitz(std::ostream& out, const Vector& t) {
    for (Index p = 0; p < t.size(); ++p) out << p << ' ' << format_real(t(p)) << '\n';
}

}  // namespace nlfem

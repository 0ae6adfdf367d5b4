#pragma once

#include "nlfem/types.hpp"

#include <Eigen/SparseCore>

#include <iosfwd>
#include <optional>

namespace nlfem {

/// Symmetric N x N matrix held either as an upper band of half-bandwidth beta
/// (column i of the band stores S(i, i..i+beta)) or as a full dense matrix.
/// Indices are 0-based; row i corresponds to interior node x_{i+1}.
class StiffnessMatrix {
public:
    enum class Storage { Banded, Dense };

    StiffnessMatrix() = default;
    /// Picks banded storage when half_bandwidth < n / 4, dense otherwise.
    StiffnessMatrix(Index n, Index half_bandwidth);
    static StiffnessMatrix from_dense(const Matrix& a);

    Index rows() const { return n_; }
    Index cols() const { return n_; }
    Index half_bandwidth() const { return beta_; }
    Storage storage() const { return storage_; }

    double operator()(Index i, Index j) const;
    /// Sets S(i, j) and S(j, i). |i - j| must not exceed the half-bandwidth.
    void set(Index i, Index j, double value);

    Matrix dense() const;
    Eigen::SparseMatrix<double> sparse() const;
    Vector operator*(const Vector& x) const;
    double max_abs() const;

    /// Generating vector t_0..t_{N-1} when the matrix is symmetric Toeplitz.
    const std::optional<Vector>& toeplitz() const { return toeplitz_; }
    void set_toeplitz(Vector t) { toeplitz_ = std::move(t); }

private:
    Index n_ = 0;
    Index beta_ = 0;
    Storage storage_ = Storage::Dense;
    Matrix data_;
    std::optional<Vector> toeplitz_;
};

/// Coordinate dump: one `i j value` line per stored nonzero (both triangles, 1-based).
void write_coordinate(std::ostream& out, const StiffnessMatrix& s);
/// Reads the coordinate dump back into a dense matrix of the given size.
Matrix read_coordinate(std::istream& in, Index n);
/// `p t_p` lines.
void write_toeplitz(std::ostream& out, const Vector& t);

}  // namespace nlfem

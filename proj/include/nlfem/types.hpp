#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace nlfem {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised when a linear solve, factorization or iteration does not deliver
/// a usable result. Invalid parameters raise std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace nlfem

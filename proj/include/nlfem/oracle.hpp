#pragma once

#include "nlfem/kernel.hpp"
#include "nlfem/mesh.hpp"

#include <functional>
#include <vector>

namespace nlfem {

struct QuadratureSpec {
    double rel_tol = 1e-9;
    int max_depth = 30;
    /// Ratio of consecutive geometric panels toward s = 0.
    double grading = 0.25;

    void validate() const;
};

/// Error estimate and convergence flag of the last oracle evaluation.
struct OracleResult {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// E(s) = int_R (phi_j(x + s) - phi_j(x)) (phi_k(x + s) - phi_k(x)) dx, exact per piece.
double difference_overlap(const Mesh1D& mesh, Index j, Index k, double s);

/// Entry (S_delta)_{jk} by nested quadrature of the double integral (1-based indices).
OracleResult entry_bruteforce(const Mesh1D& mesh, const Kernel& kernel, Index j, Index k,
                              const QuadratureSpec& spec = {});

/// N_delta u(x) = int_0^delta (2u(x) - u(x + s) - u(x - s)) rho(s) ds with u extended by 0
/// outside (a, b). `kinks` lists interior points where u or its derivative jumps.
OracleResult apply_nonlocal(const std::function<double(double)>& u, const Kernel& kernel, double x, double a,
                            double b, const std::vector<double>& kinks = {}, const QuadratureSpec& spec = {});

/// int_a^b s^m rho(s) ds for any m > alpha - 1 (power-law kernels in closed form).
double general_moment(const Kernel& kernel, double m, double a, double b);

/// C(alpha) (1 - x^2)^(alpha/2), the solution of (-Delta)^(alpha/2) u = 1 on (-1, 1).
double exact_fractional_poisson(double alpha, double x);

}  // namespace nlfem

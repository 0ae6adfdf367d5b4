#pragma once

#include "nlfem/mesh.hpp"
#include "nlfem/stiffness_matrix.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>
#include <vector>

namespace nlfem {

using Function = std::function<double(double)>;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Nodal values on the full node set x_0..x_{N+1}; boundary values are 0.
struct Solution {
    Vector x;
    Vector u;
    /// ||A u - rhs||_inf / ||rhs||_inf of the linear solve that produced u (0 if not a solve).
    double residual = 0.0;

    Vector interior() const { return u.segment(1, u.size() - 2); }
};

Solution make_solution(const Mesh1D& mesh, const Vector& interior_values);

/// (I_h f, phi_k): the load of the piecewise linear interpolant of f over all nodes x_0..x_{N+1}.
Vector rhs_from_function(const Mesh1D& mesh, const Function& f);
/// int f phi_k dx by 3-point Gauss on each element (for forcings that are not nodal data).
Vector load_vector(const Mesh1D& mesh, const Function& f);

/// Solves (S + |lambda| M) u = rhs for lambda <= 0. SPD factorization (dense LLT or sparse LLT).
Solution solve_bvp(const Mesh1D& mesh, const StiffnessMatrix& s, const Vector& rhs, double lambda = 0.0);

/// Solves (S + sign k^2 M_n) u = rhs with M_n the n-weighted mass matrix and LU factorization.
/// sign = +1 treats the operator term as the negative-definite diffusion of the Helmholtz
/// equation (oscillation where n < 0); sign = -1 gives S - k^2 M_n.
Solution solve_helmholtz(const Mesh1D& mesh, const StiffnessMatrix& s, double k2, const Function& n,
                         const Vector& rhs, int sign = +1);

struct EigenPairs {
    Vector values;   // ascending
    Matrix vectors;  // columns, M-orthonormal
};

/// Smallest `count` eigenpairs of S v = lambda M v by Cholesky reduction and dense symmetric solve.
EigenPairs eig_generalized(const StiffnessMatrix& s, const SparseMatrix& m, Index count);

struct Extremes {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond = 0.0;
    int power_iterations = 0;
    int inverse_iterations = 0;
    bool converged = true;
};

/// lambda_max by power iteration, lambda_min by inverse iteration; relative tolerance `tol`.
Extremes condition_and_extremes(const StiffnessMatrix& s, double tol = 1e-8, int max_iter = 200000);

struct AllenCahnParams {
    double eps = 0.01;
    double tau = 1e-3;
    double T = 1.0;
};

struct AllenCahnRun {
    std::vector<double> snapshot_times;
    std::vector<Solution> snapshots;
    std::vector<double> times;    // t_0 = 0, t_1, ...
    std::vector<double> max_abs;  // max_j |U^n_j|
    Solution final;
};

/// Semi-implicit stepping (M + tau eps^2 S) U^n = M (U^{n-1} - tau f(U^{n-1})), f(u) = u^3 - u.
AllenCahnRun allen_cahn_run(const Mesh1D& mesh, const StiffnessMatrix& s, const AllenCahnParams& p, const Function& u0,
                            const std::vector<double>& snapshot_times = {});

struct ErrorNorms {
    double l2 = 0.0;
    double linf = 0.0;
};

/// L_inf over nodes and L2 by 3-point Gauss per element of u_h - reference.
ErrorNorms error_norms(const Mesh1D& mesh, const Solution& uh, const Function& reference);
ErrorNorms error_norms(const Mesh1D& mesh, const Solution& uh, const Solution& reference);

/// Evaluates the piecewise linear function `s` at the nodes of `target` (zero outside its interval).
Solution interpolate(const Solution& s, const Mesh1D& target);

/// CSV `x,u`.
void write_solution_csv(std::ostream& out, const Solution& s);

}  // namespace nlfem

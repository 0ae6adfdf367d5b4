#include "nlfem/solve.hpp"

#include "nlfem/assembly.hpp"
#include "nlfem/io.hpp"
#include "nlfem/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <variant>

namespace nlfem {

Solution make_solution(const Mesh1D& mesh, const Vector& interior_values) {
    if (interior_values.size() != mesh.interior_count()) throw std::invalid_argument("solution: size mismatch with mesh");
    Solution s;
    s.x = mesh.node_vector();
    s.u = Vector::Zero(mesh.node_count());
    s.u.segment(1, interior_values.size()) = interior_values;
    return s;
}

Vector rhs_from_function(const Mesh1D& mesh, const Function& f) {
    // (I_h f, phi_k): the interpolant uses the boundary values f(x_0), f(x_{N+1}) as well
    const Vector fx = mesh.node_vector().unaryExpr(f);
    Vector b(mesh.interior_count());
    for (Index k = 1; k <= mesh.interior_count(); ++k) {
        const double hl = mesh.h(k), hr = mesh.h(k + 1);
        b(k - 1) = hl / 6 * fx(k - 1) + (hl + hr) / 3 * fx(k) + hr / 6 * fx(k + 1);
    }
    return b;
}

Vector load_vector(const Mesh1D& mesh, const Function& f) {
    const Index n = mesh.interior_count();
    Vector b = Vector::Zero(n);
    for (Index e = 1; e <= mesh.element_count(); ++e) {
        const double xl = mesh.x(e - 1), xr = mesh.x(e), h = xr - xl;
        const Index il = e - 2, ir = e - 1;
        if (il >= 0)
            b(il) += quad::gauss_legendre<3>([&](double x) { return f(x) * (xr - x) / h; }, xl, xr);
        if (ir < n)
            b(ir) += quad::gauss_legendre<3>([&](double x) { return f(x) * (x - xl) / h; }, xl, xr);
    }
    return b;
}

namespace {

// A x = b with A either dense or sparse, symmetric positive definite or general.
class LinearSystem {
public:
    LinearSystem(const StiffnessMatrix& s, const SparseMatrix& shift, bool spd) : spd_(spd) {
        if (s.storage() == StiffnessMatrix::Storage::Dense) {
            Matrix a = s.dense() + Matrix(shift);
            if (spd) {
                auto& f = factor_.emplace<Eigen::LLT<Matrix>>(a);
                if (f.info() != Eigen::Success) throw NumericalError("dense Cholesky factorization failed (matrix not SPD)");
            } else {
                factor_.emplace<Eigen::PartialPivLU<Matrix>>(a);
            }
            a_ = std::move(a);
        } else {
            SparseMatrix a = s.sparse() + shift;
            a.makeCompressed();
            if (spd) {
                auto& f = factor_.emplace<Eigen::SimplicialLLT<SparseMatrix>>(a);
                if (f.info() != Eigen::Success) throw NumericalError("sparse Cholesky factorization failed (matrix not SPD)");
            } else {
                auto& f = factor_.emplace<Eigen::SparseLU<SparseMatrix>>();
                f.analyzePattern(a);
                f.factorize(a);
                if (f.info() != Eigen::Success) throw NumericalError("sparse LU factorization failed: " + f.lastErrorMessage());
            }
            a_ = std::move(a);
        }
    }

    Vector apply(const Vector& x) const {
        return std::visit([&](const auto& a) -> Vector { return a * x; }, a_);
    }

    Vector solve_raw(const Vector& b) const {
        return std::visit(
            [&](const auto& f) -> Vector {
                if constexpr (std::is_same_v<std::decay_t<decltype(f)>, std::monostate>)
                    throw NumericalError("linear system used before factorization");
                else
                    return f.solve(b);
            },
            factor_);
    }

    /// Solve with one step of iterative refinement when the residual exceeds 1e-10 ||b||.
    Vector solve(const Vector& b, double* residual = nullptr) const {
        Vector x = solve_raw(b);
        const double bn = b.lpNorm<Eigen::Infinity>();
        Vector r = b - apply(x);
        if (bn > 0.0 && r.lpNorm<Eigen::Infinity>() > 1e-10 * bn) {
            x += solve_raw(r);
            r = b - apply(x);
        }
        if (!x.allFinite()) throw NumericalError("linear solve produced non-finite values");
        if (residual) *residual = bn > 0.0 ? r.lpNorm<Eigen::Infinity>() / bn : r.lpNorm<Eigen::Infinity>();
        return x;
    }

    bool spd() const { return spd_; }

private:
    bool spd_;
    std::variant<Matrix, SparseMatrix> a_;
    std::variant<std::monostate, Eigen::LLT<Matrix>, Eigen::PartialPivLU<Matrix>, Eigen::SimplicialLLT<SparseMatrix>,
                 Eigen::SparseLU<SparseMatrix>>
        factor_;
};

}  // namespace

Solution solve_bvp(const Mesh1D& mesh, const StiffnessMatrix& s, const Vector& rhs, double lambda) {
    if (lambda > 0.0) throw std::invalid_argument("solve_bvp: shift lambda must be <= 0");
    if (s.rows() != mesh.interior_count() || rhs.size() != s.rows())
        throw std::invalid_argument("solve_bvp: dimension mismatch between mesh, matrix and rhs");
    SparseMatrix shift = mass_matrix(mesh) * (-lambda);
    const LinearSystem sys(s, shift, true);
    double res = 0.0;
    Solution sol = make_solution(mesh, sys.solve(rhs, &res));
    sol.residual = res;
    return sol;
}

Solution solve_helmholtz(const Mesh1D& mesh, const StiffnessMatrix& s, double k2, const Function& n, const Vector& rhs,
                         int sign) {
    if (!(k2 > 0.0)) throw std::invalid_argument("solve_helmholtz: k2 must be positive");
    if (sign != 1 && sign != -1) throw std::invalid_argument("solve_helmholtz: sign must be +1 or -1");
    if (s.rows() != mesh.interior_count() || rhs.size() != s.rows())
        throw std::invalid_argument("solve_helmholtz: dimension mismatch between mesh, matrix and rhs");
    SparseMatrix mn = mass_matrix(mesh, n) * (sign * k2);
    const LinearSystem sys(s, mn, false);
    double res = 0.0;
    Solution sol = make_solution(mesh, sys.solve(rhs, &res));
    sol.residual = res;
    return sol;
}

EigenPairs eig_generalized(const StiffnessMatrix& s, const SparseMatrix& m, Index count) {
    const Index n = s.rows();
    if (m.rows() != n) throw std::invalid_argument("eig_generalized: mass matrix size mismatch");
    if (count < 1 || count > n) throw std::invalid_argument("eig_generalized: count must lie in 1..N");
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(s.dense(), Matrix(m), Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw NumericalError("eig_generalized: mass matrix factorization or eigensolve failed");
    return {es.eigenvalues().head(count), es.eigenvectors().leftCols(count)};
}

Extremes condition_and_extremes(const StiffnessMatrix& s, double tol, int max_iter) {
    const Index n = s.rows();
    Extremes ex;
    const double rtol = std::sqrt(tol);

    // Start from the alternating vector: the top eigenvectors of diffusion matrices oscillate node to node.
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = (i % 2 == 0) ? 1.0 : -1.0;
    v.normalize();
    bool ok = false;
    for (int it = 1; it <= max_iter; ++it) {
        const Vector w = s * v;
        ex.lambda_max = v.dot(w);
        ex.power_iterations = it;
        if ((w - ex.lambda_max * v).norm() <= rtol * std::abs(ex.lambda_max)) {
            ok = true;
            break;
        }
        v = w.normalized();
    }
    ex.converged = ok;

    const LinearSystem sys(s, SparseMatrix(n, n), true);
    v = Vector::Ones(n).normalized();
    ok = false;
    for (int it = 1; it <= max_iter; ++it) {
        const Vector sv = s * v;
        ex.lambda_min = v.dot(sv);
        ex.inverse_iterations = it;
        if ((sv - ex.lambda_min * v).norm() <= rtol * std::abs(ex.lambda_min)) {
            ok = true;
            break;
        }
        v = sys.solve_raw(v).normalized();
    }
    ex.converged = ex.converged && ok;
    if (!(ex.lambda_min > 0.0)) throw NumericalError("condition_and_extremes: smallest eigenvalue is not positive");
    ex.cond = ex.lambda_max / ex.lambda_min;
    return ex;
}

AllenCahnRun allen_cahn_run(const Mesh1D& mesh, const StiffnessMatrix& s, const AllenCahnParams& p, const Function& u0,
                            const std::vector<double>& snapshot_times) {
    if (!(p.tau > 0.0) || !(p.eps > 0.0) || !(p.T >= p.tau))
        throw std::invalid_argument("allen_cahn: require tau > 0, eps > 0 and T >= tau");
    const SparseMatrix m = mass_matrix(mesh);
    SparseMatrix implicit = m * (1.0 / (p.tau * p.eps * p.eps));
    // (M + tau eps^2 S) = tau eps^2 (S + M / (tau eps^2)); the scalar cancels against the right-hand side.
    const LinearSystem sys(s, implicit, true);
    const double scale = 1.0 / (p.tau * p.eps * p.eps);

    AllenCahnRun run;
    Vector u = mesh.interior_nodes().unaryExpr(u0);
    const auto steps = static_cast<long>(std::llround(p.T / p.tau));
    run.times.push_back(0.0);
    run.max_abs.push_back(u.size() ? u.cwiseAbs().maxCoeff() : 0.0);
    std::size_t next_snap = 0;
    auto take_snapshots = [&](double t) {
        while (next_snap < snapshot_times.size() && snapshot_times[next_snap] <= t + 0.5 * p.tau) {
            run.snapshot_times.push_back(t);
            run.snapshots.push_back(make_solution(mesh, u));
            ++next_snap;
        }
    };
    take_snapshots(0.0);
    for (long step = 1; step <= steps; ++step) {
        const Vector w = u - p.tau * (u.array().cube() - u.array()).matrix();
        u = sys.solve_raw(scale * (m * w));
        if (!u.allFinite()) {
            std::ostringstream msg;
            msg << "allen_cahn: non-finite state at step " << step;
            throw NumericalError(msg.str());
        }
        const double t = static_cast<double>(step) * p.tau;
        run.times.push_back(t);
        run.max_abs.push_back(u.cwiseAbs().maxCoeff());
        take_snapshots(t);
    }
    run.final = make_solution(mesh, u);
    return run;
}

ErrorNorms error_norms(const Mesh1D& mesh, const Solution& uh, const Function& reference) {
    if (uh.u.size() != mesh.node_count()) throw std::invalid_argument("error_norms: solution does not match the mesh");
    ErrorNorms e;
    for (Index i = 0; i < mesh.node_count(); ++i) e.linf = std::max(e.linf, std::abs(uh.u(i) - reference(mesh.x(i))));
    double sum = 0.0;
    for (Index el = 1; el <= mesh.element_count(); ++el) {
        const double xl = mesh.x(el - 1), xr = mesh.x(el), h = xr - xl;
        const double ul = uh.u(el - 1), ur = uh.u(el);
        sum += quad::gauss_legendre<3>(
            [&](double x) {
                const double d = ul + (ur - ul) * (x - xl) / h - reference(x);
                return d * d;
            },
            xl, xr);
    }
    e.l2 = std::sqrt(sum);
    return e;
}

ErrorNorms error_norms(const Mesh1D& mesh, const Solution& uh, const Solution& reference) {
    if (uh.u.size() != mesh.node_count() || reference.u.size() != mesh.node_count())
        throw std::invalid_argument("error_norms: solutions do not share the mesh");
    ErrorNorms e;
    const Vector d = uh.u - reference.u;
    e.linf = d.cwiseAbs().maxCoeff();
    double sum = 0.0;
    for (Index el = 1; el <= mesh.element_count(); ++el) {
        const double a = d(el - 1), b = d(el);
        sum += mesh.h(el) * (a * a + a * b + b * b) / 3.0;
    }
    e.l2 = std::sqrt(sum);
    return e;
}

Solution interpolate(const Solution& s, const Mesh1D& target) {
    Solution out;
    out.x = target.node_vector();
    out.u.resize(out.x.size());
    const double* xb = s.x.data();
    const double* xe = xb + s.x.size();
    for (Index i = 0; i < out.x.size(); ++i) {
        const double x = out.x(i);
        if (x < s.x(0) || x > s.x(s.x.size() - 1)) {
            out.u(i) = 0.0;
            continue;
        }
        Index r = static_cast<Index>(std::upper_bound(xb, xe, x) - xb);
        r = std::clamp<Index>(r, 1, s.x.size() - 1);
        const double t = (x - s.x(r - 1)) / (s.x(r) - s.x(r - 1));
        out.u(i) = (1 - t) * s.u(r - 1) + t * s.u(r);
    }
    return out;
}

void write_solution_csv(std::ostream& out, const Solution& s) {
    out << "x,u\n";
    for (Index i = 0; i < s.u.size(); ++i) out << format_real(s.x(i)) << ',' << format_real(s.u(i)) << '\n';
}

}  // namespace nlfem

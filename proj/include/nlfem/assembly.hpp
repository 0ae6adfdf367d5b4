#pragma once

#include "nlfem/kernel.hpp"
#include "nlfem/mesh.hpp"
#include "nlfem/stiffness_matrix.hpp"

#include <array>
#include <cmath>
#include <functional>

namespace nlfem {

/// g(z; s) = -(|z + s|^3 - 2|z|^3 + |z - s|^3) / 12 for z, s >= 0, in resolved form.
template <class Scalar>
Scalar g_eval(Scalar z, Scalar s) {
    using std::abs;
    z = abs(z);
    if (s <= z) return -z * s * s / 2;
    return -(s * s * s + 3 * s * z * z - z * z * z) / 6;
}

/// Piecewise cubic I_p(tau) of the uniform-mesh generating vector, in the scaling
/// where I_0(tau) = 16 for tau >= 2. The generating-vector integrand is I_p / 12.
template <class Scalar>
Scalar ip_eval(long p, Scalar tau) {
    auto cube = [](Scalar v) { return v * v * v; };
    if (p < 0) p = -p;
    if (p == 0) {
        if (tau < 1) return 12 * (2 - tau) * tau * tau;
        if (tau < 2) return 16 + 4 * cube(tau - 2);
        return Scalar(16);
    }
    if (p == 1) {
        if (tau < 1) return -4 * (3 - 2 * tau) * tau * tau;
        if (tau < 2) return 14 - 42 * tau + 30 * tau * tau - 6 * tau * tau * tau;
        if (tau < 3) return 4 + 2 * cube(tau - 3);
        return Scalar(4);
    }
    const Scalar q = static_cast<Scalar>(p);
    if (tau < q - 2 || tau >= q + 2) return Scalar(0);
    if (tau < q - 1) return 2 * cube(q - 2 - tau);
    if (tau < q) return 2 * cube(q - 2 - tau) - 8 * cube(q - 1 - tau);
    if (tau < q + 1) return 8 * cube(q + 1 - tau) - 2 * cube(q + 2 - tau);
    return -2 * cube(q + 2 - tau);
}

/// Second-difference weights c_j, c_k and distance matrix D(r, c) = |x_{j-1+r} - x_{k-1+c}|.
template <class Scalar>
struct LocalGeometry {
    std::array<Scalar, 3> cj;
    std::array<Scalar, 3> ck;
    std::array<std::array<Scalar, 3>, 3> d;
};

/// j, k are 1-based interior node indices (1..N).
template <class Scalar>
LocalGeometry<Scalar> local_geometry(const Mesh1D& mesh, Index j, Index k) {
    const Index n = mesh.interior_count();
    if (j < 1 || j > n || k < 1 || k > n) throw std::out_of_range("local_geometry: index outside 1..N");
    auto weights = [&](Index i) {
        const Scalar hl = static_cast<Scalar>(mesh.x(i)) - static_cast<Scalar>(mesh.x(i - 1));
        const Scalar hr = static_cast<Scalar>(mesh.x(i + 1)) - static_cast<Scalar>(mesh.x(i));
        return std::array<Scalar, 3>{1 / hl, -1 / hl - 1 / hr, 1 / hr};
    };
    LocalGeometry<Scalar> g;
    g.cj = weights(j);
    g.ck = weights(k);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            using std::abs;
            g.d[r][c] = abs(static_cast<Scalar>(mesh.x(j - 1 + r)) - static_cast<Scalar>(mesh.x(k - 1 + c)));
        }
    return g;
}

/// Entry (S_delta)_{jk} for 1-based interior indices, by exact panel-moment contraction.
double assemble_entry(const Mesh1D& mesh, const Kernel& kernel, Index j, Index k);

/// Full S_delta for a truncated kernel; banded or dense depending on delta / h.
StiffnessMatrix assemble(const Mesh1D& mesh, const Kernel& kernel);

/// Uniform-mesh path: Toeplitz generating vector t_0..t_{N-1} plus the expanded matrix.
StiffnessMatrix assemble_uniform_toeplitz(double h, Index n, const Kernel& kernel);
StiffnessMatrix assemble_uniform_toeplitz(const Mesh1D& mesh, const Kernel& kernel);
Vector toeplitz_vector(double h, Index n, const Kernel& kernel);

/// Classical tridiagonal stiffness matrix S_0 of -u''.
StiffnessMatrix assemble_local(const Mesh1D& mesh);

/// S_delta for the truncated fractional kernel when delta <= h_min, from the closed-form entries.
StiffnessMatrix assemble_delta_le_h(const Mesh1D& mesh, double alpha, double delta);

/// S_infinity for the infinite-horizon fractional kernel, alpha in (0, 2).
StiffnessMatrix assemble_infinite(const Mesh1D& mesh, double alpha);

/// c_alpha = (2 - alpha) / (6 (3 - alpha)).
double c_alpha(double alpha);
/// Scaling of the infinite-horizon closed form; alpha = 1 returns the limit constant 1 / (2 pi).
double infinite_constant(double alpha);

/// Tridiagonal mass matrix, optionally weighted by n(x) (2-point Gauss per element).
Eigen::SparseMatrix<double> mass_matrix(const Mesh1D& mesh, const std::function<double(double)>& weight = {});

}  // namespace nlfem

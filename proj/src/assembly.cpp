#include "nlfem/assembly.hpp"

#include "nlfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace nlfem {

namespace {

using Real = long double;

struct Cell {
    Real w;
    Real d;
};

// int_0^delta sum_cells w g(d; s) rho(s) ds, where `mom(m, p, q)` returns int_p^q s^m rho(s) ds.
// `separated` means the two stencils do not overlap, so the cubic tail sum_w d^3 vanishes.
template <class Moment>
Real contract(const std::vector<Cell>& cells, Real delta, bool separated, Moment&& mom) {
    std::vector<Real> brk{0, delta};
    Real dmax = 0;
    for (const Cell& c : cells) {
        dmax = std::max(dmax, c.d);
        if (c.d > 0 && c.d < delta) brk.push_back(c.d);
    }
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    Real total = 0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const Real p = brk[i], q = brk[i + 1];
        std::array<Real, 4> coef{0, 0, 0, 0};
        if (p >= dmax) {
            // Every cell is on its cubic branch; the s and s^3 sums vanish identically.
            if (!separated)
                for (const Cell& c : cells) coef[0] += c.w * c.d * c.d * c.d / 6;
        } else {
            for (const Cell& c : cells) {
                if (q <= c.d) {
                    coef[2] -= c.w * c.d / 2;
                } else {
                    coef[0] += c.w * c.d * c.d * c.d / 6;
                    coef[1] -= c.w * c.d * c.d / 2;
                    coef[3] -= c.w / 6;
                }
            }
        }
        for (int m = 0; m < 4; ++m)
            if (coef[m] != 0) total += coef[m] * mom(m, p, q);
    }
    return total;
}

void require_truncated(const Kernel& kernel) {
    if (!kernel.is_truncated())
        throw std::invalid_argument("assembly: infinite-horizon kernel needs assemble_infinite");
}

bool beyond_horizon(const Mesh1D& mesh, Index j, Index k, double delta) {
    if (j > k) std::swap(j, k);
    return k >= j + 2 && mesh.x(k - 1) - mesh.x(j + 1) >= delta;
}

// Largest k >= j whose stencil still interacts with that of j.
Index last_coupled(const Mesh1D& mesh, Index j, double delta) {
    const Index n = mesh.interior_count();
    Index k = j;
    while (k < n && !beyond_horizon(mesh, j, k + 1, delta)) ++k;
    return k;
}

}  // namespace

double assemble_entry(const Mesh1D& mesh, const Kernel& kernel, Index j, Index k) {
    require_truncated(kernel);
    const LocalGeometry<Real> g = local_geometry<Real>(mesh, j, k);
    if (beyond_horizon(mesh, j, k, kernel.delta())) return 0.0;
    std::vector<Cell> cells;
    cells.reserve(9);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) cells.push_back({g.cj[r] * g.ck[c], g.d[r][c]});
    const bool separated = std::abs(j - k) >= 2;
    auto mom = [&](int m, Real p, Real q) { return kernel.moment<Real>(m, p, q); };
    return static_cast<double>(contract(cells, static_cast<Real>(kernel.delta()), separated, mom));
}

StiffnessMatrix assemble(const Mesh1D& mesh, const Kernel& kernel) {
    require_truncated(kernel);
    const Index n = mesh.interior_count();
    std::vector<Index> last(static_cast<std::size_t>(n + 1));
    Index beta = 0;
    for (Index j = 1; j <= n; ++j) {
        last[static_cast<std::size_t>(j)] = last_coupled(mesh, j, kernel.delta());
        beta = std::max(beta, last[static_cast<std::size_t>(j)] - j);
    }
    StiffnessMatrix s(n, beta);
    for (Index j = 1; j <= n; ++j)
        for (Index k = j; k <= last[static_cast<std::size_t>(j)]; ++k) s.set(j - 1, k - 1, assemble_entry(mesh, kernel, j, k));
    return s;
}

Vector toeplitz_vector(double h, Index n, const Kernel& kernel) {
    require_truncated(kernel);
    if (!(h > 0.0) || n < 1) throw std::invalid_argument("toeplitz: require h > 0 and N >= 1");
    static constexpr std::array<int, 5> eta{1, -4, 6, -4, 1};
    const Real hh = h;
    const Real tau_max = static_cast<Real>(kernel.delta()) / hh;
    auto mom = [&](int m, Real a, Real b) {
        // int_a^b tau^m rho(tau h) dtau
        return kernel.moment<Real>(m, a * hh, std::min(b * hh, static_cast<Real>(kernel.delta()))) / std::pow(hh, Real(m + 1));
    };
    Vector t = Vector::Zero(n);
    std::vector<Cell> cells(5);
    for (Index p = 0; p < n; ++p) {
        if (static_cast<Real>(p) >= tau_max + 2) break;
        for (int i = -2; i <= 2; ++i) cells[static_cast<std::size_t>(i + 2)] = {Real(eta[static_cast<std::size_t>(i + 2)]), std::abs(Real(p + i))};
        t(p) = static_cast<double>(hh * hh * contract(cells, tau_max, p >= 2, mom));
    }
    return t;
}

StiffnessMatrix assemble_uniform_toeplitz(double h, Index n, const Kernel& kernel) {
    Vector t = toeplitz_vector(h, n, kernel);
    Index beta = 0;
    for (Index p = 0; p < n; ++p)
        if (t(p) != 0.0) beta = p;
    StiffnessMatrix s(n, beta);
    for (Index i = 0; i < n; ++i)
        for (Index p = 0; p <= beta && i + p < n; ++p) s.set(i, i + p, t(p));
    s.set_toeplitz(std::move(t));
    return s;
}

StiffnessMatrix assemble_uniform_toeplitz(const Mesh1D& mesh, const Kernel& kernel) {
    if (!mesh.is_uniform(1e-12)) throw std::invalid_argument("toeplitz: mesh is not uniform");
    return assemble_uniform_toeplitz((mesh.b() - mesh.a()) / static_cast<double>(mesh.element_count()),
                                     mesh.interior_count(), kernel);
}

StiffnessMatrix assemble_local(const Mesh1D& mesh) {
    const Index n = mesh.interior_count();
    StiffnessMatrix s(n, 1);
    for (Index j = 1; j <= n; ++j) {
        s.set(j - 1, j - 1, 1.0 / mesh.h(j) + 1.0 / mesh.h(j + 1));
        if (j < n) s.set(j - 1, j, -1.0 / mesh.h(j + 1));
    }
    return s;
}

double c_alpha(double alpha) { return (2.0 - alpha) / (6.0 * (3.0 - alpha)); }

StiffnessMatrix assemble_delta_le_h(const Mesh1D& mesh, double alpha, double delta) {
    if (!(alpha >= -1.0 && alpha <= 2.0)) throw std::invalid_argument("assemble_delta_le_h: alpha must lie in [-1, 2]");
    const MeshStats st = mesh_stats(mesh);
    if (!(delta > 0.0) || delta > st.h_min * (1 + 1e-14)) {
        std::ostringstream msg;
        msg << "assemble_delta_le_h: require 0 < delta <= h_min = " << st.h_min << " (got " << delta << ")";
        throw std::invalid_argument(msg.str());
    }
    const Index n = mesh.interior_count();
    const double ca = c_alpha(alpha) * delta;
    auto inv = [&](Index i) { return 1.0 / mesh.h(i); };
    StiffnessMatrix s(n, std::min<Index>(2, n - 1));
    for (Index j = 1; j <= n; ++j) {
        const double a = inv(j), b = inv(j + 1);
        s.set(j - 1, j - 1, -ca * (a * a + (a + b) * (a + b) + b * b) + a + b);
        if (j + 1 <= n) s.set(j - 1, j, ca * (a * b + 2 * b * b + b * inv(j + 2)) - b);
        if (j + 2 <= n) s.set(j - 1, j + 1, -ca * b * inv(j + 2));
    }
    return s;
}

double infinite_constant(double alpha) {
    if (alpha == 1.0) return 1.0 / (2.0 * std::numbers::pi);
    return 1.0 / (2.0 * std::tgamma(4.0 - alpha) * std::cos(alpha * std::numbers::pi / 2.0));
}

StiffnessMatrix assemble_infinite(const Mesh1D& mesh, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("assemble_infinite: alpha must lie in (0, 2)");
    const Index n = mesh.interior_count();
    const Real e = Real(3) - static_cast<Real>(alpha);
    auto f = [&](Real d) -> Real {
        if (d == 0) return 0;
        return alpha == 1.0 ? d * d * std::log(d) : std::pow(d, e);
    };
    const Real scale = infinite_constant(alpha);
    StiffnessMatrix s(n, n - 1);
    for (Index j = 1; j <= n; ++j)
        for (Index k = j; k <= n; ++k) {
            const LocalGeometry<Real> g = local_geometry<Real>(mesh, j, k);
            Real sum = 0;
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) sum += g.cj[r] * g.ck[c] * f(g.d[r][c]);
            s.set(j - 1, k - 1, static_cast<double>(scale * sum));
        }
    return s;
}

Eigen::SparseMatrix<double> mass_matrix(const Mesh1D& mesh, const std::function<double(double)>& weight) {
    const Index n = mesh.interior_count();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(3 * n));
    for (Index e = 1; e <= mesh.element_count(); ++e) {
        const double xl = mesh.x(e - 1), xr = mesh.x(e), h = xr - xl;
        double m00, m01, m11;
        if (!weight) {
            m00 = m11 = h / 3.0;
            m01 = h / 6.0;
        } else {
            m00 = m01 = m11 = 0.0;
            const double c = 0.5 * (xl + xr);
            for (int g = 0; g < 2; ++g) {
                const double x = c + 0.5 * h * quad::GaussLegendre<2>::nodes[static_cast<std::size_t>(g)];
                const double w = 0.5 * h * weight(x);
                const double pl = (xr - x) / h, pr = (x - xl) / h;
                m00 += w * pl * pl;
                m01 += w * pl * pr;
                m11 += w * pr * pr;
            }
        }
        const Index il = e - 2, ir = e - 1;  // 0-based unknowns of the two element nodes
        if (il >= 0) trip.emplace_back(il, il, m00);
        if (ir < n) trip.emplace_back(ir, ir, m11);
        if (il >= 0 && ir < n) {
            trip.emplace_back(il, ir, m01);
            trip.emplace_back(ir, il, m01);
        }
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

}  // namespace nlfem

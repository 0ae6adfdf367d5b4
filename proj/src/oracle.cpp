#include "nlfem/oracle.hpp"

#include "nlfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nlfem {

void QuadratureSpec::validate() const {
    if (!(rel_tol > 1e-14 && rel_tol < 1e-3)) throw std::invalid_argument("quadrature: rel_tol must lie in (1e-14, 1e-3)");
    if (max_depth < 1 || max_depth > 40) throw std::invalid_argument("quadrature: max_depth must lie in 1..40");
    if (!(grading > 0.0 && grading < 1.0)) throw std::invalid_argument("quadrature: grading must lie in (0, 1)");
}

namespace {

double hat(const Mesh1D& mesh, Index i, double x) {
    const double xl = mesh.x(i - 1), xc = mesh.x(i), xr = mesh.x(i + 1);
    if (x <= xl || x >= xr) return 0.0;
    return x <= xc ? (x - xl) / (xc - xl) : (xr - x) / (xr - xc);
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Integrates f over consecutive panels given by `edges`, graded geometrically toward s = 0
// below the first positive edge. The absolute tolerance is scaled by a coarse first pass.
template <class F>
OracleResult integrate_panels(F&& f, std::vector<double> edges, bool grade_to_zero, const QuadratureSpec& spec) {
    edges = sorted_unique(std::move(edges));
    std::vector<std::pair<double, double>> panels;
    if (grade_to_zero && edges.size() > 1 && edges.front() == 0.0) {
        const double first = edges[1];
        double hi = first;
        while (hi > 1e-30 * first) {
            panels.emplace_back(hi * spec.grading, hi);
            hi *= spec.grading;
        }
        std::reverse(panels.begin(), panels.end());
        edges.erase(edges.begin());
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) panels.emplace_back(edges[i], edges[i + 1]);

    double scale = 0.0;
    for (const auto& [lo, hi] : panels) scale += std::abs(quad::detail::gk15(f, lo, hi).value);
    const double abs_tol = std::max(spec.rel_tol * scale / static_cast<double>(panels.size()), 1e-300);

    OracleResult out;
    for (const auto& [lo, hi] : panels) {
        const quad::Result r = quad::integrate(f, lo, hi, spec.rel_tol, abs_tol, spec.max_depth);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
    }
    return out;
}

}  // namespace

double difference_overlap(const Mesh1D& mesh, Index j, Index k, double s) {
    std::vector<double> pts;
    pts.reserve(12);
    for (int r = -1; r <= 1; ++r) {
        pts.push_back(mesh.x(j + r));
        pts.push_back(mesh.x(j + r) - s);
        pts.push_back(mesh.x(k + r));
        pts.push_back(mesh.x(k + r) - s);
    }
    pts = sorted_unique(std::move(pts));
    auto f = [&](double x) {
        return (hat(mesh, j, x + s) - hat(mesh, j, x)) * (hat(mesh, k, x + s) - hat(mesh, k, x));
    };
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) sum += quad::gauss_legendre<3>(f, pts[i], pts[i + 1]);
    return sum;
}

OracleResult entry_bruteforce(const Mesh1D& mesh, const Kernel& kernel, Index j, Index k, const QuadratureSpec& spec) {
    spec.validate();
    if (!kernel.is_truncated()) throw std::invalid_argument("entry_bruteforce: kernel must have a finite horizon");
    const Index n = mesh.interior_count();
    if (j < 1 || j > n || k < 1 || k > n) throw std::out_of_range("entry_bruteforce: index outside 1..N");
    const double delta = kernel.delta();
    std::vector<double> edges{0.0, delta};
    for (int r = -1; r <= 1; ++r)
        for (int c = -1; c <= 1; ++c) {
            const double d = std::abs(mesh.x(j + r) - mesh.x(k + c));
            if (d > 0.0 && d < delta) edges.push_back(d);
        }
    // Below the smallest positive distance E(s) = e2 s^2 + e3 s^3. Direct evaluation there loses
    // all digits once x + s rounds to x, so recover the two coefficients from larger samples.
    double dmin = delta;
    for (std::size_t i = 2; i < edges.size(); ++i) dmin = std::min(dmin, edges[i]);
    const double s1 = 0.5 * dmin, s2 = dmin;
    const double q1 = difference_overlap(mesh, j, k, s1) / (s1 * s1);
    const double q2 = difference_overlap(mesh, j, k, s2) / (s2 * s2);
    const double e3 = (q2 - q1) / (s2 - s1);
    const double e2 = q1 - e3 * s1;
    auto f = [&](double s) {
        const double e = s < 0.25 * dmin ? s * s * (e2 + e3 * s) : difference_overlap(mesh, j, k, s);
        return e * kernel(s);
    };
    return integrate_panels(f, std::move(edges), true, spec);
}

double general_moment(const Kernel& kernel, double m, double a, double b) {
    if (a == b) return 0.0;
    if (kernel.kind() == KernelKind::Custom) {
        auto f = [&](double s) { return std::pow(s, m) * kernel(s); };
        return quad::integrate(f, a, b, 1e-12, 1e-300, 40).value;
    }
    const double e = m - kernel.alpha();
    if (a == 0.0) {
        if (!(e > 0.0)) throw std::invalid_argument("general_moment: divergent integral at s = 0");
        return kernel.constant() * std::pow(b, e) / e;
    }
    const double lr = std::log1p((b - a) / a);
    if (std::abs(e) < 1e-10) return kernel.constant() * lr;
    return kernel.constant() * std::pow(a, e) * std::expm1(e * lr) / e;
}

OracleResult apply_nonlocal(const std::function<double(double)>& u, const Kernel& kernel, double x, double a, double b,
                            const std::vector<double>& kinks, const QuadratureSpec& spec) {
    spec.validate();
    if (!(x > a && x < b)) throw std::invalid_argument("apply_nonlocal: x must lie inside (a, b)");
    const double delta = kernel.is_truncated() ? kernel.delta() : 2.0 * (b - a) + 1.0;
    auto ue = [&](double y) { return (y > a && y < b) ? u(y) : 0.0; };
    const double ux = ue(x);
    auto integrand = [&](double s) { return (2.0 * ux - ue(x + s) - ue(x - s)) * kernel(s); };

    std::vector<double> edges{delta, x - a, b - x};
    bool kink_at_x = false;
    for (double kp : kinks) {
        if (kp == x) kink_at_x = true;
        edges.push_back(std::abs(kp - x));
    }
    std::vector<double> inside{0.0};
    for (double e : edges)
        if (e > 0.0 && e <= delta) inside.push_back(e);
    inside = sorted_unique(std::move(inside));

    OracleResult out;
    // Beyond the domain only 2u(x) rho(s) remains; its tail is closed form for the infinite kernel.
    const double tail = kernel.is_truncated() ? 0.0 : 2.0 * ux * kernel.constant() * std::pow(delta, -kernel.alpha()) / kernel.alpha();
    if (!kink_at_x) {
        // Near s = 0 the symmetric difference is u''-dominated and loses digits; use an even fit
        // Q(s) = Q0 + Q2 s^2 of (2u(x) - u(x+s) - u(x-s)) / s^2 and integrate it in closed form.
        const double s0 = std::min(1e-3 * (b - a), 0.5 * inside[1]);
        auto q = [&](double s) { return (2.0 * ux - ue(x + s) - ue(x - s)) / (s * s); };
        const double q1 = q(s0), qh = q(0.5 * s0);
        const double q2 = (q1 - qh) / (0.75 * s0 * s0);
        const double q0 = q1 - q2 * s0 * s0;
        out.value = q0 * general_moment(kernel, 2.0, 0.0, s0) + q2 * general_moment(kernel, 4.0, 0.0, s0);
        inside.front() = s0;
        const OracleResult rest = integrate_panels(integrand, std::move(inside), false, spec);
        out.value += rest.value + tail;
        out.error = rest.error;
        out.converged = rest.converged;
        return out;
    }
    out = integrate_panels(integrand, std::move(inside), true, spec);
    out.value += tail;
    return out;
}

double exact_fractional_poisson(double alpha, double x) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw std::invalid_argument("exact_fractional_poisson: alpha must lie in (0, 2]");
    if (std::abs(x) >= 1.0) return 0.0;
    const double c = std::pow(2.0, -alpha) * std::sqrt(std::numbers::pi) /
                     (std::tgamma(0.5 * (1.0 + alpha)) * std::tgamma(1.0 + 0.5 * alpha));
    return c * std::pow(1.0 - x * x, 0.5 * alpha);
}

}  // namespace nlfem

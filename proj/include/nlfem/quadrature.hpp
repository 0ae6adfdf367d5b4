#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace nlfem::quad {

struct Result {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Result gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const double fc = f(c);
    double kronrod = fc * kronrod_weights[7];
    double gauss = fc * gauss_weights[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = r * kronrod_nodes[i];
        const double s = f(c - dx) + f(c + dx);
        kronrod += kronrod_weights[i] * s;
        if (i % 2 == 1) gauss += gauss_weights[i / 2] * s;
    }
    return {kronrod * r, std::abs((kronrod - gauss) * r), true};
}

template <class F>
Result adapt(F& f, double a, double b, double tol, int depth, const Result& whole) {
    if (whole.error <= tol || depth <= 0 || !(b - a > 4 * std::numeric_limits<double>::epsilon() * std::abs(a)))
        return {whole.value, whole.error, whole.error <= tol};
    const double m = 0.5 * (a + b);
    const Result left = gk15(f, a, m);
    const Result right = gk15(f, m, b);
    const Result l = adapt(f, a, m, 0.5 * tol, depth - 1, left);
    const Result r = adapt(f, m, b, 0.5 * tol, depth - 1, right);
    return {l.value + r.value, l.error + r.error, l.converged && r.converged};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b].
/// Stops when the error estimate is below max(abs_tol, rel_tol * |value|).
template <class F>
Result integrate(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 0.0,
                 int max_depth = 30) {
    if (a == b) return {};
    const Result whole = detail::gk15(f, a, b);
    const double tol = std::max(abs_tol, rel_tol * std::abs(whole.value));
    Result r = detail::adapt(f, a, b, tol, max_depth, whole);
    // The first estimate may be poor; retry once with the refined value as scale.
    const double refined_tol = std::max(abs_tol, rel_tol * std::abs(r.value));
    if (refined_tol < 0.5 * tol) r = detail::adapt(f, a, b, refined_tol, max_depth, whole);
    return r;
}

/// Fixed-order Gauss-Legendre rule on [a, b] with n in {2, 3}.
template <int N>
struct GaussLegendre;

template <>
struct GaussLegendre<2> {
    static constexpr std::array<double, 2> nodes = {-0.577350269189625764509148780501958,
                                                    0.577350269189625764509148780501958};
    static constexpr std::array<double, 2> weights = {1.0, 1.0};
};

template <>
struct GaussLegendre<3> {
    static constexpr std::array<double, 3> nodes = {-0.774596669241483377035853079956480, 0.0,
                                                    0.774596669241483377035853079956480};
    static constexpr std::array<double, 3> weights = {0.555555555555555555555555555555556,
                                                      0.888888888888888888888888888888889,
                                                      0.555555555555555555555555555555556};
};

template <int N, class F>
double gauss_legendre(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < N; ++i) sum += GaussLegendre<N>::weights[i] * f(c + r * GaussLegendre<N>::nodes[i]);
    return sum * r;
}

}  // namespace nlfem::quad

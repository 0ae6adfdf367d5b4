#include "nlfem/kernel.hpp"

#include "nlfem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace nlfem {

std::string to_string(KernelKind kind) {
    switch (kind) {
    case KernelKind::Fractional: return "fractional";
    case KernelKind::Box: return "box";
    case KernelKind::FractionalInfinite: return "fractional_infinite";
    case KernelKind::TruncatedInfinite: return "truncated_infinite";
    case KernelKind::Custom: return "custom";
    }
    return "unknown";
}

namespace {

void require_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        std::ostringstream msg;
        msg << "kernel: horizon delta must be positive and finite (got " << delta << ")";
        throw std::invalid_argument(msg.str());
    }
}

void require_open_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        std::ostringstream msg;
        msg << "kernel: alpha must lie in (0, 2) for the infinite-horizon kernel (got " << alpha << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

double fractional_constant(double alpha) {
    return std::pow(2.0, alpha - 1.0) * alpha * std::tgamma(0.5 * (1.0 + alpha)) /
           (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - 0.5 * alpha));
}

Kernel Kernel::fractional(double alpha, double delta) {
    require_delta(delta);
    if (!(alpha >= -1.0 && alpha < 2.0)) {
        std::ostringstream msg;
        msg << "kernel: alpha must lie in [-1, 2) for the truncated fractional kernel (got " << alpha << ")";
        throw std::invalid_argument(msg.str());
    }
    return {KernelKind::Fractional, alpha, delta, (2.0 - alpha) / std::pow(delta, 2.0 - alpha)};
}

Kernel Kernel::box(double delta) {
    require_delta(delta);
    return {KernelKind::Box, -1.0, delta, 3.0 / (delta * delta * delta)};
}

Kernel Kernel::fractional_infinite(double alpha) {
    require_open_alpha(alpha);
    return {KernelKind::FractionalInfinite, alpha, std::numeric_limits<double>::infinity(), fractional_constant(alpha)};
}

Kernel Kernel::truncated_infinite(double alpha, double delta) {
    require_open_alpha(alpha);
    require_delta(delta);
    return {KernelKind::TruncatedInfinite, alpha, delta, fractional_constant(alpha)};
}

Kernel Kernel::custom(double delta, std::function<double(double)> rho) {
    require_delta(delta);
    if (!rho) throw std::invalid_argument("kernel: custom profile is empty");
    Kernel k(KernelKind::Custom, 0.0, delta, 1.0);
    k.rho_ = std::move(rho);
    return k;
}

double Kernel::operator()(double s) const {
    if (!(s > 0.0) || s > delta_) return 0.0;
    if (kind_ == KernelKind::Custom) return rho_(s);
    if (kind_ == KernelKind::Box) return constant_;
    return constant_ * std::pow(s, -1.0 - alpha_);
}

double Kernel::custom_moment(int m, double a, double b) const {
    auto f = [&](double s) { return std::pow(s, m) * rho_(s); };
    const quad::Result r = quad::integrate(f, a, b, 1e-12, 1e-300, 40);
    return r.value;
}

Kernel make_kernel(const std::string& variant, double alpha, double delta) {
    if (variant == "fractional") return Kernel::fractional(alpha, delta);
    if (variant == "box") return Kernel::box(delta);
    if (variant == "fractional_infinite")
        return std::isfinite(delta) ? Kernel::truncated_infinite(alpha, delta) : Kernel::fractional_infinite(alpha);
    throw std::invalid_argument("kernel: unknown variant '" + variant + "' (expected fractional, box, fractional_infinite)");
}

}  // namespace nlfem

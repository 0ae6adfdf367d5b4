#pragma once

#include "nlfem/types.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace nlfem {

enum class KernelKind {
    Fractional,          // (2 - alpha) / delta^(2 - alpha) * s^(-1 - alpha) on (0, delta)
    Box,                 // 3 / delta^3 on (0, delta)
    FractionalInfinite,  // C_alpha * s^(-1 - alpha) on (0, inf)
    TruncatedInfinite,   // C_alpha * s^(-1 - alpha) cut off at delta, not renormalized
    Custom               // user profile on (0, delta), moments by quadrature
};

std::string to_string(KernelKind kind);

/// Radial interaction kernel rho(s), s > 0, with moments mu_m(a, b) = int_a^b s^m rho(s) ds.
class Kernel {
public:
    static Kernel fractional(double alpha, double delta);
    static Kernel box(double delta);
    static Kernel fractional_infinite(double alpha);
    static Kernel truncated_infinite(double alpha, double delta);
    static Kernel custom(double delta, std::function<double(double)> rho);

    KernelKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double delta() const { return delta_; }
    double constant() const { return constant_; }
    bool is_truncated() const { return kind_ != KernelKind::FractionalInfinite; }
    /// Power-law kernels C s^(-1 - alpha) (box is alpha = -1).
    bool is_power_law() const { return kind_ != KernelKind::Custom; }

    double operator()(double s) const;

    /// mu_m(a, b) for m in 0..3 and 0 <= a <= b <= delta.
    template <class Scalar>
    Scalar moment(int m, Scalar a, Scalar b) const;

private:
    Kernel(KernelKind kind, double alpha, double delta, double c) : kind_(kind), alpha_(alpha), delta_(delta), constant_(c) {}

    double custom_moment(int m, double a, double b) const;

    KernelKind kind_;
    double alpha_;
    double delta_;
    double constant_;
    std::function<double(double)> rho_;
};

/// C_alpha = 2^(alpha-1) alpha Gamma((1+alpha)/2) / (sqrt(pi) Gamma(1 - alpha/2)).
double fractional_constant(double alpha);

/// Builds a kernel from its config name: fractional, box, fractional_infinite.
/// A finite delta with fractional_infinite yields the truncated variant.
Kernel make_kernel(const std::string& variant, double alpha, double delta);

inline double eval(const Kernel& k, double s) { return k(s); }

template <class Scalar>
Scalar moment(const Kernel& k, int m, Scalar a, Scalar b) {
    return k.moment<Scalar>(m, a, b);
}

template <class Scalar>
Scalar Kernel::moment(int m, Scalar a, Scalar b) const {
    using std::abs;
    using std::expm1;
    using std::log;
    using std::log1p;
    using std::pow;
    if (m < 0 || m > 3) throw std::invalid_argument("moment: order m must be in 0..3");
    if (!(a >= 0) || !(b >= a)) throw std::invalid_argument("moment: require 0 <= a <= b");
    if (is_truncated() && static_cast<double>(b) > delta_ * (1 + 1e-14))
        throw std::invalid_argument("moment: interval exceeds the horizon");
    if (a == b) return Scalar(0);
    if (kind_ == KernelKind::Custom)
        return static_cast<Scalar>(custom_moment(m, static_cast<double>(a), static_cast<double>(b)));

    const Scalar c = static_cast<Scalar>(constant_);
    const Scalar e = Scalar(m) - static_cast<Scalar>(alpha_);
    if (a == 0) {
        if (!(e > 0)) throw std::invalid_argument("moment: divergent integral at s = 0 (m <= alpha)");
        return c * pow(b, e) / e;
    }
    const Scalar lr = log1p((b - a) / a);
    if (abs(static_cast<double>(e)) < 1e-10) return c * lr;
    return c * pow(a, e) * expm1(e * lr) / e;
}

}  // namespace nlfem

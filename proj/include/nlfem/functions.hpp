#pragma once

#include <functional>
#include <string>
#include <vector>

namespace nlfem {

/// A scalar function of x together with the interior points where it (or its slope) jumps.
struct NamedFunction {
    std::string name;
    std::function<double(double)> f;
    std::vector<double> kinks;

    double operator()(double x) const { return f(x); }
};

/// Built-in functions by name:
///   <number>  constant
///   x, x2     x and x^2
///   bump      x^2 (1 - x)^2
///   parabola  1 - x^2
///   sin       sin x
///   step      0.5 for x < 0, 1 for x >= 0
///   gaussian  exp(-100 x^2)
///   jump      2 x^2 for x < 1/2, (1 - x)^2 otherwise
NamedFunction lookup_function(const std::string& name);

std::vector<std::string> builtin_function_names();

}  // namespace nlfem

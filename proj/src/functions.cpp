#include "nlfem/functions.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace nlfem {

namespace {

bool parse_number(const std::string& s, double& v) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    return ec == std::errc() && ptr == last;
}

}  // namespace

NamedFunction lookup_function(const std::string& name) {
    double c = 0.0;
    if (parse_number(name, c)) return {name, [c](double) { return c; }, {}};
    if (name == "x") return {name, [](double x) { return x; }, {}};
    if (name == "x2") return {name, [](double x) { return x * x; }, {}};
    if (name == "bump") return {name, [](double x) { return x * x * (1.0 - x) * (1.0 - x); }, {}};
    if (name == "parabola") return {name, [](double x) { return 1.0 - x * x; }, {}};
    if (name == "sin") return {name, [](double x) { return std::sin(x); }, {}};
    if (name == "step") return {name, [](double x) { return x < 0.0 ? 0.5 : 1.0; }, {0.0}};
    if (name == "gaussian") return {name, [](double x) { return std::exp(-100.0 * x * x); }, {}};
    if (name == "jump") return {name, [](double x) { return x < 0.5 ? 2.0 * x * x : (1.0 - x) * (1.0 - x); }, {0.5}};
    throw std::invalid_argument("unknown function '" + name + "'");
}

std::vector<std::string> builtin_function_names() {
    return {"<number>", "x", "x2", "bump", "parabola", "sin", "step", "gaussian", "jump"};
}

}  // namespace nlfem

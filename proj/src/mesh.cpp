#include "nlfem/mesh.hpp"

#include "nlfem/io.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace nlfem {

std::string to_string(MeshScheme scheme) {
    switch (scheme) {
    case MeshScheme::Uniform: return "uniform";
    case MeshScheme::GradedBoundary: return "graded";
    case MeshScheme::GradedCenter: return "graded_center";
    case MeshScheme::Geometric: return "geometric";
    case MeshScheme::Shishkin: return "shishkin";
    }
    return "unknown";
}

MeshSpec MeshSpec::uniform(double a, double b, Index interior) {
    MeshSpec s;
    s.scheme = MeshScheme::Uniform;
    s.a = a;
    s.b = b;
    s.n = interior;
    return s;
}

MeshSpec MeshSpec::graded_boundary(double a, double b, Index elements, double gamma) {
    MeshSpec s = uniform(a, b, elements);
    s.scheme = MeshScheme::GradedBoundary;
    s.gamma = gamma;
    return s;
}

MeshSpec MeshSpec::graded_center(double a, double b, Index elements, double gamma) {
    MeshSpec s = graded_boundary(a, b, elements, gamma);
    s.scheme = MeshScheme::GradedCenter;
    return s;
}

MeshSpec MeshSpec::geometric(double a, double b, Index n, double q) {
    MeshSpec s = uniform(a, b, n);
    s.scheme = MeshScheme::Geometric;
    s.q = q;
    return s;
}

MeshSpec MeshSpec::shishkin(double a, double b, Index m, Index n, double eta) {
    MeshSpec s = uniform(a, b, n);
    s.scheme = MeshScheme::Shishkin;
    s.m = m;
    s.eta = eta;
    return s;
}

void MeshSpec::validate() const {
    if (!(a < b)) throw std::invalid_argument("mesh: require a < b");
    switch (scheme) {
    case MeshScheme::Uniform:
        if (n < 1) throw std::invalid_argument("mesh: uniform interior count n must be >= 1");
        break;
    case MeshScheme::GradedBoundary:
    case MeshScheme::GradedCenter:
        if (n < 2 || n % 2 != 0) throw std::invalid_argument("mesh: graded element count n must be even and >= 2");
        if (!(gamma >= 1.0)) throw std::invalid_argument("mesh: grading exponent gamma must be >= 1");
        break;
    case MeshScheme::Geometric:
        if (n < 1) throw std::invalid_argument("mesh: geometric n must be >= 1");
        if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("mesh: geometric ratio q must lie in (0, 1)");
        break;
    case MeshScheme::Shishkin:
        if (n < 1 || m < 1) throw std::invalid_argument("mesh: shishkin counts m and n must be >= 1");
        if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("mesh: shishkin eta must lie in (0, 1/2)");
        break;
    }
}

Mesh1D::Mesh1D(std::vector<double> nodes, MeshSpec family) : nodes_(std::move(nodes)), family_(family) {
    if (nodes_.size() < 3) throw std::invalid_argument("mesh: need at least one interior node");
    const double len = nodes_.back() - nodes_.front();
    double sum = 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        const double h = nodes_[i] - nodes_[i - 1];
        if (!(h > 0.0)) throw std::invalid_argument("mesh: nodes must be strictly increasing");
        sum += h;
    }
    if (std::abs(sum - len) > 1e-14 * len) throw std::invalid_argument("mesh: element sizes do not sum to b - a");
    family_.a = nodes_.front();
    family_.b = nodes_.back();
}

Vector Mesh1D::node_vector() const {
    return Eigen::Map<const Vector>(nodes_.data(), node_count());
}

Vector Mesh1D::interior_nodes() const {
    return node_vector().segment(1, interior_count());
}

bool Mesh1D::is_uniform(double rel_tol) const {
    const double h0 = (b() - a()) / static_cast<double>(element_count());
    for (Index j = 1; j <= element_count(); ++j)
        if (std::abs(h(j) - h0) > rel_tol * h0) return false;
    return true;
}

namespace {

std::vector<double> uniform_nodes(double a, double b, Index elements) {
    std::vector<double> x(static_cast<std::size_t>(elements + 1));
    const double h = (b - a) / static_cast<double>(elements);
    for (Index i = 0; i <= elements; ++i) x[static_cast<std::size_t>(i)] = a + static_cast<double>(i) * h;
    x.back() = b;
    return x;
}

std::vector<double> graded_boundary_nodes(double a, double b, Index n, double gamma) {
    std::vector<double> x(static_cast<std::size_t>(n + 1));
    const double half = 0.5 * (b - a);
    const double nn = static_cast<double>(n);
    for (Index j = 0; j <= n; ++j) {
        const double t = 2.0 * static_cast<double>(j) / nn;
        x[static_cast<std::size_t>(j)] = j < n / 2 ? a + half * std::pow(t, gamma) : b - half * std::pow(2.0 - t, gamma);
    }
    x.front() = a;
    x.back() = b;
    return x;
}

std::vector<double> graded_center_nodes(double a, double b, Index n, double gamma) {
    std::vector<double> x(static_cast<std::size_t>(n + 1));
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    const double nn = static_cast<double>(n);
    for (Index j = 0; j <= n; ++j) {
        const double t = 2.0 * static_cast<double>(j) / nn;
        x[static_cast<std::size_t>(j)] = j < n / 2 ? mid - half * std::pow(1.0 - t, gamma) : mid + half * std::pow(t - 1.0, gamma);
    }
    x.front() = a;
    x.back() = b;
    return x;
}

// Interior nodes j = 1..2n-1 from the geometric formula, plus both endpoints.
std::vector<double> geometric_nodes(double a, double b, Index n, double q) {
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(2 * n + 1));
    const double half = 0.5 * (b - a);
    x.push_back(a);
    for (Index j = 1; j <= 2 * n - 1; ++j) {
        if (j <= n - 1)
            x.push_back(a + std::pow(q, static_cast<double>(n - j)) * half);
        else
            x.push_back(b - std::pow(q, static_cast<double>(j - n)) * half);
    }
    x.push_back(b);
    return x;
}

std::vector<double> shishkin_nodes(double a, double b, Index m, Index n, double eta) {
    const double len = b - a;
    const double fine = eta * len / static_cast<double>(m);
    const double coarse = (1.0 - 2.0 * eta) * len / static_cast<double>(n);
    const double left = a + eta * len;
    const double right = b - eta * len;
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(2 * m + n + 1));
    for (Index i = 0; i < m; ++i) x.push_back(a + static_cast<double>(i) * fine);
    for (Index i = 0; i < n; ++i) x.push_back(left + static_cast<double>(i) * coarse);
    for (Index i = 0; i < m; ++i) x.push_back(right + static_cast<double>(i) * fine);
    x.push_back(b);
    return x;
}

}  // namespace

Mesh1D generate_mesh(const MeshSpec& spec) {
    spec.validate();
    switch (spec.scheme) {
    case MeshScheme::Uniform: return {uniform_nodes(spec.a, spec.b, spec.n + 1), spec};
    case MeshScheme::GradedBoundary: return {graded_boundary_nodes(spec.a, spec.b, spec.n, spec.gamma), spec};
    case MeshScheme::GradedCenter: return {graded_center_nodes(spec.a, spec.b, spec.n, spec.gamma), spec};
    case MeshScheme::Geometric: return {geometric_nodes(spec.a, spec.b, spec.n, spec.q), spec};
    case MeshScheme::Shishkin: return {shishkin_nodes(spec.a, spec.b, spec.m, spec.n, spec.eta), spec};
    }
    throw std::invalid_argument("mesh: unknown scheme");
}

MeshStats mesh_stats(const Mesh1D& mesh) {
    MeshStats st;
    st.count = mesh.element_count();
    st.h_min = st.h_max = mesh.h(1);
    for (Index j = 2; j <= st.count; ++j) {
        st.h_min = std::min(st.h_min, mesh.h(j));
        st.h_max = std::max(st.h_max, mesh.h(j));
    }
    st.ratio = st.h_max / st.h_min;
    return st;
}

void write_mesh_csv(std::ostream& out, const Mesh1D& mesh) {
    out << "index,x\n";
    for (Index i = 0; i < mesh.node_count(); ++i) out << i << ',' << format_real(mesh.x(i)) << '\n';
}

}  // namespace nlfem

#pragma once

#include "nlfem/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace nlfem {

enum class MeshScheme { Uniform, GradedBoundary, GradedCenter, Geometric, Shishkin };

std::string to_string(MeshScheme scheme);

/// Parameters of a mesh family on (a, b). The meaning of `n` depends on the scheme:
///   Uniform         n interior nodes, n + 1 equal elements
///   GradedBoundary  n elements (even), nodes clustered toward a and b with exponent gamma
///   GradedCenter    n elements (even), nodes clustered toward (a + b) / 2
///   Geometric       2n elements, sizes shrinking by q toward both endpoints
///   Shishkin        m elements on each boundary strip of width eta (b - a), n in the middle
struct MeshSpec {
    MeshScheme scheme = MeshScheme::Uniform;
    double a = 0.0;
    double b = 1.0;
    Index n = 1;
    Index m = 0;
    double gamma = 1.0;
    double q = 0.5;
    double eta = 0.25;

    static MeshSpec uniform(double a, double b, Index interior);
    static MeshSpec graded_boundary(double a, double b, Index elements, double gamma);
    static MeshSpec graded_center(double a, double b, Index elements, double gamma);
    static MeshSpec geometric(double a, double b, Index n, double q);
    static MeshSpec shishkin(double a, double b, Index m, Index n, double eta);

    /// Throws std::invalid_argument naming the violated constraint.
    void validate() const;
};

/// Ordered partition a = x_0 < x_1 < ... < x_{N+1} = b. Interior nodes x_1..x_N carry
/// the hat-function unknowns; element j (1-based) is [x_{j-1}, x_j] with length h_j.
class Mesh1D {
public:
    Mesh1D(std::vector<double> nodes, MeshSpec family);

    double a() const { return nodes_.front(); }
    double b() const { return nodes_.back(); }
    Index interior_count() const { return static_cast<Index>(nodes_.size()) - 2; }
    Index element_count() const { return static_cast<Index>(nodes_.size()) - 1; }
    Index node_count() const { return static_cast<Index>(nodes_.size()); }
    double x(Index i) const { return nodes_[static_cast<std::size_t>(i)]; }
    /// Length of element j, 1 <= j <= N + 1.
    double h(Index j) const { return x(j) - x(j - 1); }
    const std::vector<double>& nodes() const { return nodes_; }
    Vector node_vector() const;
    Vector interior_nodes() const;
    const MeshSpec& family() const { return family_; }

    bool is_uniform(double rel_tol = 1e-12) const;

private:
    std::vector<double> nodes_;
    MeshSpec family_;
};

Mesh1D generate_mesh(const MeshSpec& spec);

struct MeshStats {
    double h_min = 0.0;
    double h_max = 0.0;
    double ratio = 1.0;
    Index count = 0;
};

MeshStats mesh_stats(const Mesh1D& mesh);

/// CSV with header `index,x`, one node per row.
void write_mesh_csv(std::ostream& out, const Mesh1D& mesh);

}  // namespace nlfem

#include "doctest.h"
#include "nlfem/assembly.hpp"
#include "nlfem/oracle.hpp"
#include "nlfem/solve.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <random>

using namespace nlfem;

namespace {

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("brute-force entries on a random graded mesh") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ug(1.0, 3.0);
    const Mesh1D m = generate_mesh(MeshSpec::graded_boundary(0, 1, 10, ug(rng)));
    REQUIRE(m.interior_count() == 9);
    const Kernel k = Kernel::fractional(0.5, 0.3);
    const Matrix s = assemble(m, k).dense();
    double worst = 0.0;
    for (Index j = 1; j <= 9; ++j)
        for (Index l = j; l <= 9; ++l) {
            const OracleResult r = entry_bruteforce(m, k, j, l);
            CHECK(r.converged);
            if (s(j - 1, l - 1) == 0.0)
                CHECK(std::abs(r.value) <= 1e-12 * s.cwiseAbs().maxCoeff());
            else
                worst = std::max(worst, rel_dev(s(j - 1, l - 1), r.value));
        }
    CHECK(worst <= 1e-8);
}

TEST_CASE("brute-force entries for the box kernel on a uniform mesh") {
    const Mesh1D m = generate_mesh(MeshSpec::uniform(0, 1, 4));
    for (double delta : {0.1, 0.3, 1.0}) {
        const Kernel k = Kernel::box(delta);
        for (Index j = 1; j <= 4; ++j)
            for (Index l = 1; l <= 4; ++l) {
                const double a = assemble_entry(m, k, j, l);
                const double b = entry_bruteforce(m, k, j, l).value;
                CHECK(std::abs(a - b) <= 1e-8 * std::max(std::abs(a), 1.0));
            }
    }
}

TEST_CASE("brute-force entries: separated supports vanish and symmetry holds") {
    const Mesh1D m = generate_mesh(MeshSpec::uniform(0, 1, 9));
    const Kernel k = Kernel::fractional(1.2, 0.15);
    CHECK(entry_bruteforce(m, k, 2, 7).value == doctest::Approx(0.0).scale(1e-9));
    CHECK(entry_bruteforce(m, k, 3, 4).value == doctest::Approx(entry_bruteforce(m, k, 4, 3).value).epsilon(1e-9));
}

TEST_CASE("quadrature settings are validated") {
    CHECK_THROWS_AS((QuadratureSpec{1e-15, 30, 0.25}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((QuadratureSpec{1e-2, 30, 0.25}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((QuadratureSpec{1e-9, 41, 0.25}.validate()), std::invalid_argument);
    CHECK_NOTHROW(QuadratureSpec{}.validate());
}

TEST_CASE("nonlocal operator on polynomials") {
    const auto x2 = [](double x) { return x * x; };
    const auto parab = [](double x) { return 1 - x * x; };
    const auto one = [](double) { return 1.0; };
    for (const Kernel& k : {Kernel::fractional(0.5, 0.1), Kernel::fractional(1.5, 0.2), Kernel::box(0.1),
                            Kernel::fractional(-1.0, 0.3)}) {
        CHECK(apply_nonlocal(x2, k, 0.1, -1, 1).value == doctest::Approx(-2.0).epsilon(1e-9));
        CHECK(apply_nonlocal(parab, k, -0.3, -1, 1).value == doctest::Approx(2.0).epsilon(1e-9));
        CHECK(std::abs(apply_nonlocal(one, k, 0.2, -1, 1).value) <= 1e-12);
    }
}

TEST_CASE("nonlocal operator sees the zero extension near the boundary") {
    // u = 1 on (0, 1): near x = 0.05 the collar removes part of the symmetric sum
    const Kernel k = Kernel::box(0.1);
    const double v = apply_nonlocal([](double) { return 1.0; }, k, 0.05, 0, 1).value;
    CHECK(v == doctest::Approx(k.moment<double>(0, 0.05, 0.1)).epsilon(1e-10));
}

TEST_CASE("exact fractional Poisson solution") {
    CHECK(exact_fractional_poisson(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(exact_fractional_poisson(0.5, 1.0) == 0.0);
    CHECK(exact_fractional_poisson(0.5, -1.0) == 0.0);
    for (double x : {-0.9, -0.3, 0.0, 0.4, 0.8})
        CHECK(exact_fractional_poisson(2.0, x) == doctest::Approx(0.5 * (1 - x * x)).epsilon(1e-15));
}

TEST_CASE("general moment for non-integer order") {
    const Kernel k = Kernel::fractional(0.5, 1.0);
    CHECK(general_moment(k, 2.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(general_moment(k, 0.5, 0.2, 0.7) == doctest::Approx(1.5 * std::log(3.5)).epsilon(1e-13));
    CHECK(general_moment(k, 1.5, 0.2, 0.7) == doctest::Approx(1.5 * 0.5).epsilon(1e-13));
}

TEST_CASE("property: discrete operator approximates the pointwise one at least at second order") {
    const auto u = [](double x) { return std::sin(3 * x) * x * (1 - x); };
    const Kernel k = Kernel::fractional(0.5, 0.1);
    double prev = 0.0;
    for (Index n : {39, 79, 159}) {
        const Mesh1D m = generate_mesh(MeshSpec::uniform(0, 1, n));
        const Vector uh = m.interior_nodes().unaryExpr(u);
        const Eigen::SparseMatrix<double> mm = mass_matrix(m);
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(mm);
        const Vector action = llt.solve(assemble(m, k) * uh);
        double err = 0.0;
        for (Index j = 1; j <= n; ++j)
            if (m.x(j) > 0.2 && m.x(j) < 0.8)
                err = std::max(err, std::abs(action(j - 1) - apply_nonlocal(u, k, m.x(j), 0, 1).value));
        if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.8);
        prev = err;
    }
}

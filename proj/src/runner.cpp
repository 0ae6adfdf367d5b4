#include "nlfem/runner.hpp"

#include "nlfem/assembly.hpp"
#include "nlfem/functions.hpp"
#include "nlfem/io.hpp"
#include "nlfem/oracle.hpp"
#include "nlfem/quadrature.hpp"
#include "nlfem/report.hpp"
#include "nlfem/solve.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <type_traits>
#include <ostream>

namespace nlfem {

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"assemble", "bvp", "helmholtz", "eig", "allen-cahn",
                                                   "study-cond", "study-convergence", "study-limit"};
    return names;
}

namespace {

struct Context {
    const Config& cfg;
    std::string prefix;
    std::ostream& log;
};

// Evaluates fn at every sweep point on its own thread; results come back in parameter order.
template <class T, class Fn>
auto parallel_sweep(const std::vector<T>& points, Fn fn) {
    using R = std::invoke_result_t<Fn, const T&>;
    std::vector<std::future<R>> jobs;
    jobs.reserve(points.size());
    for (const T& p : points) jobs.push_back(std::async(std::launch::async, fn, std::cref(p)));
    std::vector<R> results;
    results.reserve(points.size());
    for (auto& j : jobs) results.push_back(j.get());
    return results;
}

std::ofstream open_out(const std::string& path) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write output file '" + path + "'");
    return out;
}

MeshScheme parse_scheme(const std::string& s) {
    if (s == "uniform") return MeshScheme::Uniform;
    if (s == "graded") return MeshScheme::GradedBoundary;
    if (s == "graded_center") return MeshScheme::GradedCenter;
    if (s == "geometric") return MeshScheme::Geometric;
    if (s == "shishkin") return MeshScheme::Shishkin;
    throw ConfigError("config: key 'mesh' has unknown scheme '" + s + "'");
}

Mesh1D mesh_from(const Config& cfg, std::optional<long> n_override = std::nullopt) {
    MeshSpec spec;
    spec.scheme = parse_scheme(cfg.get_string("mesh", "uniform"));
    spec.a = cfg.get_double("a", 0.0);
    spec.b = cfg.get_double("b", 1.0);
    spec.n = n_override ? *n_override : cfg.get_int("n");
    spec.m = cfg.get_int("m", 0);
    spec.gamma = cfg.get_double("gamma", 1.0);
    spec.q = cfg.get_double("q", 0.5);
    spec.eta = cfg.get_double("eta", 0.25);
    return generate_mesh(spec);
}

Kernel custom_kernel(const std::string& profile, double delta) {
    std::function<double(double)> shape;
    if (profile == "linear")
        shape = [delta](double s) { return 1.0 - s / delta; };
    else if (profile == "gaussian")
        shape = [delta](double s) { return std::exp(-4.0 * s * s / (delta * delta)); };
    else
        throw ConfigError("config: key 'profile' must be linear or gaussian, got '" + profile + "'");
    const double mu2 = quad::integrate([&](double s) { return s * s * shape(s); }, 0.0, delta, 1e-13).value;
    return Kernel::custom(delta, [shape, mu2](double s) { return shape(s) / mu2; });
}

double horizon(const Config& cfg, const Mesh1D& mesh, std::optional<double> delta_override) {
    if (delta_override) return *delta_override;
    if (cfg.has("delta_h")) return cfg.get_double("delta_h") * mesh_stats(mesh).h_max;
    return cfg.get_double("delta", INFINITY);
}

// Builds the stiffness matrix selected by `kernel` and `path`.
StiffnessMatrix matrix_from(const Config& cfg, const Mesh1D& mesh, std::optional<double> delta_override = std::nullopt,
                            std::optional<double> alpha_override = std::nullopt) {
    const std::string variant = cfg.get_string("kernel", "fractional");
    const std::string path = cfg.get_string("path", "general");
    const double alpha = alpha_override ? *alpha_override : cfg.get_double("alpha", 0.0);
    if (variant == "local" || path == "local") return assemble_local(mesh);
    const double delta = horizon(cfg, mesh, delta_override);
    if (variant == "fractional_infinite" && !std::isfinite(delta)) return assemble_infinite(mesh, alpha);
    if (!std::isfinite(delta)) throw ConfigError("config: key 'delta' is required for kernel '" + variant + "'");
    if (path == "delta_le_h") {
        if (variant != "fractional") throw ConfigError("config: path delta_le_h needs kernel = fractional");
        return assemble_delta_le_h(mesh, alpha, delta);
    }
    const Kernel kernel = variant == "custom" ? custom_kernel(cfg.get_string("profile", "linear"), delta)
                                              : make_kernel(variant, alpha, delta);
    if (path == "toeplitz") return assemble_uniform_toeplitz(mesh, kernel);
    if (path != "general") throw ConfigError("config: key 'path' must be general, toeplitz, delta_le_h or local");
    return assemble(mesh, kernel);
}

Kernel kernel_for_oracle(const Config& cfg, const Mesh1D& mesh, std::optional<double> delta_override = std::nullopt) {
    const std::string variant = cfg.get_string("kernel", "fractional");
    const double delta = horizon(cfg, mesh, delta_override);
    if (variant == "custom") return custom_kernel(cfg.get_string("profile", "linear"), delta);
    return make_kernel(variant, cfg.get_double("alpha", 0.0), delta);
}

// Reference solution by name; `fractional_exact` is the infinite-horizon solution on (-1, 1).
NamedFunction reference_from(const Config& cfg, const std::string& key) {
    const std::string name = cfg.get_string(key);
    if (name == "fractional_exact") {
        const double alpha = cfg.get_double("alpha");
        return {name, [alpha](double x) { return exact_fractional_poisson(alpha, x); }, {}};
    }
    return lookup_function(name);
}

// Right-hand side: nodal interpolation of `f`, or the oracle forcing of `solution`.
Vector rhs_for(const Config& cfg, const Mesh1D& mesh, std::optional<double> delta_override = std::nullopt) {
    const std::string forcing = cfg.get_string("forcing", cfg.has("solution") && !cfg.has("f") ? "oracle" : "interp");
    if (forcing == "interp") return rhs_from_function(mesh, lookup_function(cfg.get_string("f", "1")).f);
    if (forcing == "load") return load_vector(mesh, lookup_function(cfg.get_string("f", "1")).f);
    if (forcing != "oracle") throw ConfigError("config: key 'forcing' must be interp, load or oracle");
    const NamedFunction u = reference_from(cfg, "solution");
    const Kernel kernel = kernel_for_oracle(cfg, mesh, delta_override);
    const double a = mesh.a(), b = mesh.b();
    return load_vector(mesh, [&](double x) { return apply_nonlocal(u.f, kernel, x, a, b, u.kinks).value; });
}

std::string fmt(double v) { return format_real(v); }

// compact form for file names, e.g. 0.1 rather than 0.10000000000000001
std::string short_number(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

int cmd_assemble(Context& c) {
    const Mesh1D mesh = mesh_from(c.cfg);
    const StiffnessMatrix s = matrix_from(c.cfg, mesh);
    {
        auto out = open_out(c.prefix + "_matrix.txt");
        write_coordinate(out, s);
    }
    {
        auto out = open_out(c.prefix + "_mesh.csv");
        write_mesh_csv(out, mesh);
    }
    if (s.toeplitz()) {
        auto out = open_out(c.prefix + "_toeplitz.txt");
        write_toeplitz(out, *s.toeplitz());
    }
    c.log << "assemble N=" << s.rows() << " half_bandwidth=" << s.half_bandwidth()
          << " storage=" << (s.storage() == StiffnessMatrix::Storage::Banded ? "banded" : "dense")
          << " max_abs=" << fmt(s.max_abs()) << '\n';
    return ExitOk;
}

int cmd_bvp(Context& c) {
    const Mesh1D mesh = mesh_from(c.cfg);
    const StiffnessMatrix s = matrix_from(c.cfg, mesh);
    const Solution sol = solve_bvp(mesh, s, rhs_for(c.cfg, mesh), c.cfg.get_double("lambda", 0.0));
    auto out = open_out(c.prefix + "_solution.csv");
    write_solution_csv(out, sol);
    c.log << "bvp N=" << mesh.interior_count() << " residual=" << fmt(sol.residual);
    if (c.cfg.has("solution")) {
        const ErrorNorms e = error_norms(mesh, sol, reference_from(c.cfg, "solution").f);
        c.log << " L2=" << fmt(e.l2) << " Linf=" << fmt(e.linf);
    }
    c.log << '\n';
    return ExitOk;
}

int cmd_helmholtz(Context& c) {
    const Mesh1D mesh = mesh_from(c.cfg);
    const StiffnessMatrix s = matrix_from(c.cfg, mesh);
    const double k2 = c.cfg.get_double("k2");
    const NamedFunction n = lookup_function(c.cfg.get_string("weight", "1"));
    const NamedFunction f = lookup_function(c.cfg.get_string("f", fmt(k2)));
    for (double kink : n.kinks) {
        const auto& x = mesh.nodes();
        if (kink > mesh.a() && kink < mesh.b() && std::find(x.begin(), x.end(), kink) == x.end())
            throw ConfigError("config: the mesh needs a node at the discontinuity x = " + fmt(kink) + " of the weight");
    }
    const Solution sol =
        solve_helmholtz(mesh, s, k2, n.f, rhs_from_function(mesh, f.f), static_cast<int>(c.cfg.get_int("sign", 1)));
    auto out = open_out(c.prefix + "_solution.csv");
    write_solution_csv(out, sol);
    c.log << "helmholtz N=" << mesh.interior_count() << " k2=" << fmt(k2) << " residual=" << fmt(sol.residual)
          << " max_abs=" << fmt(sol.u.cwiseAbs().maxCoeff()) << '\n';
    return ExitOk;
}

int cmd_eig(Context& c) {
    const Mesh1D mesh = mesh_from(c.cfg);
    const StiffnessMatrix s = matrix_from(c.cfg, mesh);
    const EigenPairs ep = eig_generalized(s, mass_matrix(mesh), c.cfg.get_int("count", 5));
    auto out = open_out(c.prefix + "_eigenvalues.csv");
    out << "k,lambda\n";
    for (Index k = 0; k < ep.values.size(); ++k) out << k + 1 << ',' << fmt(ep.values(k)) << '\n';
    c.log << "eig N=" << mesh.interior_count() << " lambda_1=" << fmt(ep.values(0)) << '\n';
    return ExitOk;
}

int cmd_allen_cahn(Context& c) {
    const Mesh1D mesh = mesh_from(c.cfg);
    const StiffnessMatrix s = matrix_from(c.cfg, mesh);
    AllenCahnParams p;
    p.eps = c.cfg.get_double("eps", p.eps);
    p.tau = c.cfg.get_double("tau", p.tau);
    p.T = c.cfg.get_double("T", p.T);
    std::vector<double> snaps;
    if (c.cfg.has("snapshots")) snaps = c.cfg.get_doubles("snapshots");
    std::sort(snaps.begin(), snaps.end());
    const AllenCahnRun run = allen_cahn_run(mesh, s, p, lookup_function(c.cfg.get_string("u0", "gaussian")).f, snaps);
    for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
        auto out = open_out(c.prefix + "_t" + short_number(run.snapshot_times[i]) + ".csv");
        write_solution_csv(out, run.snapshots[i]);
    }
    auto out = open_out(c.prefix + "_history.csv");
    out << "t,maxabs\n";
    for (std::size_t i = 0; i < run.times.size(); ++i) out << fmt(run.times[i]) << ',' << fmt(run.max_abs[i]) << '\n';
    c.log << "allen-cahn N=" << mesh.interior_count() << " steps=" << run.times.size() - 1
          << " max_abs=" << fmt(*std::max_element(run.max_abs.begin(), run.max_abs.end())) << '\n';
    return ExitOk;
}

int cmd_study_cond(Context& c) {
    const std::vector<long> ns = c.cfg.get_ints("n_values");
    const std::vector<double> alphas = c.cfg.has("alpha_values") ? c.cfg.get_doubles("alpha_values")
                                                                 : std::vector<double>{c.cfg.get_double("alpha")};
    StudyReport report({"alpha", "N", "h_min", "h_max", "lambda_min", "lambda_max", "cond", "cond_slope", "lambda_min_slope"});
    for (double alpha : alphas) {
        std::vector<std::vector<double>> rows;
        std::vector<double> nn, cond, lmin;
        struct Point {
            MeshStats st;
            Extremes ex;
        };
        const std::vector<Point> points = parallel_sweep(ns, [&](long n) {
            const Mesh1D mesh = mesh_from(c.cfg, n);
            return Point{mesh_stats(mesh), condition_and_extremes(matrix_from(c.cfg, mesh, std::nullopt, alpha))};
        });
        for (std::size_t i = 0; i < ns.size(); ++i) {
            const long n = ns[i];
            const MeshStats& st = points[i].st;
            const Extremes& ex = points[i].ex;
            c.log << "study-cond alpha=" << fmt(alpha) << " N=" << n << " cond=" << fmt(ex.cond)
                  << " lambda_min=" << fmt(ex.lambda_min) << (ex.converged ? "" : " (not converged)") << '\n';
            rows.push_back({alpha, static_cast<double>(n), st.h_min, st.h_max, ex.lambda_min, ex.lambda_max, ex.cond});
            nn.push_back(static_cast<double>(n));
            cond.push_back(ex.cond);
            lmin.push_back(ex.lambda_min);
        }
        const double cs = ns.size() >= 2 ? loglog_fit(nn, cond).slope : NAN;
        const double ls = ns.size() >= 2 ? loglog_fit(nn, lmin).slope : NAN;
        c.log << "study-cond alpha=" << fmt(alpha) << " cond_slope=" << fmt(cs) << " lambda_min_slope=" << fmt(ls) << '\n';
        for (auto& r : rows) {
            r.push_back(cs);
            r.push_back(ls);
            report.add_row(std::move(r));
        }
    }
    auto out = open_out(c.prefix + "_cond.csv");
    report.write_csv(out);
    return ExitOk;
}

int cmd_study_convergence(Context& c) {
    const std::vector<long> ns = c.cfg.get_ints("n_values");
    const NamedFunction u = reference_from(c.cfg, "solution");
    StudyReport report({"N", "h", "delta", "L2", "Linf"});
    std::vector<double> hs, l2, linf;
    struct Point {
        double h, delta;
        ErrorNorms e;
    };
    const std::vector<Point> points = parallel_sweep(ns, [&](long n) {
        const Mesh1D mesh = mesh_from(c.cfg, n);
        const Solution sol = solve_bvp(mesh, matrix_from(c.cfg, mesh), rhs_for(c.cfg, mesh));
        return Point{mesh_stats(mesh).h_max, horizon(c.cfg, mesh, std::nullopt), error_norms(mesh, sol, u.f)};
    });
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const long n = ns[i];
        const auto& [h, delta, e] = points[i];
        c.log << "study-convergence N=" << n << " h=" << fmt(h) << " L2=" << fmt(e.l2) << " Linf=" << fmt(e.linf) << '\n';
        report.add_row({static_cast<double>(n), h, delta, e.l2, e.linf});
        hs.push_back(h);
        l2.push_back(e.l2);
        linf.push_back(e.linf);
    }
    if (ns.size() >= 3) {
        const RateFit f2 = estimate_rates(l2, hs), fi = estimate_rates(linf, hs);
        report.add_rate_columns("L2_rate", f2);
        report.add_rate_columns("Linf_rate", fi);
        c.log << "study-convergence L2_slope=" << fmt(f2.slope) << " Linf_slope=" << fmt(fi.slope) << '\n';
    }
    auto out = open_out(c.prefix + "_convergence.csv");
    report.write_csv(out);
    return ExitOk;
}

int cmd_study_limit(Context& c) {
    const std::vector<double> deltas = c.cfg.get_doubles("delta_values");
    const NamedFunction ref = reference_from(c.cfg, "reference");
    const Mesh1D mesh = mesh_from(c.cfg);
    StudyReport report({"delta", "Linf_dev", "L2_dev"});
    const std::vector<ErrorNorms> errors = parallel_sweep(deltas, [&](double delta) {
        const Solution sol = solve_bvp(mesh, matrix_from(c.cfg, mesh, delta), rhs_for(c.cfg, mesh, delta));
        return error_norms(mesh, sol, ref.f);
    });
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        const double delta = deltas[i];
        const ErrorNorms& e = errors[i];
        c.log << "study-limit delta=" << fmt(delta) << " Linf_dev=" << fmt(e.linf) << " L2_dev=" << fmt(e.l2) << '\n';
        report.add_row({delta, e.linf, e.l2});
    }
    auto out = open_out(c.prefix + "_limit.csv");
    report.write_csv(out);
    return ExitOk;
}

}  // namespace

int run(const std::string& command, const Config& cfg, const std::string& out_prefix, std::ostream& log,
        std::ostream& err) {
    static const std::map<std::string, std::function<int(Context&)>> table = {
        {"assemble", cmd_assemble},       {"bvp", cmd_bvp},
        {"helmholtz", cmd_helmholtz},     {"eig", cmd_eig},
        {"allen-cahn", cmd_allen_cahn},   {"study-cond", cmd_study_cond},
        {"study-convergence", cmd_study_convergence}, {"study-limit", cmd_study_limit}};
    const auto it = table.find(command);
    if (it == table.end()) {
        err << "error: unknown command '" << command << "'\n";
        return ExitConfig;
    }
    Context ctx{cfg, out_prefix, log};
    try {
        return it->second(ctx);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return ExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return ExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return ExitNumerical;
    }
}

}  // namespace nlfem

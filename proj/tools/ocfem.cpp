// ocfem: convergence studies for the derivative-constrained control problem.
//
//   ocfem solve --problem example-dirichlet --mesh uniform --base 2 --levels 7 --out t1.csv
//   ocfem reproduce --out-dir tables --format markdown
//   ocfem verify
//
// Exit codes: 0 ok, 1 verify found failures, 2 configuration error, 3 solver failure.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ocfem/ocfem.hpp>

using namespace ocfem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify = 1;
constexpr int exit_config = 2;
constexpr int exit_solver = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t quad_order_from(std::optional<std::size_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("OCFEM_QUAD_ORDER")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1 || v > 64)
            throw ConfigError(std::string("OCFEM_QUAD_ORDER must be an integer in [1, 64], got '") + env + "'");
        return static_cast<std::size_t>(v);
    }
    return default_load_order;
}

void write_table(const ConvergenceTable& t, const std::string& format, std::ostream& os) {
    if (format == "csv")
        write_csv(os, t);
    else
        write_markdown(os, t);
}

void emit(const ConvergenceTable& t, const std::string& format, const std::string& out) {
    if (out.empty() || out == "-") {
        write_table(t, format, std::cout);
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + out + "'");
    write_table(t, format, f);
}

struct SolveArgs {
    std::string problem;
    std::string problem_file;
    std::string mesh = "uniform";
    std::optional<std::size_t> base;
    std::optional<std::size_t> base_k;
    std::size_t levels = 1;
    double shift = 0.25;
    std::optional<std::size_t> quad_order;
    double gamma = 1.0;
    std::size_t max_iter = 500;
    std::string format = "csv";
    std::string out;
};

int run_solve(const SolveArgs& a) {
    StudyConfig cfg;
    if (!a.problem_file.empty()) {
        cfg.problem = load_problem_file(a.problem_file);
    } else {
        auto p = builtin_problem(a.problem);
        if (!p) throw ConfigError("unknown problem '" + a.problem + "' (built-in: example-dirichlet, example-mixed)");
        cfg.problem = std::move(*p);
    }
    if (a.mesh == "uniform") {
        cfg.family = MeshFamily::uniform;
    } else if (a.mesh == "perturbed") {
        cfg.family = MeshFamily::perturbed;
    } else if (a.mesh == "third-aligned") {
        cfg.family = MeshFamily::third_aligned;
    } else {
        throw ConfigError("unknown mesh family '" + a.mesh + "'");
    }
    if (cfg.family == MeshFamily::third_aligned) {
        if (a.base) throw ConfigError("third-aligned meshes take --base-k, not --base");
        cfg.base = a.base_k.value_or(1);
    } else {
        if (a.base_k) throw ConfigError("--base-k only applies to third-aligned meshes");
        cfg.base = a.base.value_or(2);
        if (cfg.base == 0) throw ConfigError("--base must be >= 1");
        if (cfg.family == MeshFamily::perturbed && cfg.base % 2 != 0) throw ConfigError("perturbed meshes need an even --base");
    }
    if (a.levels == 0) throw ConfigError("--levels must be >= 1");
    cfg.levels = a.levels;
    cfg.shift = a.shift;
    cfg.quad_order = quad_order_from(a.quad_order);
    cfg.pdas.gamma = a.gamma;
    cfg.pdas.max_iter = a.max_iter;
    emit(run_study(cfg), a.format, a.out);
    return exit_ok;
}

int run_reproduce(const std::string& out_dir, const std::string& format, std::optional<std::size_t> quad) {
    const auto studies = reproduction_studies(quad_order_from(quad));
    if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) throw ConfigError("cannot create '" + out_dir + "': " + ec.message());
    }
    const std::string ext = format == "csv" ? ".csv" : ".md";
    for (const auto& s : studies) {
        const auto t = run_study(s.config, s.title);
        if (out_dir.empty()) {
            if (format == "csv") std::cout << "# " << s.name << ": " << s.title << '\n';
            write_table(t, format, std::cout);
        } else {
            const auto path = std::filesystem::path(out_dir) / (s.name + ext);
            emit(t, format, path.string());
            std::cerr << "wrote " << path.string() << '\n';
        }
    }
    return exit_ok;
}

// Property checks, one line each.
int run_verify() {
    int failed = 0;
    auto line = [&](bool ok, const std::string& what) {
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
        failed += ok ? 0 : 1;
    };

    {
        double worst = 0.0;
        bool same = true;
        for (const auto& prob : {example_dirichlet(), example_mixed()}) {
            for (std::size_t n : {2u, 4u, 8u, 12u}) {
                const HermiteSpace s(uniform_mesh(n), prob.bc);
                const BoundQP qp{assemble_system(s, prob.beta), assemble_load(s, prob.y_d, prob.f, prob.beta),
                                 constraint_rows(s, prob.psi)};
                const auto p = solve_pdas(qp), q = solve_bruteforce(qp);
                for (std::size_t i = 0; i < p.x.size(); ++i)
                    worst = std::max(worst, static_cast<double>(std::fabs(p.x[i] - q.x[i])));
                same = same && p.active == q.active;
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "oracle equivalence: max |x_pdas - x_brute| = %.2e", worst);
        line(worst <= 1e-10 && same, buf);
    }

    {
        std::mt19937 rng(1);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        bool empty = true;
        for (BcKind bc : {BcKind::dirichlet, BcKind::mixed}) {
            for (int trial = 0; trial < 4; ++trial) {
                const double c = u(rng), d = u(rng);
                std::array<double, 4> coeffs = bc == BcKind::dirichlet
                                                   ? std::array<double, 4>{c, d, -c, -d}
                                                   : std::array<double, 4>{3 * c + d, 2 * c - d, -c - d, d};
                double m = 0.0;
                for (double v : coeffs) m = std::max(m, std::abs(v));
                for (double& v : coeffs) v /= m;
                const auto prob = manufactured_unconstrained(coeffs, bc);
                const auto ds = solve_problem(prob, perturbed_mesh(8, 0.3));
                const auto exact = interpolate(ds.space, prob.exact->ybar);
                std::vector<long double> e(ds.sol.x.size());
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ds.sol.x[i] - exact.coefficients()[i];
                worst = std::max(worst, std::sqrt(std::max(0.0, energy_norm_squared(ds.qp.a, std::span<const long double>(e)))));
                empty = empty && ds.sol.active.empty();
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "Galerkin exactness: max energy-norm error = %.2e", worst);
        line(worst <= 1e-10 && empty, buf);
    }

    {
        bool ok = true;
        double worst = 0.0;
        for (const auto& s : reproduction_studies()) {
            for (const auto& l : run_study(s.config, s.title).levels) {
                const double r = l.kkt.stationarity / (1.0 + l.load_norm);
                worst = std::max(worst, r);
                ok = ok && r <= 1e-9 && l.kkt.feasibility <= 1e-10 && l.kkt.complementarity <= 1e-9 &&
                     l.kkt.min_lambda >= -1e-12;
            }
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "KKT residuals on all study levels: max scaled stationarity = %.2e", worst);
        line(ok, buf);
    }

    {
        const auto prob = example_dirichlet();
        const auto ds = solve_problem(prob, uniform_mesh(16));
        const auto d = multiplier_diag(ds.sol, ds.qp.bounds, ds.space, prob);
        line(d.active_nodes == std::vector<double>{0.0}, "Dirichlet example activates only the node at 0");
    }

    {
        bool ok = true;
        for (const auto& prob : {example_dirichlet(), example_mixed()}) {
            const HermiteSpace s(third_aligned_mesh(2), prob.bc);
            const auto yh = interpolate(s, prob.exact->ybar);
            for (const auto& r : constraint_rows(s, prob.psi)) ok = ok && yh.coefficients()[r.dof] <= r.upper + 1e-14;
        }
        line(ok, "Hermite interpolant of the exact state is feasible");
    }

    std::printf("%d check(s) failed\n", failed);
    return failed == 0 ? exit_ok : exit_verify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cubic Hermite FEM for optimal control with a derivative constraint"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "run one convergence study");
    auto* prob_opt = solve->add_option("--problem", sa.problem, "built-in problem name");
    auto* file_opt = solve->add_option("--problem-file", sa.problem_file, "JSON problem file");
    prob_opt->excludes(file_opt);
    solve->add_option("--mesh", sa.mesh, "uniform | perturbed | third-aligned")->capture_default_str();
    solve->add_option("--base", sa.base, "elements on the first level (uniform, perturbed)");
    solve->add_option("--base-k", sa.base_k, "first level has 3*2^k elements (third-aligned)");
    solve->add_option("--levels", sa.levels, "number of levels")->capture_default_str();
    solve->add_option("--shift", sa.shift, "relative node shift of perturbed meshes")->capture_default_str();
    solve->add_option("--quad-order", sa.quad_order, "Gauss points per panel for the load (overrides OCFEM_QUAD_ORDER)");
    solve->add_option("--gamma", sa.gamma, "PDAS gamma")->capture_default_str();
    solve->add_option("--max-iter", sa.max_iter, "PDAS iteration limit")->capture_default_str();
    solve->add_option("--format", sa.format, "csv | markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    solve->add_option("--out", sa.out, "output file (default stdout)");

    std::string out_dir, rep_format = "markdown";
    std::optional<std::size_t> rep_quad;
    auto* reproduce = app.add_subcommand("reproduce", "run the four benchmark studies");
    reproduce->add_option("--out-dir", out_dir, "write table1..table4 files here (default stdout)");
    reproduce->add_option("--format", rep_format, "csv | markdown")
        ->check(CLI::IsMember({"csv", "markdown"}))
        ->capture_default_str();
    reproduce->add_option("--quad-order", rep_quad, "Gauss points per panel for the load");

    auto* verify = app.add_subcommand("verify", "run the property checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*solve) {
            if (sa.problem.empty() && sa.problem_file.empty()) throw ConfigError("solve needs --problem or --problem-file");
            return run_solve(sa);
        }
        if (*reproduce) return run_reproduce(out_dir, rep_format, rep_quad);
        if (*verify) return run_verify();
    } catch (const StudyFailure& e) {
        std::cerr << "ocfem: solver failure at " << e.what() << '\n';
        return exit_solver;
    } catch (const NoConvergence& e) {
        std::cerr << "ocfem: " << e.what() << '\n';
        return exit_solver;
    } catch (const ConfigError& e) {
        std::cerr << "ocfem: " << e.what() << '\n';
        return exit_config;
    } catch (const SchemaError& e) {
        std::cerr << "ocfem: " << e.what() << '\n';
        return exit_config;
    } catch (const InfeasibleData& e) {
        std::cerr << "ocfem: " << e.what() << '\n';
        return exit_config;
    } catch (const InvalidArgument& e) {
        std::cerr << "ocfem: " << e.what() << '\n';
        return exit_config;
    }
    return exit_ok;
}

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "assembly.hpp"
#include "hermite_space.hpp"
#include "mesh.hpp"
#include "problems.hpp"
#include "vi_solver.hpp"

namespace ocfem {

/// Everything produced by one discrete solve.
struct DiscreteSolve {
    HermiteSpace space;
    BoundQP qp;
    QPSolution sol;
    HermiteFunction y_h;
};

inline DiscreteSolve solve_problem(const ProblemSpec& problem, const Mesh1D& mesh,
                                   std::size_t quad_order = default_load_order, const PdasOptions& pdas = {}) {
    HermiteSpace space(mesh, problem.bc);
    BoundQP qp{assemble_system(space, problem.beta),
               assemble_load(space, problem.y_d, problem.f, problem.beta, quad_order),
               constraint_rows(space, problem.psi)};
    QPSolution sol = solve_pdas(qp, pdas);
    HermiteFunction y_h(space, std::vector<double>(sol.x.begin(), sol.x.end()));
    return {std::move(space), std::move(qp), std::move(sol), std::move(y_h)};
}

struct StudyConfig {
    ProblemSpec problem;
    MeshFamily family = MeshFamily::uniform;
    /// Element count of the first level (uniform, perturbed) or the exponent
    /// k of 3 * 2^k elements (third-aligned).
    std::size_t base = 2;
    std::size_t levels = 1;
    double shift = 0.25;
    std::size_t quad_order = default_load_order;
    PdasOptions pdas;
};

inline Mesh1D study_mesh(const StudyConfig& cfg, std::size_t level) {
    switch (cfg.family) {
        case MeshFamily::uniform: return uniform_mesh(cfg.base << level);
        case MeshFamily::perturbed: return perturbed_mesh(cfg.base << level, cfg.shift);
        case MeshFamily::third_aligned: return third_aligned_mesh(static_cast<unsigned>(cfg.base + level));
        case MeshFamily::custom: break;
    }
    throw InvalidArgument("study_mesh: custom meshes are not supported in studies");
}

struct StudyLevel {
    ErrorRecord record;
    std::optional<double> control_l2;
    std::optional<double> control_eoc;
    std::size_t active_nodes = 0;
    MultiplierDiag multipliers;
    KktReport kkt;
    double load_norm = 0.0; ///< ||b||_inf, scales the stationarity tolerance
    std::size_t bound_rows = 0;
    std::size_t iterations = 0;
};

struct ConvergenceTable {
    std::string title;
    std::vector<StudyLevel> levels;
};

/// A level failed to solve; carries the level index and element count.
class StudyFailure : public std::runtime_error {
public:
    StudyFailure(const std::string& what, std::size_t level, std::size_t elements)
        : std::runtime_error(what), level_(level), elements_(elements) {}
    std::size_t level() const noexcept { return level_; }
    std::size_t elements() const noexcept { return elements_; }

private:
    std::size_t level_;
    std::size_t elements_;
};

inline StudyLevel analyse_level(const ProblemSpec& problem, const DiscreteSolve& ds, std::size_t level) {
    StudyLevel out;
    if (problem.exact) {
        out.record = error_record(ds.y_h, *problem.exact, level);
        out.control_l2 = recover_control(ds.y_h, problem.f).l2_error(problem.exact->ubar);
    } else {
        out.record.level = level;
        out.record.elements = ds.space.mesh().num_elements();
        out.record.h = ds.space.mesh().h();
        out.record.errors.values.fill(std::nan(""));
    }
    out.multipliers = multiplier_diag(ds.sol, ds.qp.bounds, ds.space, problem);
    out.active_nodes = ds.sol.active.size();
    out.kkt = kkt_report(ds.qp, ds.sol);
    for (double v : ds.qp.b) out.load_norm = std::max(out.load_norm, std::abs(v));
    out.bound_rows = ds.qp.bounds.size();
    out.iterations = ds.sol.iterations;
    return out;
}

inline ConvergenceTable run_study(const StudyConfig& cfg, std::string title = {}) {
    if (cfg.levels == 0) throw InvalidArgument("run_study: levels must be >= 1");
    if (cfg.family != MeshFamily::third_aligned && cfg.base == 0)
        throw InvalidArgument("run_study: base size must be >= 1");
    ConvergenceTable table;
    table.title = title.empty() ? cfg.problem.name + " / " + std::string(to_string(cfg.family)) : std::move(title);
    for (std::size_t level = 0; level < cfg.levels; ++level) {
        const Mesh1D mesh = study_mesh(cfg, level);
        try {
            const DiscreteSolve ds = solve_problem(cfg.problem, mesh, cfg.quad_order, cfg.pdas);
            table.levels.push_back(analyse_level(cfg.problem, ds, level));
        } catch (const NoConvergence& e) {
            throw StudyFailure("level " + std::to_string(level) + " (" + std::to_string(mesh.num_elements()) +
                                   " elements): " + e.what(),
                               level, mesh.num_elements());
        }
    }
    if (cfg.problem.exact) {
        std::vector<ErrorRecord> recs;
        for (const auto& l : table.levels) recs.push_back(l.record);
        compute_eoc(recs);
        for (std::size_t k = 0; k < recs.size(); ++k) {
            table.levels[k].record = recs[k];
            if (k > 0) table.levels[k].control_eoc = eoc_rate(*table.levels[k - 1].control_l2, *table.levels[k].control_l2);
        }
    }
    return table;
}

/// The four experiments: Dirichlet on dyadic and perturbed meshes, mixed on
/// dyadic and third-aligned meshes.
struct NamedStudy {
    std::string name;
    std::string title;
    StudyConfig config;
};

inline std::vector<NamedStudy> reproduction_studies(std::size_t quad_order = default_load_order) {
    std::vector<NamedStudy> s;
    s.push_back({"table1", "example-dirichlet, uniform dyadic meshes",
                 {example_dirichlet(), MeshFamily::uniform, 2, 7, 0.25, quad_order, {}}});
    s.push_back({"table2", "example-dirichlet, perturbed meshes (0 not a node)",
                 {example_dirichlet(), MeshFamily::perturbed, 4, 7, 0.25, quad_order, {}}});
    s.push_back({"table3", "example-mixed, uniform dyadic meshes",
                 {example_mixed(), MeshFamily::uniform, 4, 7, 0.25, quad_order, {}}});
    s.push_back({"table4", "example-mixed, third-aligned meshes",
                 {example_mixed(), MeshFamily::third_aligned, 1, 6, 0.25, quad_order, {}}});
    return s;
}

namespace detail {
/// Empty for NaN (no exact solution to compare against).
inline std::string sci(double v) {
    if (std::isnan(v)) return {};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}
inline std::string opt_sci(const std::optional<double>& v) { return v ? sci(*v) : std::string(); }
inline std::string fixed(double v, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}
} // namespace detail

inline void write_csv(std::ostream& os, const ConvergenceTable& t) {
    os << "elements,h,L2,Linf,H1,H2,EOC_L2,EOC_Linf,EOC_H1,EOC_H2,active_nodes,mass\n";
    for (const auto& l : t.levels) {
        const auto& r = l.record;
        os << r.elements << ',' << detail::sci(r.h);
        for (Norm n : all_norms) os << ',' << detail::sci(r.errors[n]);
        for (Norm n : all_norms) os << ',' << detail::opt_sci(r.rate(n));
        os << ',' << l.active_nodes << ',' << detail::sci(l.multipliers.total_mass) << '\n';
    }
}

inline void write_markdown(std::ostream& os, const ConvergenceTable& t) {
    if (!t.title.empty()) os << "### " << t.title << "\n\n";
    os << "| elements | h | L2 | Linf | H1 | H2 | active nodes | mass |\n";
    os << "|---:|---:|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& l : t.levels) {
        const auto& r = l.record;
        os << "| " << r.elements << " | " << detail::sci(r.h);
        for (Norm n : all_norms) {
            os << " | " << detail::sci(r.errors[n]);
            if (auto rate = r.rate(n)) os << " (" << detail::fixed(*rate, 2) << ")";
        }
        os << " | " << l.active_nodes << " | " << detail::sci(l.multipliers.total_mass) << " |\n";
    }
    os << '\n';
}

} // namespace ocfem

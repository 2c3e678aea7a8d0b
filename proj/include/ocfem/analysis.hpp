#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "hermite_space.hpp"
#include "piecewise.hpp"
#include "problems.hpp"
#include "quadrature.hpp"
#include "vi_solver.hpp"

namespace ocfem {

enum class Norm : std::size_t { l2 = 0, linf = 1, h1 = 2, h2 = 3 };
inline constexpr std::array<Norm, 4> all_norms{Norm::l2, Norm::linf, Norm::h1, Norm::h2};

inline std::string_view to_string(Norm n) {
    constexpr std::array<std::string_view, 4> names{"L2", "Linf", "H1", "H2"};
    return names[static_cast<std::size_t>(n)];
}

/// L2, Linf, H1-seminorm and H2-seminorm, indexed by Norm.
struct NormErrors {
    std::array<double, 4> values{};
    double& operator[](Norm n) { return values[static_cast<std::size_t>(n)]; }
    double operator[](Norm n) const { return values[static_cast<std::size_t>(n)]; }
};

struct ErrorRecord {
    std::size_t level = 0;
    std::size_t elements = 0;
    double h = 0.0;
    NormErrors errors;
    std::array<std::optional<double>, 4> eoc{}; ///< empty at level 0 or when undefined

    std::optional<double> rate(Norm n) const { return eoc[static_cast<std::size_t>(n)]; }
};

struct NormOptions {
    std::size_t order = 10;        ///< Gauss points per panel
    std::size_t linf_samples = 32; ///< equispaced subintervals per element
};

/// Errors of u_h against an exact state. Integrals use Gauss panels split at
/// element boundaries and at the exact solution's breakpoints; Linf samples
/// each element at linf_samples + 1 equispaced points (ends included).
inline NormErrors error_norms(const HermiteFunction& u_h, const PiecewiseSmooth& exact, const NormOptions& opt = {}) {
    const Mesh1D& mesh = u_h.space().mesh();
    const GaussRule& r = gauss_legendre(opt.order);
    double l2 = 0.0, h1 = 0.0, h2 = 0.0, linf = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Interval el = mesh.element(e);
        const auto cuts = panel_cuts(el, exact.breakpoints());
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
            const double half = 0.5 * (cuts[p + 1] - cuts[p]);
            const Segment& seg = exact.segments()[exact.segment_index(mid)];
            for (std::size_t q = 0; q < r.points.size(); ++q) {
                const double x = mid + half * r.points[q];
                const double w = half * r.weights[q];
                const double d0 = seg.eval(x, 0) - u_h.eval_on_element(e, x, 0);
                const double d1 = seg.eval(x, 1) - u_h.eval_on_element(e, x, 1);
                const double d2 = seg.eval(x, 2) - u_h.eval_on_element(e, x, 2);
                l2 += w * d0 * d0;
                h1 += w * d1 * d1;
                h2 += w * d2 * d2;
            }
        }
        for (std::size_t s = 0; s <= opt.linf_samples; ++s) {
            const double x = s == opt.linf_samples
                                 ? el.b
                                 : el.a + el.length() * static_cast<double>(s) / static_cast<double>(opt.linf_samples);
            // exact pieces are at least continuous, so either side works
            linf = std::max(linf, std::abs(exact.eval(x) - u_h.eval_on_element(e, x, 0)));
        }
    }
    NormErrors out;
    out[Norm::l2] = std::sqrt(l2);
    out[Norm::linf] = linf;
    out[Norm::h1] = std::sqrt(h1);
    out[Norm::h2] = std::sqrt(h2);
    return out;
}

inline ErrorRecord error_record(const HermiteFunction& u_h, const ExactInfo& exact, std::size_t level = 0,
                                const NormOptions& opt = {}) {
    ErrorRecord rec;
    rec.level = level;
    rec.elements = u_h.space().mesh().num_elements();
    rec.h = u_h.space().mesh().h();
    rec.errors = error_norms(u_h, exact.ybar, opt);
    return rec;
}

/// log2(e_prev / e_cur); undefined when either error is zero.
inline std::optional<double> eoc_rate(double e_prev, double e_cur) {
    if (!(e_prev > 0.0) || !(e_cur > 0.0)) return std::nullopt;
    return std::log2(e_prev / e_cur);
}

/// Fill in estimated orders of convergence. Consecutive levels must halve h.
inline void compute_eoc(std::span<ErrorRecord> records) {
    if (records.empty()) return;
    records[0].eoc.fill(std::nullopt);
    for (std::size_t k = 1; k < records.size(); ++k) {
        const double ratio = records[k - 1].h / records[k].h;
        if (std::abs(ratio - 2.0) > 1e-9)
            throw InvalidArgument("compute_eoc: mesh size must halve between consecutive levels");
        for (Norm n : all_norms)
            records[k].eoc[static_cast<std::size_t>(n)] = eoc_rate(records[k - 1].errors[n], records[k].errors[n]);
    }
}

/// Discrete control u_h = -y_h'' - f.
class RecoveredControl {
public:
    RecoveredControl(HermiteFunction y_h, PiecewiseSmooth f) : y_(std::move(y_h)), f_(std::move(f)) {}

    double eval(double x) const { return -y_.eval(x, 2) - f_.eval(x); }
    double operator()(double x) const { return eval(x); }

    std::vector<double> breakpoints() const {
        const auto nodes = y_.space().mesh().nodes();
        std::vector<double> interior(nodes.begin() + 1, nodes.end() - 1);
        return merge_breakpoints(interior, f_.breakpoints());
    }

    /// ||u - u_h||_L2 with panels split at nodes and at the breakpoints of f and u.
    double l2_error(const PiecewiseSmooth& u, std::size_t order = 10) const {
        const Mesh1D& mesh = y_.space().mesh();
        const auto bps = merge_breakpoints(f_.breakpoints(), u.breakpoints());
        const GaussRule& r = gauss_legendre(order);
        double s = 0.0;
        for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
            const auto cuts = panel_cuts(mesh.element(e), bps);
            for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
                const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
                const double half = 0.5 * (cuts[p + 1] - cuts[p]);
                const Segment& fs = f_.segments()[f_.segment_index(mid)];
                const Segment& us = u.segments()[u.segment_index(mid)];
                for (std::size_t q = 0; q < r.points.size(); ++q) {
                    const double x = mid + half * r.points[q];
                    const double d = us.eval(x) - (-y_.eval_on_element(e, x, 2) - fs.eval(x));
                    s += half * r.weights[q] * d * d;
                }
            }
        }
        return std::sqrt(s);
    }

private:
    HermiteFunction y_;
    PiecewiseSmooth f_;
};

inline RecoveredControl recover_control(const HermiteFunction& y_h, const PiecewiseSmooth& f) { return {y_h, f}; }

struct NodalMultiplier {
    std::size_t node;
    double x;
    double lambda;
};

struct MultiplierDiag {
    std::vector<NodalMultiplier> nodal;  ///< in node order
    std::vector<double> active_nodes;    ///< positions of active bound rows
    double total_mass = 0.0;             ///< sum of nodal multipliers
    std::optional<double> exact_mass;
    std::vector<double> far_active;      ///< active nodes more than 2h from the exact active set
};

/// Discrete multiplier summary. The stationarity row A x - b + lambda = 0
/// pairs lambda with test slopes exactly like int z' dmu, and mu already
/// includes beta, so the mass is compared without rescaling.
inline MultiplierDiag multiplier_diag(const QPSolution& sol, std::span<const BoundRow> bounds,
                                      const HermiteSpace& space, const ProblemSpec& problem) {
    MultiplierDiag d;
    const auto nodes = space.mesh().nodes();
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        d.nodal.push_back({bounds[k].node, nodes[bounds[k].node], sol.lambda[k]});
        d.total_mass += sol.lambda[k];
    }
    std::sort(d.nodal.begin(), d.nodal.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
    for (std::size_t k : sol.active) d.active_nodes.push_back(nodes[bounds[k].node]);
    std::sort(d.active_nodes.begin(), d.active_nodes.end());
    if (problem.exact) {
        d.exact_mass = problem.exact->mu.total_mass();
        const double h = space.mesh().h();
        for (double x : d.active_nodes)
            if (problem.exact->active_set.distance(x) > 2.0 * h) d.far_active.push_back(x);
    }
    return d;
}

/// a(v, v) = ||v||^2_L2 + beta |v|^2_H2 from the assembled matrix.
template <class T>
double energy_norm_squared(const SymBandMatrix& a, std::span<const T> coeffs) {
    const auto av = a.multiply_extended(coeffs);
    long double s = 0.0L;
    for (std::size_t i = 0; i < coeffs.size(); ++i) s += av[i] * coeffs[i];
    return static_cast<double>(s);
}

} // namespace ocfem

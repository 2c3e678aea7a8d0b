#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hermite_space.hpp"
#include "piecewise.hpp"

namespace ocfem {

/// Where the exact derivative constraint is active: isolated points plus
/// closed intervals.
struct ActiveSetDesc {
    std::vector<double> points;
    std::vector<std::pair<double, double>> intervals;

    bool empty() const { return points.empty() && intervals.empty(); }

    double distance(double x) const {
        double d = std::numeric_limits<double>::infinity();
        for (double p : points) d = std::min(d, std::abs(x - p));
        for (auto [a, b] : intervals) d = std::min(d, x < a ? a - x : (x > b ? x - b : 0.0));
        return d;
    }
};

/// Multiplier measure: point masses plus an absolutely continuous part.
/// The density already carries the factor beta.
struct MeasureDesc {
    struct Atom {
        double x;
        double mass;
    };
    std::vector<Atom> atoms;
    std::optional<PiecewiseSmooth> density;

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.mass;
        if (density) m += density->integral(16);
        return m;
    }
};

struct ExactInfo {
    PiecewiseSmooth ybar;
    PiecewiseSmooth ubar;
    ActiveSetDesc active_set;
    MeasureDesc mu;
};

struct ProblemSpec {
    std::string name;
    double beta = 1.0;
    BcKind bc = BcKind::dirichlet;
    PiecewiseSmooth f;
    PiecewiseSmooth psi;
    PiecewiseSmooth y_d;
    std::optional<ExactInfo> exact;

    /// Data assumptions: beta > 0; Dirichlet needs int psi > 0 (otherwise the
    /// feasible set is a single point); mixed needs psi(1) >= 0.
    void validate() const {
        if (!(beta > 0.0)) throw InvalidArgument("problem '" + name + "': beta must be positive");
        if (bc == BcKind::dirichlet) {
            const double m = psi.integral(16);
            if (!(m > 0.0))
                throw InfeasibleData("problem '" + name + "': Dirichlet data need int psi dx > 0, got " +
                                     std::to_string(m));
        } else if (psi.eval(1.0, 0, Side::left) < 0.0) {
            throw InfeasibleData("problem '" + name + "': mixed data need psi(1) >= 0");
        }
        if (exact) validate_exact();
    }

private:
    void validate_exact() const {
        const ExactInfo& ex = *exact;
        constexpr double tol = 1e-12;
        if (std::abs(ex.ybar.eval(-1.0)) > tol) throw InvalidArgument("problem '" + name + "': exact ybar(-1) != 0");
        const double end = bc == BcKind::dirichlet ? ex.ybar.eval(1.0, 0, Side::left)
                                                   : ex.ybar.eval(1.0, 1, Side::left);
        if (std::abs(end) > tol) throw InvalidArgument("problem '" + name + "': exact ybar violates the BC at +1");
        constexpr int samples = 1000;
        for (int i = 0; i <= samples; ++i) {
            const double x = -1.0 + 2.0 * i / samples;
            for (Side s : {Side::left, Side::right}) {
                if (ex.ybar.eval(x, 1, s) > psi.eval(x, 0, s) + tol)
                    throw InvalidArgument("problem '" + name + "': exact ybar' exceeds psi at x = " +
                                          std::to_string(x));
                if (ex.mu.density && ex.mu.density->eval(x, 0, s) < 0.0)
                    throw InvalidArgument("problem '" + name + "': multiplier density is negative");
            }
        }
        for (const auto& a : ex.mu.atoms)
            if (a.mass < 0.0 || a.x < -1.0 || a.x > 1.0)
                throw InvalidArgument("problem '" + name + "': invalid multiplier atom");
    }
};

namespace detail {
/// u = -y'' - f for exact solutions.
inline PiecewiseSmooth control_from_state(const PiecewiseSmooth& ybar, const PiecewiseSmooth& f) {
    return (ybar.derivative(2) + f).scaled(-1.0);
}
} // namespace detail

/// Dirichlet benchmark: beta = psi = 1, a piecewise sextic state whose
/// derivative touches the bound only at the origin, where the multiplier is
/// a unit point mass.
inline ProblemSpec example_dirichlet() {
    ProblemSpec p;
    p.name = "example-dirichlet";
    p.beta = 1.0;
    p.bc = BcKind::dirichlet;
    p.psi = PiecewiseSmooth::constant(1.0);

    // -(x+1)/2 + (x+1)^3/2 + (1-x^2)^3/12 on the left,
    // -(x-1)/2 + (x-1)^3/2 + (1-x^2)^3/12 on the right, expanded.
    const double c12 = 1.0 / 12.0;
    PiecewiseSmooth ybar({0.0}, {Segment::polynomial({c12, 1.0, 1.25, 0.5, 0.25, 0.0, -c12}),
                                 Segment::polynomial({c12, 1.0, -1.75, 0.5, 0.25, 0.0, -c12})});
    p.f = PiecewiseSmooth({0.0}, {Segment::polynomial({-7.0, 0.0, 7.0}), Segment::constant(0.0)});

    // y_d = ybar + 14 chi_(-1,0) + 6 (1 - 5x^2)
    const PiecewiseSmooth jump({0.0}, {Segment::constant(14.0), Segment::constant(0.0)});
    const PiecewiseSmooth g(Segment::polynomial({6.0, 0.0, -30.0}));
    p.y_d = ybar + jump + g;

    ExactInfo ex;
    ex.ubar = detail::control_from_state(ybar, p.f);
    ex.ybar = std::move(ybar);
    ex.active_set.points = {0.0};
    ex.mu.atoms = {{0.0, 1.0}};
    p.exact = std::move(ex);
    p.validate();
    return p;
}

/// Mixed benchmark: beta = psi = 1, f = 0, ybar' = 1 on [-1, 1/3] and
/// sin((pi/4)(9x - 1)) on [1/3, 1]; multiplier density (9 pi/4)^2 on the
/// active interval [-1, 1/3].
inline ProblemSpec example_mixed() {
    using std::numbers::pi;
    ProblemSpec p;
    p.name = "example-mixed";
    p.beta = 1.0;
    p.bc = BcKind::mixed;
    p.psi = PiecewiseSmooth::constant(1.0);
    p.f = PiecewiseSmooth::constant(0.0);

    const double third = 1.0 / 3.0;
    const double w = 9.0 * pi / 4.0;
    const TrigTerm sin_theta{TrigTerm::Kind::sin, 1.0, w, -pi / 4.0};
    // slope profile p(x) and its antiderivative from -1
    const PiecewiseSmooth slope({third}, {Segment::constant(1.0), Segment{{}, {sin_theta}}});
    const TrigTerm ybar_trig{TrigTerm::Kind::cos, -4.0 / (9.0 * pi), w, -pi / 4.0};
    PiecewiseSmooth ybar({third}, {Segment::polynomial({1.0, 1.0}), Segment{{4.0 / 3.0}, {ybar_trig}}});

    // y_d = ybar + p''' (p''' vanishes on the active interval)
    p.y_d = ybar + slope.derivative(3);

    ExactInfo ex;
    ex.ubar = detail::control_from_state(ybar, p.f);
    ex.ybar = std::move(ybar);
    ex.active_set.intervals = {{-1.0, third}};
    ex.mu.density = PiecewiseSmooth({third}, {Segment::constant(p.beta * w * w), Segment::constant(0.0)});
    p.exact = std::move(ex);
    p.validate();
    return p;
}

/// Unconstrained fixture with a cubic exact state p (ascending coefficients):
/// f = -p'', y_d = p, psi a constant above max p' + 1, so the multiplier is zero.
inline ProblemSpec manufactured_unconstrained(std::array<double, 4> coeffs, BcKind bc, double beta = 1.0) {
    const Segment cubic = Segment::polynomial({coeffs.begin(), coeffs.end()});
    constexpr double tol = 1e-12;
    if (std::abs(cubic.eval(-1.0)) > tol) throw InvalidArgument("manufactured_unconstrained: p(-1) != 0");
    if (bc == BcKind::dirichlet && std::abs(cubic.eval(1.0)) > tol)
        throw InvalidArgument("manufactured_unconstrained: p(1) != 0");
    if (bc == BcKind::mixed && std::abs(cubic.eval(1.0, 1)) > tol)
        throw InvalidArgument("manufactured_unconstrained: p'(1) != 0");

    // max of the quadratic p' on [-1, 1]: endpoints and the vertex
    double max_slope = std::max(cubic.eval(-1.0, 1), cubic.eval(1.0, 1));
    if (coeffs[3] != 0.0) {
        const double v = -coeffs[2] / (3.0 * coeffs[3]);
        if (v > -1.0 && v < 1.0) max_slope = std::max(max_slope, cubic.eval(v, 1));
    }

    ProblemSpec p;
    p.name = "manufactured-cubic";
    p.beta = beta;
    p.bc = bc;
    p.psi = PiecewiseSmooth::constant(std::max(max_slope, 0.0) + 1.0);
    p.f = PiecewiseSmooth(cubic.derivative(2).scaled(-1.0));
    p.y_d = PiecewiseSmooth(cubic);

    ExactInfo ex;
    ex.ybar = PiecewiseSmooth(cubic);
    ex.ubar = detail::control_from_state(ex.ybar, p.f);
    p.exact = std::move(ex);
    p.validate();
    return p;
}

/// Built-in problem by CLI name; nullopt when unknown.
inline std::optional<ProblemSpec> builtin_problem(const std::string& name) {
    if (name == "example-dirichlet") return example_dirichlet();
    if (name == "example-mixed") return example_mixed();
    return std::nullopt;
}

} // namespace ocfem

#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "band_matrix.hpp"
#include "hermite_space.hpp"
#include "piecewise.hpp"
#include "quadrature.hpp"

namespace ocfem {

inline constexpr std::size_t default_load_order = 6;

using LocalMatrix = std::array<std::array<double, 4>, 4>;

/// Element bending matrix int N_i'' N_j'' (exact with 2 Gauss points).
inline LocalMatrix local_bending(double h) {
    LocalMatrix k{};
    const GaussRule& r = gauss_legendre(2);
    for (std::size_t q = 0; q < r.points.size(); ++q) {
        const double xi = 0.5 * (r.points[q] + 1.0);
        const double w = 0.5 * h * r.weights[q];
        const auto d2 = shape_eval(xi, h, 2);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) k[i][j] += w * d2[i] * d2[j];
    }
    return k;
}

/// Element mass matrix int N_i N_j (exact with 4 Gauss points).
inline LocalMatrix local_mass(double h) {
    LocalMatrix m{};
    const GaussRule& r = gauss_legendre(4);
    for (std::size_t q = 0; q < r.points.size(); ++q) {
        const double xi = 0.5 * (r.points[q] + 1.0);
        const double w = 0.5 * h * r.weights[q];
        const auto v = shape_eval(xi, h, 0);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m[i][j] += w * v[i] * v[j];
    }
    return m;
}

/// Matrix of a(y, z) = beta int y'' z'' + int y z on the free DOFs.
inline SymBandMatrix assemble_system(const HermiteSpace& space, double beta) {
    if (!(beta > 0.0)) throw InvalidArgument("assemble_system: beta must be positive");
    SymBandMatrix a(space.num_free(), 3);
    const Mesh1D& mesh = space.mesh();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const double h = mesh.element(e).length();
        const auto k = local_bending(h);
        const auto m = local_mass(h);
        const auto dofs = space.element_dofs(e);
        // upper triangle only; storage is symmetric
        for (std::size_t i = 0; i < 4; ++i) {
            if (dofs[i] == HermiteSpace::npos) continue;
            for (std::size_t j = i; j < 4; ++j) {
                if (dofs[j] == HermiteSpace::npos) continue;
                const double v = beta * k[i][j] + m[i][j];
                a.add(dofs[i], dofs[j], v);
            }
        }
    }
    return a;
}

/// Load l(z) = int y_d z - beta int f z'' on the free DOFs, with panels split
/// at every breakpoint of y_d and f.
inline std::vector<double> assemble_load(const HermiteSpace& space, const PiecewiseSmooth& y_d,
                                         const PiecewiseSmooth& f, double beta,
                                         std::size_t order = default_load_order) {
    std::vector<double> b(space.num_free(), 0.0);
    const Mesh1D& mesh = space.mesh();
    const auto bps = merge_breakpoints(y_d.breakpoints(), f.breakpoints());
    const GaussRule& r = gauss_legendre(order);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const Interval el = mesh.element(e);
        const double h = el.length();
        const auto dofs = space.element_dofs(e);
        std::array<double, 4> local{};
        const auto cuts = panel_cuts(el, bps);
        for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
            const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
            const double half = 0.5 * (cuts[p + 1] - cuts[p]);
            // Each panel lies inside one segment of y_d and of f.
            const Segment& yd_seg = y_d.segments()[y_d.segment_index(mid)];
            const Segment& f_seg = f.segments()[f.segment_index(mid)];
            for (std::size_t q = 0; q < r.points.size(); ++q) {
                const double x = mid + half * r.points[q];
                const double w = half * r.weights[q];
                const double xi = (x - el.a) / h;
                const auto v = shape_eval(xi, h, 0);
                const auto d2 = shape_eval(xi, h, 2);
                const double ydx = yd_seg.eval(x);
                const double fx = f_seg.eval(x);
                for (std::size_t i = 0; i < 4; ++i) local[i] += w * (ydx * v[i] - beta * fx * d2[i]);
            }
        }
        for (std::size_t i = 0; i < 4; ++i)
            if (dofs[i] != HermiteSpace::npos) b[dofs[i]] += local[i];
    }
    return b;
}

/// Reduced objective 1/2 x^T A x - b^T x (the discrete cost up to a constant).
template <class T>
double quadratic_objective(const SymBandMatrix& a, std::span<const double> b, std::span<const T> x) {
    const auto ax = a.multiply_extended(x);
    long double s = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) s += 0.5L * x[i] * ax[i] - static_cast<long double>(b[i]) * x[i];
    return static_cast<double>(s);
}

} // namespace ocfem

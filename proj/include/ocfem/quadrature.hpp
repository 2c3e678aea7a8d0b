#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"
#include "mesh.hpp"

namespace ocfem {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};

namespace detail {

inline GaussRule compute_gauss_legendre(std::size_t n) {
    GaussRule r;
    r.points.resize(n);
    r.weights.resize(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute derivative at the converged root.
        double p0 = 1.0;
        double p1 = z;
        for (std::size_t k = 2; k <= n; ++k) {
            const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = pk;
        }
        dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.points[i] = -z;
        r.points[n - 1 - i] = z;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.points[n / 2] = 0.0;
    return r;
}

} // namespace detail

/// Cached n-point Gauss-Legendre rule on [-1, 1]; exact for degree 2n-1.
inline const GaussRule& gauss_legendre(std::size_t n) {
    if (n == 0) throw InvalidArgument("gauss_legendre: order must be >= 1");
    static std::mutex mtx;
    static std::map<std::size_t, GaussRule> cache;
    std::lock_guard lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
    return it->second;
}

/// Integrate g over [a, b] with an n-point rule.
template <class F>
double integrate_panel(double a, double b, F&& g, std::size_t order) {
    const GaussRule& r = gauss_legendre(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * g(mid + half * r.points[q]);
    return half * s;
}

/// Points strictly inside (a, b) taken from a sorted breakpoint list, with the
/// ends prepended/appended. Adjacent panels share endpoints.
inline std::vector<double> panel_cuts(Interval el, std::span<const double> breakpoints) {
    std::vector<double> cuts{el.a};
    auto lo = std::upper_bound(breakpoints.begin(), breakpoints.end(), el.a);
    for (auto it = lo; it != breakpoints.end() && *it < el.b; ++it) cuts.push_back(*it);
    cuts.push_back(el.b);
    return cuts;
}

/// Composite Gauss-Legendre over el, split at every breakpoint inside it.
template <class F>
double quadrature_on_element(Interval el, F&& g, std::span<const double> breakpoints, std::size_t order) {
    const auto cuts = panel_cuts(el, breakpoints);
    double s = 0.0;
    for (std::size_t p = 0; p + 1 < cuts.size(); ++p) s += integrate_panel(cuts[p], cuts[p + 1], g, order);
    return s;
}

/// Sorted union of breakpoint lists with duplicates removed.
inline std::vector<double> merge_breakpoints(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace ocfem

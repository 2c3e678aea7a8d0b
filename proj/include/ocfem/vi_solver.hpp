#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "assembly.hpp"
#include "band_matrix.hpp"
#include "errors.hpp"
#include "hermite_space.hpp"

namespace ocfem {

/// minimize 1/2 x^T A x - b^T x  subject to  x[row.dof] <= row.upper.
struct BoundQP {
    SymBandMatrix a;
    std::vector<double> b;
    std::vector<BoundRow> bounds;

    void validate() const {
        if (b.size() != a.size()) throw InvalidArgument("BoundQP: load size does not match matrix size");
        std::vector<std::size_t> idx;
        idx.reserve(bounds.size());
        for (const auto& r : bounds) {
            if (r.dof >= a.size()) throw InvalidArgument("BoundQP: bound index out of range");
            idx.push_back(r.dof);
        }
        std::sort(idx.begin(), idx.end());
        if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
            throw InvalidArgument("BoundQP: duplicate bound index");
    }
};

/// x is kept in long double: at fine meshes the entries of A reach 1e7-1e8,
/// so rounding x to double alone leaves stationarity residuals near 1e-8.
struct QPSolution {
    std::vector<long double> x;
    std::vector<double> lambda;      ///< one per bound row, same order as BoundQP::bounds
    std::vector<std::size_t> active; ///< sorted bound-row indices held at their bound
    std::size_t iterations = 0;
    double kkt_residual = 0.0;       ///< stationarity infinity-norm
};

struct KktReport {
    double stationarity = 0.0;    ///< ||A x - b + sum lambda_i e_i||_inf
    double feasibility = 0.0;     ///< max(x_i - upper_i, 0)
    double complementarity = 0.0; ///< max |lambda_i (upper_i - x_i)|
    double min_lambda = 0.0;
};

struct PdasOptions {
    double gamma = 1.0;
    std::size_t max_iter = 500;
};

/// Residuals of the discrete KKT system, computed in extended precision.
inline KktReport kkt_report(const BoundQP& qp, const QPSolution& sol) {
    KktReport rep;
    auto r = qp.a.multiply_extended(sol.x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= qp.b[i];
    rep.min_lambda = qp.bounds.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < qp.bounds.size(); ++k) {
        const BoundRow& row = qp.bounds[k];
        const double lam = sol.lambda[k];
        r[row.dof] += lam;
        const long double slack = row.upper - sol.x[row.dof];
        rep.feasibility = std::max(rep.feasibility, static_cast<double>(-slack));
        rep.complementarity = std::max(rep.complementarity, static_cast<double>(std::fabs(lam * slack)));
        rep.min_lambda = std::min(rep.min_lambda, lam);
    }
    for (long double v : r) rep.stationarity = std::max(rep.stationarity, static_cast<double>(std::fabs(v)));
    return rep;
}

namespace detail {

/// Solve with the rows flagged in `fixed` held at their bounds; the
/// multiplier of a fixed row is the residual b - A x at its DOF.
inline QPSolution solve_with_fixed(const BoundQP& qp, const std::vector<bool>& fixed) {
    const std::size_t n = qp.a.size();
    std::vector<long double> x(n, 0.0L);
    std::vector<bool> is_fixed(n, false);
    for (std::size_t k = 0; k < qp.bounds.size(); ++k) {
        if (!fixed[k]) continue;
        x[qp.bounds[k].dof] = qp.bounds[k].upper;
        is_fixed[qp.bounds[k].dof] = true;
    }
    std::vector<std::size_t> free;
    free.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!is_fixed[i]) free.push_back(i);

    if (!free.empty()) {
        const auto ax_fixed = qp.a.multiply_extended(x);
        std::vector<long double> rhs(free.size());
        for (std::size_t j = 0; j < free.size(); ++j) rhs[j] = qp.b[free[j]] - ax_fixed[free[j]];
        const BandCholesky chol(qp.a.principal_submatrix(free));
        const auto xf = chol.solve(std::span<const long double>(rhs));
        for (std::size_t j = 0; j < free.size(); ++j) x[free[j]] = xf[j];
    }

    QPSolution sol;
    sol.lambda.assign(qp.bounds.size(), 0.0);
    const auto ax = qp.a.multiply_extended(x);
    for (std::size_t k = 0; k < qp.bounds.size(); ++k) {
        if (!fixed[k]) continue;
        const std::size_t d = qp.bounds[k].dof;
        sol.lambda[k] = static_cast<double>(static_cast<long double>(qp.b[d]) - ax[d]);
        sol.active.push_back(k);
    }
    sol.x = std::move(x);
    return sol;
}

inline std::vector<std::size_t> flagged(const std::vector<bool>& v) {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k]) out.push_back(k);
    return out;
}

} // namespace detail

/// Primal-dual active set method.
///
/// The active-set prediction lambda_i + gamma (x_i - c_i) > 0 is evaluated on
/// the problem scaled to unit diagonal; in the original variables that is
/// lambda_i + gamma * A_ii * (x_i - c_i) > 0. Each iteration solves the
/// reduced SPD system with the predicted rows pinned. The first iteration
/// starts from the empty active set (the unconstrained minimizer), and the
/// loop stops once the predicted set repeats.
inline QPSolution solve_pdas(const BoundQP& qp, const PdasOptions& opt = {}) {
    qp.validate();
    if (!(opt.gamma > 0.0)) throw InvalidArgument("solve_pdas: gamma must be positive");
    const std::size_t m = qp.bounds.size();
    std::vector<bool> current(m, false);
    std::vector<bool> previous(m, false);
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        QPSolution sol = detail::solve_with_fixed(qp, current);
        std::vector<bool> next(m, false);
        for (std::size_t k = 0; k < m; ++k) {
            const BoundRow& row = qp.bounds[k];
            const double diag = qp.a(row.dof, row.dof);
            next[k] = sol.lambda[k] + opt.gamma * diag * (sol.x[row.dof] - row.upper) > 0.0L;
        }
        if (next == current) {
            sol.iterations = it;
            sol.kkt_residual = kkt_report(qp, sol).stationarity;
            return sol;
        }
        previous = std::move(current);
        current = std::move(next);
    }
    throw NoConvergence("solve_pdas: no convergence after " + std::to_string(opt.max_iter) + " iterations",
                        detail::flagged(previous), detail::flagged(current));
}

inline constexpr std::size_t bruteforce_max_rows = 16;

/// Enumerate every candidate active set (smallest first) and return the first
/// one that is primal feasible with nonnegative multipliers.
inline QPSolution solve_bruteforce(const BoundQP& qp) {
    qp.validate();
    const std::size_t m = qp.bounds.size();
    if (m > bruteforce_max_rows)
        throw TooLarge("solve_bruteforce: " + std::to_string(m) + " bound rows exceeds the limit of " +
                       std::to_string(bruteforce_max_rows));
    double bnorm = 0.0;
    for (double v : qp.b) bnorm = std::max(bnorm, std::abs(v));
    const double lambda_tol = 1e-10 * (1.0 + bnorm);

    std::vector<std::uint32_t> masks(std::size_t{1} << m);
    for (std::uint32_t s = 0; s < masks.size(); ++s) masks[s] = s;
    std::stable_sort(masks.begin(), masks.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });

    std::size_t tried = 0;
    for (std::uint32_t mask : masks) {
        std::vector<bool> fixed(m);
        for (std::size_t k = 0; k < m; ++k) fixed[k] = (mask >> k) & 1u;
        QPSolution sol = detail::solve_with_fixed(qp, fixed);
        ++tried;
        bool ok = true;
        for (std::size_t k = 0; k < m && ok; ++k) {
            const BoundRow& row = qp.bounds[k];
            if (sol.x[row.dof] > row.upper + 1e-10L * (1.0L + std::fabs(row.upper))) ok = false;
            if (sol.lambda[k] < -lambda_tol) ok = false;
        }
        if (ok) {
            sol.iterations = tried;
            sol.kkt_residual = kkt_report(qp, sol).stationarity;
            return sol;
        }
    }
    throw InternalError("solve_bruteforce: no candidate active set is feasible (is A SPD?)");
}

} // namespace ocfem

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "mesh.hpp"
#include "piecewise.hpp"

namespace ocfem {

/// Essential boundary conditions. Dirichlet: y(-1) = y(1) = 0.
/// Mixed: y(-1) = y'(1) = 0.
enum class BcKind { dirichlet, mixed };

inline std::string_view to_string(BcKind bc) { return bc == BcKind::dirichlet ? "dirichlet" : "mixed"; }

enum class DofKind { value = 0, slope = 1 };

struct DofRef {
    std::size_t node;
    DofKind kind;
};

/// Local cubic Hermite basis on an element of length h at reference
/// coordinate xi in [0, 1], ordered (value left, slope left, value right,
/// slope right). Slope shapes interpolate the physical derivative; der is
/// taken with respect to the physical coordinate.
inline std::array<double, 4> shape_eval(double xi, double h, unsigned der) {
    const double x2 = xi * xi;
    const double x3 = x2 * xi;
    switch (der) {
        case 0: return {1.0 - 3.0 * x2 + 2.0 * x3, h * (xi - 2.0 * x2 + x3), 3.0 * x2 - 2.0 * x3, h * (x3 - x2)};
        case 1: return {(6.0 * x2 - 6.0 * xi) / h, 1.0 - 4.0 * xi + 3.0 * x2, (6.0 * xi - 6.0 * x2) / h, 3.0 * x2 - 2.0 * xi};
        case 2: {
            const double h2 = h * h;
            return {(12.0 * xi - 6.0) / h2, (6.0 * xi - 4.0) / h, (6.0 - 12.0 * xi) / h2, (6.0 * xi - 2.0) / h};
        }
        default: throw InvalidArgument("shape_eval: derivative order must be 0, 1 or 2");
    }
}

/// C1 cubic Hermite space on a mesh with the essential BC DOFs removed.
/// Free DOFs are numbered node by node (value before slope), which keeps the
/// assembled matrices within bandwidth 3.
class HermiteSpace {
public:
    HermiteSpace(Mesh1D mesh, BcKind bc) : mesh_(std::move(mesh)), bc_(bc) {
        const std::size_t nn = mesh_.num_nodes();
        global_to_free_.assign(2 * nn, npos);
        auto masked = [&](std::size_t node, DofKind k) {
            if (node == 0 && k == DofKind::value) return true;
            if (node == nn - 1)
                return bc_ == BcKind::dirichlet ? k == DofKind::value : k == DofKind::slope;
            return false;
        };
        for (std::size_t node = 0; node < nn; ++node) {
            for (DofKind k : {DofKind::value, DofKind::slope}) {
                if (masked(node, k)) continue;
                global_to_free_[global(node, k)] = free_to_ref_.size();
                free_to_ref_.push_back({node, k});
            }
        }
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    const Mesh1D& mesh() const { return mesh_; }
    BcKind bc() const { return bc_; }
    std::size_t num_free() const { return free_to_ref_.size(); }

    /// Free index of (node, kind), or nullopt when the DOF is fixed by a BC.
    std::optional<std::size_t> free_index(std::size_t node, DofKind k) const {
        const std::size_t f = global_to_free_.at(global(node, k));
        if (f == npos) return std::nullopt;
        return f;
    }

    DofRef dof(std::size_t free) const { return free_to_ref_.at(free); }

    /// Free indices of the four local DOFs of element e (npos when masked).
    std::array<std::size_t, 4> element_dofs(std::size_t e) const {
        return {global_to_free_[global(e, DofKind::value)], global_to_free_[global(e, DofKind::slope)],
                global_to_free_[global(e + 1, DofKind::value)], global_to_free_[global(e + 1, DofKind::slope)]};
    }

private:
    static std::size_t global(std::size_t node, DofKind k) { return 2 * node + static_cast<std::size_t>(k); }

    Mesh1D mesh_;
    BcKind bc_;
    std::vector<std::size_t> global_to_free_;
    std::vector<DofRef> free_to_ref_;
};

/// Element of V_h: coefficients over the free DOFs; masked DOFs are zero.
class HermiteFunction {
public:
    explicit HermiteFunction(HermiteSpace space) : space_(std::move(space)), coeffs_(space_.num_free(), 0.0) {}

    HermiteFunction(HermiteSpace space, std::vector<double> coeffs)
        : space_(std::move(space)), coeffs_(std::move(coeffs)) {
        if (coeffs_.size() != space_.num_free())
            throw InvalidArgument("HermiteFunction: coefficient count does not match free DOF count");
    }

    const HermiteSpace& space() const { return space_; }
    std::span<const double> coefficients() const { return coeffs_; }

    double node_value(std::size_t node) const { return nodal(node, DofKind::value); }
    double node_slope(std::size_t node) const { return nodal(node, DofKind::slope); }

    /// Local coefficients (v0, s0, v1, s1) of element e.
    std::array<double, 4> element_coefficients(std::size_t e) const {
        return {node_value(e), node_slope(e), node_value(e + 1), node_slope(e + 1)};
    }

    /// der-th derivative at x restricted to element e (x may sit on its ends).
    double eval_on_element(std::size_t e, double x, unsigned der) const {
        const Interval el = space_.mesh().element(e);
        const double h = el.length();
        const auto shp = shape_eval((x - el.a) / h, h, der);
        const auto c = element_coefficients(e);
        return c[0] * shp[0] + c[1] * shp[1] + c[2] * shp[2] + c[3] * shp[3];
    }

    /// der-th derivative at x in [-1, 1]. At interior nodes the left element
    /// is used, which only matters for der = 2.
    double eval(double x, unsigned der = 0) const {
        if (!(x >= -1.0 && x <= 1.0)) throw InvalidArgument("HermiteFunction::eval: x outside [-1, 1]");
        if (der > 2) throw InvalidArgument("HermiteFunction::eval: derivative order must be 0, 1 or 2");
        return eval_on_element(space_.mesh().locate(x), x, der);
    }

private:
    double nodal(std::size_t node, DofKind k) const {
        auto f = space_.free_index(node, k);
        return f ? coeffs_[*f] : 0.0;
    }

    HermiteSpace space_;
    std::vector<double> coeffs_;
};

/// Nodal Hermite interpolant: matches value and slope of g at every node.
/// g must satisfy the space's essential BCs to within tol.
template <class Value, class Slope>
HermiteFunction interpolate(const HermiteSpace& space, Value&& value, Slope&& slope, double tol = 1e-12) {
    const auto nodes = space.mesh().nodes();
    const std::size_t last = nodes.size() - 1;
    auto check = [&](std::size_t node, double v, const char* what) {
        if (std::abs(v) > tol)
            throw BcViolation(std::string("interpolate: ") + what + " = " + std::to_string(v) +
                                  " violates the boundary condition at node " + std::to_string(node),
                              node);
    };
    check(0, value(nodes[0]), "g(-1)");
    if (space.bc() == BcKind::dirichlet)
        check(last, value(nodes[last]), "g(1)");
    else
        check(last, slope(nodes[last]), "g'(1)");

    std::vector<double> c(space.num_free());
    for (std::size_t f = 0; f < c.size(); ++f) {
        const DofRef r = space.dof(f);
        c[f] = r.kind == DofKind::value ? value(nodes[r.node]) : slope(nodes[r.node]);
    }
    return HermiteFunction(space, std::move(c));
}

inline HermiteFunction interpolate(const HermiteSpace& space, const PiecewiseSmooth& g, double tol = 1e-12) {
    return interpolate(
        space, [&](double x) { return g.eval(x, 0); }, [&](double x) { return g.eval(x, 1); }, tol);
}

/// Upper bound y'(node) <= upper on the slope DOF `dof` of mesh node `node`.
struct BoundRow {
    std::size_t dof;
    std::size_t node;
    double upper;
};

/// Nodal form of P_h y' <= P_h psi: one row per free slope DOF. For mixed BCs
/// the slope at +1 is fixed to 0, which is feasible iff psi(1) >= 0.
template <class Psi>
std::vector<BoundRow> constraint_rows(const HermiteSpace& space, Psi&& psi) {
    const auto nodes = space.mesh().nodes();
    if (space.bc() == BcKind::mixed && psi(1.0) < 0.0)
        throw InfeasibleData("constraint_rows: mixed BCs need psi(1) >= 0, got " + std::to_string(psi(1.0)));
    std::vector<BoundRow> rows;
    for (std::size_t node = 0; node < nodes.size(); ++node)
        if (auto f = space.free_index(node, DofKind::slope)) rows.push_back({*f, node, psi(nodes[node])});
    return rows;
}

inline std::vector<BoundRow> constraint_rows(const HermiteSpace& space, const PiecewiseSmooth& psi) {
    return constraint_rows(space, [&](double x) { return psi.eval(x); });
}

} // namespace ocfem

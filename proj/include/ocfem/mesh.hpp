#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace ocfem {

enum class MeshFamily { uniform, perturbed, third_aligned, custom };

inline std::string_view to_string(MeshFamily f) {
    switch (f) {
        case MeshFamily::uniform: return "uniform";
        case MeshFamily::perturbed: return "perturbed";
        case MeshFamily::third_aligned: return "third-aligned";
        case MeshFamily::custom: return "custom";
    }
    return "custom";
}

struct Interval {
    double a;
    double b;
    double length() const { return b - a; }
};

/// Partition of [-1, 1]. Immutable once built.
class Mesh1D {
public:
    explicit Mesh1D(std::vector<double> nodes, MeshFamily family = MeshFamily::custom)
        : nodes_(std::move(nodes)), family_(family) {
        if (nodes_.size() < 2)
            throw InvalidArgument("Mesh1D: need at least one element");
        if (nodes_.front() != -1.0 || nodes_.back() != 1.0)
            throw InvalidArgument("Mesh1D: nodes must start at -1 and end at +1");
        for (std::size_t i = 1; i < nodes_.size(); ++i)
            if (!(nodes_[i] > nodes_[i - 1]))
                throw InvalidArgument("Mesh1D: nodes must be strictly increasing");
    }

    std::span<const double> nodes() const { return nodes_; }
    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_elements() const { return nodes_.size() - 1; }
    MeshFamily family() const { return family_; }

    Interval element(std::size_t e) const { return {nodes_[e], nodes_[e + 1]}; }

    /// Mesh size h: the longest element.
    double h() const {
        double m = 0.0;
        for (std::size_t e = 0; e < num_elements(); ++e) m = std::max(m, element(e).length());
        return m;
    }

    double min_length() const {
        double m = 2.0;
        for (std::size_t e = 0; e < num_elements(); ++e) m = std::min(m, element(e).length());
        return m;
    }

    double quasi_uniformity() const { return h() / min_length(); }

    /// Element containing x; a node shared by two elements belongs to the left one.
    std::size_t locate(double x) const {
        auto it = std::lower_bound(nodes_.begin() + 1, nodes_.end() - 1, x);
        return static_cast<std::size_t>(it - nodes_.begin()) - 1;
    }

    bool has_node(double x) const { return std::binary_search(nodes_.begin(), nodes_.end(), x); }

private:
    std::vector<double> nodes_;
    MeshFamily family_;
};

namespace detail {
// (2i - n)/n keeps 0, 1/3 and the endpoints correctly rounded.
inline double uniform_node(std::size_t i, std::size_t n) {
    return (2.0 * static_cast<double>(i) - static_cast<double>(n)) / static_cast<double>(n);
}
} // namespace detail

inline Mesh1D uniform_mesh(std::size_t n) {
    if (n == 0) throw InvalidArgument("uniform_mesh: n must be >= 1");
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = detail::uniform_node(i, n);
    return Mesh1D(std::move(x), MeshFamily::uniform);
}

/// Uniform mesh with every interior node shifted right by shift * (2/n).
/// For even n the origin falls strictly inside an element at relative
/// position 1 - shift, the same position on every level.
inline Mesh1D perturbed_mesh(std::size_t n, double shift) {
    if (n == 0 || n % 2 != 0) throw InvalidArgument("perturbed_mesh: n must be even and positive");
    if (!(shift > 0.0 && shift < 0.5)) throw InvalidArgument("perturbed_mesh: shift must lie in (0, 1/2)");
    std::vector<double> x(n + 1);
    x.front() = -1.0;
    x.back() = 1.0;
    for (std::size_t i = 1; i < n; ++i)
        x[i] = (2.0 * static_cast<double>(i) - static_cast<double>(n) + 2.0 * shift) / static_cast<double>(n);
    return Mesh1D(std::move(x), MeshFamily::perturbed);
}

/// Uniform mesh with 3 * 2^k elements, so 1/3 is a node.
inline Mesh1D third_aligned_mesh(unsigned k) {
    if (k > 24) throw InvalidArgument("third_aligned_mesh: k too large");
    const std::size_t n = std::size_t{3} << k;
    std::vector<double> x(n + 1);
    for (std::size_t i = 0; i <= n; ++i) x[i] = detail::uniform_node(i, n);
    return Mesh1D(std::move(x), MeshFamily::third_aligned);
}

/// Bisect every element.
inline Mesh1D refine(const Mesh1D& m) {
    std::vector<double> x;
    x.reserve(2 * m.num_nodes() - 1);
    auto nodes = m.nodes();
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        x.push_back(nodes[i]);
        x.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    x.push_back(nodes.back());
    return Mesh1D(std::move(x), m.family());
}

} // namespace ocfem

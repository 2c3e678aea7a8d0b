#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include <ocfem/hermite_space.hpp>
#include <ocfem/problems.hpp>

using namespace ocfem;

TEST(Shape, MidpointValues) {
    const auto v = shape_eval(0.5, 1.0, 0);
    EXPECT_DOUBLE_EQ(v[0], 0.5);
    EXPECT_DOUBLE_EQ(v[1], 0.125);
    EXPECT_DOUBLE_EQ(v[2], 0.5);
    EXPECT_DOUBLE_EQ(v[3], -0.125);
}

TEST(Shape, NodalDuality) {
    for (double h : {1.0, 0.25, 2.0 / 3.0}) {
        const auto v0 = shape_eval(0.0, h, 0), v1 = shape_eval(1.0, h, 0);
        const auto d0 = shape_eval(0.0, h, 1), d1 = shape_eval(1.0, h, 1);
        const std::array<double, 4> e0{1, 0, 0, 0}, e1{0, 1, 0, 0}, e2{0, 0, 1, 0}, e3{0, 0, 0, 1};
        for (int i = 0; i < 4; ++i) {
            EXPECT_NEAR(v0[i], e0[i], 1e-15);
            EXPECT_NEAR(d0[i], e1[i], 1e-14);
            EXPECT_NEAR(v1[i], e2[i], 1e-15);
            EXPECT_NEAR(d1[i], e3[i], 1e-14);
        }
    }
}

TEST(Shape, DerivativesMatchFiniteDifferences) {
    const double h = 0.3, eps = 1e-6;
    for (double xi : {0.1, 0.37, 0.8}) {
        for (unsigned d = 0; d < 2; ++d) {
            const auto hi = shape_eval(xi + eps, h, d), lo = shape_eval(xi - eps, h, d);
            const auto ex = shape_eval(xi, h, d + 1);
            for (int i = 0; i < 4; ++i) EXPECT_NEAR(ex[i], (hi[i] - lo[i]) / (2 * eps * h), 1e-6);
        }
    }
    EXPECT_THROW(shape_eval(0.5, 1.0, 3), InvalidArgument);
}

TEST(Space, FreeDofCounts) {
    for (std::size_t n : {1u, 2u, 5u, 64u}) {
        EXPECT_EQ(HermiteSpace(uniform_mesh(n), BcKind::dirichlet).num_free(), 2 * n);
        EXPECT_EQ(HermiteSpace(uniform_mesh(n), BcKind::mixed).num_free(), 2 * n);
    }
}

TEST(Space, MaskedDofs) {
    const HermiteSpace d(uniform_mesh(4), BcKind::dirichlet);
    EXPECT_FALSE(d.free_index(0, DofKind::value));
    EXPECT_FALSE(d.free_index(4, DofKind::value));
    EXPECT_TRUE(d.free_index(4, DofKind::slope));

    const HermiteSpace m(uniform_mesh(4), BcKind::mixed);
    EXPECT_FALSE(m.free_index(0, DofKind::value));
    EXPECT_TRUE(m.free_index(4, DofKind::value));
    EXPECT_FALSE(m.free_index(4, DofKind::slope));

    const auto dofs = d.element_dofs(0);
    EXPECT_EQ(dofs[0], HermiteSpace::npos);
    for (int i = 1; i < 4; ++i) EXPECT_NE(dofs[i], HermiteSpace::npos);
}

TEST(Space, DofNumberingHasBandwidthThree) {
    for (BcKind bc : {BcKind::dirichlet, BcKind::mixed}) {
        const HermiteSpace s(perturbed_mesh(8, 0.25), bc);
        for (std::size_t e = 0; e < s.mesh().num_elements(); ++e) {
            std::size_t lo = HermiteSpace::npos, hi = 0;
            for (auto d : s.element_dofs(e)) {
                if (d == HermiteSpace::npos) continue;
                lo = std::min(lo, d);
                hi = std::max(hi, d);
            }
            EXPECT_LE(hi - lo, 3u);
        }
    }
}

TEST(Space, InterpolationReproducesCubics) {
    // (1 - x^2)(0.3 + x) vanishes at both ends
    auto g = [](double x) { return (1 - x * x) * (0.3 + x); };
    auto dg = [](double x) { return -2 * x * (0.3 + x) + (1 - x * x); };
    const HermiteSpace s(perturbed_mesh(6, 0.3), BcKind::dirichlet);
    const auto gh = interpolate(s, g, dg);
    for (double x = -1.0; x <= 1.0; x += 0.0137) {
        EXPECT_NEAR(gh.eval(x), g(x), 1e-14);
        EXPECT_NEAR(gh.eval(x, 1), dg(x), 1e-13);
    }
}

TEST(Space, InterpolationChecksBoundaryConditions) {
    const HermiteSpace s(uniform_mesh(4), BcKind::dirichlet);
    try {
        interpolate(s, [](double x) { return x + 1.0; }, [](double) { return 1.0; });
        FAIL() << "expected BcViolation";
    } catch (const BcViolation& e) {
        EXPECT_EQ(e.node(), 4u);
    }
    const HermiteSpace m(uniform_mesh(4), BcKind::mixed);
    EXPECT_THROW(interpolate(m, [](double x) { return x + 1.0; }, [](double) { return 1.0; }), BcViolation);
    EXPECT_NO_THROW(interpolate(m, [](double x) { return (x + 1.0) * (3.0 - x); }, [](double x) { return 2.0 - 2.0 * x; }));
}

TEST(Space, EvalRejectsOutOfRange) {
    const HermiteFunction f(HermiteSpace(uniform_mesh(2), BcKind::dirichlet));
    EXPECT_THROW(f.eval(1.5), InvalidArgument);
    EXPECT_THROW(f.eval(0.0, 3), InvalidArgument);
    EXPECT_EQ(f.eval(0.3), 0.0);
}

TEST(Space, FunctionIsC1AcrossNodes) {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const HermiteSpace s(perturbed_mesh(10, 0.2), BcKind::mixed);
    std::vector<double> c(s.num_free());
    for (auto& v : c) v = u(rng);
    const HermiteFunction f(s, c);
    const auto nodes = s.mesh().nodes();
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        EXPECT_NEAR(f.eval_on_element(i - 1, nodes[i], 0), f.eval_on_element(i, nodes[i], 0), 1e-14);
        EXPECT_NEAR(f.eval_on_element(i - 1, nodes[i], 1), f.eval_on_element(i, nodes[i], 1), 1e-12);
    }
    EXPECT_EQ(f.eval(-1.0), 0.0);
    EXPECT_NEAR(f.eval(1.0, 1), 0.0, 1e-13);
}

TEST(Constraints, OneRowPerFreeSlope) {
    const HermiteSpace d(uniform_mesh(8), BcKind::dirichlet);
    const auto rows = constraint_rows(d, [](double) { return 1.0; });
    EXPECT_EQ(rows.size(), 9u);
    const HermiteSpace m(uniform_mesh(8), BcKind::mixed);
    EXPECT_EQ(constraint_rows(m, [](double) { return 1.0; }).size(), 8u);
    for (const auto& r : rows) EXPECT_EQ(d.dof(r.dof).kind, DofKind::slope);
}

TEST(Constraints, MixedNeedsNonnegativeBoundAtRightEnd) {
    const HermiteSpace m(uniform_mesh(4), BcKind::mixed);
    EXPECT_THROW(constraint_rows(m, [](double) { return -0.1; }), InfeasibleData);
}

TEST(Constraints, NodalBoundEquivalentToP1Bound) {
    // P_h v' <= P_h psi on the whole interval iff it holds at the nodes,
    // since both sides are piecewise linear on the same mesh.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Mesh1D mesh = perturbed_mesh(8, 0.25);
    const auto nodes = mesh.nodes();
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> s(nodes.size()), p(nodes.size());
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            s[i] = u(rng);
            p[i] = u(rng) + 0.5;
        }
        bool nodal = true;
        for (std::size_t i = 0; i < nodes.size(); ++i) nodal = nodal && s[i] <= p[i];
        bool everywhere = true;
        for (std::size_t e = 0; e + 1 < nodes.size(); ++e)
            for (int k = 0; k <= 20; ++k) {
                const double t = k / 20.0;
                everywhere = everywhere && (1 - t) * s[e] + t * s[e + 1] <= (1 - t) * p[e] + t * p[e + 1] + 1e-15;
            }
        EXPECT_EQ(nodal, everywhere);
    }
}

TEST(Constraints, HermiteInterpolantOfFeasibleStateIsFeasible) {
    const auto prob = example_dirichlet();
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        for (const Mesh1D& mesh : {uniform_mesh(n), perturbed_mesh(2 * n, 0.25)}) {
            const HermiteSpace s(mesh, BcKind::dirichlet);
            const auto yh = interpolate(s, prob.exact->ybar);
            for (const auto& r : constraint_rows(s, prob.psi))
                EXPECT_LE(yh.coefficients()[r.dof], r.upper + 1e-14);
        }
    }
    const auto mixed = example_mixed();
    const HermiteSpace s(third_aligned_mesh(3), BcKind::mixed);
    const auto yh = interpolate(s, mixed.exact->ybar);
    for (const auto& r : constraint_rows(s, mixed.psi)) EXPECT_LE(yh.coefficients()[r.dof], r.upper + 1e-14);
}

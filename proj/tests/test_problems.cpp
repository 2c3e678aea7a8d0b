#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <ocfem/problem_io.hpp>
#include <ocfem/problems.hpp>

using namespace ocfem;
using std::numbers::pi;

TEST(Dirichlet, StateValues) {
    const auto p = example_dirichlet();
    const auto& y = p.exact->ybar;
    EXPECT_NEAR(y(-1.0), 0.0, 1e-15);
    EXPECT_NEAR(y.eval(1.0, 0, Side::left), 0.0, 1e-15);
    EXPECT_NEAR(y(0.0), 1.0 / 12.0, 1e-15);
    EXPECT_NEAR(y.eval(0.0, 1), 1.0, 1e-15);
    // C1 across 0, with a curvature jump of -6
    EXPECT_NEAR(y.eval(0.0, 0, Side::left), y.eval(0.0, 0, Side::right), 1e-15);
    EXPECT_NEAR(y.eval(0.0, 1, Side::left), y.eval(0.0, 1, Side::right), 1e-15);
    EXPECT_NEAR(y.eval(0.0, 2, Side::left), 2.5, 1e-15);
    EXPECT_NEAR(y.eval(0.0, 2, Side::right), -3.5, 1e-15);
}

TEST(Dirichlet, SlopeTouchesBoundOnlyAtOrigin) {
    const auto p = example_dirichlet();
    for (int i = 0; i <= 2000; ++i) {
        const double x = -1.0 + i / 1000.0;
        const double s = p.exact->ybar.eval(x, 1);
        EXPECT_LE(s, 1.0 + 1e-15);
        if (std::abs(x) > 1e-3) {
            EXPECT_LT(s, 1.0 - 1e-7) << x;
        }
    }
}

TEST(Dirichlet, ControlAndMultiplier) {
    const auto p = example_dirichlet();
    const auto& u = p.exact->ubar;
    EXPECT_NEAR(u(-1.0), 0.0, 1e-14);
    // u = -y'' - f; on the right f = 0
    EXPECT_NEAR(u(0.5), -p.exact->ybar.eval(0.5, 2), 1e-14);
    EXPECT_DOUBLE_EQ(p.exact->mu.total_mass(), 1.0);
    EXPECT_EQ(p.exact->active_set.points, (std::vector<double>{0.0}));
    EXPECT_EQ(p.exact->active_set.distance(0.25), 0.25);
}

TEST(Dirichlet, AdjointRelation) {
    // y_d - ybar = 14 chi_(-1,0) + 6(1 - 5x^2)
    const auto p = example_dirichlet();
    EXPECT_NEAR(p.y_d(-0.5) - p.exact->ybar(-0.5), 14.0 + 6.0 * (1 - 1.25), 1e-13);
    EXPECT_NEAR(p.y_d(0.5) - p.exact->ybar(0.5), 6.0 * (1 - 1.25), 1e-13);
}

TEST(Mixed, StateValues) {
    const auto p = example_mixed();
    const auto& y = p.exact->ybar;
    EXPECT_NEAR(y(-1.0), 0.0, 1e-15);
    EXPECT_NEAR(y.eval(1.0, 1, Side::left), 0.0, 1e-14);
    EXPECT_NEAR(y(1.0 / 3.0), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(y.eval(1.0 / 3.0, 0, Side::right), 4.0 / 3.0, 1e-15);
    EXPECT_NEAR(y.eval(1.0 / 3.0, 1, Side::right), 1.0, 1e-15);
    // the phase at x = 1 is 2 pi
    EXPECT_NEAR(y(1.0), 4.0 / 3.0 - 4.0 / (9.0 * pi), 1e-14);
    EXPECT_NEAR(y(1.0), 1.1918623, 1e-7);
}

TEST(Mixed, SineIntegralOnInactiveSide) {
    const auto p = example_mixed();
    EXPECT_NEAR(p.exact->ybar(1.0) - p.exact->ybar(1.0 / 3.0), -4.0 / (9.0 * pi), 1e-14);
}

TEST(Mixed, MultiplierMass) {
    const auto p = example_mixed();
    EXPECT_NEAR(p.exact->mu.total_mass(), 27.0 * pi * pi / 4.0, 1e-10);
    EXPECT_NEAR(p.exact->mu.total_mass(), 66.61983, 1e-5);
    EXPECT_EQ(p.exact->active_set.distance(0.0), 0.0);
}

TEST(Mixed, TargetIsStatePlusThirdDerivative) {
    const auto p = example_mixed();
    const double w = 9.0 * pi / 4.0;
    EXPECT_NEAR(p.y_d(0.0), p.exact->ybar(0.0), 1e-14);
    const double x = 0.7;
    EXPECT_NEAR(p.y_d(x) - p.exact->ybar(x), -w * w * w * std::cos(w * x - pi / 4.0), 1e-11);
}

TEST(Manufactured, RejectsBoundaryViolations) {
    EXPECT_THROW(manufactured_unconstrained({1.0, 0.0, 0.0, 0.0}, BcKind::dirichlet), InvalidArgument);
    EXPECT_THROW(manufactured_unconstrained({1.0, 1.0, 0.0, 0.0}, BcKind::dirichlet), InvalidArgument);
    // (1 + x)(3 - x) has p'(1) = 0
    EXPECT_NO_THROW(manufactured_unconstrained({3.0, 2.0, -1.0, 0.0}, BcKind::mixed));
}

TEST(Builtin, Names) {
    EXPECT_TRUE(builtin_problem("example-dirichlet"));
    EXPECT_TRUE(builtin_problem("example-mixed"));
    EXPECT_FALSE(builtin_problem("nope"));
}

TEST(Validate, RejectsInfeasibleData) {
    auto p = example_dirichlet();
    p.exact.reset();
    p.psi = PiecewiseSmooth::constant(0.0);
    EXPECT_THROW(p.validate(), InfeasibleData);

    auto m = example_mixed();
    m.exact.reset();
    m.psi = PiecewiseSmooth::constant(-0.1);
    EXPECT_THROW(m.validate(), InfeasibleData);

    auto b = example_mixed();
    b.beta = -1.0;
    EXPECT_THROW(b.validate(), InvalidArgument);
}

TEST(Json, RoundTripPreservesData) {
    for (const auto& p : {example_dirichlet(), example_mixed()}) {
        const auto q = load_problem(to_json(p));
        EXPECT_EQ(q.name, p.name);
        EXPECT_EQ(q.bc, p.bc);
        EXPECT_EQ(q.beta, p.beta);
        for (double x : {-0.9, -0.3, 0.1, 0.4, 0.8}) {
            EXPECT_EQ(q.y_d(x), p.y_d(x));
            EXPECT_EQ(q.f(x), p.f(x));
            EXPECT_EQ(q.psi(x), p.psi(x));
            EXPECT_EQ(q.exact->ybar(x), p.exact->ybar(x));
            EXPECT_EQ(q.exact->ubar(x), p.exact->ubar(x));
        }
        EXPECT_DOUBLE_EQ(q.exact->mu.total_mass(), p.exact->mu.total_mass());
        EXPECT_EQ(to_json(q), to_json(p));
    }
}

TEST(Json, RejectsInfeasibleDocuments) {
    nlohmann::json d = {{"name", "flat"}, {"bc", "dirichlet"}, {"beta", 1.0}, {"f", 0.0}, {"psi", 0.0}, {"yd", 1.0}};
    EXPECT_THROW(load_problem(d), InfeasibleData);
    nlohmann::json m = {{"name", "neg"}, {"bc", "mixed"}, {"beta", 1.0}, {"f", 0.0}, {"psi", -0.1}, {"yd", 1.0}};
    EXPECT_THROW(load_problem(m), InfeasibleData);
}

TEST(Json, SchemaErrors) {
    EXPECT_THROW(load_problem(nlohmann::json::array()), SchemaError);
    EXPECT_THROW(load_problem({{"bc", "robin"}, {"beta", 1.0}, {"f", 0}, {"psi", 1}, {"yd", 0}}), SchemaError);
    EXPECT_THROW(load_problem({{"bc", "mixed"}, {"beta", 1.0}, {"psi", 1}, {"yd", 0}}), SchemaError);
    nlohmann::json seg = {{"bc", "mixed"}, {"beta", 1.0}, {"f", 0}, {"psi", 1},
                          {"yd", {{"breakpoints", {0.0}}, {"segments", {{{"kind", "poly"}, {"coeffs", {1.0}}}}}}}};
    EXPECT_ANY_THROW(load_problem(seg));
    EXPECT_THROW(load_problem_file("/nonexistent/problem.json"), SchemaError);
}

TEST(Json, TrigTermsParse) {
    nlohmann::json d = {{"bc", "mixed"},
                        {"beta", 2.0},
                        {"f", 0},
                        {"psi", 1},
                        {"yd", {{"breakpoints", nlohmann::json::array()},
                                {"segments", {{{{"kind", "poly"}, {"coeffs", {1.0, 2.0}}},
                                               {{"kind", "sin"}, {"amp", 0.5}, {"freq", 3.0}, {"phase", 0.1}}}}}}}};
    const auto p = load_problem(d);
    EXPECT_NEAR(p.y_d(0.2), 1.4 + 0.5 * std::sin(0.7), 1e-15);
    EXPECT_FALSE(p.exact);
}

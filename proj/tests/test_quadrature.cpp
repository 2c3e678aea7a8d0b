#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <ocfem/piecewise.hpp>
#include <ocfem/quadrature.hpp>

using namespace ocfem;

TEST(Quadrature, WeightsSumToTwoAndPointsSymmetric) {
    for (std::size_t n = 1; n <= 20; ++n) {
        const auto& r = gauss_legendre(n);
        double s = 0.0;
        for (double w : r.weights) s += w;
        EXPECT_NEAR(s, 2.0, 1e-14) << n;
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r.points[i], -r.points[n - 1 - i], 1e-15);
    }
}

TEST(Quadrature, ExactForDegree2nMinus1) {
    for (std::size_t n = 1; n <= 12; ++n) {
        for (std::size_t p = 0; p <= 2 * n - 1; ++p) {
            const double exact = p % 2 == 1 ? 0.0 : 2.0 / static_cast<double>(p + 1);
            const double q = integrate_panel(-1.0, 1.0, [p](double x) { return std::pow(x, p); }, n);
            EXPECT_NEAR(q, exact, 1e-14) << "n=" << n << " p=" << p;
        }
    }
}

TEST(Quadrature, SquareWithTwoPoints) {
    const std::vector<double> none;
    EXPECT_NEAR(quadrature_on_element({-1.0, 1.0}, [](double x) { return x * x; }, none, 2), 2.0 / 3.0, 1e-15);
}

TEST(Quadrature, SplitsAtBreakpoint) {
    const std::vector<double> bp{0.0};
    auto chi = [](double x) { return x < 0.0 ? 1.0 : 0.0; };
    EXPECT_EQ(quadrature_on_element({-0.5, 0.5}, chi, bp, 1), 0.5);
    // without the split a 1-point rule lands on x = 0 and misses
    const std::vector<double> none;
    EXPECT_NE(quadrature_on_element({-0.5, 0.5}, chi, none, 1), 0.5);
}

TEST(Quadrature, SineOnActiveComplement) {
    // antiderivative -(4/(9 pi)) cos((pi/4)(9x - 1)) between 1/3 and 1
    using std::numbers::pi;
    const std::vector<double> none;
    const double q = quadrature_on_element(
        {1.0 / 3.0, 1.0}, [](double x) { return std::sin(pi / 4.0 * (9.0 * x - 1.0)); }, none, 10);
    EXPECT_NEAR(q, -4.0 / (9.0 * pi), 1e-12);
}

TEST(Quadrature, PanelCutsIgnoreOutsideBreakpoints) {
    const std::vector<double> bp{-0.9, 0.0, 0.25, 0.9};
    const auto cuts = panel_cuts({0.0, 0.5}, bp);
    EXPECT_EQ(cuts, (std::vector<double>{0.0, 0.25, 0.5}));
}

TEST(Quadrature, MergeBreakpoints) {
    const std::vector<double> a{-0.5, 0.0}, b{0.0, 1.0 / 3.0};
    EXPECT_EQ(merge_breakpoints(a, b), (std::vector<double>{-0.5, 0.0, 1.0 / 3.0}));
}

TEST(Quadrature, RejectsZeroOrder) { EXPECT_THROW(gauss_legendre(0), InvalidArgument); }

TEST(Piecewise, SegmentDerivativesMatchFiniteDifferences) {
    const Segment s{{1.0, -2.0, 0.5, 3.0}, {{TrigTerm::Kind::sin, 0.7, 2.3, 0.4}, {TrigTerm::Kind::cos, -1.1, 5.0, -0.2}}};
    const double h = 1e-5;
    for (double x : {-0.8, -0.1, 0.3, 0.95}) {
        for (unsigned d = 0; d < 4; ++d) {
            const double fd = (s.eval(x + h, d) - s.eval(x - h, d)) / (2 * h);
            EXPECT_NEAR(s.eval(x, d + 1), fd, 1e-5 * (1.0 + std::abs(fd))) << "x=" << x << " d=" << d;
            EXPECT_NEAR(s.derivative(d).eval(x), s.eval(x, d), 1e-12 * (1.0 + std::abs(s.eval(x, d))));
        }
    }
}

TEST(Piecewise, SidesAtBreakpoint) {
    const PiecewiseSmooth p({0.0}, {Segment::constant(1.0), Segment::constant(2.0)});
    EXPECT_EQ(p.eval(0.0, 0, Side::left), 1.0);
    EXPECT_EQ(p.eval(0.0, 0, Side::right), 2.0);
    EXPECT_EQ(p(-0.5), 1.0);
    EXPECT_NEAR(p.integral(), 3.0, 1e-15);
}

TEST(Piecewise, SumMergesBreakpoints) {
    const PiecewiseSmooth a({0.0}, {Segment::constant(1.0), Segment::constant(2.0)});
    const PiecewiseSmooth b({0.5}, {Segment::polynomial({0.0, 1.0}), Segment::constant(-4.0)});
    const auto c = a + b;
    EXPECT_EQ(c.breakpoints().size(), 2u);
    for (double x : {-0.7, -0.1, 0.2, 0.45, 0.6, 0.99}) EXPECT_DOUBLE_EQ(c(x), a(x) + b(x));
}

TEST(Piecewise, Validates) {
    EXPECT_THROW(PiecewiseSmooth({0.0}, {Segment::constant(1.0)}), InvalidArgument);
    EXPECT_THROW(PiecewiseSmooth({1.0}, {Segment::constant(1.0), Segment::constant(1.0)}), InvalidArgument);
    EXPECT_THROW(PiecewiseSmooth({0.2, 0.1}, {Segment::constant(1.0), Segment::constant(1.0), Segment::constant(1.0)}),
                 InvalidArgument);
}

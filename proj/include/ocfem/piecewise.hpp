#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"

namespace ocfem {

/// amp * sin(freq * x + phase) or amp * cos(freq * x + phase).
struct TrigTerm {
    enum class Kind { sin, cos };
    Kind kind = Kind::sin;
    double amp = 0.0;
    double freq = 0.0;
    double phase = 0.0;

    double eval(double x, unsigned der = 0) const {
        // d^k/dx^k sin(t) = sin(t + k pi/2); reduce k mod 4 to stay exact.
        const double theta = freq * x + phase;
        double scale = amp;
        for (unsigned k = 0; k < der; ++k) scale *= freq;
        const bool is_sin = kind == Kind::sin;
        switch (der % 4) {
            case 0: return scale * (is_sin ? std::sin(theta) : std::cos(theta));
            case 1: return scale * (is_sin ? std::cos(theta) : -std::sin(theta));
            case 2: return scale * (is_sin ? -std::sin(theta) : -std::cos(theta));
            default: return scale * (is_sin ? -std::cos(theta) : std::sin(theta));
        }
    }

    friend bool operator==(const TrigTerm&, const TrigTerm&) = default;
};

/// One smooth piece: a polynomial (ascending coefficients) plus trig terms.
struct Segment {
    std::vector<double> poly;
    std::vector<TrigTerm> trig;

    static Segment constant(double c) { return {{c}, {}}; }
    static Segment polynomial(std::vector<double> coeffs) { return {std::move(coeffs), {}}; }

    double eval(double x, unsigned der = 0) const {
        double s = 0.0;
        // Horner on the der-th derivative's coefficients.
        for (std::size_t i = poly.size(); i-- > der;) {
            double c = poly[i];
            for (unsigned k = 0; k < der; ++k) c *= static_cast<double>(i - k);
            s = s * x + c;
        }
        for (const auto& t : trig) s += t.eval(x, der);
        return s;
    }

    Segment& operator+=(const Segment& o) {
        if (poly.size() < o.poly.size()) poly.resize(o.poly.size(), 0.0);
        for (std::size_t i = 0; i < o.poly.size(); ++i) poly[i] += o.poly[i];
        trig.insert(trig.end(), o.trig.begin(), o.trig.end());
        return *this;
    }

    Segment derivative(unsigned k = 1) const {
        Segment d;
        if (poly.size() > k) {
            d.poly.resize(poly.size() - k);
            for (std::size_t i = k; i < poly.size(); ++i) {
                double c = poly[i];
                for (unsigned j = 0; j < k; ++j) c *= static_cast<double>(i - j);
                d.poly[i - k] = c;
            }
        }
        for (TrigTerm t : trig) {
            // shift the phase by k quarter turns: d/dx sin(t) = sin(t + pi/2)
            for (unsigned j = 0; j < k; ++j) {
                t.amp *= t.freq;
                if (t.kind == TrigTerm::Kind::sin) {
                    t.kind = TrigTerm::Kind::cos;
                } else {
                    t.kind = TrigTerm::Kind::sin;
                    t.amp = -t.amp;
                }
            }
            d.trig.push_back(t);
        }
        return d;
    }

    Segment scaled(double c) const {
        Segment s = *this;
        for (auto& p : s.poly) p *= c;
        for (auto& t : s.trig) t.amp *= c;
        return s;
    }

    friend bool operator==(const Segment&, const Segment&) = default;
};

enum class Side { left, right };

/// Function on [-1, 1] that is smooth between declared interior breakpoints.
/// Breakpoints must list every jump of the function or its first three
/// derivatives; quadrature splits panels there.
class PiecewiseSmooth {
public:
    PiecewiseSmooth() : segments_{Segment::constant(0.0)} {}

    PiecewiseSmooth(std::vector<double> breakpoints, std::vector<Segment> segments)
        : breakpoints_(std::move(breakpoints)), segments_(std::move(segments)) {
        if (segments_.size() != breakpoints_.size() + 1)
            throw InvalidArgument("PiecewiseSmooth: need exactly one more segment than breakpoints");
        for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
            if (!(breakpoints_[i] > -1.0 && breakpoints_[i] < 1.0))
                throw InvalidArgument("PiecewiseSmooth: breakpoints must lie strictly inside (-1, 1)");
            if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1]))
                throw InvalidArgument("PiecewiseSmooth: breakpoints must be strictly increasing");
        }
    }

    explicit PiecewiseSmooth(Segment s) : segments_{std::move(s)} {}

    static PiecewiseSmooth constant(double c) { return PiecewiseSmooth(Segment::constant(c)); }

    std::span<const double> breakpoints() const { return breakpoints_; }
    std::span<const Segment> segments() const { return segments_; }

    std::size_t segment_index(double x, Side side = Side::right) const {
        auto it = side == Side::right ? std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x)
                                      : std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
        return static_cast<std::size_t>(it - breakpoints_.begin());
    }

    /// der-th derivative at x; at a breakpoint, side picks the one-sided piece.
    double eval(double x, unsigned der = 0, Side side = Side::right) const {
        return segments_[segment_index(x, side)].eval(x, der);
    }

    double operator()(double x) const { return eval(x); }

    PiecewiseSmooth scaled(double c) const {
        std::vector<Segment> segs;
        segs.reserve(segments_.size());
        for (const auto& s : segments_) segs.push_back(s.scaled(c));
        return {breakpoints_, std::move(segs)};
    }

    PiecewiseSmooth derivative(unsigned k = 1) const {
        std::vector<Segment> segs;
        segs.reserve(segments_.size());
        for (const auto& s : segments_) segs.push_back(s.derivative(k));
        return {breakpoints_, std::move(segs)};
    }

    friend PiecewiseSmooth operator+(const PiecewiseSmooth& a, const PiecewiseSmooth& b) {
        auto bps = merge_breakpoints(a.breakpoints_, b.breakpoints_);
        std::vector<Segment> segs;
        segs.reserve(bps.size() + 1);
        for (std::size_t i = 0; i <= bps.size(); ++i) {
            const double lo = i == 0 ? -1.0 : bps[i - 1];
            const double hi = i == bps.size() ? 1.0 : bps[i];
            const double mid = 0.5 * (lo + hi);
            Segment s = a.segments_[a.segment_index(mid)];
            s += b.segments_[b.segment_index(mid)];
            segs.push_back(std::move(s));
        }
        return {std::move(bps), std::move(segs)};
    }

    /// Integral over [-1, 1], split at breakpoints.
    double integral(std::size_t order = 12) const {
        return quadrature_on_element({-1.0, 1.0}, [this](double x) { return eval(x); }, breakpoints_, order);
    }

private:
    std::vector<double> breakpoints_;
    std::vector<Segment> segments_;
};

} // namespace ocfem

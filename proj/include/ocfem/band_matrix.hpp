#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ocfem {

/// Symmetric banded matrix storing the diagonal and `bandwidth` super-diagonals.
class SymBandMatrix {
public:
    explicit SymBandMatrix(std::size_t n = 0, std::size_t bandwidth = 3)
        : n_(n), kb_(bandwidth), data_(n * (bandwidth + 1), 0.0) {}

    std::size_t size() const { return n_; }
    std::size_t bandwidth() const { return kb_; }

    /// A(i, j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        if (j - i > kb_) return 0.0;
        return data_[i * (kb_ + 1) + (j - i)];
    }

    /// A(i, j) += v (and symmetrically A(j, i)).
    void add(std::size_t i, std::size_t j, double v) {
        if (i > j) std::swap(i, j);
        if (j - i > kb_) throw InvalidArgument("SymBandMatrix::add: entry outside the band");
        data_[i * (kb_ + 1) + (j - i)] += v;
    }

    void set(std::size_t i, std::size_t j, double v) {
        if (i > j) std::swap(i, j);
        if (j - i > kb_) throw InvalidArgument("SymBandMatrix::set: entry outside the band");
        data_[i * (kb_ + 1) + (j - i)] = v;
    }

    /// y = A x, accumulated in long double.
    template <class T>
    std::vector<long double> multiply_extended(std::span<const T> x) const {
        std::vector<long double> y(n_, 0.0L);
        for (std::size_t i = 0; i < n_; ++i) {
            y[i] += static_cast<long double>((*this)(i, i)) * x[i];
            for (std::size_t d = 1; d <= kb_ && i + d < n_; ++d) {
                const long double a = data_[i * (kb_ + 1) + d];
                y[i] += a * x[i + d];
                y[i + d] += a * x[i];
            }
        }
        return y;
    }

    std::vector<long double> multiply_extended(const std::vector<double>& x) const {
        return multiply_extended(std::span<const double>(x));
    }
    std::vector<long double> multiply_extended(const std::vector<long double>& x) const {
        return multiply_extended(std::span<const long double>(x));
    }

    std::vector<double> multiply(std::span<const double> x) const {
        auto y = multiply_extended(x);
        return {y.begin(), y.end()};
    }

    /// Principal submatrix on sorted indices; stays within the same bandwidth.
    SymBandMatrix principal_submatrix(std::span<const std::size_t> idx) const {
        SymBandMatrix s(idx.size(), kb_);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a; b < idx.size() && idx[b] - idx[a] <= kb_; ++b)
                s.set(a, b, (*this)(idx[a], idx[b]));
        return s;
    }

    std::vector<std::vector<double>> dense() const {
        std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) d[i][j] = (*this)(i, j);
        return d;
    }

private:
    std::size_t n_;
    std::size_t kb_;
    std::vector<double> data_;
};

/// Banded Cholesky A = L L^T carried out in long double. Throws
/// InvalidArgument if A is not SPD.
class BandCholesky {
public:
    explicit BandCholesky(const SymBandMatrix& a) : a_(a), n_(a.size()), kb_(a.bandwidth()), l_(n_ * (kb_ + 1), 0.0L) {
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t j0 = i > kb_ ? i - kb_ : 0;
            for (std::size_t j = j0; j <= i; ++j) {
                long double s = a(i, j);
                for (std::size_t k = std::max(j0, j > kb_ ? j - kb_ : 0); k < j; ++k) s -= lower(i, k) * lower(j, k);
                if (j == i) {
                    if (!(s > 0.0L))
                        throw InvalidArgument("BandCholesky: matrix is not positive definite (pivot " +
                                              std::to_string(i) + ")");
                    lower_ref(i, i) = std::sqrt(s);
                } else {
                    lower_ref(i, j) = s / lower(j, j);
                }
            }
        }
    }

    std::size_t size() const { return n_; }

    /// Solve A x = b, then one step of iterative refinement.
    std::vector<long double> solve(std::span<const long double> b) const {
        std::vector<long double> x = substitute(b);
        const auto ax = a_.multiply_extended(std::span<const long double>(x));
        std::vector<long double> r(n_);
        for (std::size_t i = 0; i < n_; ++i) r[i] = b[i] - ax[i];
        const auto dx = substitute(r);
        for (std::size_t i = 0; i < n_; ++i) x[i] += dx[i];
        return x;
    }

    std::vector<double> solve(std::span<const double> b) const {
        const std::vector<long double> bl(b.begin(), b.end());
        const auto x = solve(std::span<const long double>(bl));
        return {x.begin(), x.end()};
    }

private:
    // row-major lower band: l_[i*(kb+1) + (i-j)] = L(i, j)
    long double lower(std::size_t i, std::size_t j) const { return l_[i * (kb_ + 1) + (i - j)]; }
    long double& lower_ref(std::size_t i, std::size_t j) { return l_[i * (kb_ + 1) + (i - j)]; }

    std::vector<long double> substitute(std::span<const long double> b) const {
        std::vector<long double> y(b.begin(), b.end());
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t k = i > kb_ ? i - kb_ : 0; k < i; ++k) y[i] -= lower(i, k) * y[k];
            y[i] /= lower(i, i);
        }
        for (std::size_t i = n_; i-- > 0;) {
            for (std::size_t k = i + 1; k <= i + kb_ && k < n_; ++k) y[i] -= lower(k, i) * y[k];
            y[i] /= lower(i, i);
        }
        return y;
    }

    SymBandMatrix a_;
    std::size_t n_;
    std::size_t kb_;
    std::vector<long double> l_;
};

} // namespace ocfem

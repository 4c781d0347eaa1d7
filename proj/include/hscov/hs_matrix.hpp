#ifndef HSCOV_HS_MATRIX_HPP
#define HSCOV_HS_MATRIX_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hscov/detail/accum.hpp"
#include "hscov/errors.hpp"
#include "hscov/l2.hpp"

namespace hscov {

// Truncated double sequence A = {a_ij} defining a Hilbert-Schmidt operator.
//
// Convention (pinned once, used everywhere): a_ij has i as the INPUT basis
// index and j as the OUTPUT basis index, i.e. the operator acts as the row
// vector of coefficients times the matrix,
//
//     (T x)_j = sum_i a_ij x_i          (apply)
//     (T* y)_i = sum_j a_ij y_j         (apply_adjoint; the transpose)
//
// Storage is dense row-major (row = input index), N x N. The HS norm square
// sum_ij a_ij^2 is computed once, with compensated summation, at
// construction.
class HSMatrix {
public:
    HSMatrix(std::size_t n, std::vector<double> entries) : n_(n), a_(std::move(entries)) {
        if (n_ == 0)
            throw std::invalid_argument("HSMatrix: dimension must be >= 1");
        if (a_.size() != n_ * n_)
            throw std::invalid_argument("HSMatrix: entry count " + std::to_string(a_.size()) +
                                        " does not match N*N = " + std::to_string(n_ * n_));
        detail::CompensatedSum s;
        for (std::size_t idx = 0; idx < a_.size(); ++idx) {
            if (!std::isfinite(a_[idx]))
                throw non_finite_error("HSMatrix: non-finite entry at (" +
                                       std::to_string(idx / n_ + 1) + "," +
                                       std::to_string(idx % n_ + 1) + ")");
            s.add(a_[idx] * a_[idx]);
        }
        hs_norm_sq_ = s.value();
    }

    static HSMatrix zero(std::size_t n) { return HSMatrix(n, std::vector<double>(n * n, 0.0)); }

    static HSMatrix identity(std::size_t n) {
        std::vector<double> a(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            a[i * n + i] = 1.0;
        return HSMatrix(n, std::move(a));
    }

    static HSMatrix diagonal(const std::vector<double>& d) {
        const std::size_t n = d.size();
        std::vector<double> a(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            a[i * n + i] = d[i];
        return HSMatrix(n, std::move(a));
    }

    // f takes 1-based (i, j).
    template <class F>
    static HSMatrix from_generator(F&& f, std::size_t n) {
        if (n == 0)
            throw std::invalid_argument("HSMatrix::from_generator: N must be >= 1");
        std::vector<double> a(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const double v = f(i + 1, j + 1);
                if (!std::isfinite(v))
                    throw non_finite_error("HSMatrix::from_generator: non-finite value at (" +
                                           std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
                a[i * n + j] = v;
            }
        return HSMatrix(n, std::move(a));
    }

    std::size_t dim() const { return n_; }
    // 0-based accessor
    double entry(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<double>& entries() const { return a_; }

    L2Vec apply(const L2Vec& x) const {
        check_dim(x, "HSMatrix::apply");
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            const double xi = x[i];
            if (xi == 0.0)
                continue;
            const double* row = &a_[i * n_];
            for (std::size_t j = 0; j < n_; ++j)
                y[j] += xi * row[j];
        }
        return L2Vec(std::move(y));
    }

    L2Vec apply_adjoint(const L2Vec& y) const {
        check_dim(y, "HSMatrix::apply_adjoint");
        std::vector<double> z(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            const double* row = &a_[i * n_];
            detail::CompensatedSum s;
            for (std::size_t j = 0; j < n_; ++j)
                s.add(row[j] * y[j]);
            z[i] = s.value();
        }
        return L2Vec(std::move(z));
    }

    double hs_norm_sq() const { return hs_norm_sq_; }
    double hs_norm() const { return std::sqrt(hs_norm_sq_); }

    // Largest singular value estimate by power iteration on T*T (Rayleigh
    // quotient route, so the estimate never exceeds the true value and is
    // nondecreasing in the iteration count). Deterministic per seed.
    double op_norm_estimate(std::size_t iterations, std::uint64_t seed) const {
        if (iterations == 0)
            throw std::invalid_argument("HSMatrix::op_norm_estimate: iterations must be >= 1");
        detail::Rng rng(seed);
        std::vector<double> v(n_);
        for (double& c : v)
            c = rng.normal();
        L2Vec vv{std::move(v)};
        const double nv = norm(vv);
        if (nv == 0.0 || hs_norm_sq_ == 0.0)
            return 0.0;
        vv = (1.0 / nv) * vv;
        double lambda = 0.0;
        for (std::size_t it = 0; it < iterations; ++it) {
            const L2Vec bv = apply_adjoint(apply(vv)); // (T*T) v
            const double next = inner(vv, bv);         // Rayleigh quotient of T*T
            const double nb = norm(bv);
            if (nb == 0.0)
                return 0.0;
            const bool converged = std::abs(next - lambda) <= 1e-10 * std::abs(next);
            lambda = next;
            if (converged)
                break;
            vv = (1.0 / nb) * bv;
        }
        return std::sqrt(std::max(lambda, 0.0));
    }

    // k -> ||T* e_k|| = sqrt(sum_i a_ik^2), k = 1..N. The minimum of this
    // sequence is the basis-direction upper bound on the covering constant.
    std::vector<double> column_tail_norms() const {
        std::vector<double> out(n_);
        for (std::size_t k = 0; k < n_; ++k) {
            detail::CompensatedSum s;
            for (std::size_t i = 0; i < n_; ++i)
                s.add(a_[i * n_ + k] * a_[i * n_ + k]);
            out[k] = std::sqrt(s.value());
        }
        return out;
    }

    // m -> sqrt(sum_j a_mj^2), m = 1..N (= ||T e_m||).
    std::vector<double> row_tail_norms() const {
        std::vector<double> out(n_);
        for (std::size_t m = 0; m < n_; ++m) {
            detail::CompensatedSum s;
            const double* row = &a_[m * n_];
            for (std::size_t j = 0; j < n_; ++j)
                s.add(row[j] * row[j]);
            out[m] = std::sqrt(s.value());
        }
        return out;
    }

private:
    void check_dim(const L2Vec& x, const char* who) const {
        if (x.dim() != n_)
            throw std::invalid_argument(std::string(who) + ": dimension mismatch (vector " +
                                        std::to_string(x.dim()) + " vs matrix " + std::to_string(n_) + ")");
    }

    std::size_t n_;
    std::vector<double> a_;
    double hs_norm_sq_;
};

} // namespace hscov

#endif

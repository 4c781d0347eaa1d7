#ifndef HSCOV_L2_HPP
#define HSCOV_L2_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hscov/detail/accum.hpp"

namespace hscov {

// Truncated coefficient vector of a Hilbert-space element against the
// orthonormal basis {e_1, e_2, ...}. Everything in this library works on
// these finite truncations; the truncation length is chosen by the caller
// and is never changed implicitly (dimension mismatch is a hard error,
// never silent padding).
//
// Element access is 0-based like any C++ container; basis(k, dim) takes the
// usual 1-based basis index.
class L2Vec {
public:
    explicit L2Vec(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty())
            throw std::invalid_argument("L2Vec: dimension must be >= 1");
    }

    static L2Vec zero(std::size_t dim) {
        if (dim == 0)
            throw std::invalid_argument("L2Vec::zero: dimension must be >= 1");
        return L2Vec(std::vector<double>(dim, 0.0));
    }

    static L2Vec basis(std::size_t k, std::size_t dim) {
        if (dim == 0)
            throw std::invalid_argument("L2Vec::basis: dimension must be >= 1");
        if (k < 1 || k > dim)
            throw std::invalid_argument("L2Vec::basis: index " + std::to_string(k) +
                                        " out of range 1.." + std::to_string(dim));
        L2Vec v = zero(dim);
        v.c_[k - 1] = 1.0;
        return v;
    }

    std::size_t dim() const { return c_.size(); }
    double operator[](std::size_t i) const { return c_[i]; }
    double& operator[](std::size_t i) { return c_[i]; }
    const std::vector<double>& coeffs() const { return c_; }

    auto begin() const { return c_.begin(); }
    auto end() const { return c_.end(); }

private:
    std::vector<double> c_;
};

inline void require_same_dim(const L2Vec& x, const L2Vec& y, const char* who) {
    if (x.dim() != y.dim())
        throw std::invalid_argument(std::string(who) + ": dimension mismatch (" +
                                    std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) + ")");
}

inline double inner(const L2Vec& x, const L2Vec& y) {
    require_same_dim(x, y, "inner");
    detail::CompensatedSum s;
    for (std::size_t i = 0; i < x.dim(); ++i)
        s.add(x[i] * y[i]);
    return s.value();
}

inline double norm_sq(const L2Vec& x) {
    detail::CompensatedSum s;
    for (double c : x)
        s.add(c * c);
    return s.value();
}

inline double norm(const L2Vec& x) { return std::sqrt(norm_sq(x)); }

// Pad with zeros or drop trailing coefficients; the norm never increases
// under truncation.
inline L2Vec embed(const L2Vec& x, std::size_t newdim) {
    if (newdim == 0)
        throw std::invalid_argument("embed: dimension must be >= 1");
    std::vector<double> c(newdim, 0.0);
    for (std::size_t i = 0; i < std::min(newdim, x.dim()); ++i)
        c[i] = x[i];
    return L2Vec(std::move(c));
}

inline L2Vec operator+(const L2Vec& x, const L2Vec& y) {
    require_same_dim(x, y, "operator+");
    std::vector<double> c(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
        c[i] = x[i] + y[i];
    return L2Vec(std::move(c));
}

inline L2Vec operator-(const L2Vec& x, const L2Vec& y) {
    require_same_dim(x, y, "operator-");
    std::vector<double> c(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
        c[i] = x[i] - y[i];
    return L2Vec(std::move(c));
}

inline L2Vec operator*(double a, const L2Vec& x) {
    std::vector<double> c(x.dim());
    for (std::size_t i = 0; i < x.dim(); ++i)
        c[i] = a * x[i];
    return L2Vec(std::move(c));
}

inline double distance(const L2Vec& x, const L2Vec& y) { return norm(x - y); }

} // namespace hscov

#endif

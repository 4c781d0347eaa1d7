#ifndef HSCOV_BASIS_HPP
#define HSCOV_BASIS_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hscov/l2.hpp"
#include "hscov/quadrature.hpp"

namespace hscov {

// Orthonormal function family phi_i on (0,1), truncated at `count`.
// Orthonormality is a numerical contract against a concrete quadrature rule
// (see gram_deviation / validate_orthonormal); every spectral identity
// downstream silently breaks if it fails, so violations are hard errors.
class OrthoBasis {
public:
    OrthoBasis(std::function<double(int, double)> eval, int count, std::string label)
        : eval_(std::move(eval)), count_(count), label_(std::move(label)) {
        if (count_ < 1)
            throw std::invalid_argument("OrthoBasis: count must be >= 1");
    }

    // i is 1-based
    double eval(int i, double s) const { return eval_(i, s); }
    int count() const { return count_; }
    const std::string& label() const { return label_; }

    // phi_i(s) = sqrt(2) sin(i pi s): exactly orthonormal on (0,1)
    static OrthoBasis sine(int count) {
        return OrthoBasis(
            [](int i, double s) {
                return std::sqrt(2.0) * std::sin(static_cast<double>(i) * 3.14159265358979323846 * s);
            },
            count, "sine");
    }

private:
    std::function<double(int, double)> eval_;
    int count_;
    std::string label_;
};

// max |<phi_i, phi_j>_quad - delta_ij| over i, j <= count
inline double gram_deviation(const OrthoBasis& basis, const QuadratureRule& quad) {
    const int m = basis.count();
    const std::size_t q = quad.nodes.size();
    std::vector<double> tab(static_cast<std::size_t>(m) * q);
    for (int i = 0; i < m; ++i)
        for (std::size_t n = 0; n < q; ++n)
            tab[static_cast<std::size_t>(i) * q + n] = basis.eval(i + 1, quad.nodes[n]);
    double worst = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            detail::CompensatedSum s;
            for (std::size_t n = 0; n < q; ++n)
                s.add(quad.weights[n] * tab[static_cast<std::size_t>(i) * q + n] *
                      tab[static_cast<std::size_t>(j) * q + n]);
            const double target = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(s.value() - target));
        }
    return worst;
}

inline void validate_orthonormal(const OrthoBasis& basis, const QuadratureRule& quad,
                                 double tol = 1e-8) {
    const double dev = gram_deviation(basis, quad);
    if (dev > tol)
        throw std::invalid_argument("OrthoBasis '" + basis.label() + "': Gram identity fails under order-" +
                                    std::to_string(quad.order) + " quadrature (deviation " +
                                    std::to_string(dev) + " > tolerance); raise the quadrature order or lower the basis size");
}

// coefficient vector <f, phi_i>_quad, i = 1..count
template <class F>
L2Vec project(F&& f, const OrthoBasis& basis, const QuadratureRule& quad) {
    std::vector<double> c(static_cast<std::size_t>(basis.count()));
    for (int i = 0; i < basis.count(); ++i) {
        detail::CompensatedSum s;
        for (std::size_t n = 0; n < quad.nodes.size(); ++n)
            s.add(quad.weights[n] * f(quad.nodes[n]) * basis.eval(i + 1, quad.nodes[n]));
        c[static_cast<std::size_t>(i)] = s.value();
    }
    return L2Vec(std::move(c));
}

inline L2Vec project_samples(const std::vector<double>& f, const OrthoBasis& basis,
                             const QuadratureRule& quad) {
    if (f.size() != quad.nodes.size())
        throw std::invalid_argument("project_samples: sample count does not match quadrature");
    std::vector<double> c(static_cast<std::size_t>(basis.count()));
    for (int i = 0; i < basis.count(); ++i) {
        detail::CompensatedSum s;
        for (std::size_t n = 0; n < quad.nodes.size(); ++n)
            s.add(quad.weights[n] * f[n] * basis.eval(i + 1, quad.nodes[n]));
        c[static_cast<std::size_t>(i)] = s.value();
    }
    return L2Vec(std::move(c));
}

// sum_i c_i phi_i(s)
inline double synthesize(const L2Vec& coeffs, const OrthoBasis& basis, double s) {
    detail::CompensatedSum acc;
    for (std::size_t i = 0; i < coeffs.dim(); ++i)
        acc.add(coeffs[i] * basis.eval(static_cast<int>(i) + 1, s));
    return acc.value();
}

} // namespace hscov

#endif

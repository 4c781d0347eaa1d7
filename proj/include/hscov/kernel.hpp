#ifndef HSCOV_KERNEL_HPP
#define HSCOV_KERNEL_HPP

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hscov/errors.hpp"

namespace hscov {

// Square-integrable kernel k(s,t) on (0,1)^2. Square-integrability is a
// numerical assertion: the quadrature estimate of the double integral of k^2
// must be finite (checked where kernels are consumed).
struct Kernel {
    std::function<double(double, double)> eval;
    std::string label;
};

inline Kernel zero_kernel() {
    return {[](double, double) { return 0.0; }, "zero"};
}

inline Kernel min_kernel() {
    return {[](double s, double t) { return std::min(s, t); }, "min"};
}

// k(s,t) = phi(s) psi(t) with phi = psi = sqrt(2) sin(pi .): rank-one,
// unit HS norm.
inline Kernel separable_sine_kernel() {
    return {[](double s, double t) {
                const double pi = 3.14159265358979323846;
                return 2.0 * std::sin(pi * s) * std::sin(pi * t);
            },
            "separable-sine"};
}

inline Kernel constant_kernel(double c) {
    if (!std::isfinite(c))
        throw non_finite_error("constant_kernel: non-finite constant");
    return {[c](double, double) { return c; }, "constant:" + std::to_string(c)};
}

// Kernel given as G x G samples on the uniform grid over [0,1] including
// endpoints, evaluated anywhere by bilinear interpolation. Interpolation
// adds O(h^2) error on top of quadrature error, h = 1/(G-1); gridded kernels
// are for data-driven inputs, not for convergence studies.
class GriddedKernel {
public:
    GriddedKernel(std::size_t grid_size, std::vector<double> samples)
        : g_(grid_size), v_(std::move(samples)) {
        if (g_ < 2)
            throw std::invalid_argument("GriddedKernel: grid size must be >= 2");
        if (v_.size() != g_ * g_)
            throw std::invalid_argument("GriddedKernel: sample count does not match grid");
        for (std::size_t idx = 0; idx < v_.size(); ++idx)
            if (!std::isfinite(v_[idx]))
                throw non_finite_error("GriddedKernel: non-finite sample at row " +
                                       std::to_string(idx / g_ + 1) + ", column " +
                                       std::to_string(idx % g_ + 1));
    }

    double operator()(double s, double t) const {
        const double h = 1.0 / static_cast<double>(g_ - 1);
        const double fs = std::min(std::max(s, 0.0), 1.0) / h;
        const double ft = std::min(std::max(t, 0.0), 1.0) / h;
        std::size_t i = std::min(static_cast<std::size_t>(fs), g_ - 2);
        std::size_t j = std::min(static_cast<std::size_t>(ft), g_ - 2);
        const double as = fs - static_cast<double>(i);
        const double at = ft - static_cast<double>(j);
        const double v00 = v_[i * g_ + j], v01 = v_[i * g_ + j + 1];
        const double v10 = v_[(i + 1) * g_ + j], v11 = v_[(i + 1) * g_ + j + 1];
        return (1.0 - as) * ((1.0 - at) * v00 + at * v01) + as * ((1.0 - at) * v10 + at * v11);
    }

    std::size_t grid_size() const { return g_; }

    Kernel to_kernel(std::string label) const {
        GriddedKernel copy = *this;
        return {[copy](double s, double t) { return copy(s, t); }, std::move(label)};
    }

private:
    std::size_t g_;
    std::vector<double> v_;
};

} // namespace hscov

#endif

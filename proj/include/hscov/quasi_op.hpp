#ifndef HSCOV_QUASI_OP_HPP
#define HSCOV_QUASI_OP_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "hscov/detail/accum.hpp"
#include "hscov/errors.hpp"
#include "hscov/l2.hpp"

namespace hscov {

// The nonlinear quasi-Hilbert-Schmidt operator
//
//     T x = ((x1^2 - x2^2)/r) e1 + (2 x1 x2 / r) e2,  r = sqrt(x1^2 + x2^2) > 0,
//     T x = 0                                          when r = 0,
//
// where x1, x2 are the first two coefficients. The range lies in span{e1,e2},
// ||T x||^2 = x1^2 + x2^2 (so T is nonexpansive), and the map doubles the
// polar angle of (x1, x2). Arithmetic is carried out on x1/r, x2/r so that
// values survive near-underflow and near-overflow inputs around the branch
// boundary.
inline L2Vec apply_quasi(const L2Vec& x) {
    if (x.dim() < 2)
        throw std::invalid_argument("apply_quasi: dimension must be >= 2");
    L2Vec out = L2Vec::zero(x.dim());
    const double x1 = x[0], x2 = x[1];
    if (x1 == 0.0 && x2 == 0.0)
        return out;
    const double r = std::hypot(x1, x2);
    const double c = x1 / r, s = x2 / r;
    out[0] = c * x1 - s * x2;
    out[1] = 2.0 * c * x2;
    return out;
}

// sqrt(sum_{k<=dim} ||T e_k||^2). Only e1 and e2 contribute (1 each), so the
// value is sqrt(2) for every dim >= 2; computed literally all the same.
inline double quasi_hs_norm(std::size_t dim) {
    if (dim < 2)
        throw std::invalid_argument("quasi_hs_norm: dimension must be >= 2");
    detail::CompensatedSum s;
    for (std::size_t k = 1; k <= dim; ++k)
        s.add(norm_sq(apply_quasi(L2Vec::basis(k, dim))));
    return std::sqrt(s.value());
}

// Active 2x2 block of the derivative double sequence D(z), in the row-vector
// convention: rows are input coordinates, columns output coordinates, so the
// derivative acts as sc(x) D(z) and the coderivative as sc(y) D(z)^T. All
// entries outside this block are zero.
struct Jacobian2x2 {
    double d11, d12, d21, d22;
};

// With r^3 = (z1^2 + z2^2)^{3/2}:
//   d11 = (z1^2 + 3 z2^2) z1 / r^3     d12 = 2 z2^3 / r^3
//   d21 = -(3 z1^2 + z2^2) z2 / r^3    d22 = 2 z1^3 / r^3
// Each entry is homogeneous of degree 0 in z; the computation scales by
// max(|z1|,|z2|) first so that holds numerically too.
inline Jacobian2x2 frechet_jacobian(const L2Vec& z) {
    if (z.dim() < 2)
        throw std::invalid_argument("frechet_jacobian: dimension must be >= 2");
    const double z1 = z[0], z2 = z[1];
    if (z1 == 0.0 && z2 == 0.0)
        throw not_differentiable("frechet_jacobian: not Frechet differentiable where <z,e1> = <z,e2> = 0");
    const double m = std::max(std::abs(z1), std::abs(z2));
    const double a = z1 / m, b = z2 / m;
    const double q = a * a + b * b;
    const double r3 = q * std::sqrt(q);
    return {(a * a + 3.0 * b * b) * a / r3, 2.0 * b * b * b / r3,
            -(3.0 * a * a + b * b) * b / r3, 2.0 * a * a * a / r3};
}

// sc(x) D(z): output_1 = x1 d11 + x2 d21, output_2 = x1 d12 + x2 d22,
// tail coordinates zero. Linear in x.
inline L2Vec apply_frechet(const L2Vec& z, const L2Vec& x) {
    require_same_dim(z, x, "apply_frechet");
    const Jacobian2x2 d = frechet_jacobian(z);
    L2Vec out = L2Vec::zero(x.dim());
    out[0] = x[0] * d.d11 + x[1] * d.d21;
    out[1] = x[0] * d.d12 + x[1] * d.d22;
    return out;
}

// sc(y) D(z)^T: output_1 = y1 d11 + y2 d12, output_2 = y1 d21 + y2 d22.
// Adjoint of apply_frechet: <sc(x)D(z), y> = <x, sc(y)D(z)^T>. Off the
// differentiable set the coderivative is set-valued and handled by the
// probe machinery, never here.
inline L2Vec apply_coderivative(const L2Vec& z, const L2Vec& y) {
    require_same_dim(z, y, "apply_coderivative");
    const Jacobian2x2 d = frechet_jacobian(z);
    L2Vec out = L2Vec::zero(y.dim());
    out[0] = y[0] * d.d11 + y[1] * d.d12;
    out[1] = y[0] * d.d21 + y[1] * d.d22;
    return out;
}

inline bool quasi_differentiable_at(const L2Vec& z) {
    return z.dim() >= 2 && !(z[0] == 0.0 && z[1] == 0.0);
}

} // namespace hscov

#endif

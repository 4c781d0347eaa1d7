#ifndef HSCOV_INTEGRAL_OP_HPP
#define HSCOV_INTEGRAL_OP_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hscov/basis.hpp"
#include "hscov/errors.hpp"
#include "hscov/hs_matrix.hpp"
#include "hscov/kernel.hpp"
#include "hscov/l2.hpp"
#include "hscov/quadrature.hpp"

namespace hscov {

// Spectral coefficient matrix c_ij = INT k(s,t) phi_i(s) phi_j(t) ds dt of an
// integral operator against an orthonormal basis, truncated at M x M.
//
// The spectral action is
//
//     (T f)_i  = sum_j c_ij f_j        (output index is the FIRST index)
//     (T* g)_j = sum_i c_ij g_i
//
// which is the transpose of the HSMatrix row-vector convention; the
// delegation below therefore crosses over (forward -> apply_adjoint).
class CoeffMatrix {
public:
    CoeffMatrix(HSMatrix coeffs, double kernel_l2_sq)
        : c_(std::move(coeffs)), kernel_l2_sq_(kernel_l2_sq) {
        // Bessel at truncation: the coefficient mass cannot exceed the
        // kernel's L2 mass (up to quadrature noise).
        const double tol = 1e-8 * std::max(1.0, kernel_l2_sq_);
        if (c_.hs_norm_sq() > kernel_l2_sq_ + tol)
            throw std::invalid_argument("CoeffMatrix: coefficient mass " + std::to_string(c_.hs_norm_sq()) +
                                        " exceeds kernel L2 mass " + std::to_string(kernel_l2_sq_) +
                                        " (Bessel violation; check basis orthonormality)");
    }

    std::size_t basis_size() const { return c_.dim(); }
    const HSMatrix& mat() const { return c_; }
    double kernel_l2_sq() const { return kernel_l2_sq_; }

private:
    HSMatrix c_;
    double kernel_l2_sq_;
};

// Tensor-product quadrature of the coefficient integrals. Deterministic for
// fixed inputs: cells are filled in a fixed order with a fixed summation
// order. The basis must pass its Gram check under `quad` (hard error).
inline CoeffMatrix compute_coeffs(const Kernel& k, const OrthoBasis& basis,
                                  const QuadratureRule& quad) {
    validate_orthonormal(basis, quad);
    const std::size_t q = quad.nodes.size();
    const std::size_t m = static_cast<std::size_t>(basis.count());

    std::vector<double> kv(q * q);
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b) {
            const double v = k.eval(quad.nodes[a], quad.nodes[b]);
            if (!std::isfinite(v))
                throw non_finite_error("compute_coeffs: kernel '" + k.label + "' is non-finite at node (s=" +
                                       std::to_string(quad.nodes[a]) + ", t=" +
                                       std::to_string(quad.nodes[b]) + ")");
            kv[a * q + b] = v;
        }

    std::vector<double> tab(m * q); // w_n phi_i(s_n)
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t n = 0; n < q; ++n)
            tab[i * q + n] = quad.weights[n] * basis.eval(static_cast<int>(i) + 1, quad.nodes[n]);

    // B[i][b] = sum_a tab[i][a] k(s_a, t_b), then c_ij = sum_b B[i][b] tab[j][b]
    std::vector<double> B(m * q);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t b = 0; b < q; ++b) {
            detail::CompensatedSum s;
            for (std::size_t a = 0; a < q; ++a)
                s.add(tab[i * q + a] * kv[a * q + b]);
            B[i * q + b] = s.value();
        }
    std::vector<double> c(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            detail::CompensatedSum s;
            for (std::size_t b = 0; b < q; ++b)
                s.add(B[i * q + b] * tab[j * q + b]);
            c[i * m + j] = s.value();
        }

    detail::CompensatedSum l2;
    for (std::size_t a = 0; a < q; ++a)
        for (std::size_t b = 0; b < q; ++b)
            l2.add(quad.weights[a] * quad.weights[b] * kv[a * q + b] * kv[a * q + b]);

    return CoeffMatrix(HSMatrix(m, std::move(c)), l2.value());
}

// Nystrom evaluation of (T f)(s_m) = sum_n w_n k(s_m, t_n) f(t_n).
inline std::vector<double> apply_direct(const Kernel& k, const std::vector<double>& f_samples,
                                        const QuadratureRule& quad) {
    const std::size_t q = quad.nodes.size();
    if (f_samples.size() != q)
        throw std::invalid_argument("apply_direct: sample count does not match quadrature");
    for (std::size_t n = 0; n < q; ++n)
        if (!std::isfinite(f_samples[n]))
            throw non_finite_error("apply_direct: non-finite input sample at node " + std::to_string(n + 1));
    std::vector<double> out(q);
    for (std::size_t mnode = 0; mnode < q; ++mnode) {
        detail::CompensatedSum s;
        for (std::size_t n = 0; n < q; ++n) {
            const double v = k.eval(quad.nodes[mnode], quad.nodes[n]);
            if (!std::isfinite(v))
                throw non_finite_error("apply_direct: kernel '" + k.label + "' is non-finite at node (s=" +
                                       std::to_string(quad.nodes[mnode]) + ", t=" +
                                       std::to_string(quad.nodes[n]) + ")");
            s.add(quad.weights[n] * v * f_samples[n]);
        }
        out[mnode] = s.value();
    }
    return out;
}

// (T f)_i = sum_j c_ij f_j
inline L2Vec apply_spectral(const CoeffMatrix& c, const L2Vec& f_coeffs) {
    if (f_coeffs.dim() != c.basis_size())
        throw std::invalid_argument("apply_spectral: dimension mismatch (vector " +
                                    std::to_string(f_coeffs.dim()) + " vs coefficients " +
                                    std::to_string(c.basis_size()) + ")");
    return c.mat().apply_adjoint(f_coeffs); // crossed convention, see CoeffMatrix
}

// (T* g)_j = sum_i c_ij g_i; satisfies <T f, g> = <f, T* g> as a finite-sum
// identity.
inline L2Vec apply_spectral_adjoint(const CoeffMatrix& c, const L2Vec& g_coeffs) {
    if (g_coeffs.dim() != c.basis_size())
        throw std::invalid_argument("apply_spectral_adjoint: dimension mismatch (vector " +
                                    std::to_string(g_coeffs.dim()) + " vs coefficients " +
                                    std::to_string(c.basis_size()) + ")");
    return c.mat().apply(g_coeffs);
}

// sqrt of the tensor-product quadrature of k^2; the HS norm of the operator
// equals the L2 norm of its kernel.
inline double hs_norm_from_kernel(const Kernel& k, const QuadratureRule& quad) {
    detail::CompensatedSum s;
    for (std::size_t a = 0; a < quad.nodes.size(); ++a)
        for (std::size_t b = 0; b < quad.nodes.size(); ++b) {
            const double v = k.eval(quad.nodes[a], quad.nodes[b]);
            if (!std::isfinite(v))
                throw non_finite_error("hs_norm_from_kernel: kernel '" + k.label +
                                       "' is non-finite at node (s=" + std::to_string(quad.nodes[a]) +
                                       ", t=" + std::to_string(quad.nodes[b]) + ")");
            s.add(quad.weights[a] * quad.weights[b] * v * v);
        }
    return std::sqrt(s.value());
}

// Rank-one fast path for separable kernels k(s,t) = phi(s) psi(t):
// T f = <f, psi> phi, sampled at the quadrature nodes.
template <class Phi, class Psi>
std::vector<double> apply_separable(Phi&& phi, Psi&& psi, const std::vector<double>& f_samples,
                                    const QuadratureRule& quad) {
    const std::size_t q = quad.nodes.size();
    if (f_samples.size() != q)
        throw std::invalid_argument("apply_separable: sample count does not match quadrature");
    detail::CompensatedSum ip;
    for (std::size_t n = 0; n < q; ++n) {
        const double pv = psi(quad.nodes[n]);
        if (!std::isfinite(pv) || !std::isfinite(f_samples[n]))
            throw non_finite_error("apply_separable: non-finite value at node " + std::to_string(n + 1));
        ip.add(quad.weights[n] * pv * f_samples[n]);
    }
    const double c = ip.value();
    std::vector<double> out(q);
    for (std::size_t mnode = 0; mnode < q; ++mnode) {
        const double v = phi(quad.nodes[mnode]);
        if (!std::isfinite(v))
            throw non_finite_error("apply_separable: non-finite value at node " + std::to_string(mnode + 1));
        out[mnode] = c * v;
    }
    return out;
}

// Adjoint counterpart: T* g = <g, phi> psi.
template <class Phi, class Psi>
std::vector<double> apply_separable_adjoint(Phi&& phi, Psi&& psi, const std::vector<double>& g_samples,
                                            const QuadratureRule& quad) {
    return apply_separable(psi, phi, g_samples, quad);
}

// m -> sqrt(sum_j c_mj^2): the decay-with-truncation sequence of the
// spectral matrix. Its vanishing tail is the covering-decay evidence for
// integral operators.
inline std::vector<double> row_tail_norms(const CoeffMatrix& c) { return c.mat().row_tail_norms(); }

} // namespace hscov

#endif

#ifndef HSCOV_JACOBI_EIGEN_HPP
#define HSCOV_JACOBI_EIGEN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace hscov {

// Eigen decomposition of a symmetric matrix, values ascending; column k of
// `vectors` (stored row-major) is the unit eigenvector for values[k].
struct EigenSystem {
    std::vector<double> values;
    std::vector<double> vectors;
    std::size_t n = 0;

    std::vector<double> eigenvector(std::size_t k) const {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = vectors[i * n + k];
        return v;
    }
};

// Cyclic Jacobi sweeps; stops when the off-diagonal Frobenius norm drops to
// `off_tol`. Simple, dependency-free, and adequate at the dimensions this
// library targets (N <= 256).
inline EigenSystem jacobi_eigensystem(const std::vector<double>& sym, std::size_t n,
                                      double off_tol = 1e-12, int max_sweeps = 64) {
    if (n == 0 || sym.size() != n * n)
        throw std::invalid_argument("jacobi_eigensystem: bad matrix size");
    std::vector<double> a = sym;
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        v[i * n + i] = 1.0;

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (p != q)
                    s += a[p * n + q] * a[p * n + q];
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps && off_norm() > off_tol; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (apq == 0.0)
                    continue;
                const double app = a[p * n + p], aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J with the rotation in the (p,q) plane
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p], akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k], aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p], vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x * n + x] < a[y * n + y]; });

    EigenSystem es;
    es.n = n;
    es.values.resize(n);
    es.vectors.resize(n * n);
    for (std::size_t k = 0; k < n; ++k) {
        es.values[k] = a[order[k] * n + order[k]];
        // sign convention: first component of largest magnitude is positive
        std::size_t lead = 0;
        double best = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double mag = std::abs(v[i * n + order[k]]);
            if (mag > best) {
                best = mag;
                lead = i;
            }
        }
        const double sign = (v[lead * n + order[k]] >= 0.0) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < n; ++i)
            es.vectors[i * n + k] = sign * v[i * n + order[k]];
    }
    return es;
}

} // namespace hscov

#endif

#ifndef HSCOV_QUADRATURE_HPP
#define HSCOV_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "hscov/detail/accum.hpp"

namespace hscov {

// Quadrature nodes/weights on the open interval (0,1). Weights sum to 1
// (the rule integrates the constant 1 exactly); nodes are strictly
// increasing and strictly interior.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int order = 0;

    void validate() const {
        if (nodes.empty() || nodes.size() != weights.size())
            throw std::invalid_argument("QuadratureRule: node/weight size mismatch");
        detail::CompensatedSum s;
        double prev = 0.0;
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            if (!(nodes[m] > prev && nodes[m] < 1.0))
                throw std::invalid_argument("QuadratureRule: nodes must be strictly increasing inside (0,1)");
            if (!(weights[m] > 0.0))
                throw std::invalid_argument("QuadratureRule: weights must be positive");
            prev = nodes[m];
            s.add(weights[m]);
        }
        if (std::abs(s.value() - 1.0) > 1e-12)
            throw std::invalid_argument("QuadratureRule: weights sum to " + std::to_string(s.value()) +
                                        ", expected 1");
    }

    template <class F>
    double integrate(F&& f) const {
        detail::CompensatedSum s;
        for (std::size_t m = 0; m < nodes.size(); ++m)
            s.add(weights[m] * f(nodes[m]));
        return s.value();
    }

    // inner product of two node-sample arrays under the rule
    double inner_samples(const std::vector<double>& f, const std::vector<double>& g) const {
        if (f.size() != nodes.size() || g.size() != nodes.size())
            throw std::invalid_argument("QuadratureRule::inner_samples: sample size mismatch");
        detail::CompensatedSum s;
        for (std::size_t m = 0; m < nodes.size(); ++m)
            s.add(weights[m] * f[m] * g[m]);
        return s.value();
    }
};

// Gauss-Legendre rule mapped from (-1,1) to (0,1). Nodes by Newton iteration
// on the three-term recurrence; symmetric counterparts copied to keep the
// rule exactly symmetric about 1/2.
inline QuadratureRule gauss_legendre(int order) {
    if (order < 1)
        throw std::invalid_argument("gauss_legendre: order must be >= 1");
    const std::size_t n = static_cast<std::size_t>(order);
    std::vector<double> x(n), w(n);
    const std::size_t half = (n + 1) / 2;
    for (std::size_t k = 0; k < half; ++k) {
        // initial guess (Chebyshev-like), then Newton on P_n
        double t = std::cos(3.14159265358979323846 * (static_cast<double>(k) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            if (n == 1) { p1 = t; }
            for (std::size_t j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * static_cast<double>(j) - 1.0) * t * p1 -
                                   (static_cast<double>(j) - 1.0) * p0) / static_cast<double>(j);
                p0 = p1;
                p1 = p2;
            }
            double pn = (n == 1) ? t : p1;
            double pn1 = (n == 1) ? 1.0 : p0;
            dp = static_cast<double>(n) * (pn1 - t * pn) / (1.0 - t * t);
            const double dt = pn / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15)
                break;
        }
        x[k] = -t; // ascending order on (-1,1)
        w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
        x[n - 1 - k] = t;
        w[n - 1 - k] = w[k];
    }
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        rule.nodes[m] = 0.5 * (x[m] + 1.0);
        rule.weights[m] = 0.5 * w[m];
    }
    rule.validate();
    return rule;
}

} // namespace hscov

#endif

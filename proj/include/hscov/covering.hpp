#ifndef HSCOV_COVERING_HPP
#define HSCOV_COVERING_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hscov/detail/accum.hpp"
#include "hscov/gendiff.hpp"
#include "hscov/hs_matrix.hpp"
#include "hscov/jacobi_eigen.hpp"
#include "hscov/l2.hpp"

namespace hscov {

// Covering-constant estimate: the sup over neighborhood radii eta of the
// infimum of coderivative-output norms over unit directions. `witness` is a
// unit direction achieving the reported infimum.
struct CoveringEstimate {
    double value = 0.0;
    std::string method; // singular-value | basis-bound | sampled
    std::vector<double> eta_schedule;
    std::vector<double> eta_infima; // per-eta infimum, same order as the schedule
    double achieving_eta = 0.0;
    long samples = 0;
    L2Vec witness = L2Vec::zero(1);
    long rejected_singular_points = 0;
};

inline std::vector<double> default_eta_schedule() { return {1.0, 0.5, 0.25, 0.125, 0.0625}; }

// For a linear operator the coderivative is w -> T* w independent of the
// base point, so the sup-inf collapses to the smallest singular value:
// inf over unit w of ||T* w|| = sqrt(lambda_min(A^T A)). The Gram matrix of
// the adjoint action is used so that the witness eigenvector actually
// achieves the reported infimum.
inline CoveringEstimate covering_linear(const HSMatrix& t) {
    const std::size_t n = t.dim();
    std::vector<double> gram(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j; k < n; ++k) {
            detail::CompensatedSum s;
            for (std::size_t i = 0; i < n; ++i)
                s.add(t.entry(i, j) * t.entry(i, k));
            gram[j * n + k] = s.value();
            gram[k * n + j] = s.value();
        }
    const EigenSystem es = jacobi_eigensystem(gram, n);
    CoveringEstimate ce;
    ce.method = "singular-value";
    ce.value = std::sqrt(std::max(es.values[0], 0.0));
    ce.witness = L2Vec(es.eigenvector(0));
    const double nw = norm(ce.witness);
    if (nw > 0.0)
        ce.witness = (1.0 / nw) * ce.witness;
    // eta-independent for linear maps: one pass, schedule collapsed
    ce.eta_schedule = {1.0};
    ce.eta_infima = {ce.value};
    ce.achieving_eta = 1.0;
    ce.samples = 0;
    return ce;
}

// Restricting the unit directions to basis vectors gives the upper bound
// min_k ||T* e_k|| = min_k sqrt(sum_i a_ik^2); a restriction of the infimum
// can only increase it, so this always dominates covering_linear.
inline CoveringEstimate covering_basis_bound(const HSMatrix& t) {
    const std::vector<double> tails = t.column_tail_norms();
    std::size_t best = 0;
    for (std::size_t k = 1; k < tails.size(); ++k)
        if (tails[k] < tails[best])
            best = k;
    CoveringEstimate ce;
    ce.method = "basis-bound";
    ce.value = tails[best];
    ce.witness = L2Vec::basis(best + 1, t.dim());
    ce.eta_schedule = {1.0};
    ce.eta_infima = {ce.value};
    ce.achieving_eta = 1.0;
    ce.samples = static_cast<long>(tails.size());
    return ce;
}

// Direct sampling of the sup-inf: for each eta (descending), sample base
// points x in B(x_bar, eta) with op(x) in B(op(x_bar), eta), and unit
// directions w; take the infimum of ||coderivative(x)(w)|| and then the sup
// over the schedule. Deterministic coverage: every basis direction e_k is
// always among the w candidates (they carry the zero-covering certificates),
// and for linear kinds the smallest-singular-vector witness is added so the
// sampled value agrees with covering_linear instead of hovering above it.
// Quasi base points on the singular set are rejected and counted.
inline CoveringEstimate covering_sampled(const OperatorHandle& op, const L2Vec& x_bar,
                                         std::vector<double> eta_schedule,
                                         std::size_t samples_per_eta, std::uint64_t seed) {
    if (x_bar.dim() != op.dim())
        throw std::invalid_argument("covering_sampled: x_bar dimension mismatch");
    if (eta_schedule.empty())
        eta_schedule = default_eta_schedule();
    for (double e : eta_schedule)
        if (!(e > 0.0))
            throw std::invalid_argument("covering_sampled: eta values must be positive");
    if (samples_per_eta == 0)
        throw std::invalid_argument("covering_sampled: samples_per_eta must be >= 1");
    std::sort(eta_schedule.begin(), eta_schedule.end(), std::greater<double>());

    const std::size_t dim = op.dim();
    detail::Rng rng(seed);
    CoveringEstimate ce;
    ce.method = "sampled";
    ce.eta_schedule = eta_schedule;

    // direction candidates, identical across the schedule
    std::vector<L2Vec> dirs;
    for (std::size_t k = 1; k <= dim; ++k)
        dirs.push_back(L2Vec::basis(k, dim));
    if (const HSMatrix* a = op.linear_matrix()) {
        CoveringEstimate lin = covering_linear(*a);
        if (norm(lin.witness) > 0.0)
            dirs.push_back(lin.witness);
    }
    for (std::size_t s = 0; s < samples_per_eta; ++s) {
        L2Vec w = L2Vec::zero(dim);
        double nw = 0.0;
        while (nw == 0.0) {
            for (std::size_t i = 0; i < dim; ++i)
                w[i] = rng.normal();
            nw = norm(w);
        }
        dirs.push_back((1.0 / nw) * w);
    }

    const L2Vec y_bar = op.apply(x_bar);
    long evals = 0;
    bool have_value = false;

    for (double eta : eta_schedule) {
        // admissible base points
        std::vector<L2Vec> xs;
        if (!op.is_linear()) {
            if (quasi_differentiable_at(x_bar))
                xs.push_back(x_bar);
            else
                ++ce.rejected_singular_points;
            std::size_t attempts = 0;
            const std::size_t max_attempts = 200 * samples_per_eta + 200;
            while (xs.size() < 1 + samples_per_eta && attempts < max_attempts) {
                ++attempts;
                L2Vec d = L2Vec::zero(dim);
                double nd = 0.0;
                while (nd == 0.0) {
                    for (std::size_t i = 0; i < dim; ++i)
                        d[i] = rng.normal();
                    nd = norm(d);
                }
                const double radius = eta * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim));
                const L2Vec x = x_bar + (radius / nd) * d;
                if (!quasi_differentiable_at(x)) {
                    ++ce.rejected_singular_points;
                    continue;
                }
                if (norm(op.apply(x) - y_bar) <= eta)
                    xs.push_back(x);
            }
            if (xs.empty())
                throw std::runtime_error("covering_sampled: no admissible base point found for eta = " +
                                         std::to_string(eta));
        } else {
            // coderivative is base-point independent: one pass at x_bar
            xs.push_back(x_bar);
        }

        double inf_eta = 0.0;
        bool have_inf = false;
        L2Vec inf_witness = L2Vec::zero(dim);
        for (const L2Vec& x : xs)
            for (const L2Vec& w : dirs) {
                const double v = norm(op.coderivative_apply(x, w));
                ++evals;
                if (!have_inf || v < inf_eta) {
                    have_inf = true;
                    inf_eta = v;
                    inf_witness = w;
                }
            }
        ce.eta_infima.push_back(inf_eta);
        if (!have_value || inf_eta > ce.value) {
            have_value = true;
            ce.value = inf_eta;
            ce.witness = inf_witness;
            ce.achieving_eta = eta;
        }
    }
    ce.samples = evals;
    return ce;
}

struct DecayRow {
    std::size_t n;
    double sigma_min;
    double basis_bound;
};

// Decay-with-truncation table: per N, the smallest singular value and the
// basis-direction bound. For square-summable generators both tend to zero as
// the truncation grows; the identity generator is the contrast case
// (constant 1, not square-summable in the limit).
template <class F>
std::vector<DecayRow> decay_report(F&& generator, const std::vector<std::size_t>& dims) {
    if (dims.empty())
        throw std::invalid_argument("decay_report: dims must be nonempty");
    for (std::size_t i = 1; i < dims.size(); ++i)
        if (dims[i] <= dims[i - 1])
            throw std::invalid_argument("decay_report: dims must be strictly ascending");
    std::vector<DecayRow> rows;
    rows.reserve(dims.size());
    for (std::size_t n : dims) {
        const HSMatrix a = HSMatrix::from_generator(generator, n);
        rows.push_back({n, covering_linear(a).value, covering_basis_bound(a).value});
    }
    return rows;
}

struct CoveringCheckResult {
    bool covered = true;
    std::optional<L2Vec> counterexample;
    double worst_residual = 0.0;
    long targets_checked = 0;
};

namespace detail_covering {

// deterministic unit directions for the target sphere
inline std::vector<L2Vec> sphere_directions(std::size_t dim) {
    std::vector<L2Vec> out;
    if (dim == 1) {
        L2Vec p = L2Vec::zero(1);
        p[0] = 1.0;
        out.push_back(p);
        p[0] = -1.0;
        out.push_back(p);
    } else if (dim == 2) {
        // 0.7 degree spacing: fine enough that the uncovered cap of any
        // ellipse with aspect ratio up to ~30 contains a grid point
        const int k = 512;
        for (int a = 0; a < k; ++a) {
            const double th = 2.0 * 3.14159265358979323846 * static_cast<double>(a) / k;
            L2Vec p = L2Vec::zero(2);
            p[0] = std::cos(th);
            p[1] = std::sin(th);
            out.push_back(p);
        }
    } else {
        // Fibonacci sphere
        const int k = 192;
        const double golden = 3.14159265358979323846 * (3.0 - std::sqrt(5.0));
        for (int a = 0; a < k; ++a) {
            const double z = 1.0 - 2.0 * (static_cast<double>(a) + 0.5) / k;
            const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double th = golden * static_cast<double>(a);
            L2Vec p = L2Vec::zero(3);
            p[0] = rad * std::cos(th);
            p[1] = rad * std::sin(th);
            p[2] = z;
            out.push_back(p);
        }
    }
    return out;
}

// compass search for min ||op(x) - y|| over the closed ball B(x0, r)
inline double refine_preimage(const OperatorHandle& op, const L2Vec& x0, double r, const L2Vec& y,
                              L2Vec x, double fx) {
    const std::size_t dim = x.dim();
    auto eval = [&](const L2Vec& p) { return norm(op.apply(p) - y); };
    double step = r * 0.5;
    while (step > 1e-11) {
        bool improved = false;
        for (std::size_t i = 0; i < dim; ++i)
            for (double sgn : {1.0, -1.0}) {
                L2Vec cand = x;
                cand[i] += sgn * step;
                const double d0 = norm(cand - x0);
                if (d0 > r)
                    cand = x0 + (r / d0) * (cand - x0);
                const double fc = eval(cand);
                if (fc < fx) {
                    fx = fc;
                    x = cand;
                    improved = true;
                }
            }
        if (!improved)
            step *= 0.5;
    }
    return fx;
}

} // namespace detail_covering

// Brute-force check of the covering inclusion B(op(x0), alpha*r) inside
// op(B(x0, r)) at tiny dimension: every sampled target must admit a preimage
// within residual 1e-6. This is an oracle for validating covering-constant
// estimates on toys, not an estimator; the preimage search cost explodes
// with dimension, hence the dim <= 3 cap.
inline CoveringCheckResult empirical_covering_check(const OperatorHandle& op, const L2Vec& x0,
                                                    double alpha, double r,
                                                    std::size_t target_samples,
                                                    std::size_t preimage_samples,
                                                    std::uint64_t seed) {
    const std::size_t dim = op.dim();
    if (dim > 3)
        throw std::invalid_argument("empirical_covering_check: brute-force oracle is capped at dim <= 3");
    if (!(alpha > 0.0) || !(r > 0.0))
        throw std::invalid_argument("empirical_covering_check: alpha and r must be positive");
    if (x0.dim() != dim)
        throw std::invalid_argument("empirical_covering_check: x0 dimension mismatch");

    detail::Rng rng(seed);
    const L2Vec y0 = op.apply(x0);

    std::vector<L2Vec> targets;
    for (const L2Vec& d : detail_covering::sphere_directions(dim))
        targets.push_back(y0 + (alpha * r) * d);
    for (std::size_t s = 0; s < target_samples; ++s) {
        L2Vec d = L2Vec::zero(dim);
        double nd = 0.0;
        while (nd == 0.0) {
            for (std::size_t i = 0; i < dim; ++i)
                d[i] = rng.normal();
            nd = norm(d);
        }
        const double radius = alpha * r * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim));
        targets.push_back(y0 + (radius / nd) * d);
    }

    CoveringCheckResult res;
    for (const L2Vec& y : targets) {
        ++res.targets_checked;
        L2Vec best = x0;
        double fb = norm(op.apply(best) - y);
        for (std::size_t s = 0; s < preimage_samples; ++s) {
            L2Vec d = L2Vec::zero(dim);
            double nd = 0.0;
            while (nd == 0.0) {
                for (std::size_t i = 0; i < dim; ++i)
                    d[i] = rng.normal();
                nd = norm(d);
            }
            const double radius = r * std::pow(rng.uniform01(), 1.0 / static_cast<double>(dim));
            const L2Vec cand = x0 + (radius / nd) * d;
            const double fc = norm(op.apply(cand) - y);
            if (fc < fb) {
                fb = fc;
                best = cand;
            }
        }
        fb = detail_covering::refine_preimage(op, x0, r, y, best, fb);
        res.worst_residual = std::max(res.worst_residual, fb);
        if (fb > 1e-6 && res.covered) {
            res.covered = false;
            res.counterexample = y;
        }
    }
    return res;
}

} // namespace hscov

#endif

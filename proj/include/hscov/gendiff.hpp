#ifndef HSCOV_GENDIFF_HPP
#define HSCOV_GENDIFF_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hscov/detail/accum.hpp"
#include "hscov/errors.hpp"
#include "hscov/hs_matrix.hpp"
#include "hscov/integral_op.hpp"
#include "hscov/l2.hpp"
#include "hscov/quasi_op.hpp"

namespace hscov {

// Uniform dispatch over the three operator families: the matrix operator
// (sc(x) A), the spectral integral operator (C f), and the quasi operator.
// The first two are linear, Frechet differentiable everywhere, with
// z-independent derivative and coderivative; the quasi operator is
// differentiable exactly off the set <z,e1> = <z,e2> = 0.
class OperatorHandle {
public:
    enum class Kind { matrix, integral_spectral, quasi };

    struct QuasiTag {
        std::size_t dim;
    };

    static OperatorHandle matrix(HSMatrix m) { return OperatorHandle(std::move(m)); }
    static OperatorHandle integral(CoeffMatrix c) { return OperatorHandle(std::move(c)); }
    static OperatorHandle quasi(std::size_t dim) {
        if (dim < 2)
            throw std::invalid_argument("OperatorHandle::quasi: dimension must be >= 2");
        return OperatorHandle(QuasiTag{dim});
    }

    Kind kind() const { return static_cast<Kind>(v_.index()); }

    std::string kind_name() const {
        switch (kind()) {
        case Kind::matrix: return "matrix";
        case Kind::integral_spectral: return "integral-spectral";
        default: return "quasi";
        }
    }

    std::size_t dim() const {
        switch (kind()) {
        case Kind::matrix: return std::get<HSMatrix>(v_).dim();
        case Kind::integral_spectral: return std::get<CoeffMatrix>(v_).basis_size();
        default: return std::get<QuasiTag>(v_).dim;
        }
    }

    bool is_linear() const { return kind() != Kind::quasi; }

    L2Vec apply(const L2Vec& x) const {
        switch (kind()) {
        case Kind::matrix: return std::get<HSMatrix>(v_).apply(x);
        case Kind::integral_spectral: return apply_spectral(std::get<CoeffMatrix>(v_), x);
        default: return apply_quasi(check_quasi_dim(x));
        }
    }

    bool differentiable_at(const L2Vec& z) const {
        return is_linear() || quasi_differentiable_at(z);
    }

    // The derivative applied to x: the operator itself for the linear kinds,
    // sc(x) D(z) for the quasi operator.
    L2Vec frechet_apply(const L2Vec& z, const L2Vec& x) const {
        switch (kind()) {
        case Kind::matrix: return std::get<HSMatrix>(v_).apply(x);
        case Kind::integral_spectral: return apply_spectral(std::get<CoeffMatrix>(v_), x);
        default: return apply_frechet(check_quasi_dim(z), check_quasi_dim(x));
        }
    }

    // The adjoint of the derivative applied to y.
    L2Vec coderivative_apply(const L2Vec& z, const L2Vec& y) const {
        switch (kind()) {
        case Kind::matrix: return std::get<HSMatrix>(v_).apply_adjoint(y);
        case Kind::integral_spectral: return apply_spectral_adjoint(std::get<CoeffMatrix>(v_), y);
        default: return apply_coderivative(check_quasi_dim(z), check_quasi_dim(y));
        }
    }

    // Underlying matrix of the linear kinds (A, or the coefficient matrix C);
    // null for the quasi operator.
    const HSMatrix* linear_matrix() const {
        switch (kind()) {
        case Kind::matrix: return &std::get<HSMatrix>(v_);
        case Kind::integral_spectral: return &std::get<CoeffMatrix>(v_).mat();
        default: return nullptr;
        }
    }

private:
    explicit OperatorHandle(HSMatrix m) : v_(std::move(m)) {}
    explicit OperatorHandle(CoeffMatrix c) : v_(std::move(c)) {}
    explicit OperatorHandle(QuasiTag q) : v_(q) {}

    const L2Vec& check_quasi_dim(const L2Vec& x) const {
        if (x.dim() != std::get<QuasiTag>(v_).dim)
            throw std::invalid_argument("OperatorHandle(quasi): dimension mismatch (vector " +
                                        std::to_string(x.dim()) + " vs operator " +
                                        std::to_string(std::get<QuasiTag>(v_).dim) + ")");
        return x;
    }

    std::variant<HSMatrix, CoeffMatrix, QuasiTag> v_;
};

// Coderivative through the adjoint of the Frechet derivative. For the quasi
// operator on its singular set there is no derivative to adjoin; membership
// questions there belong to probe_membership.
inline L2Vec coderivative_via_adjoint(const OperatorHandle& op, const L2Vec& z, const L2Vec& y) {
    if (!op.differentiable_at(z))
        throw not_differentiable("coderivative_via_adjoint: operator is not Frechet differentiable at z "
                                 "(<z,e1> = <z,e2> = 0); use probe_membership for set-valued queries");
    return op.coderivative_apply(z, y);
}

// Central-difference check of the claimed derivative along seeded random unit
// directions; returns the maximum of ||fd - claimed|| / max(1, ||claimed||).
inline double frechet_fd_check(const OperatorHandle& op, const L2Vec& z, std::size_t directions,
                               double h, std::uint64_t seed) {
    if (directions == 0)
        throw std::invalid_argument("frechet_fd_check: directions must be >= 1");
    if (!(h > 0.0))
        throw std::invalid_argument("frechet_fd_check: step must be positive");
    detail::Rng rng(seed);
    double worst = 0.0;
    for (std::size_t d = 0; d < directions; ++d) {
        L2Vec v = L2Vec::zero(z.dim());
        double nv = 0.0;
        while (nv == 0.0) {
            for (std::size_t i = 0; i < v.dim(); ++i)
                v[i] = rng.normal();
            nv = norm(v);
        }
        v = (1.0 / nv) * v;
        const L2Vec fd = (1.0 / (2.0 * h)) * (op.apply(z + h * v) - op.apply(z - h * v));
        const L2Vec claimed = op.frechet_apply(z, v);
        worst = std::max(worst, norm(fd - claimed) / std::max(1.0, norm(claimed)));
    }
    return worst;
}

// One evaluation of the membership quotient
//
//     ( <x_cand, u - z> - <y, op(u) - op(z)> ) / ( ||u - z|| + ||op(u) - op(z)|| )
//
// whose limsup over u -> z decides whether x_cand can belong to the
// set-valued coderivative of op at z in direction y (nonpositive limsup over
// every approaching sequence is required for membership).
inline double limsup_quotient(const OperatorHandle& op, const L2Vec& z, const L2Vec& x_cand,
                              const L2Vec& y, const L2Vec& u) {
    const L2Vec du = u - z;
    const double ndu = norm(du);
    if (ndu == 0.0)
        throw std::invalid_argument("limsup_quotient: u must differ from z");
    const L2Vec dg = op.apply(u) - op.apply(z);
    const double numer = inner(x_cand, du) - inner(y, dg);
    return numer / (ndu + norm(dg));
}

// Families of points u_n -> z, u_n != z, along which the quotient is
// evaluated. The geometric step schedule (start * ratio^n) resolves the
// limit to roughly 1e-7 scale before rounding takes over.
struct PathFamily {
    enum class Kind { axis, diagonal, tail, custom };

    Kind kind = Kind::axis;
    int steps = 24;
    double start = 1e-1;
    double ratio = 0.5;
    std::vector<double> direction; // tail only
    std::vector<L2Vec> points;     // custom only

    static PathFamily axis(int steps = 24, double start = 1e-1, double ratio = 0.5) {
        PathFamily f;
        f.kind = Kind::axis;
        f.steps = steps;
        f.start = start;
        f.ratio = ratio;
        return f;
    }
    static PathFamily diagonal(int steps = 24, double start = 1e-1, double ratio = 0.5) {
        PathFamily f = axis(steps, start, ratio);
        f.kind = Kind::diagonal;
        return f;
    }
    static PathFamily tail(std::vector<double> direction, int steps = 24, double start = 1e-1,
                           double ratio = 0.5) {
        PathFamily f = axis(steps, start, ratio);
        f.kind = Kind::tail;
        f.direction = std::move(direction);
        return f;
    }
    static PathFamily custom(std::vector<L2Vec> points) {
        PathFamily f;
        f.kind = Kind::custom;
        f.points = std::move(points);
        return f;
    }

    std::string label() const {
        switch (kind) {
        case Kind::axis: return "axis";
        case Kind::diagonal: return "diagonal";
        case Kind::tail: return "tail";
        default: return "custom";
        }
    }

    std::vector<L2Vec> generate(const L2Vec& z) const {
        if (kind == Kind::custom) {
            if (points.size() < 8)
                throw std::invalid_argument("PathFamily(custom): needs at least 8 points");
            for (const L2Vec& u : points) {
                require_same_dim(u, z, "PathFamily(custom)");
                if (norm(u - z) == 0.0)
                    throw std::invalid_argument("PathFamily(custom): degenerate point equal to z");
            }
            return points;
        }
        if (steps < 8)
            throw std::invalid_argument("PathFamily: needs at least 8 steps");
        if (!(start > 0.0) || !(ratio > 0.0) || !(ratio < 1.0))
            throw std::invalid_argument("PathFamily: need start > 0 and 0 < ratio < 1");
        L2Vec dir = L2Vec::zero(z.dim());
        if (kind == Kind::axis) {
            dir[0] = 1.0;
        } else if (kind == Kind::diagonal) {
            dir[0] = 1.0;
            if (z.dim() < 2)
                throw std::invalid_argument("PathFamily(diagonal): dimension must be >= 2");
            dir[1] = 1.0;
        } else { // tail
            if (direction.size() != z.dim())
                throw std::invalid_argument("PathFamily(tail): direction dimension mismatch");
            double nd = 0.0;
            for (std::size_t i = 0; i < direction.size(); ++i) {
                dir[i] = direction[i];
                nd += direction[i] * direction[i];
            }
            if (nd == 0.0)
                throw std::invalid_argument("PathFamily(tail): direction must be nonzero");
        }
        std::vector<L2Vec> out;
        out.reserve(static_cast<std::size_t>(steps));
        double t = start;
        for (int k = 0; k < steps; ++k, t *= ratio) {
            L2Vec u = z + t * dir;
            if (norm(u - z) == 0.0)
                throw std::invalid_argument("PathFamily: step underflowed to a degenerate point; "
                                            "reduce steps or increase start");
            out.push_back(std::move(u));
        }
        return out;
    }
};

enum class ProbeVerdict { excluded, admitted, inconclusive };

inline std::string to_string(ProbeVerdict v) {
    switch (v) {
    case ProbeVerdict::excluded: return "excluded";
    case ProbeVerdict::admitted: return "admitted";
    default: return "inconclusive";
    }
}

struct ProbeRecord {
    std::string family;
    int step;
    L2Vec u;
    double quotient;
};

struct ProbeResult {
    std::vector<ProbeRecord> records;
    double sup_estimate = 0.0;
    ProbeVerdict verdict = ProbeVerdict::inconclusive;
    // replayable witness of the supremum (for `excluded`, a tail point whose
    // quotient exceeds the margin)
    L2Vec witness = L2Vec::zero(1);
    double witness_quotient = 0.0;
    std::string witness_family;
    int witness_step = 0;
};

// Evaluates the quotient along every family point. Verdicts:
//   excluded     - some family's tail (final quarter, at least 4 points)
//                  exceeds `margin`: x_cand is NOT in the coderivative set.
//   admitted     - every quotient is <= admit_tol. This is evidence, not
//                  proof: the true limsup ranges over all sequences, and a
//                  finite family sweep cannot certify membership.
//   inconclusive - everything in between.
inline ProbeResult probe_membership(const OperatorHandle& op, const L2Vec& z, const L2Vec& x_cand,
                                    const L2Vec& y, const std::vector<PathFamily>& families,
                                    double margin = 1e-3, double admit_tol = 1e-9) {
    if (families.empty())
        throw std::invalid_argument("probe_membership: at least one path family is required");
    ProbeResult res;
    bool excluded = false;
    bool all_small = true;
    bool have_sup = false;
    for (const PathFamily& fam : families) {
        const std::vector<L2Vec> us = fam.generate(z);
        const std::size_t tail_begin = us.size() - std::max<std::size_t>(4, us.size() / 4);
        for (std::size_t k = 0; k < us.size(); ++k) {
            const double qv = limsup_quotient(op, z, x_cand, y, us[k]);
            res.records.push_back({fam.label(), static_cast<int>(k), us[k], qv});
            if (!have_sup || qv > res.sup_estimate) {
                have_sup = true;
                res.sup_estimate = qv;
            }
            if (qv > admit_tol)
                all_small = false;
            if (k >= tail_begin && qv > margin && !excluded) {
                excluded = true;
                res.witness = us[k];
                res.witness_quotient = qv;
                res.witness_family = fam.label();
                res.witness_step = static_cast<int>(k);
            }
        }
    }
    if (excluded) {
        res.verdict = ProbeVerdict::excluded;
    } else {
        res.verdict = all_small ? ProbeVerdict::admitted : ProbeVerdict::inconclusive;
        // witness of the running supremum
        for (const ProbeRecord& r : res.records)
            if (r.quotient == res.sup_estimate) {
                res.witness = r.u;
                res.witness_quotient = r.quotient;
                res.witness_family = r.family;
                res.witness_step = r.step;
                break;
            }
    }
    return res;
}

// The six printed necessary conditions for (x1, x2) to belong to the
// coderivative set of the quasi operator at the singular set, direction
// (y1, y2). Evaluated verbatim; consequences are reported, not resolved.
struct FeasibilityResult {
    std::array<bool, 6> holds;
    bool all;
};

inline FeasibilityResult feasibility_check(double y1, double y2, double x1, double x2) {
    const double s2 = std::sqrt(2.0);
    FeasibilityResult r{};
    r.holds[0] = x1 <= y1;
    r.holds[1] = -x1 <= y1;
    r.holds[2] = x1 + x2 <= s2 * y2;
    r.holds[3] = -x1 - x2 <= s2 * y2;
    r.holds[4] = -x1 + x2 <= -s2 * y2;
    r.holds[5] = x1 - x2 <= -s2 * y2;
    r.all = true;
    for (bool b : r.holds)
        r.all = r.all && b;
    return r;
}

} // namespace hscov

#endif

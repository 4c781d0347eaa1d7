#include <catch2/catch_amalgamated.hpp>

#include "hscov/detail/accum.hpp"
#include "hscov/errors.hpp"
#include "hscov/hs_matrix.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

using hscov::HSMatrix;
using hscov::L2Vec;

namespace {

HSMatrix random_matrix(hscov::detail::Rng& rng, std::size_t n, double scale = 1.0) {
    std::vector<double> a(n * n);
    for (double& v : a)
        v = scale * rng.uniform(-1.0, 1.0);
    return HSMatrix(n, std::move(a));
}

L2Vec random_vec(hscov::detail::Rng& rng, std::size_t n) {
    L2Vec v = L2Vec::zero(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = rng.normal();
    return v;
}

} // namespace

TEST_CASE("apply follows the row-vector convention") {
    // a_12 = 1, everything else 0: e1 maps to e2
    const HSMatrix t(2, {0.0, 1.0, 0.0, 0.0});
    const L2Vec y = t.apply(L2Vec::basis(1, 2));
    CHECK(y[0] == 0.0);
    CHECK(y[1] == 1.0);
}

TEST_CASE("apply: zero and identity") {
    hscov::detail::Rng rng(11);
    const L2Vec x = random_vec(rng, 4);
    const L2Vec y = HSMatrix::zero(4).apply(x);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(y[i] == 0.0);

    const L2Vec v({1.0, 2.0, 3.0});
    const L2Vec w = HSMatrix::identity(3).apply(v);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == 2.0);
    CHECK(w[2] == 3.0);

    CHECK_THROWS_AS(HSMatrix::identity(3).apply(L2Vec::zero(2)), std::invalid_argument);
}

TEST_CASE("apply_adjoint is the transpose action") {
    const HSMatrix t(2, {0.0, 1.0, 0.0, 0.0});
    const L2Vec z = t.apply_adjoint(L2Vec::basis(2, 2));
    CHECK(z[0] == 1.0);
    CHECK(z[1] == 0.0);

    // symmetric matrix: adjoint application equals forward application
    hscov::detail::Rng rng(13);
    std::vector<double> a(9);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i; j < 3; ++j)
            a[i * 3 + j] = a[j * 3 + i] = rng.uniform(-1.0, 1.0);
    const HSMatrix sym(3, a);
    for (int rep = 0; rep < 20; ++rep) {
        const L2Vec y = random_vec(rng, 3);
        const L2Vec fwd = sym.apply(y);
        const L2Vec adj = sym.apply_adjoint(y);
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(fwd[i] == Catch::Approx(adj[i]).margin(1e-14));
    }
}

TEST_CASE("hs_norm: hand values and the basis-image identity") {
    CHECK(HSMatrix::diagonal({1.0, 0.5}).hs_norm() == Catch::Approx(std::sqrt(1.25)).epsilon(1e-15));
    CHECK(HSMatrix::identity(7).hs_norm() == Catch::Approx(std::sqrt(7.0)).epsilon(1e-15));
    CHECK(HSMatrix::zero(5).hs_norm() == 0.0);

    // sum_k ||T e_k||^2 equals the entry sum, and the entry sum equals
    // sum_ij <T e_i, e_j>^2 at truncation
    hscov::detail::Rng rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        const HSMatrix t = random_matrix(rng, 12);
        hscov::detail::CompensatedSum via_images;
        hscov::detail::CompensatedSum via_pairings;
        for (std::size_t k = 1; k <= 12; ++k) {
            const L2Vec te = t.apply(L2Vec::basis(k, 12));
            via_images.add(hscov::norm_sq(te));
            for (std::size_t j = 1; j <= 12; ++j) {
                const double p = hscov::inner(te, L2Vec::basis(j, 12));
                via_pairings.add(p * p);
            }
        }
        CHECK(via_images.value() == Catch::Approx(t.hs_norm_sq()).epsilon(1e-10));
        CHECK(via_pairings.value() == Catch::Approx(t.hs_norm_sq()).epsilon(1e-10));
    }
}

TEST_CASE("op_norm_estimate: diagonal, zero, identity") {
    CHECK(HSMatrix::diagonal({3.0, 1.0}).op_norm_estimate(200, 1) == Catch::Approx(3.0).margin(1e-8));
    CHECK(HSMatrix::zero(4).op_norm_estimate(50, 1) == 0.0);
    const double est = HSMatrix::identity(5).op_norm_estimate(200, 1);
    CHECK(est == Catch::Approx(1.0).margin(1e-8));
    CHECK(est <= std::sqrt(5.0));
}

TEST_CASE("op_norm_estimate: bounded by hs_norm, nondecreasing in iterations, seed-deterministic") {
    hscov::detail::Rng rng(23);
    for (int rep = 0; rep < 25; ++rep) {
        const HSMatrix t = random_matrix(rng, 10);
        const double hs = t.hs_norm();
        double prev = 0.0;
        for (std::size_t iters : {1u, 5u, 20u, 80u, 200u}) {
            const double est = t.op_norm_estimate(iters, 99);
            CHECK(est <= hs + 1e-8);
            CHECK(est >= prev - 1e-12);
            prev = est;
        }
        CHECK(t.op_norm_estimate(100, 5) == t.op_norm_estimate(100, 5));
    }
}

TEST_CASE("column_tail_norms: reciprocal-product closed form, identity, zero") {
    const HSMatrix t = HSMatrix::from_generator(
        [](std::size_t i, std::size_t j) { return 1.0 / (static_cast<double>(i) * static_cast<double>(j)); },
        4);
    const std::vector<double> tails = t.column_tail_norms();
    const double base = std::sqrt(1.0 + 0.25 + 1.0 / 9.0 + 1.0 / 16.0);
    for (std::size_t k = 1; k <= 4; ++k)
        CHECK(tails[k - 1] == Catch::Approx(base / static_cast<double>(k)).epsilon(1e-14));

    for (double v : HSMatrix::identity(6).column_tail_norms())
        CHECK(v == 1.0);
    for (double v : HSMatrix::zero(6).column_tail_norms())
        CHECK(v == 0.0);
}

TEST_CASE("from_generator: identity via delta, hand values, NaN rejection") {
    const HSMatrix id = HSMatrix::from_generator(
        [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; }, 3);
    CHECK(id.entry(0, 0) == 1.0);
    CHECK(id.entry(0, 1) == 0.0);

    const HSMatrix rp = HSMatrix::from_generator(
        [](std::size_t i, std::size_t j) { return 1.0 / (static_cast<double>(i) * static_cast<double>(j)); },
        2);
    CHECK(rp.entry(0, 0) == 1.0);
    CHECK(rp.entry(0, 1) == 0.5);
    CHECK(rp.entry(1, 0) == 0.5);
    CHECK(rp.entry(1, 1) == 0.25);

    CHECK_THROWS_AS(HSMatrix::from_generator(
                        [](std::size_t i, std::size_t j) {
                            return (i == 2 && j == 1) ? std::numeric_limits<double>::quiet_NaN() : 1.0;
                        },
                        3),
                    hscov::non_finite_error);
}

TEST_CASE("adjoint identity, contraction bound and linearity on random data") {
    hscov::detail::Rng rng(31);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform01() * 10.0);
        const HSMatrix t = random_matrix(rng, n);
        const L2Vec x = random_vec(rng, n);
        const L2Vec y = random_vec(rng, n);
        const double lhs = hscov::inner(t.apply(x), y);
        const double rhs = hscov::inner(x, t.apply_adjoint(y));
        CHECK(std::abs(lhs - rhs) <=
              1e-10 * hscov::norm(x) * hscov::norm(y) * (1.0 + t.hs_norm()));
        CHECK(hscov::norm(t.apply(x)) <= t.hs_norm() * hscov::norm(x) + 1e-12);
    }

    // linearity
    for (int rep = 0; rep < 50; ++rep) {
        const HSMatrix t = random_matrix(rng, 6);
        const L2Vec x = random_vec(rng, 6);
        const L2Vec y = random_vec(rng, 6);
        const double a = rng.uniform(-2.0, 2.0), b = rng.uniform(-2.0, 2.0);
        const L2Vec lhs = t.apply(a * x + b * y);
        const L2Vec rhs = a * t.apply(x) + b * t.apply(y);
        for (std::size_t i = 0; i < 6; ++i)
            CHECK(lhs[i] == Catch::Approx(rhs[i]).margin(1e-12));
    }
}

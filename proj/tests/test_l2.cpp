#include <catch2/catch_amalgamated.hpp>

#include "hscov/detail/accum.hpp"
#include "hscov/l2.hpp"

#include <cmath>
#include <stdexcept>

using hscov::L2Vec;

TEST_CASE("inner product: orthonormality and hand values") {
    const std::size_t dim = 5;
    CHECK(hscov::inner(L2Vec::basis(1, dim), L2Vec::basis(1, dim)) == 1.0);
    CHECK(hscov::inner(L2Vec::basis(1, dim), L2Vec::basis(2, dim)) == 0.0);
    CHECK(hscov::inner(L2Vec::basis(2, dim), L2Vec::basis(4, dim)) == 0.0);

    const L2Vec x({1.0, 2.0, 3.0});
    const L2Vec y({4.0, 5.0, 6.0});
    CHECK(hscov::inner(x, y) == 32.0);
    CHECK(hscov::inner(y, x) == 32.0);
}

TEST_CASE("inner product: dimension mismatch is a hard error") {
    const L2Vec x({1.0, 2.0});
    const L2Vec y({1.0, 2.0, 3.0});
    CHECK_THROWS_AS(hscov::inner(x, y), std::invalid_argument);
}

TEST_CASE("norm: Pythagorean, zero, basis") {
    CHECK(hscov::norm(L2Vec({3.0, 4.0})) == 5.0);
    CHECK(hscov::norm(L2Vec::zero(8)) == 0.0);
    for (std::size_t k = 1; k <= 6; ++k)
        CHECK(hscov::norm(L2Vec::basis(k, 6)) == 1.0);
}

TEST_CASE("basis_vector bounds") {
    const L2Vec e1 = L2Vec::basis(1, 3);
    CHECK(e1[0] == 1.0);
    CHECK(e1[1] == 0.0);
    CHECK(e1[2] == 0.0);
    const L2Vec e3 = L2Vec::basis(3, 3);
    CHECK(e3[2] == 1.0);
    CHECK_THROWS_AS(L2Vec::basis(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(L2Vec::basis(4, 3), std::invalid_argument);
}

TEST_CASE("embed pads and truncates; truncation never grows the norm") {
    const L2Vec x({1.0, 2.0});
    const L2Vec padded = hscov::embed(x, 4);
    REQUIRE(padded.dim() == 4);
    CHECK(padded[0] == 1.0);
    CHECK(padded[1] == 2.0);
    CHECK(padded[2] == 0.0);
    CHECK(padded[3] == 0.0);

    const L2Vec y({1.0, 2.0, 3.0});
    const L2Vec cut = hscov::embed(y, 2);
    REQUIRE(cut.dim() == 2);
    CHECK(cut[0] == 1.0);
    CHECK(cut[1] == 2.0);

    CHECK(hscov::norm(hscov::embed(L2Vec({3.0, 4.0}), 1)) == 3.0);

    hscov::detail::Rng rng(42);
    for (int rep = 0; rep < 200; ++rep) {
        L2Vec v = L2Vec::zero(7);
        for (std::size_t i = 0; i < 7; ++i)
            v[i] = rng.uniform(-2.0, 2.0);
        const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform01() * 6.0);
        CHECK(hscov::norm(hscov::embed(v, m)) <= hscov::norm(v) + 1e-15);
    }
}

TEST_CASE("Cauchy-Schwarz and parallelogram law on random pairs") {
    hscov::detail::Rng rng(7);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t dim = 1 + static_cast<std::size_t>(rng.uniform01() * 12.0);
        L2Vec x = L2Vec::zero(dim), y = L2Vec::zero(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        CHECK(std::abs(hscov::inner(x, y)) <= hscov::norm(x) * hscov::norm(y) + 1e-12);

        const double lhs = hscov::norm_sq(x + y) + hscov::norm_sq(x - y);
        const double rhs = 2.0 * hscov::norm_sq(x) + 2.0 * hscov::norm_sq(y);
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("constructor rejects empty coefficient lists") {
    CHECK_THROWS_AS(L2Vec(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(L2Vec::zero(0), std::invalid_argument);
}

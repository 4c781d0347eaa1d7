#include <catch2/catch_amalgamated.hpp>

#include "hscov/errors.hpp"
#include "hscov/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& contents) {
        static int counter = 0;
        path = "hscov_io_test_" + std::to_string(counter++) + ".tmp";
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {0.0, 1.0, -0.25, 1.0 / 3.0, std::sqrt(2.0), 1e-300, -1.7976931348623157e308}) {
        const std::string s = hscov::format_double(v);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("vector parsing: csv, zero sentinel, malformed input") {
    const hscov::L2Vec v = hscov::parse_vector("1, -2.5,3e-2", 0);
    REQUIRE(v.dim() == 3);
    CHECK(v[0] == 1.0);
    CHECK(v[1] == -2.5);
    CHECK(v[2] == 0.03);

    const hscov::L2Vec z = hscov::parse_vector("zero", 5);
    REQUIRE(z.dim() == 5);
    CHECK(hscov::norm(z) == 0.0);

    const hscov::L2Vec e3 = hscov::parse_vector("e3", 5);
    CHECK(e3[2] == 1.0);
    CHECK(hscov::norm(e3) == 1.0);
    CHECK_THROWS_AS(hscov::parse_vector("e9", 5), std::invalid_argument);

    const hscov::L2Vec padded = hscov::parse_vector_padded("1,2", 4);
    REQUIRE(padded.dim() == 4);
    CHECK(padded[3] == 0.0);
    CHECK_THROWS_AS(hscov::parse_vector_padded("1,2,3", 2), std::invalid_argument);

    TempFile vf("0.5,-1.5,2\n");
    const hscov::L2Vec from_file = hscov::parse_vector("file:" + vf.path, 0);
    REQUIRE(from_file.dim() == 3);
    CHECK(from_file[1] == -1.5);

    CHECK_THROWS_AS(hscov::parse_vector("zero", 0), std::invalid_argument);
    CHECK_THROWS_AS(hscov::parse_vector("1,two,3", 0), std::invalid_argument);
    CHECK_THROWS_AS(hscov::parse_vector("1,,3", 0), std::invalid_argument);
    CHECK_THROWS_AS(hscov::parse_vector("1,2,nan", 0), hscov::non_finite_error);

    CHECK(hscov::vector_to_csv(v) == "1,-2.5,0.029999999999999999");
}

TEST_CASE("matrix file round trip and malformed inputs") {
    const hscov::HSMatrix m(2, {1.0, 0.5, -0.25, 1.0 / 3.0});
    std::ostringstream out;
    hscov::write_matrix_file(m, out);
    TempFile f(out.str());
    const hscov::HSMatrix back = hscov::read_matrix_file(f.path);
    REQUIRE(back.dim() == 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(back.entry(i, j) == m.entry(i, j));

    TempFile missing_rows("3\n1,0,0\n0,1,0\n");
    CHECK_THROWS_AS(hscov::read_matrix_file(missing_rows.path), std::invalid_argument);
    TempFile ragged("2\n1,0\n0,1,5\n");
    CHECK_THROWS_AS(hscov::read_matrix_file(ragged.path), std::invalid_argument);
    TempFile no_n("1,0\n0,1\n");
    CHECK_THROWS_AS(hscov::read_matrix_file(no_n.path), std::invalid_argument);
    CHECK_THROWS_AS(hscov::read_matrix_file("does_not_exist.tmp"), std::invalid_argument);
}

TEST_CASE("gridded kernel file loads and interpolates") {
    TempFile f("3\n0,0.5,1\n0,0.5,1\n0,0.5,1\n"); // k(s,t) = t
    const hscov::GriddedKernel g = hscov::read_gridded_kernel_file(f.path);
    CHECK(g(0.2, 0.75) == Catch::Approx(0.75).margin(1e-14));

    TempFile nan_grid("2\n0,1\n0,nan\n");
    CHECK_THROWS_AS(hscov::read_gridded_kernel_file(nan_grid.path), hscov::non_finite_error);
}

TEST_CASE("make_matrix resolves builtins and rejects unknown sources") {
    CHECK(hscov::make_matrix("identity", 3).entry(2, 2) == 1.0);
    CHECK(hscov::make_matrix("zero", 2).hs_norm() == 0.0);
    CHECK(hscov::make_matrix("reciprocal-product", 2).entry(1, 1) == 0.25);
    const hscov::HSMatrix d = hscov::make_matrix("diag:1,0.5,0.25", 0);
    REQUIRE(d.dim() == 3);
    CHECK(d.entry(1, 1) == 0.5);

    CHECK_THROWS_AS(hscov::make_matrix("identity", 0), std::invalid_argument);
    CHECK_THROWS_AS(hscov::make_matrix("hilbert", 4), std::invalid_argument);
}

TEST_CASE("make_kernel resolves builtins") {
    CHECK(hscov::make_kernel("min").eval(0.25, 0.75) == 0.25);
    CHECK(hscov::make_kernel("constant:3").eval(0.5, 0.5) == 3.0);
    CHECK(hscov::make_kernel("zero").eval(0.1, 0.2) == 0.0);
    CHECK(hscov::make_kernel("separable-sine").eval(0.5, 0.5) == Catch::Approx(2.0).margin(1e-14));
    CHECK_THROWS_AS(hscov::make_kernel("gauss"), std::invalid_argument);
    CHECK_THROWS_AS(hscov::make_kernel("constant:1,2"), std::invalid_argument);
}

TEST_CASE("decay rows serialize with the pinned header") {
    const std::string csv = hscov::decay_rows_to_csv({{4, 0.5, 0.75}, {8, 0.25, 0.5}});
    CHECK(csv == "N,sigma_min,basis_bound\n4,0.5,0.75\n8,0.25,0.5\n");
}

#ifndef HSCOV_IO_HPP
#define HSCOV_IO_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hscov/covering.hpp"
#include "hscov/errors.hpp"
#include "hscov/gendiff.hpp"
#include "hscov/hs_matrix.hpp"
#include "hscov/kernel.hpp"
#include "hscov/l2.hpp"

namespace hscov {

// All numeric output uses 17 significant digits so that round-trips and
// golden-file comparisons are exact.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<double> parse_csv_numbers(const std::string& line, const std::string& context) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) {
        // trim blanks
        const auto b = item.find_first_not_of(" \t\r");
        const auto e = item.find_last_not_of(" \t\r");
        if (b == std::string::npos)
            throw std::invalid_argument(context + ": empty field in '" + line + "'");
        item = item.substr(b, e - b + 1);
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(context + ": cannot parse number '" + item + "'");
        }
        if (pos != item.size())
            throw std::invalid_argument(context + ": trailing characters in number '" + item + "'");
        if (!std::isfinite(v))
            throw non_finite_error(context + ": non-finite input value '" + item + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw std::invalid_argument(context + ": no values in '" + line + "'");
    return out;
}

inline L2Vec read_vector_file(const std::string& path);

// Vector flag/file syntax: comma-separated decimals, the sentinel `zero`,
// a basis shorthand `e<k>` (probe workflows live on basis directions), or
// `file:PATH` for the one-line vector file format. `zero` and `e<k>` take
// their dimension from the caller.
inline L2Vec parse_vector(const std::string& text, std::size_t zero_dim) {
    if (text.rfind("file:", 0) == 0)
        return read_vector_file(text.substr(5));
    if (text == "zero") {
        if (zero_dim == 0)
            throw std::invalid_argument("parse_vector: 'zero' needs a dimension from context");
        return L2Vec::zero(zero_dim);
    }
    if (text.size() >= 2 && text[0] == 'e' &&
        text.find_first_not_of("0123456789", 1) == std::string::npos) {
        if (zero_dim == 0)
            throw std::invalid_argument("parse_vector: '" + text + "' needs a dimension from context");
        return L2Vec::basis(static_cast<std::size_t>(std::stoul(text.substr(1))), zero_dim);
    }
    return L2Vec(parse_csv_numbers(text, "vector"));
}

// CLI boundary rule: vectors shorter than the target dimension are padded
// with zeros (an explicit embed, documented in the help text); longer ones
// are rejected, never truncated.
inline L2Vec parse_vector_padded(const std::string& text, std::size_t target_dim) {
    const L2Vec v = parse_vector(text, target_dim);
    if (v.dim() > target_dim)
        throw std::invalid_argument("vector '" + text + "' has " + std::to_string(v.dim()) +
                                    " components, more than the operator dimension " +
                                    std::to_string(target_dim));
    return v.dim() < target_dim ? embed(v, target_dim) : v;
}

inline L2Vec read_vector_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("read_vector_file: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("read_vector_file: '" + path + "' is empty");
    return L2Vec(parse_csv_numbers(line, "vector file '" + path + "'"));
}

inline std::string vector_to_csv(const L2Vec& v) {
    std::string out;
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i)
            out += ',';
        out += format_double(v[i]);
    }
    return out;
}

// Matrix file format: first line N, then N lines of N comma-separated
// decimals; row i is input index i.
inline HSMatrix read_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("read_matrix_file: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("read_matrix_file: '" + path + "' is empty");
    long n = 0;
    try {
        n = std::stol(line);
    } catch (const std::exception&) {
        throw std::invalid_argument("read_matrix_file: first line of '" + path + "' must be N");
    }
    if (n < 1)
        throw std::invalid_argument("read_matrix_file: N must be >= 1 in '" + path + "'");
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(n * n));
    for (long i = 0; i < n; ++i) {
        if (!std::getline(in, line))
            throw std::invalid_argument("read_matrix_file: '" + path + "' has fewer than N rows");
        const std::vector<double> row = parse_csv_numbers(line, "matrix row " + std::to_string(i + 1));
        if (row.size() != static_cast<std::size_t>(n))
            throw std::invalid_argument("read_matrix_file: row " + std::to_string(i + 1) + " of '" + path +
                                        "' has " + std::to_string(row.size()) + " entries, expected " +
                                        std::to_string(n));
        entries.insert(entries.end(), row.begin(), row.end());
    }
    return HSMatrix(static_cast<std::size_t>(n), std::move(entries));
}

inline void write_matrix_file(const HSMatrix& m, std::ostream& out) {
    out << m.dim() << '\n';
    for (std::size_t i = 0; i < m.dim(); ++i) {
        for (std::size_t j = 0; j < m.dim(); ++j) {
            if (j)
                out << ',';
            out << format_double(m.entry(i, j));
        }
        out << '\n';
    }
}

// Gridded-kernel file: first line G, then G lines of G comma-separated
// samples on the uniform grid over [0,1] including endpoints.
inline GriddedKernel read_gridded_kernel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("read_gridded_kernel_file: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("read_gridded_kernel_file: '" + path + "' is empty");
    long g = 0;
    try {
        g = std::stol(line);
    } catch (const std::exception&) {
        throw std::invalid_argument("read_gridded_kernel_file: first line of '" + path + "' must be G");
    }
    if (g < 2)
        throw std::invalid_argument("read_gridded_kernel_file: G must be >= 2 in '" + path + "'");
    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(g * g));
    for (long i = 0; i < g; ++i) {
        if (!std::getline(in, line))
            throw std::invalid_argument("read_gridded_kernel_file: '" + path + "' has fewer than G rows");
        std::vector<double> row;
        try {
            row = parse_csv_numbers(line, "kernel grid row " + std::to_string(i + 1));
        } catch (const non_finite_error&) {
            throw; // preserved: NaN/Inf in a kernel grid is a numeric error, not a parse error
        }
        if (row.size() != static_cast<std::size_t>(g))
            throw std::invalid_argument("read_gridded_kernel_file: row " + std::to_string(i + 1) +
                                        " has " + std::to_string(row.size()) + " samples, expected " +
                                        std::to_string(g));
        samples.insert(samples.end(), row.begin(), row.end());
    }
    return GriddedKernel(static_cast<std::size_t>(g), std::move(samples));
}

// Builtin matrix generators addressable by name: zero | identity |
// diag:v1,v2,... | reciprocal-product (a_ij = 1/(i*j)); file:path loads the
// matrix file format. `dim` feeds the builtins that need one.
inline HSMatrix make_matrix(const std::string& source, std::size_t dim) {
    if (source.rfind("file:", 0) == 0)
        return read_matrix_file(source.substr(5));
    if (source.rfind("diag:", 0) == 0)
        return HSMatrix::diagonal(parse_csv_numbers(source.substr(5), "diag"));
    if (dim == 0)
        throw std::invalid_argument("make_matrix: builtin '" + source + "' needs --dim");
    if (source == "zero")
        return HSMatrix::zero(dim);
    if (source == "identity")
        return HSMatrix::identity(dim);
    if (source == "reciprocal-product")
        return HSMatrix::from_generator(
            [](std::size_t i, std::size_t j) {
                return 1.0 / (static_cast<double>(i) * static_cast<double>(j));
            },
            dim);
    throw std::invalid_argument("make_matrix: unknown matrix source '" + source + "'");
}

// Builtin kernels: zero | min | separable-sine | constant:c; file:path loads
// a gridded kernel.
inline Kernel make_kernel(const std::string& source) {
    if (source == "zero")
        return zero_kernel();
    if (source == "min")
        return min_kernel();
    if (source == "separable-sine")
        return separable_sine_kernel();
    if (source.rfind("constant:", 0) == 0) {
        const std::vector<double> v = parse_csv_numbers(source.substr(9), "constant kernel");
        if (v.size() != 1)
            throw std::invalid_argument("make_kernel: constant:c takes exactly one value");
        return constant_kernel(v[0]);
    }
    if (source.rfind("file:", 0) == 0)
        return read_gridded_kernel_file(source.substr(5)).to_kernel("file:" + source.substr(5));
    throw std::invalid_argument("make_kernel: unknown kernel source '" + source + "'");
}

inline std::string decay_rows_to_csv(const std::vector<DecayRow>& rows) {
    std::string out = "N,sigma_min,basis_bound\n";
    for (const DecayRow& r : rows) {
        out += std::to_string(r.n);
        out += ',';
        out += format_double(r.sigma_min);
        out += ',';
        out += format_double(r.basis_bound);
        out += '\n';
    }
    return out;
}

} // namespace hscov

#endif

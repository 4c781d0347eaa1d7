// Command-line front end: operator construction from files and builtins,
// derivative and coderivative evaluation, covering-constant estimation,
// decay tables, membership probes, and the feasibility system. All numeric
// output is printed with 17 significant digits; identical invocations
// produce identical payloads.
//
// Exit codes: 0 success, 1 validation error (flags, sources, dimensions),
// 2 numeric error (non-finite input, evaluation at a non-differentiable
// point, empty admissible sample sets).

#include "CLI11.hpp"
#include "json.hpp"

#include "hscov/basis.hpp"
#include "hscov/covering.hpp"
#include "hscov/errors.hpp"
#include "hscov/gendiff.hpp"
#include "hscov/integral_op.hpp"
#include "hscov/io.hpp"
#include "hscov/kernel.hpp"
#include "hscov/l2.hpp"
#include "hscov/quadrature.hpp"
#include "hscov/quasi_op.hpp"

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using hscov::L2Vec;
using hscov::OperatorHandle;
using json = nlohmann::json;

struct Context {
    std::string op_source;
    std::size_t dim = 16;
    int basis_size = 8;
    int quad_order = 64;
    std::uint64_t seed = 20240901;
    std::string format = "csv";
    std::string digest_input; // canonical echo of the invocation
};

// FNV-1a over the canonicalized invocation string
std::string digest(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

OperatorHandle resolve_operator(const Context& ctx) {
    if (ctx.op_source.empty())
        throw std::invalid_argument("--op is required");
    if (ctx.op_source == "quasi-hs")
        return OperatorHandle::quasi(ctx.dim);
    if (ctx.op_source.rfind("kernel:", 0) == 0) {
        const hscov::Kernel k = hscov::make_kernel(ctx.op_source.substr(7));
        const hscov::QuadratureRule q = hscov::gauss_legendre(ctx.quad_order);
        return OperatorHandle::integral(
            hscov::compute_coeffs(k, hscov::OrthoBasis::sine(ctx.basis_size), q));
    }
    return OperatorHandle::matrix(hscov::make_matrix(ctx.op_source, ctx.dim));
}

json vector_json(const L2Vec& v) {
    json arr = json::array();
    for (std::size_t i = 0; i < v.dim(); ++i)
        arr.push_back(v[i]);
    return arr;
}

// Envelope emission: CSV prints the payload lines only; JSON wraps the
// payload with the subcommand echo, an input digest, and the wall time.
void emit(const Context& ctx, const std::string& subcommand, const json& payload,
          const std::string& csv_text, std::chrono::steady_clock::time_point t0) {
    if (ctx.format == "json") {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json envelope = {{"subcommand", subcommand},
                         {"inputs_digest", digest(subcommand + "|" + ctx.digest_input)},
                         {"payload", payload},
                         {"wall_time_s", secs}};
        std::cout << envelope.dump(2) << '\n';
    } else {
        std::cout << csv_text;
    }
}

json covering_json(const hscov::CoveringEstimate& ce) {
    return {{"value", ce.value},
            {"method", ce.method},
            {"eta", {{"schedule", ce.eta_schedule}, {"infima", ce.eta_infima}, {"achieving", ce.achieving_eta}}},
            {"samples", ce.samples},
            {"witness", vector_json(ce.witness)},
            {"rejected_singular_points", ce.rejected_singular_points}};
}

std::string covering_csv(const hscov::CoveringEstimate& ce) {
    std::string out = "value,method,achieving_eta,samples,rejected_singular_points\n";
    out += hscov::format_double(ce.value) + "," + ce.method + "," +
           hscov::format_double(ce.achieving_eta) + "," + std::to_string(ce.samples) + "," +
           std::to_string(ce.rejected_singular_points) + "\n";
    out += "witness," + hscov::vector_to_csv(ce.witness) + "\n";
    return out;
}

std::vector<double> parse_eta_list(const std::string& text) {
    if (text.empty())
        return hscov::default_eta_schedule();
    return hscov::parse_csv_numbers(text, "--eta");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hilbert-Schmidt operator calculus: derivatives, coderivatives, "
                 "covering-constant estimation"};
    app.require_subcommand(1);

    Context ctx;
    std::string x_text, y_text, z_text, x0_text, dims_text, eta_text, tail_dir_text, points_file;
    std::vector<std::string> family_names;
    std::string method = "linear";
    std::size_t iterations = 200, directions = 20, samples = 64, targets = 128, preimage_samples = 400;
    double h = 1e-5, margin = 1e-3, tol = 1e-9, alpha = 0.0, radius = 0.0;
    int steps = 24;
    double start = 1e-1, ratio = 0.5;

    // shared flags registered on every subcommand
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--op", ctx.op_source, "operator source: quasi-hs | zero | identity | "
                                               "diag:v1,v2,... | reciprocal-product | file:PATH | kernel:NAME");
        sub->add_option("--dim", ctx.dim, "truncation dimension for builtins")->check(CLI::PositiveNumber);
        sub->add_option("--basis-size", ctx.basis_size, "spectral basis truncation M")
            ->check(CLI::PositiveNumber);
        sub->add_option("--quad-order", ctx.quad_order, "Gauss-Legendre order")->check(CLI::PositiveNumber);
        sub->add_option("--seed", ctx.seed, "RNG seed for all sampling");
        sub->add_option("--format", ctx.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
    };

    std::string path = "spectral";

    CLI::App* apply = app.add_subcommand("apply", "apply the operator to a vector");
    add_common(apply);
    apply->add_option("--x", x_text, "input vector (csv, 'zero', or 'e<k>'); shorter vectors are zero-padded")
        ->required();
    apply->add_option("--path", path,
                      "kernel operators only: spectral (coefficients in/out), direct (Nystrom node "
                      "samples in/out), separable (rank-one fast path, separable-sine only)")
        ->check(CLI::IsMember({"spectral", "direct", "separable"}));

    CLI::App* adjoint = app.add_subcommand("adjoint", "apply the adjoint of a linear operator");
    add_common(adjoint);
    adjoint->add_option("--y", y_text, "input vector (csv, 'zero', or 'e<k>'); shorter vectors are zero-padded")
        ->required();
    adjoint->add_option("--path", path, "kernel operators only: spectral | separable")
        ->check(CLI::IsMember({"spectral", "separable"}));

    CLI::App* hsnorm = app.add_subcommand("hsnorm", "Hilbert-Schmidt norm of the operator");
    add_common(hsnorm);

    CLI::App* opnorm = app.add_subcommand("opnorm", "operator-norm estimate by power iteration");
    add_common(opnorm);
    opnorm->add_option("--iterations", iterations, "power iteration budget")->check(CLI::PositiveNumber);

    CLI::App* coeffs = app.add_subcommand("coeffs", "spectral coefficient matrix of a kernel");
    add_common(coeffs);

    CLI::App* deriv = app.add_subcommand("deriv-check", "finite-difference check of the derivative");
    add_common(deriv);
    deriv->add_option("--z", z_text, "base point (csv or 'zero')")->required();
    deriv->add_option("--directions", directions, "number of random unit directions")
        ->check(CLI::PositiveNumber);
    deriv->add_option("--fd-step", h, "central-difference step")->check(CLI::PositiveNumber);

    CLI::App* coderiv = app.add_subcommand("coderiv", "coderivative via the adjoint of the derivative");
    add_common(coderiv);
    coderiv->add_option("--z", z_text, "base point (csv or 'zero')")->required();
    coderiv->add_option("--y", y_text, "direction (csv or 'zero')")->required();

    CLI::App* covering = app.add_subcommand("covering", "covering-constant estimate");
    add_common(covering);
    covering->add_option("--method", method, "estimator")
        ->check(CLI::IsMember({"linear", "basis", "sampled"}));
    covering->add_option("--x", x_text, "base point for the sampled method (csv or 'zero')");
    covering->add_option("--eta", eta_text, "comma-separated eta schedule");
    covering->add_option("--samples", samples, "samples per eta")->check(CLI::PositiveNumber);

    CLI::App* decay = app.add_subcommand("decay", "sigma_min and basis-bound decay across truncations");
    add_common(decay);
    decay->add_option("--dims", dims_text, "ascending comma-separated truncation sizes")->required();

    CLI::App* probe = app.add_subcommand("probe", "limsup-quotient membership probe");
    add_common(probe);
    probe->add_option("--z", z_text, "base point (csv or 'zero')")->required();
    probe->add_option("--x", x_text, "membership candidate (csv or 'zero')")->required();
    probe->add_option("--y", y_text, "direction (csv or 'zero')")->required();
    probe->add_option("--family", family_names, "path family: axis | diagonal | tail | custom (repeatable)")
        ->check(CLI::IsMember({"axis", "diagonal", "tail", "custom"}));
    probe->add_option("--steps", steps, "points per family")->check(CLI::PositiveNumber);
    probe->add_option("--start", start, "first step size")->check(CLI::PositiveNumber);
    probe->add_option("--ratio", ratio, "geometric decay ratio");
    probe->add_option("--margin", margin, "exclusion margin")->check(CLI::PositiveNumber);
    probe->add_option("--tol", tol, "admission tolerance")->check(CLI::PositiveNumber);
    probe->add_option("--tail-dir", tail_dir_text, "direction for the tail family (csv)");
    probe->add_option("--points-file", points_file, "file of custom points, one csv vector per line");

    CLI::App* feas = app.add_subcommand("feasibility", "evaluate the six-inequality system");
    add_common(feas);
    feas->add_option("--y", y_text, "y1,y2")->required();
    feas->add_option("--x", x_text, "x1,x2")->required();

    CLI::App* cov_emp = app.add_subcommand("covering-empirical",
                                           "brute-force covering-property check (dim <= 3)");
    add_common(cov_emp);
    cov_emp->add_option("--x0", x0_text, "center point (csv or 'zero')")->required();
    cov_emp->add_option("--alpha", alpha, "covering rate to test")->required();
    cov_emp->add_option("--r", radius, "ball radius")->required();
    cov_emp->add_option("--targets", targets, "random targets in addition to the deterministic grid")
        ->check(CLI::PositiveNumber);
    cov_emp->add_option("--preimage-samples", preimage_samples, "random preimage starts per target")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    // canonical echo for the digest
    for (int i = 1; i < argc; ++i) {
        ctx.digest_input += argv[i];
        ctx.digest_input += '\x1f';
    }

    // node-sample routes for the kernel operators (reached with --path)
    auto sample_path = [&](const std::string& subcommand,
                           std::chrono::steady_clock::time_point t0) {
        if (ctx.op_source.rfind("kernel:", 0) != 0)
            throw std::invalid_argument(subcommand + ": --path " + path +
                                        " applies to kernel operators only");
        const hscov::Kernel k = hscov::make_kernel(ctx.op_source.substr(7));
        const hscov::QuadratureRule q = hscov::gauss_legendre(ctx.quad_order);
        const std::string& text = (subcommand == "adjoint") ? y_text : x_text;
        const L2Vec in = hscov::parse_vector(text, q.nodes.size());
        if (in.dim() != q.nodes.size())
            throw std::invalid_argument(subcommand + ": --path " + path + " takes samples at the " +
                                        std::to_string(q.nodes.size()) + " quadrature nodes");
        std::vector<double> out;
        if (path == "direct") {
            out = hscov::apply_direct(k, in.coeffs(), q);
        } else {
            if (k.label != "separable-sine")
                throw std::invalid_argument(subcommand +
                                            ": --path separable is defined for kernel:separable-sine");
            auto phi = [](double s) { return std::sqrt(2.0) * std::sin(3.14159265358979323846 * s); };
            out = (subcommand == "adjoint") ? hscov::apply_separable_adjoint(phi, phi, in.coeffs(), q)
                                            : hscov::apply_separable(phi, phi, in.coeffs(), q);
        }
        const L2Vec outv{std::vector<double>(out)};
        emit(ctx, subcommand, {{"samples", vector_json(outv)}}, hscov::vector_to_csv(outv) + "\n", t0);
    };

    const auto t0 = std::chrono::steady_clock::now();
    try {
        if (apply->parsed()) {
            if (path != "spectral") {
                sample_path("apply", t0);
                return 0;
            }
            const OperatorHandle op = resolve_operator(ctx);
            const L2Vec x = hscov::parse_vector_padded(x_text, op.dim());
            const L2Vec out = op.apply(x);
            emit(ctx, "apply", {{"vector", vector_json(out)}}, hscov::vector_to_csv(out) + "\n", t0);
        } else if (adjoint->parsed()) {
            if (path != "spectral") {
                sample_path("adjoint", t0);
                return 0;
            }
            const OperatorHandle op = resolve_operator(ctx);
            if (!op.is_linear())
                throw std::invalid_argument(
                    "adjoint: the quasi operator is nonlinear and has no global adjoint; "
                    "use `coderiv --z ...` for the pointwise coderivative");
            const L2Vec y = hscov::parse_vector_padded(y_text, op.dim());
            const L2Vec out = op.coderivative_apply(y, y); // z ignored for linear kinds
            emit(ctx, "adjoint", {{"vector", vector_json(out)}}, hscov::vector_to_csv(out) + "\n", t0);
        } else if (hsnorm->parsed()) {
            json payload;
            std::string csv;
            if (ctx.op_source == "quasi-hs") {
                const double v = hscov::quasi_hs_norm(ctx.dim);
                payload = {{"hs_norm", v}};
                csv = hscov::format_double(v) + "\n";
            } else if (ctx.op_source.rfind("kernel:", 0) == 0) {
                const hscov::Kernel k = hscov::make_kernel(ctx.op_source.substr(7));
                const hscov::QuadratureRule q = hscov::gauss_legendre(ctx.quad_order);
                const double full = hscov::hs_norm_from_kernel(k, q);
                const double truncated =
                    hscov::compute_coeffs(k, hscov::OrthoBasis::sine(ctx.basis_size), q).mat().hs_norm();
                payload = {{"hs_norm", full}, {"hs_norm_truncated", truncated}};
                csv = hscov::format_double(full) + "\n";
            } else {
                const double v = hscov::make_matrix(ctx.op_source, ctx.dim).hs_norm();
                payload = {{"hs_norm", v}};
                csv = hscov::format_double(v) + "\n";
            }
            emit(ctx, "hsnorm", payload, csv, t0);
        } else if (opnorm->parsed()) {
            const OperatorHandle op = resolve_operator(ctx);
            const hscov::HSMatrix* m = op.linear_matrix();
            if (m == nullptr)
                throw std::invalid_argument("opnorm: power iteration needs a linear operator");
            const double v = m->op_norm_estimate(iterations, ctx.seed);
            emit(ctx, "opnorm", {{"op_norm_estimate", v}}, hscov::format_double(v) + "\n", t0);
        } else if (coeffs->parsed()) {
            std::string source = ctx.op_source;
            if (source.rfind("kernel:", 0) == 0)
                source = source.substr(7);
            const hscov::Kernel k = hscov::make_kernel(source);
            const hscov::QuadratureRule q = hscov::gauss_legendre(ctx.quad_order);
            const hscov::CoeffMatrix c =
                hscov::compute_coeffs(k, hscov::OrthoBasis::sine(ctx.basis_size), q);
            std::ostringstream os;
            hscov::write_matrix_file(c.mat(), os);
            json rows = json::array();
            for (std::size_t i = 0; i < c.basis_size(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < c.basis_size(); ++j)
                    row.push_back(c.mat().entry(i, j));
                rows.push_back(row);
            }
            emit(ctx, "coeffs",
                 {{"basis_size", c.basis_size()}, {"entries", rows}, {"kernel_l2_sq", c.kernel_l2_sq()}},
                 os.str(), t0);
        } else if (deriv->parsed()) {
            const OperatorHandle op = resolve_operator(ctx);
            const L2Vec z = hscov::parse_vector_padded(z_text, op.dim());
            const double v = hscov::frechet_fd_check(op, z, directions, h, ctx.seed);
            emit(ctx, "deriv-check", {{"max_relative_error", v}}, hscov::format_double(v) + "\n", t0);
        } else if (coderiv->parsed()) {
            const OperatorHandle op = resolve_operator(ctx);
            const L2Vec z = hscov::parse_vector_padded(z_text, op.dim());
            const L2Vec y = hscov::parse_vector_padded(y_text, op.dim());
            const L2Vec out = hscov::coderivative_via_adjoint(op, z, y);
            emit(ctx, "coderiv", {{"vector", vector_json(out)}}, hscov::vector_to_csv(out) + "\n", t0);
        } else if (covering->parsed()) {
            const OperatorHandle op = resolve_operator(ctx);
            hscov::CoveringEstimate ce;
            if (method == "sampled") {
                const L2Vec x_bar =
                    x_text.empty() ? L2Vec::zero(op.dim()) : hscov::parse_vector_padded(x_text, op.dim());
                ce = hscov::covering_sampled(op, x_bar, parse_eta_list(eta_text), samples, ctx.seed);
            } else {
                const hscov::HSMatrix* m = op.linear_matrix();
                if (m == nullptr)
                    throw std::invalid_argument("covering: methods linear/basis need a linear operator; "
                                                "use --method sampled for the quasi operator");
                ce = (method == "linear") ? hscov::covering_linear(*m) : hscov::covering_basis_bound(*m);
            }
            emit(ctx, "covering", covering_json(ce), covering_csv(ce), t0);
        } else if (decay->parsed()) {
            const std::vector<double> dd = hscov::parse_csv_numbers(dims_text, "--dims");
            std::vector<std::size_t> dims;
            for (double v : dd) {
                if (v < 1.0 || v != std::floor(v))
                    throw std::invalid_argument("--dims: entries must be positive integers");
                dims.push_back(static_cast<std::size_t>(v));
            }
            std::vector<hscov::DecayRow> rows;
            if (ctx.op_source == "reciprocal-product")
                rows = hscov::decay_report(
                    [](std::size_t i, std::size_t j) {
                        return 1.0 / (static_cast<double>(i) * static_cast<double>(j));
                    },
                    dims);
            else if (ctx.op_source == "identity")
                rows = hscov::decay_report(
                    [](std::size_t i, std::size_t j) { return i == j ? 1.0 : 0.0; }, dims);
            else if (ctx.op_source == "zero")
                rows = hscov::decay_report([](std::size_t, std::size_t) { return 0.0; }, dims);
            else
                throw std::invalid_argument("decay: --op must be one of reciprocal-product | identity | zero");
            json jr = json::array();
            for (const hscov::DecayRow& r : rows)
                jr.push_back({{"N", r.n}, {"sigma_min", r.sigma_min}, {"basis_bound", r.basis_bound}});
            emit(ctx, "decay", {{"rows", jr}}, hscov::decay_rows_to_csv(rows), t0);
        } else if (probe->parsed()) {
            const OperatorHandle op = resolve_operator(ctx);
            const L2Vec z = hscov::parse_vector_padded(z_text, op.dim());
            const L2Vec x_cand = hscov::parse_vector_padded(x_text, op.dim());
            const L2Vec y = hscov::parse_vector_padded(y_text, op.dim());
            if (family_names.empty())
                family_names = {"axis", "diagonal"};
            std::vector<hscov::PathFamily> families;
            for (const std::string& name : family_names) {
                if (name == "axis") {
                    families.push_back(hscov::PathFamily::axis(steps, start, ratio));
                } else if (name == "diagonal") {
                    families.push_back(hscov::PathFamily::diagonal(steps, start, ratio));
                } else if (name == "tail") {
                    std::vector<double> dir;
                    if (!tail_dir_text.empty()) {
                        dir = hscov::parse_vector_padded(tail_dir_text, op.dim()).coeffs();
                    } else {
                        // default: the tail part (coordinates >= 3) of the candidate
                        dir = x_cand.coeffs();
                        if (dir.size() >= 2)
                            dir[0] = dir[1] = 0.0;
                    }
                    families.push_back(hscov::PathFamily::tail(dir, steps, start, ratio));
                } else { // custom
                    if (points_file.empty())
                        throw std::invalid_argument("probe: --family custom needs --points-file");
                    std::ifstream in(points_file);
                    if (!in)
                        throw std::invalid_argument("probe: cannot open '" + points_file + "'");
                    std::vector<L2Vec> pts;
                    std::string line;
                    while (std::getline(in, line))
                        if (!line.empty())
                            pts.push_back(L2Vec(hscov::parse_csv_numbers(line, "custom point")));
                    families.push_back(hscov::PathFamily::custom(std::move(pts)));
                }
            }
            const hscov::ProbeResult res = hscov::probe_membership(op, z, x_cand, y, families, margin, tol);
            if (ctx.format == "json") {
                // record stream as JSON lines, then a summary object
                for (const hscov::ProbeRecord& r : res.records) {
                    json rec = {{"family", r.family},
                                {"step", r.step},
                                {"u", vector_json(r.u)},
                                {"quotient", r.quotient}};
                    std::cout << rec.dump() << '\n';
                }
                json summary = {{"verdict", hscov::to_string(res.verdict)},
                                {"sup_estimate", res.sup_estimate},
                                {"witness", vector_json(res.witness)},
                                {"witness_family", res.witness_family},
                                {"witness_step", res.witness_step},
                                {"witness_quotient", res.witness_quotient}};
                std::cout << summary.dump() << '\n';
            } else {
                std::cout << "family,step,quotient,u\n";
                for (const hscov::ProbeRecord& r : res.records)
                    std::cout << r.family << ',' << r.step << ',' << hscov::format_double(r.quotient)
                              << ",\"" << hscov::vector_to_csv(r.u) << "\"\n";
                std::cout << "# verdict=" << hscov::to_string(res.verdict)
                          << " sup_estimate=" << hscov::format_double(res.sup_estimate)
                          << " witness_family=" << res.witness_family
                          << " witness_step=" << res.witness_step << '\n';
            }
        } else if (feas->parsed()) {
            const std::vector<double> yv = hscov::parse_csv_numbers(y_text, "--y");
            const std::vector<double> xv = hscov::parse_csv_numbers(x_text, "--x");
            if (yv.size() != 2 || xv.size() != 2)
                throw std::invalid_argument("feasibility: --y and --x take exactly two components");
            const hscov::FeasibilityResult r = hscov::feasibility_check(yv[0], yv[1], xv[0], xv[1]);
            const char* names[6] = {"i", "ii", "iii", "iv", "v", "vi"};
            json ineq;
            std::string csv = "i,ii,iii,iv,v,vi,all\n";
            for (int k = 0; k < 6; ++k) {
                ineq[names[k]] = r.holds[static_cast<std::size_t>(k)];
                csv += r.holds[static_cast<std::size_t>(k)] ? "1," : "0,";
            }
            csv += r.all ? "1\n" : "0\n";
            emit(ctx, "feasibility", {{"inequalities", ineq}, {"all", r.all}}, csv, t0);
        } else if (cov_emp->parsed()) {
            const OperatorHandle op = resolve_operator(ctx);
            const L2Vec x0 = hscov::parse_vector_padded(x0_text, op.dim());
            const hscov::CoveringCheckResult r =
                hscov::empirical_covering_check(op, x0, alpha, radius, targets, preimage_samples, ctx.seed);
            json payload = {{"covered", r.covered},
                            {"worst_residual", r.worst_residual},
                            {"targets_checked", r.targets_checked}};
            std::string csv = "covered,worst_residual,targets_checked\n";
            csv += std::string(r.covered ? "1" : "0") + "," + hscov::format_double(r.worst_residual) +
                   "," + std::to_string(r.targets_checked) + "\n";
            if (r.counterexample) {
                payload["counterexample"] = vector_json(*r.counterexample);
                csv += "counterexample," + hscov::vector_to_csv(*r.counterexample) + "\n";
            }
            emit(ctx, "covering-empirical", payload, csv, t0);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

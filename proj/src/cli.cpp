#include <lck/cli.hpp>
#include <lck/json_io.hpp>
#include <lck/verify.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace lck {

using nlohmann::json;

namespace {

struct Options {
    std::string entry;
    std::string file;
    std::size_t points = 1000;
    std::uint64_t seed = 42;
    std::optional<double> tol;
    double t = 1.0;
    double t_im = 0.0;
    std::string family;
    double radius = 1.0;
    double eps = 1e-6;
    int max_iter = 10000;
    std::string out;
    double mu_re = 2.0, mu_im = 0.0;
    double alpha_re = 0.5, alpha_im = 0.0;
    double r1 = 1.0, r2 = 1.5, p1 = 1.0, p2 = 2.0;
};

CatalogParameters catalog_parameters(const Options& o)
{
    CatalogParameters p;
    p.mu = {o.mu_re, o.mu_im};
    p.alpha = {o.alpha_re, o.alpha_im};
    p.t = {o.t, o.t_im};
    p.r = {o.r1, o.r2};
    p.p = {o.p1, o.p2};
    return p;
}

CatalogEntry resolve_entry(const Options& o)
{
    if (!o.entry.empty()) return catalog_entry(o.entry, catalog_parameters(o));
    return entry_from_json(read_json_file(o.file));
}

/// The map to study: --file (map or matrix) or the generator of --entry.
PolyAutomorphism resolve_map(const Options& o)
{
    if (!o.file.empty()) return map_or_matrix_from_json(read_json_file(o.file), o.file);
    return catalog_entry(o.entry, catalog_parameters(o)).group.generator();
}

void emit(const json& j, const Options& o, std::ostream& out)
{
    const std::string text = j.dump(2) + "\n";
    if (o.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw ParseError(o.out + ": cannot open for writing (--out)");
    f << text;
    if (!f) throw ParseError(o.out + ": write failed (--out)");
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const CatalogEntry entry = resolve_entry(o);
    SuiteConfig cfg;
    cfg.points = o.points;
    cfg.seed = o.seed;
    cfg.tolerance = o.tol;
    cfg.contraction.radius = o.radius;
    cfg.contraction.eps = o.eps;
    cfg.contraction.max_iter = o.max_iter;
    cfg.contraction.seed = o.seed;
    const auto reports = run_suite(entry, cfg);
    emit(to_json(std::span<const VerificationReport>(reports)), o, out);
    return all_passed(reports) ? exit_pass : exit_failure;
}

int cmd_deform(const Options& o, std::ostream& out)
{
    if (o.file.empty()) throw BadParameter("deform needs --file with a map or matrix");
    const Complex t{o.t, o.t_im};
    const json input = read_json_file(o.file);
    json j{{"family", o.family}, {"t", complex_to_json(t)}};
    bool ok = false;

    if (o.family == "linearize") {
        const PolyAutomorphism g = map_or_matrix_from_json(input, o.file);
        const ScalingFamily fam = family_to_linear(g);
        const PolyAutomorphism limit = fam.limit_at_zero();
        const Eigen::MatrixXcd lin = linear_part(g);
        const double dev = (linear_part(limit) - lin).cwiseAbs().maxCoeff();
        ok = limit.is_linear() && dev == 0.0;
        j["weights"] = fam.weights();
        j["map_t"] = to_json(t == Complex{} ? limit : fam.at(t));
        j["limit"] = to_json(limit);
        j["linear_part"] = matrix_to_json(lin);
        j["limit_matches_linear_part"] = ok;
    } else {
        const Eigen::MatrixXcd a =
            input.is_array() ? matrix_from_json(input, o.file) : linear_part(map_from_json(input, o.file));
        const ScalingFamily fam = family_to_diagonal(a);
        const Eigen::MatrixXcd limit = linear_part(fam.limit_at_zero());
        const Eigen::MatrixXcd diag = a.diagonal().asDiagonal();
        ok = (limit - diag).cwiseAbs().maxCoeff() == 0.0;
        j["weights"] = fam.weights();
        j["matrix_t"] = matrix_to_json(t == Complex{} ? limit : linear_part(fam.at(t)));
        j["limit"] = matrix_to_json(limit);
        j["diagonal"] = matrix_to_json(diag);
        j["limit_matches_diagonal"] = ok;
    }
    emit(j, o, out);
    return ok ? exit_pass : exit_failure;
}

int cmd_jordan(const Options& o, std::ostream& out)
{
    const Eigen::MatrixXcd a = [&] {
        if (!o.file.empty()) {
            const json input = read_json_file(o.file);
            return input.is_array() ? matrix_from_json(input, o.file) : linear_part(map_from_json(input, o.file));
        }
        return linear_part(resolve_map(o));
    }();
    json j{{"matrix", matrix_to_json(a)}};
    int code = exit_pass;
    try {
        const JordanDecomposition d = jordan_form(a);
        json blocks = json::array();
        for (const auto& b : d.blocks) blocks.push_back({{"eigenvalue", complex_to_json(b.eigenvalue)}, {"size", b.size}});
        j["blocks"] = std::move(blocks);
        j["transform"] = matrix_to_json(d.transform);
        j["jordan_matrix"] = matrix_to_json(d.jordan_matrix());
        j["reconstruction_residual"] = d.reconstruction_residual;
    } catch (const MapError& e) {
        j["error"] = e.what();
        code = exit_failure;
    }
    emit(j, o, out);
    return code;
}

int cmd_contraction(const Options& o, std::ostream& out)
{
    const PolyAutomorphism g = resolve_map(o);
    ContractionOptions c;
    c.radius = o.radius;
    c.eps = o.eps;
    c.max_iter = o.max_iter;
    c.seed = o.seed;
    const VerificationReport r = verify_contraction(g, c);
    emit(to_json(r), o, out);
    return r.passed ? exit_pass : exit_failure;
}

int cmd_solve_lee(const Options& o, std::ostream& out)
{
    const CatalogEntry entry = resolve_entry(o);
    const double tol = o.tol.value_or(entry.default_tolerance);
    const Samples samples = annulus_samples(entry.dim, o.points, o.seed);
    const auto results = solve_lee(entry.form("Omega"), samples.points);

    std::vector<double> res, reality;
    for (const auto& r : results) {
        res.push_back(r.residual);
        reality.push_back(r.reality_defect);
    }
    std::vector<VerificationReport> reports;
    reports.push_back(make_report("lee_solve_residual", res, samples, tol));
    reports.push_back(make_report("lee_reality", reality, samples, tol));
    if (entry.has_form("theta")) {
        const ExteriorForm& theta = entry.form("theta");
        const int n = entry.dim;
        std::vector<double> dev;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const FormValue v = evaluate_form(theta, samples.points[i]);
            double d = 0.0;
            for (int k = 0; k < 2 * n; ++k) d = std::max(d, std::abs(v.at(MultiIndex(1U << k)) - results[i].theta_coeffs(k)));
            dev.push_back(d);
        }
        reports.push_back(make_report("lee_matches_theta", dev, samples, tol));
    }
    for (auto& r : reports) r.details["entry"] = entry.name;
    emit(to_json(std::span<const VerificationReport>(reports)), o, out);
    return all_passed(reports) ? exit_pass : exit_failure;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Certify lcK structures on Hopf manifolds", "hopf-lck"};
    app.require_subcommand(1);
    Options o;

    const auto add_source = [&](CLI::App* sub, bool file_required) {
        auto* e = sub->add_option("--entry", o.entry, "catalog entry: example1, example2, kodaira, vaisman");
        auto* f = sub->add_option("--file", o.file, "JSON input file");
        e->excludes(f);
        if (file_required) {
            f->required();
        }
    };
    const auto add_params = [&](CLI::App* sub) {
        sub->add_option("--mu-re", o.mu_re, "Re mu (example1, example2)");
        sub->add_option("--mu-im", o.mu_im, "Im mu");
        sub->add_option("--alpha-re", o.alpha_re, "Re alpha (kodaira)");
        sub->add_option("--alpha-im", o.alpha_im, "Im alpha");
        sub->add_option("--t", o.t, "Re t (kodaira parameter, deformation time)");
        sub->add_option("--t-im", o.t_im, "Im t");
        sub->add_option("--r1", o.r1, "weight r1 (vaisman)");
        sub->add_option("--r2", o.r2, "weight r2 (vaisman)");
        sub->add_option("--p1", o.p1, "phase p1 (vaisman)");
        sub->add_option("--p2", o.p2, "phase p2 (vaisman)");
    };
    const auto add_sampling = [&](CLI::App* sub) {
        sub->add_option("--points", o.points, "number of sample points (>= 1)")->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "sampling seed");
        sub->add_option("--tol", o.tol, "tolerance (> 0)")->check(CLI::PositiveNumber);
    };
    const auto add_contraction = [&](CLI::App* sub) {
        sub->add_option("--radius", o.radius, "start sphere radius")->check(CLI::PositiveNumber);
        sub->add_option("--eps", o.eps, "target norm")->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", o.max_iter, "iteration cap")->check(CLI::PositiveNumber);
    };

    auto* verify = app.add_subcommand("verify", "run the verification suite on an entry");
    add_source(verify, false);
    add_params(verify);
    add_sampling(verify);
    add_contraction(verify);

    auto* deform = app.add_subcommand("deform", "evaluate a deformation family");
    add_source(deform, true);
    deform->add_option("--family", o.family, "linearize or diagonalize")
        ->required()
        ->check(CLI::IsMember({"linearize", "diagonalize"}));
    deform->add_option("--t", o.t, "Re t");
    deform->add_option("--t-im", o.t_im, "Im t");

    auto* jordan = app.add_subcommand("jordan", "Jordan form of a matrix or of a map's linear part");
    add_source(jordan, false);
    add_params(jordan);

    auto* contraction = app.add_subcommand("contraction", "contraction test of a map");
    add_source(contraction, false);
    add_params(contraction);
    add_contraction(contraction);
    contraction->add_option("--seed", o.seed, "start point seed");

    auto* lee = app.add_subcommand("solve-lee", "recover the Lee form pointwise");
    add_source(lee, false);
    add_params(lee);
    add_sampling(lee);

    for (auto* sub : {verify, deform, jordan, contraction, lee}) {
        sub->add_option("--out", o.out, "write JSON here instead of standard output");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    }

    CLI::App* sub = app.get_subcommands().front();
    if (sub != deform && o.entry.empty() && o.file.empty()) {
        err << "error: " << sub->get_name() << " needs --entry or --file\n";
        return exit_config;
    }
    try {
        if (sub == verify) return cmd_verify(o, out);
        if (sub == deform) return cmd_deform(o, out);
        if (sub == jordan) return cmd_jordan(o, out);
        if (sub == contraction) return cmd_contraction(o, out);
        return cmd_solve_lee(o, out);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const BadParameter& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const UnknownEntry& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << "\n";
        return exit_config;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"hopf-lck"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace lck

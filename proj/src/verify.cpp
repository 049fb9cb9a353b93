#include <lck/verify.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace lck {

using nlohmann::json;

namespace {

constexpr std::size_t max_offenders = 5;

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

json point_json(const Point& p)
{
    json a = json::array();
    for (const auto& c : p) a.push_back(complex_json(c));
    return a;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json parameters_json(const std::map<std::string, Complex>& params)
{
    json o = json::object();
    for (const auto& [k, v] : params) o[k] = complex_json(v);
    return o;
}

/// A report with no sample points (group-level checks).
VerificationReport scalar_report(std::string name, double residual, double tolerance)
{
    VerificationReport r;
    r.check_name = std::move(name);
    r.max_residual = residual;
    r.tolerance = tolerance;
    r.passed = residual < tolerance;
    return r;
}

VerificationReport error_report(std::string name, const std::string& message, const Samples& samples,
                                double tolerance)
{
    VerificationReport r;
    r.check_name = std::move(name);
    r.max_residual = std::numeric_limits<double>::quiet_NaN();
    r.tolerance = tolerance;
    r.num_points = samples.points.size();
    r.seed = samples.seed;
    r.passed = false;
    r.details["error"] = message;
    return r;
}

} // namespace

VerificationReport make_report(std::string name, std::span<const double> residuals, const Samples& samples,
                               double tolerance)
{
    if (residuals.size() != samples.points.size()) {
        throw DimensionMismatch("make_report: one residual per sample point expected");
    }
    VerificationReport r;
    r.check_name = std::move(name);
    r.tolerance = tolerance;
    r.num_points = residuals.size();
    r.seed = samples.seed;

    std::vector<std::size_t> order(residuals.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    // NaN sorts first so that it is reported.
    const auto key = [&](std::size_t i) {
        const double v = residuals[i];
        return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
    };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (std::isnan(residuals[a]) != std::isnan(residuals[b])) return std::isnan(residuals[a]);
        return key(a) > key(b);
    });

    bool any_nan = false;
    double worst = residuals.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
    for (double v : residuals) {
        any_nan = any_nan || std::isnan(v);
        if (!std::isnan(v)) worst = std::max(worst, v);
    }
    r.max_residual = any_nan ? std::numeric_limits<double>::quiet_NaN() : worst;
    r.passed = !any_nan && r.max_residual < tolerance;
    for (std::size_t k = 0; k < std::min(max_offenders, order.size()); ++k) {
        r.worst.push_back({order[k], samples.points[order[k]], residuals[order[k]]});
    }
    return r;
}

json to_json(const VerificationReport& r)
{
    json worst = json::array();
    for (const auto& o : r.worst) {
        worst.push_back({{"index", o.index}, {"point", point_json(o.point)}, {"residual", finite_or_null(o.residual)}});
    }
    return json{{"check_name", r.check_name},
                {"status", r.passed ? "pass" : "fail"},
                {"max_residual", finite_or_null(r.max_residual)},
                {"tolerance", finite_or_null(r.tolerance)},
                {"num_points", r.num_points},
                {"seed", r.seed},
                {"worst", std::move(worst)},
                {"details", r.details}};
}

json to_json(std::span<const VerificationReport> reports)
{
    json a = json::array();
    for (const auto& r : reports) a.push_back(to_json(r));
    return a;
}

// --- Lee form recovery -----------------------------------------------------

LeeSolver::LeeSolver(ExteriorForm omega) : omega_(std::move(omega)), d_omega_(exterior_d(omega_))
{
    if (omega_.degree() != 2) throw BadParameter("Lee solver needs a 2-form");
}

LeeSolveResult LeeSolver::operator()(std::span<const Complex> point) const
{
    const int n = omega_.dim();
    const int m = 2 * n;
    if (point.size() != static_cast<std::size_t>(n)) throw DimensionMismatch("Lee solver: point dimension");
    Evaluator ev(point);
    const FormValue om = evaluate_form(omega_, ev);
    const FormValue dom = evaluate_form(d_omega_, ev);

    Eigen::MatrixXcd skew = Eigen::MatrixXcd::Zero(m, m);
    for (const auto& [idx, c] : om.coefficients) {
        const auto ids = idx.ids();
        skew(ids[0], ids[1]) = c;
        skew(ids[1], ids[0]) = -c;
    }
    const double det = std::abs(skew.determinant());
    if (!(det > degenerate_omega_threshold)) {
        throw FormError(FormError::Kind::degenerate_omega,
                        "Omega is degenerate at " + format_point(Point(point.begin(), point.end())) +
                            " (|det| = " + std::to_string(det) + ")");
    }

    // Rows: the 3-indices in a fixed order; column k: coefficients of e_k ^ Omega.
    std::vector<MultiIndex> rows;
    for (std::uint32_t bits = 0; bits < (1U << m); ++bits) {
        if (std::popcount(bits) == 3) rows.emplace_back(bits);
    }
    std::sort(rows.begin(), rows.end());
    const auto row_of = [&](MultiIndex idx) {
        return static_cast<Eigen::Index>(std::lower_bound(rows.begin(), rows.end(), idx) - rows.begin());
    };
    Eigen::MatrixXcd design = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()), m);
    Eigen::VectorXcd target = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(rows.size()));
    for (int k = 0; k < m; ++k) {
        const MultiIndex ek(1U << k);
        for (const auto& [idx, c] : om.coefficients) {
            const int s = wedge_sign(ek, idx);
            if (s == 0) continue;
            design(row_of(MultiIndex(ek.bits() | idx.bits())), k) += static_cast<double>(s) * c;
        }
    }
    for (const auto& [idx, c] : dom.coefficients) target(row_of(idx)) = c;

    LeeSolveResult r;
    r.point.assign(point.begin(), point.end());
    r.theta_coeffs = design.completeOrthogonalDecomposition().solve(target);
    r.residual = (design * r.theta_coeffs - target).cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        r.reality_defect = std::max(r.reality_defect, std::abs(r.theta_coeffs(n + i) - std::conj(r.theta_coeffs(i))));
    }
    return r;
}

LeeSolveResult solve_lee_pointwise(const ExteriorForm& omega, std::span<const Complex> point)
{
    return LeeSolver(omega)(point);
}

std::vector<LeeSolveResult> solve_lee(const ExteriorForm& omega, std::span<const Point> points, Exec exec)
{
    const LeeSolver solver(omega);
    return sweep::map_indexed(points.size(), [&](std::size_t i) { return solver(points[i]); }, exec);
}

// --- individual checks -----------------------------------------------------

namespace {

void check_dims(const ExteriorForm& a, const Samples& s)
{
    if (a.dim() != s.dim) {
        throw DimensionMismatch("form dimension " + std::to_string(a.dim()) + " differs from sample dimension " +
                                std::to_string(s.dim));
    }
}

/// Smallest margin by which the matrices are uniformly definite; negative if not.
struct Margin {
    double value = 0.0;
    int sign = 0;
};

Margin definiteness_margin(const DefinitenessReport& d)
{
    double pos = std::numeric_limits<double>::infinity();
    double neg = std::numeric_limits<double>::infinity();
    for (const auto& s : d.samples) {
        pos = std::min(pos, s.eigenvalues.minCoeff());
        neg = std::min(neg, -s.eigenvalues.maxCoeff());
    }
    if (d.samples.empty()) return {};
    return pos >= neg ? Margin{pos, 1} : Margin{neg, -1};
}

json definiteness_json(const DefinitenessReport& d, const Margin& m)
{
    return json{{"sign", d.sign},
                {"definite", d.definite},
                {"semidefinite", d.semidefinite},
                {"rank", d.rank},
                {"margin", finite_or_null(m.value)},
                {"min_signed_eigenvalue", finite_or_null(d.min_signed_eigenvalue)}};
}

} // namespace

VerificationReport verify_lck_identity(const ExteriorForm& omega, const ExteriorForm& theta, const Samples& samples,
                                       const CheckOptions& opts)
{
    check_dims(omega, samples);
    check_dims(theta, samples);
    const ExteriorForm defect = exterior_d(omega) - wedge(theta, omega);
    const auto res = residual_profile(defect, samples.points, opts.exec);
    return make_report("lck_identity", res, samples, opts.tolerance);
}

VerificationReport verify_closed(const std::string& name, const ExteriorForm& a, const Samples& samples,
                                 const CheckOptions& opts)
{
    check_dims(a, samples);
    const auto res = residual_profile(exterior_d(a), samples.points, opts.exec);
    return make_report(name, res, samples, opts.tolerance);
}

VerificationReport verify_definite(const std::string& name, const ExteriorForm& a, const Samples& samples,
                                   const CheckOptions& opts)
{
    check_dims(a, samples);
    DefinitenessOptions dopts = opts.definiteness;
    dopts.exec = opts.exec;
    const ExteriorForm a11 = bidegree_part(a, 1, 1);
    const auto type_defect = residual_profile(a - a11, samples.points, opts.exec);
    const DefinitenessReport d = definiteness(a11, samples.points, dopts);
    const Margin m = definiteness_margin(d);

    std::vector<double> per_point;
    for (const auto& s : d.samples) {
        per_point.push_back(-(m.sign > 0 ? s.eigenvalues.minCoeff() : -s.eigenvalues.maxCoeff()));
    }
    VerificationReport r = make_report(name, per_point, samples, -dopts.zero_tol);
    r.details = definiteness_json(d, m);
    r.details["type11_defect"] = type_defect.empty() ? 0.0 : *std::max_element(type_defect.begin(), type_defect.end());
    return r;
}

VerificationReport verify_lck(const ExteriorForm& omega, const ExteriorForm& theta, const Samples& samples,
                              const CheckOptions& opts)
{
    const VerificationReport ident = verify_lck_identity(omega, theta, samples, opts);
    const VerificationReport closed = verify_closed("lee_closedness", theta, samples, opts);

    check_dims(omega, samples);
    const ExteriorForm defect = exterior_d(omega) - wedge(theta, omega);
    const ExteriorForm dtheta = exterior_d(theta);
    const auto combined = sweep::map_indexed(
        samples.points.size(),
        [&](std::size_t i) {
            Evaluator ev(samples.points[i]);
            return std::max(evaluate_form(defect, ev).norm(), evaluate_form(dtheta, ev).norm());
        },
        opts.exec);
    VerificationReport r = make_report("lck", combined, samples, opts.tolerance);
    r.details["lck_identity_residual"] = finite_or_null(ident.max_residual);
    r.details["lee_closedness_residual"] = finite_or_null(closed.max_residual);
    try {
        const VerificationReport def = verify_definite("definiteness", omega, samples, opts);
        r.details["definiteness"] = def.details;
    } catch (const Error& e) {
        r.details["definiteness"] = json{{"error", e.what()}};
    }
    return r;
}

PotentialReports verify_potential(const Expression& phi, std::span<const PolyAutomorphism> generators,
                                  const Samples& samples, const CheckOptions& opts)
{
    const int n = samples.dim;
    const auto values = sweep::map_indexed(
        samples.points.size(), [&](std::size_t i) { return evaluate(phi, samples.points[i]); }, opts.exec);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(std::abs(values[i].imag()) < 1e-12) || !(values[i].real() > 0.0)) {
            throw NonPositivePotential("potential is not real and positive at sample " + std::to_string(i) + " " +
                                       format_point(samples.points[i]));
        }
    }

    const ExteriorForm omega_tilde = Expression(Complex(0.0, -1.0)) * del(delbar(ExteriorForm::function(n, phi)));
    PotentialReports out{verify_closed("potential_closedness", omega_tilde, samples, opts),
                         verify_definite("potential_definiteness", omega_tilde, samples, opts),
                         {}};

    std::vector<double> deviation(samples.points.size(), 0.0);
    json per_gen = json::array();
    bool rho_positive = true;
    for (std::size_t g = 0; g < generators.size(); ++g) {
        const auto& gen = generators[g];
        if (gen.dim() != n) throw DimensionMismatch("generator dimension differs from the samples'");
        const auto ratios = sweep::map_indexed(
            samples.points.size(),
            [&](std::size_t i) { return evaluate(phi, gen(samples.points[i])) / values[i]; }, opts.exec);
        Complex mean{};
        for (const auto& q : ratios) mean += q;
        mean /= static_cast<double>(std::max<std::size_t>(ratios.size(), 1));
        double dev = 0.0;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            lo = std::min(lo, ratios[i].real());
            hi = std::max(hi, ratios[i].real());
        }
        // Per-point deviation from the smallest ratio keeps max - min as the maximum.
        for (std::size_t i = 0; i < ratios.size(); ++i) {
            const double d = std::max(ratios[i].real() - lo, std::abs(ratios[i].imag()));
            deviation[i] = std::max(deviation[i], d);
            dev = std::max(dev, d);
        }
        rho_positive = rho_positive && mean.real() > 0.0;
        per_gen.push_back(json{{"generator", g},
                               {"rho", mean.real()},
                               {"min_ratio", finite_or_null(lo)},
                               {"max_ratio", finite_or_null(hi)},
                               {"deviation", dev}});
    }
    out.homothety = make_report("potential_homothety", deviation, samples, opts.tolerance);
    out.homothety.details["generators"] = std::move(per_gen);
    if (!rho_positive) {
        out.homothety.passed = false;
        out.homothety.details["error"] = "homothety constant is not positive";
    }
    return out;
}

PotentialReports verify_potential(const Expression& phi, const GroupSpec& group, const Samples& samples,
                                  const CheckOptions& opts)
{
    const auto gens = group.generators();
    return verify_potential(phi, gens, samples, opts);
}

VerificationReport verify_invariance(const ExteriorForm& a, const PolyAutomorphism& g, const Samples& samples,
                                     const CheckOptions& opts, const std::string& name)
{
    check_dims(a, samples);
    if (g.dim() != a.dim()) throw DimensionMismatch("invariance: map and form dimensions differ");
    const auto f = g.to_expressions();
    const ExteriorForm diff = pullback(f, a) - a;
    const auto res = residual_profile(diff, samples.points, opts.exec);
    return make_report(name, res, samples, opts.tolerance);
}

VerificationReport verify_fixed_point_free(const GroupSpec& group, double tol)
{
    const FixedPointReport fp = fixed_point_free_check(group, tol);
    VerificationReport r = scalar_report("fixed_point_free", -fp.min_distance, -tol);
    r.details["min_distance"] = finite_or_null(fp.min_distance);
    r.details["distances"] = fp.distances;
    r.details["finite_part_order"] = group.finite_part().size();
    r.details["note"] = "linear necessary condition only";
    return r;
}

VerificationReport verify_contraction(const PolyAutomorphism& g, const ContractionOptions& opts)
{
    VerificationReport r;
    try {
        const ContractionResult c = contraction_test(g, opts);
        // Spectral failure: residual is the spectral radius against 1.
        // Iteration: residual is the worst final norm relative to eps.
        if (!(c.spectral_radius < 1.0)) {
            r = scalar_report("contraction", c.spectral_radius, 1.0);
        } else {
            r = scalar_report("contraction", c.max_final_norm / opts.eps, 1.0);
        }
        r.passed = r.passed && c.is_contraction;
        r.num_points = c.num_points;
        r.details = json{{"is_contraction", c.is_contraction},
                         {"spectral_radius", c.spectral_radius},
                         {"iterations_needed", c.iterations_needed},
                         {"radius", opts.radius},
                         {"eps", opts.eps},
                         {"max_iter", opts.max_iter}};
        if (!c.reason.empty()) r.details["reason"] = c.reason;
    } catch (const MapError& e) {
        r = scalar_report("contraction", std::numeric_limits<double>::infinity(), 1.0);
        r.passed = false;
        r.details = json{{"is_contraction", false}, {"error", e.what()}};
    }
    r.seed = opts.seed;
    return r;
}

// --- suite -----------------------------------------------------------------

std::vector<VerificationReport> run_suite(const CatalogEntry& entry, const SuiteConfig& config)
{
    if (config.points < 1) throw BadParameter("points must be >= 1");
    const double tol = config.tolerance.value_or(entry.default_tolerance);
    if (!(tol > 0.0)) throw BadParameter("tolerance must be > 0");
    const Samples samples = annulus_samples(entry.dim, config.points, config.seed);
    CheckOptions opts;
    opts.tolerance = tol;
    opts.exec = config.exec;

    std::vector<VerificationReport> out;
    const auto guarded = [&](const std::string& name, auto&& check) {
        try {
            out.push_back(check());
        } catch (const Error& e) {
            out.push_back(error_report(name, e.what(), samples, tol));
        }
    };

    if (entry.has_form("Omega") && entry.has_form("theta")) {
        const auto& omega = entry.form("Omega");
        const auto& theta = entry.form("theta");
        guarded("lck_identity", [&] { return verify_lck_identity(omega, theta, samples, opts); });
        guarded("lee_closedness", [&] { return verify_closed("lee_closedness", theta, samples, opts); });
        guarded("definiteness", [&] { return verify_definite("definiteness", omega, samples, opts); });
    }
    if (entry.potential) {
        try {
            for (auto& r : verify_potential(*entry.potential, entry.group, samples, opts).all()) {
                out.push_back(std::move(r));
            }
        } catch (const Error& e) {
            out.push_back(error_report("potential", e.what(), samples, tol));
        }
    }
    const auto gens = entry.group.generators();
    for (const auto& key : entry.invariant_forms) {
        for (std::size_t g = 0; g < gens.size(); ++g) {
            const std::string name = "invariance:" + key + ":generator" + std::to_string(g);
            guarded(name, [&] { return verify_invariance(entry.form(key), gens[g], samples, opts, name); });
        }
    }
    out.push_back(verify_fixed_point_free(entry.group));
    ContractionOptions copts = config.contraction;
    copts.exec = config.exec;
    out.push_back(verify_contraction(entry.group.generator(), copts));

    for (auto& r : out) r.details["entry"] = entry.name;
    for (auto& r : out) r.details["parameters"] = parameters_json(entry.parameters);
    return out;
}

bool all_passed(std::span<const VerificationReport> reports)
{
    return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed; });
}

} // namespace lck

#include <lck/hopf.hpp>

#include <cmath>

namespace lck {

namespace {

constexpr Complex I{0.0, 1.0};

Expression z(int i) { return Expression::var(i); }
Expression zb(int i) { return Expression::conj_var(i); }

void require_expanding(Complex mu)
{
    if (!(std::abs(mu) > 1.0)) {
        throw BadParameter("mu must satisfy |mu| > 1 (got |mu| = " + std::to_string(std::abs(mu)) + ")");
    }
}

PolyAutomorphism scalar_map(int n, Complex c)
{
    return PolyAutomorphism::linear(c * Eigen::MatrixXcd::Identity(n, n));
}

/// -i sum dz_i ^ dzbar_i
ExteriorForm flat_kahler(int n)
{
    ExteriorForm w(n, 2);
    for (int i = 0; i < n; ++i) w = w + Expression(-I) * wedge(ExteriorForm::dz(n, i), ExteriorForm::dzbar(n, i));
    return w;
}

} // namespace

const ExteriorForm& CatalogEntry::form(const std::string& key) const
{
    auto it = forms.find(key);
    if (it == forms.end()) throw BadParameter("entry '" + name + "' has no form '" + key + "'");
    return it->second;
}

CatalogEntry example1_entry(Complex mu)
{
    require_expanding(mu);
    const int n = 2;
    const Expression norm2 = norm_squared(n);
    const Expression inv = Expression(1.0) / norm2;

    ExteriorForm omega = flat_kahler(n);
    ExteriorForm Omega = inv * omega;

    ExteriorForm sum_zbar_dz(n, 1), sum_z_dzbar(n, 1);
    for (int i = 0; i < n; ++i) {
        sum_zbar_dz = sum_zbar_dz + zb(i) * ExteriorForm::dz(n, i);
        sum_z_dzbar = sum_z_dzbar + z(i) * ExteriorForm::dzbar(n, i);
    }
    ExteriorForm theta = -(inv * (sum_z_dzbar + sum_zbar_dz));
    ExteriorForm psi = (Expression(I) * inv) * (sum_z_dzbar - sum_zbar_dz);

    // -i / N^2 (|z1|^2 dz0^dzb0 + |z0|^2 dz1^dzb1 - zb0 z1 dz0^dzb1 - zb1 z0 dz1^dzb0)
    const auto dd = [&](int i, int j) { return wedge(ExteriorForm::dz(n, i), ExteriorForm::dzbar(n, j)); };
    ExteriorForm fs = (z(1) * zb(1)) * dd(0, 0) + (z(0) * zb(0)) * dd(1, 1) - (zb(0) * z(1)) * dd(0, 1) -
                      (zb(1) * z(0)) * dd(1, 0);
    fs = (Expression(-I) / pow(norm2, 2)) * fs;

    CatalogEntry e{.name = "example1",
                   .dim = n,
                   .forms = {{"Omega", Omega}, {"theta", theta}, {"psi", psi}, {"fubini_study", fs}},
                   .invariant_forms = {"theta", "psi"},
                   .potential = std::nullopt,
                   .group = GroupSpec::cyclic(scalar_map(n, 1.0 / mu)),
                   .parameters = {{"mu", mu}},
                   .default_tolerance = 1e-10};
    return e;
}

PotentialDatum example2_potential(int n, Complex mu)
{
    require_expanding(mu);
    if (n < 2 || n > max_dimension) throw BadParameter("dimension must be in [2, 16]");
    return {norm_squared(n), GroupSpec::cyclic(scalar_map(n, 1.0 / mu))};
}

CatalogEntry example2_entry(int n, Complex mu)
{
    auto [phi, group] = example2_potential(n, mu);
    const auto [d, db] = del_and_delbar(ExteriorForm::function(n, phi));
    (void)d;
    const ExteriorForm omega_tilde = Expression(-I) * del(db);
    CatalogEntry e{.name = "example2",
                   .dim = n,
                   .forms = {{"Omega", omega_tilde}, {"theta", ExteriorForm(n, 1)}, {"omega_tilde", omega_tilde}},
                   .invariant_forms = {"theta"},
                   .potential = phi,
                   .group = std::move(group),
                   .parameters = {{"mu", mu}, {"n", Complex(n, 0)}},
                   .default_tolerance = 1e-10};
    return e;
}

PolyAutomorphism kodaira_family(Complex alpha, Complex t)
{
    if (!(std::abs(alpha) > 0.0 && std::abs(alpha) < 1.0)) {
        throw BadParameter("alpha must satisfy 0 < |alpha| < 1 (got |alpha| = " +
                           std::to_string(std::abs(alpha)) + ")");
    }
    Eigen::MatrixXcd a(2, 2);
    a << alpha, t, 0.0, alpha;
    return PolyAutomorphism::linear(a);
}

CatalogEntry kodaira_entry(Complex alpha, Complex t)
{
    CatalogEntry e{.name = "kodaira",
                   .dim = 2,
                   .forms = {},
                   .invariant_forms = {},
                   .potential = std::nullopt,
                   .group = GroupSpec::cyclic(kodaira_family(alpha, t)),
                   .parameters = {{"alpha", alpha}, {"t", t}},
                   .default_tolerance = 1e-10};
    return e;
}

ScalingFamily family_to_linear(const PolyAutomorphism& g)
{
    return ScalingFamily(g, std::vector<int>(static_cast<std::size_t>(g.dim()), -1));
}

ScalingFamily family_to_diagonal(const Eigen::MatrixXcd& a)
{
    if (a.rows() != a.cols() || a.rows() < 1) throw DimensionMismatch("family_to_diagonal needs a square matrix");
    const int n = static_cast<int>(a.rows());
    constexpr double tol = 1e-12;
    const auto not_jordan = [](const std::string& what) {
        throw MapError(MapError::Kind::not_jordan, "family_to_diagonal: " + what);
    };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i || j == i + 1) continue;
            if (std::abs(a(i, j)) > tol) {
                not_jordan("entry (" + std::to_string(i) + ", " + std::to_string(j) + ") must be zero");
            }
        }
        if (i + 1 < n) {
            const Complex s = a(i, i + 1);
            const bool zero = std::abs(s) <= tol;
            const bool one = std::abs(s - 1.0) <= tol;
            if (!zero && !one) {
                not_jordan("superdiagonal entry " + std::to_string(i) + " must be 0 or 1");
            }
            if (one && std::abs(a(i, i) - a(i + 1, i + 1)) > tol) {
                not_jordan("superdiagonal 1 at " + std::to_string(i) + " joins unequal eigenvalues");
            }
        }
    }
    std::vector<int> weights;
    for (int i = 0; i < n; ++i) weights.push_back(n - 1 - i);
    return ScalingFamily(PolyAutomorphism::linear(a), std::move(weights));
}

Expression implicit_time(std::span<const double> r)
{
    return Expression::implicit_t(ImplicitTSpec{.weights = {r.begin(), r.end()}});
}

namespace {

void check_weights(std::span<const double> r)
{
    if (r.size() < 2 || r.size() > static_cast<std::size_t>(max_dimension)) {
        throw BadParameter("need between 2 and 16 weights");
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0.0) || !std::isfinite(r[i])) {
            throw BadParameter("weight r" + std::to_string(i + 1) + " must be a finite value > 0");
        }
    }
}

/// i / denom * sum c_i (z_i dzbar_i - zbar_i dz_i)
ExteriorForm sasaki_shape(int n, const std::vector<Expression>& c, const Expression& denom)
{
    ExteriorForm s(n, 1);
    for (int i = 0; i < n; ++i) {
        const Expression ci = c[static_cast<std::size_t>(i)];
        s = s + (ci * z(i)) * ExteriorForm::dzbar(n, i) - (ci * zb(i)) * ExteriorForm::dz(n, i);
    }
    return (Expression(I) / denom) * s;
}

} // namespace

ExteriorForm weighted_sasaki(std::span<const double> r)
{
    check_weights(r);
    const int n = static_cast<int>(r.size());
    const Expression t = implicit_time(r);
    std::vector<Expression> e;
    Expression denom(0.0);
    for (int i = 0; i < n; ++i) {
        e.push_back(exp(Expression(2.0 * r[static_cast<std::size_t>(i)]) * t));
        denom = denom + Expression(r[static_cast<std::size_t>(i)]) * (z(i) * zb(i)) * e.back();
    }
    return sasaki_shape(n, e, denom);
}

ExteriorForm weighted_sasaki_on_sphere(std::span<const double> r)
{
    check_weights(r);
    const int n = static_cast<int>(r.size());
    Expression denom(0.0);
    for (int i = 0; i < n; ++i) denom = denom + Expression(r[static_cast<std::size_t>(i)]) * (z(i) * zb(i));
    return sasaki_shape(n, std::vector<Expression>(static_cast<std::size_t>(n), Expression(1.0)), denom);
}

CatalogEntry vaisman_entry(std::span<const double> r, std::span<const double> p)
{
    check_weights(r);
    if (p.size() != r.size()) throw DimensionMismatch("vaisman: need one phase per weight");
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0 || !std::isfinite(p[i])) {
            throw BadParameter("phase p" + std::to_string(i + 1) + " must be finite and nonzero");
        }
    }
    const int n = static_cast<int>(r.size());
    const Expression t = implicit_time(r);
    const ExteriorForm theta = exterior_d(ExteriorForm::function(n, t));
    const ExteriorForm psi = weighted_sasaki(r);
    const ExteriorForm Omega = -wedge(theta, psi) + exterior_d(psi);

    Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(n, n);
    std::map<std::string, Complex> params;
    for (int i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        lambda(i, i) = std::exp(Complex(-r[k], p[k]));
        const std::string s = std::to_string(i + 1);
        params["r" + s] = r[k];
        params["p" + s] = p[k];
        params["lambda" + s] = lambda(i, i);
    }
    CatalogEntry e{.name = "vaisman",
                   .dim = n,
                   .forms = {{"Omega", Omega}, {"theta", theta}, {"psi", psi}},
                   .invariant_forms = {"theta", "psi"},
                   .potential = exp(-t),
                   .group = GroupSpec::cyclic(PolyAutomorphism::linear(lambda)),
                   .parameters = std::move(params),
                   .default_tolerance = 1e-8};
    return e;
}

std::vector<std::string> catalog_names() { return {"example1", "example2", "kodaira", "vaisman"}; }

CatalogEntry catalog_entry(const std::string& name, const CatalogParameters& params)
{
    if (name == "example1") return example1_entry(params.mu);
    if (name == "example2") return example2_entry(params.n, params.mu);
    if (name == "kodaira") return kodaira_entry(params.alpha, params.t);
    if (name == "vaisman") return vaisman_entry(params.r, params.p);
    std::string valid;
    for (const auto& s : catalog_names()) valid += (valid.empty() ? "" : ", ") + s;
    throw UnknownEntry("unknown entry '" + name + "'; valid entries: " + valid);
}

} // namespace lck

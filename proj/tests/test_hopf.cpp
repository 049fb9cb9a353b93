#include "oracles.hpp"

#include <lck/hopf.hpp>

#include <doctest.h>

#include <cmath>

using namespace lck;

namespace {

constexpr Complex I{0.0, 1.0};

MultiIndex idx(std::initializer_list<int> ids) { return MultiIndex::from_ids(std::vector<int>(ids)); }

double max_diff(const ExteriorForm& a, const ExteriorForm& b, std::span<const Point> pts)
{
    double m = 0.0;
    for (const auto& p : pts) m = std::max(m, residual(evaluate_form(a, p), evaluate_form(b, p)));
    return m;
}

Monomial mono(std::initializer_list<int> a) { return Monomial(a); }

const std::vector<double> R{1.0, 1.5};
const std::vector<double> P{1.0, 2.0};

} // namespace

TEST_CASE("example 1 forms at (1, 0)")
{
    const auto e = example1_entry(2.0);
    const Point p{1.0, 0.0};
    const auto th = evaluate_form(e.form("theta"), p);
    CHECK(th.at(idx({0})) == -1.0);
    CHECK(th.at(idx({2})) == -1.0);
    CHECK(th.at(idx({1})) == 0.0);
    CHECK(th.at(idx({3})) == 0.0);

    const auto ps = evaluate_form(e.form("psi"), p);
    CHECK(ps.at(idx({2})) == I);
    CHECK(ps.at(idx({0})) == -I);

    const auto om = evaluate_form(e.form("Omega"), p);
    CHECK(om.at(idx({0, 2})) == -I);
    CHECK(om.at(idx({1, 3})) == -I);

    CHECK_THROWS_AS(example1_entry(0.5), BadParameter);
    CHECK_THROWS_AS(example1_entry(Complex(0.6, 0.8)), BadParameter);
}

TEST_CASE("example 1 theta is -d log |z|^2")
{
    const auto e = example1_entry(2.0);
    const auto s = annulus_samples(2, 200, 1);
    const ExteriorForm ref = -exterior_d(ExteriorForm::function(2, log(norm_squared(2))));
    CHECK(max_diff(e.form("theta"), ref, s.points) < 1e-14);
}

TEST_CASE("example 2 potential")
{
    const auto d = example2_potential(2, Complex(1.5, 0.5));
    CHECK(evaluate(d.potential, Point{1.0, 0.0}) == 1.0);
    const ExteriorForm f = ExteriorForm::function(2, d.potential);
    const ExteriorForm w = Expression(-I) * del(delbar(f));
    CHECK(w == Expression(-I) * (wedge(ExteriorForm::dz(2, 0), ExteriorForm::dzbar(2, 0)) +
                                 wedge(ExteriorForm::dz(2, 1), ExteriorForm::dzbar(2, 1))));

    // z -> mu z scales Phi by |mu|^2
    const Complex mu(1.5, 0.5);
    const auto s = annulus_samples(2, 100, 2);
    for (const auto& p : s.points) {
        const Point mp{mu * p[0], mu * p[1]};
        const Complex ratio = evaluate(d.potential, mp) / evaluate(d.potential, p);
        CHECK(std::abs(ratio - std::norm(mu)) < 1e-13);
    }

    const auto d3 = example2_potential(3, 2.0);
    CHECK(evaluate(d3.potential, Point{1.0, 1.0, 1.0}) == 3.0);
    CHECK(d3.group.dim() == 3);
    CHECK_THROWS_AS(example2_potential(2, 1.0), BadParameter);
}

TEST_CASE("Kodaira family")
{
    const Complex alpha(0.5, 0.2);
    CHECK(kodaira_family(alpha, 0.0) == PolyAutomorphism::linear(alpha * Eigen::MatrixXcd::Identity(2, 2)));
    Eigen::MatrixXcd l(2, 2);
    l << alpha, 0.3, 0.0, alpha;
    CHECK(linear_part(kodaira_family(alpha, 0.3)) == l);
    CHECK_THROWS_AS(kodaira_family(0.0, 1.0), BadParameter);
    CHECK_THROWS_AS(kodaira_family(1.0, 1.0), BadParameter);
    for (Complex t : {Complex(0.0), Complex(1.0), Complex(0.0, 5.0)}) {
        CHECK(contraction_test(kodaira_family(alpha, t), {.radius = 2.0}).is_contraction);
    }
}

TEST_CASE("family to linear")
{
    const PolyAutomorphism lin = kodaira_family(0.5, 1.0);
    const auto flin = family_to_linear(lin);
    for (Complex t : {Complex(0.25), Complex(2.0, 1.0)}) CHECK(flin.at(t) == lin);
    CHECK(flin.limit_at_zero() == lin);

    const PolyAutomorphism g({Polynomial(2, {{mono({1, 0}), ExactComplex(mpq_class(1, 2))},
                                             {mono({0, 2}), ExactComplex(1)}}),
                              Polynomial(2, {{mono({0, 1}), ExactComplex(mpq_class(1, 2))}})});
    const auto fam = family_to_linear(g);
    CHECK(fam.at(1.0) == g);
    const auto half = fam.at(0.5);
    CHECK(half.components()[0].coefficient(mono({0, 2})) == ExactComplex(mpq_class(1, 2)));
    const Point v = half(Point{1.0, 1.0});
    CHECK(v[0] == 1.0);
    CHECK(v[1] == 0.5);
    // oracle: t^{-1} g(t z)
    const Point direct = g(Point{0.5, 0.5});
    CHECK(std::abs(direct[0] / 0.5 - v[0]) < 1e-15);
    CHECK(fam.limit_at_zero() == PolyAutomorphism::linear(linear_part(g)));
}

TEST_CASE("family to diagonal")
{
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 0.5;
    d(1, 1) = 0.3;
    const auto fd = family_to_diagonal(d);
    CHECK(linear_part(fd.at(0.7)) == d);

    const Complex alpha(0.5);
    const Complex t(0.25, -0.75);
    CHECK(linear_part(family_to_diagonal(jordan_block(alpha, 2)).at(t)) ==
          linear_part(kodaira_family(alpha, t)));

    // explicit 3x3 conjugation diag(t^2, t, 1) J diag(t^-2, t^-1, 1)
    const auto a3 = linear_part(family_to_diagonal(jordan_block(alpha, 3)).at(t));
    Eigen::MatrixXcd tt = Eigen::MatrixXcd::Zero(3, 3);
    tt(0, 0) = t * t;
    tt(1, 1) = t;
    tt(2, 2) = 1.0;
    const Eigen::MatrixXcd ref = tt * jordan_block(alpha, 3) * tt.inverse();
    CHECK((a3 - ref).norm() < 1e-15);
    CHECK(a3(0, 1) == t);
    CHECK(a3(1, 2) == t);

    const auto f6 = family_to_diagonal(jordan_block(alpha, 4));
    CHECK(linear_part(f6.limit_at_zero()) == alpha * Eigen::MatrixXcd::Identity(4, 4));

    Eigen::MatrixXcd bad = jordan_block(alpha, 2);
    bad(1, 0) = 1e-6;
    try {
        family_to_diagonal(bad);
        FAIL("expected not_jordan");
    } catch (const MapError& e) {
        CHECK(e.kind() == MapError::Kind::not_jordan);
    }
}

TEST_CASE("implicit time")
{
    const auto s = annulus_samples(2, 200, 3);
    const Expression t = implicit_time(std::vector<double>{1.0, 1.0});
    for (const auto& p : s.points) {
        const double closed = -std::log(std::norm(p[0]) + std::norm(p[1])) / 2.0;
        CHECK(std::abs(evaluate(t, p) - closed) < 1e-10);
    }
    CHECK_THROWS_AS(implicit_time(std::vector<double>{1.0, 0.0}), BadParameter);
}

TEST_CASE("weighted Sasaki form")
{
    const std::vector<double> ones{1.0, 1.0};
    const auto e1 = example1_entry(2.0);
    const auto s = annulus_samples(2, 200, 4);
    CHECK(max_diff(weighted_sasaki(ones), e1.form("psi"), s.points) < 1e-12);
    CHECK(max_diff(weighted_sasaki_on_sphere(ones), e1.form("psi"), s.points) < 1e-14);

    const std::vector<double> r23{2.0, 3.0};
    for (const auto& form : {weighted_sasaki(r23), weighted_sasaki_on_sphere(r23)}) {
        const auto v = evaluate_form(form, Point{1.0, 0.0});
        CHECK(std::abs(v.at(idx({2})) - 0.5 * I) < 1e-12);
        CHECK(std::abs(v.at(idx({0})) + 0.5 * I) < 1e-12);
        CHECK(std::abs(v.at(idx({1}))) < 1e-12);
    }

    // on the unit sphere the transported form agrees with the sphere formula
    for (const auto& p : sphere_points(2, 50, 1.0, 5)) {
        CHECK(residual(evaluate_form(weighted_sasaki(r23), p), evaluate_form(weighted_sasaki_on_sphere(r23), p)) <
              1e-10);
    }

    // phase invariance
    const Complex e0 = std::exp(I * 0.7), e1p = std::exp(I * -1.9);
    const std::vector<Expression> rot{Expression(e0) * Expression::var(0), Expression(e1p) * Expression::var(1)};
    for (const auto& form : {weighted_sasaki(R), weighted_sasaki_on_sphere(R)}) {
        CHECK(max_diff(pullback(rot, form), form, s.points) < 1e-12);
    }
    CHECK_THROWS_AS(weighted_sasaki(std::vector<double>{1.0, -1.0}), BadParameter);
}

TEST_CASE("equal weights: psi = 2i (del t - delbar t) scaled by the weight")
{
    const std::vector<double> ones{1.0, 1.0};
    const ExteriorForm t = ExteriorForm::function(2, implicit_time(ones));
    const auto [dt, dbt] = del_and_delbar(t);
    const auto s = annulus_samples(2, 100, 6);
    // t = -log N / 2, so del t - delbar t = -(1/2N) sum (zbar dz - z dzbar)
    CHECK(max_diff(Expression(2.0 * I) * (dt - dbt), weighted_sasaki(ones), s.points) < 1e-10);
}

TEST_CASE("Vaisman entry")
{
    const auto v = vaisman_entry(R, P);
    CHECK(v.has_form("Omega"));
    CHECK(v.has_form("theta"));
    CHECK(v.has_form("psi"));
    CHECK(v.potential.has_value());
    CHECK(v.parameters.at("r1") == 1.0);
    CHECK(v.parameters.at("p2") == 2.0);
    CHECK(std::abs(v.parameters.at("lambda1") - std::exp(Complex(-1.0, 1.0))) < 1e-15);

    const auto lin = linear_part(v.group.generator());
    CHECK(std::abs(lin(0, 0) - std::exp(Complex(-1.0, 1.0))) < 1e-15);
    CHECK(std::abs(lin(1, 1) - std::exp(Complex(-1.5, 2.0))) < 1e-15);
    CHECK(lin(0, 1) == 0.0);

    const auto s = annulus_samples(2, 200, 7);
    const auto gens = v.group.generators();
    const auto ge = gens[0].to_expressions();
    for (const std::string key : {"theta", "psi"}) {
        CAPTURE(key);
        CHECK(max_diff(pullback(ge, v.form(key)), v.form(key), s.points) < 1e-8);
    }

    CHECK_THROWS_AS(vaisman_entry(std::vector<double>{1.0, 0.0}, P), BadParameter);
    CHECK_THROWS_AS(vaisman_entry(R, std::vector<double>{1.0, 0.0}), BadParameter);
}

TEST_CASE("Vaisman theta with equal weights matches the closed form")
{
    const double r = 1.3;
    const std::vector<double> rr{r, r};
    const auto v = vaisman_entry(rr, P);
    const Expression closed = -log(norm_squared(2)) / Expression(2.0 * r);
    const ExteriorForm ref = exterior_d(ExteriorForm::function(2, closed));
    const auto s = annulus_samples(2, 200, 8);
    CHECK(max_diff(v.form("theta"), ref, s.points) < 1e-9);
}

TEST_CASE("on the unit sphere t vanishes")
{
    const auto t = implicit_time(R);
    for (const auto& p : sphere_points(2, 20, 1.0, 3)) CHECK(std::abs(evaluate(t, p)) < 1e-14);
}

TEST_CASE("catalog lookup")
{
    const auto names = catalog_names();
    CHECK(names == std::vector<std::string>{"example1", "example2", "kodaira", "vaisman"});
    for (const auto& n : names) CHECK(catalog_entry(n).name == n);
    try {
        catalog_entry("nope");
        FAIL("expected UnknownEntry");
    } catch (const UnknownEntry& e) {
        CHECK(std::string(e.what()).find("example1") != std::string::npos);
    }
    CatalogParameters params;
    params.mu = 3.0;
    CHECK(catalog_entry("example1", params).parameters.at("mu") == 3.0);
    CHECK_FALSE(catalog_entry("kodaira").has_form("Omega"));
}

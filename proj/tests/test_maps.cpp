#include "oracles.hpp"

#include <lck/hopf.hpp>
#include <lck/maps.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lck;

namespace {

constexpr Complex I{0.0, 1.0};

Monomial mono(std::initializer_list<int> a) { return Monomial(a); }

ExactComplex q(long num, long den = 1) { return ExactComplex(mpq_class(num, den)); }

// (z0/2 + z1^2, z1/2)
PolyAutomorphism quadratic_example()
{
    return PolyAutomorphism({Polynomial(2, {{mono({1, 0}), q(1, 2)}, {mono({0, 2}), q(1)}}),
                             Polynomial(2, {{mono({0, 1}), q(1, 2)}})});
}

Eigen::MatrixXcd m2(Complex a, Complex b, Complex c, Complex d)
{
    Eigen::MatrixXcd m(2, 2);
    m << a, b, c, d;
    return m;
}

double point_diff(const Point& a, const Point& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("constructor validation")
{
    CHECK_THROWS_AS(PolyAutomorphism({Polynomial(2, {{mono({0, 0}), q(1)}, {mono({1, 0}), q(1)}}),
                                      Polynomial::variable(2, 1)}),
                    BadParameter);
    try {
        PolyAutomorphism({Polynomial::variable(2, 0), Polynomial(2, {{mono({2, 0}), q(1)}})});
        FAIL("expected singular linear part");
    } catch (const MapError& e) {
        CHECK(e.kind() == MapError::Kind::singular_linear_part);
    }
    CHECK_THROWS(PolyAutomorphism({Polynomial::variable(3, 0), Polynomial::variable(3, 1)}));
}

TEST_CASE("linear part")
{
    const Complex alpha(0.5, 0.25), t(0.3, -0.1);
    CHECK(linear_part(kodaira_family(alpha, t)) == m2(alpha, t, 0.0, alpha));
    CHECK(linear_part(PolyAutomorphism::identity(3)) == Eigen::MatrixXcd::Identity(3, 3));
    CHECK(linear_part(quadratic_example()) == m2(0.5, 0.0, 0.0, 0.5));
    CHECK(quadratic_example().degree() == 2);
    CHECK_FALSE(quadratic_example().is_linear());
}

TEST_CASE("linear construction is exact")
{
    const Eigen::MatrixXcd a = m2(Complex(0.1, 0.2), 0.3, Complex(0, -0.7), 1.0 / 3.0);
    CHECK(linear_part(PolyAutomorphism::linear(a)) == a);
}

TEST_CASE("compose")
{
    const auto g = quadratic_example();
    CHECK(compose(g, PolyAutomorphism::identity(2)) == g);
    CHECK(compose(PolyAutomorphism::identity(2), g) == g);

    const Complex mu(1.5, 0.5);
    const auto psi = PolyAutomorphism::linear(mu * Eigen::MatrixXcd::Identity(2, 2));
    CHECK(compose(psi, psi) == PolyAutomorphism::linear(mu * mu * Eigen::MatrixXcd::Identity(2, 2)));

    const Complex alpha(0.5), t(0.75);
    const auto k = kodaira_family(alpha, t);
    const auto kk = compose(k, k);
    CHECK(linear_part(kk) == m2(alpha * alpha, 2.0 * alpha * t, 0.0, alpha * alpha));
    const auto s = annulus_samples(2, 50, 3);
    for (const auto& p : s.points) {
        const Point direct{alpha * alpha * p[0] + 2.0 * alpha * t * p[1], alpha * alpha * p[1]};
        CHECK(point_diff(kk(p), direct) < 1e-14);
    }
}

TEST_CASE("compose agrees with evaluation on random maps")
{
    std::mt19937_64 rng(11);
    const auto s = annulus_samples(3, 20, 5);
    for (int k = 0; k < 10; ++k) {
        const PolyAutomorphism g(oracle::random_polynomial_map(3, 3, rng));
        const PolyAutomorphism h(oracle::random_polynomial_map(3, 2, rng));
        const auto gh = compose(g, h);
        CHECK(gh.degree() <= g.degree() * h.degree());
        for (const auto& p : s.points) {
            const Point a = gh(p);
            const Point b = g(h(p));
            CHECK(point_diff(a, b) < 1e-10 * (1.0 + norm(b)));
        }
    }
}

TEST_CASE("compose refuses to exceed the degree cap")
{
    const auto g = quadratic_example();
    try {
        compose(g, g, 3);
        FAIL("expected overflow");
    } catch (const MapError& e) {
        CHECK(e.kind() == MapError::Kind::degree_overflow);
    }
}

TEST_CASE("scaling conjugation")
{
    const auto g = quadratic_example();
    const Complex t(0.5, 0.0);
    // T_t g T_t^{-1} with T_t = t I: the z1^2 term picks up t^{-1}
    const auto plus = conjugate_by_scaling(g, {{1, 1}, t});
    CHECK(plus.components()[0].coefficient(mono({0, 2})) == q(2));
    // weights -1: the family t^{-1} g(t z)
    const auto minus = conjugate_by_scaling(g, {{-1, -1}, t});
    CHECK(minus.components()[0].coefficient(mono({0, 2})) == q(1, 2));
    CHECK(minus.components()[0].coefficient(mono({1, 0})) == q(1, 2));

    // oracle: compose the three maps numerically
    const auto s = annulus_samples(2, 20, 4);
    for (const auto& p : s.points) {
        const Point tinv{p[0] / t, p[1] / t};
        Point direct = g(tinv);
        for (auto& c : direct) c *= t;
        CHECK(point_diff(plus(p), direct) < 1e-14);
    }

    CHECK(conjugate_by_scaling(g, {{3, -2}, 1.0}) == g);
    CHECK_THROWS_AS(conjugate_by_scaling(g, {{1, 1}, 0.0}), BadParameter);
}

TEST_CASE("weights (1, 0) turn the Jordan block into the Kodaira linear part")
{
    const Complex alpha(0.5, 0.1), t(0.25, -0.5);
    const auto a = PolyAutomorphism::linear(m2(alpha, 1.0, 0.0, alpha));
    CHECK(linear_part(conjugate_by_scaling(a, {{1, 0}, t})) == linear_part(kodaira_family(alpha, t)));
}

TEST_CASE("scaling conjugation is a homomorphism")
{
    std::mt19937_64 rng(2);
    for (int k = 0; k < 10; ++k) {
        const PolyAutomorphism g(oracle::random_polynomial_map(2, 3, rng));
        const PolyAutomorphism h(oracle::random_polynomial_map(2, 3, rng));
        const ScalingMap s{{2, -1}, Complex(0.75, 0.5)};
        CHECK(conjugate_by_scaling(compose(g, h), s) ==
              compose(conjugate_by_scaling(g, s), conjugate_by_scaling(h, s)));
    }
}

TEST_CASE("scaling family limit")
{
    const ScalingFamily lin(quadratic_example(), {-1, -1});
    CHECK(lin.t_power(0, mono({0, 2})) == 1);
    CHECK(lin.t_power(1, mono({0, 1})) == 0);
    CHECK(lin.limit_at_zero() == PolyAutomorphism::linear(m2(0.5, 0.0, 0.0, 0.5)));
    CHECK(lin.at(1.0) == quadratic_example());

    const ScalingFamily bad(quadratic_example(), {1, 1});
    try {
        bad.limit_at_zero();
        FAIL("expected a negative power");
    } catch (const MapError& e) {
        CHECK(e.kind() == MapError::Kind::degree_overflow);
    }
}

TEST_CASE("spectral radius")
{
    CHECK(spectral_radius(m2(0.5, 0.0, 0.0, 0.5)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(spectral_radius(m2(0.7, 1.0, 0.0, 0.7)) == doctest::Approx(0.7).epsilon(1e-7));
    CHECK(spectral_radius(m2(0.0, -2.0, 2.0, 0.0)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(contraction_point_count(2) == 72);
}

TEST_CASE("contraction of a homothety: closed form")
{
    const auto g = PolyAutomorphism::linear(m2(0.5, 0.0, 0.0, 0.5));
    const auto r = contraction_test(g, {.radius = 2.0, .eps = 1e-6});
    CHECK(r.is_contraction);
    CHECK(r.spectral_radius == doctest::Approx(0.5));
    // 2 * 0.5^k < 1e-6
    const int expected = static_cast<int>(std::floor(std::log2(2.0 / 1e-6))) + 1;
    CHECK(expected == 21);
    CHECK(r.iterations_needed == expected);
    CHECK(r.num_points == 72);

    CHECK(contraction_test(g, {.radius = 1.0, .eps = 1e-6}).iterations_needed == 20);
}

TEST_CASE("contraction of a Jordan block matches the explicit power formula")
{
    const double a = 0.7;
    const auto g = PolyAutomorphism::linear(m2(a, 1.0, 0.0, a));
    const ContractionOptions opts{.radius = 2.0, .eps = 1e-6};
    const auto r = contraction_test(g, opts);
    CHECK(r.is_contraction);
    REQUIRE(r.iterations_needed > 0);

    // g^k z = (a^k z0 + k a^{k-1} z1, a^k z1)
    int oracle_max = 0;
    for (const auto& z : sphere_points(2, contraction_point_count(2), opts.radius, opts.seed)) {
        for (int k = 0;; ++k) {
            const Complex w0 = std::pow(a, k) * z[0] + (k == 0 ? 0.0 : k * std::pow(a, k - 1)) * z[1];
            const Complex w1 = std::pow(a, k) * z[1];
            if (std::sqrt(std::norm(w0) + std::norm(w1)) < opts.eps) {
                oracle_max = std::max(oracle_max, k);
                break;
            }
        }
    }
    CHECK(std::abs(r.iterations_needed - oracle_max) <= 1);
}

TEST_CASE("non-contractions")
{
    const auto expanding = contraction_test(PolyAutomorphism::linear(m2(1.2, 0.0, 0.0, 0.5)));
    CHECK_FALSE(expanding.is_contraction);
    CHECK(expanding.spectral_radius == doctest::Approx(1.2));
    CHECK_FALSE(expanding.reason.empty());
    CHECK_FALSE(contraction_test(PolyAutomorphism::identity(2)).is_contraction);
}

TEST_CASE("Kodaira map with alpha 0.7, t 1 is a contraction")
{
    const auto r = contraction_test(kodaira_family(0.7, 1.0), {.radius = 2.0});
    CHECK(r.is_contraction);
    CHECK(r.spectral_radius == doctest::Approx(0.7).epsilon(1e-7));
}

TEST_CASE("orbit iteration")
{
    const auto g = PolyAutomorphism::linear(m2(2.0, 0.0, 0.0, 2.0));
    const auto starts = sphere_points(2, 8, 1.0, 1);
    try {
        orbit_iterations(g, starts, 1e-6, 1000, 1e6);
        FAIL("expected divergence");
    } catch (const MapError& e) {
        CHECK(e.kind() == MapError::Kind::iteration_diverged);
    }

    const auto h = quadratic_example();
    const auto many = sphere_points(2, 200, 0.5, 9);
    const auto par = orbit_iterations(h, many, 1e-8, 500, 1e6, Exec::parallel);
    const auto ser = orbit_iterations(h, many, 1e-8, 500, 1e6, Exec::serial);
    REQUIRE(par.size() == ser.size());
    for (std::size_t i = 0; i < par.size(); ++i) {
        CHECK(par[i].iterations == ser[i].iterations);
        CHECK(par[i].final_norm == ser[i].final_norm);
    }

    const auto capped = orbit_iterations(h, many, 1e-8, 3, 1e6);
    CHECK(capped[0].iterations == -1);
}

TEST_CASE("group specification checks")
{
    const auto phi = PolyAutomorphism::linear(m2(0.5, 0.0, 0.0, 0.5));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    CHECK_NOTHROW(GroupSpec({id, -id}, phi));
    CHECK_THROWS_AS(GroupSpec({id, 2.0 * id}, phi), BadParameter);
    CHECK_THROWS_AS(GroupSpec({-id}, phi), BadParameter);
    const Eigen::MatrixXcd r = m2(I, 0.0, 0.0, I);
    CHECK_THROWS_AS(GroupSpec({id, r}, phi), BadParameter);
    CHECK_NOTHROW(GroupSpec(cyclic_unitary_group(r), phi));
    CHECK_THROWS_AS(cyclic_unitary_group(m2(std::exp(I), 0.0, 0.0, 1.0), 64), BadParameter);

    const GroupSpec g({id, -id}, phi);
    const auto gens = g.generators();
    REQUIRE(gens.size() == 2);
    CHECK(gens[0] == phi);
    CHECK(linear_part(gens[1]) == -id);
}

TEST_CASE("fixed-point freeness")
{
    const auto phi = PolyAutomorphism::linear(m2(0.5, 0.0, 0.0, 0.5));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);

    const auto pm = fixed_point_free_check(GroupSpec({id, -id}, phi));
    CHECK(pm.fixed_point_free);
    CHECK(pm.min_distance == doctest::Approx(2.0));

    const auto refl = fixed_point_free_check(GroupSpec({id, m2(1.0, 0.0, 0.0, -1.0)}, phi));
    CHECK_FALSE(refl.fixed_point_free);
    CHECK(refl.min_distance < 1e-12);

    const auto group = cyclic_unitary_group(m2(I, 0.0, 0.0, I));
    CHECK(group.size() == 4);
    const auto c4 = fixed_point_free_check(GroupSpec(group, phi));
    CHECK(c4.fixed_point_free);
    // powers have eigenvalues i, -1, -i
    std::vector<double> expected{std::abs(I - 1.0), 2.0, std::abs(-I - 1.0)};
    std::vector<double> got = c4.distances;
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(expected[i]));

    CHECK(fixed_point_free_check(GroupSpec::cyclic(phi)).fixed_point_free);
}

TEST_CASE("equivariance")
{
    const std::vector<double> r11{1.0, 1.0}, p11{1.0, 1.0};
    const auto cyl = cylinder_points(2, 100, 7);
    CHECK(equivariance_check(r11, p11, 0, cyl) == 0.0);

    const std::vector<CylinderPoint> one{{0.0, Point{1.0, 0.0}}};
    CHECK(equivariance_check(r11, p11, 1, one) < 1e-15);

    const std::vector<double> r{1.0, 1.5}, p{1.0, 2.0};
    for (int k = 1; k <= 3; ++k) CHECK(equivariance_check(r, p, k, cyl) < 1e-12);

    // oracle: one side by hand
    const CylinderPoint& c = cyl[0];
    const int k = 2;
    for (int i = 0; i < 2; ++i) {
        const Complex lhs = std::exp(-r[i] * (c.t + k)) * std::exp(I * (p[i] * k)) * c.z[i];
        const Complex rhs = std::pow(std::exp(Complex(-r[i], p[i])), k) * std::exp(-r[i] * c.t) * c.z[i];
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }
}

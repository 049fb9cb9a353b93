#include "oracles.hpp"

#include <lck/expr.hpp>
#include <lck/sampling.hpp>

#include <doctest.h>

#include <random>

using namespace lck;

namespace {

const Expression z0 = Expression::var(0);
const Expression z1 = Expression::var(1);
const Expression zb0 = Expression::conj_var(0);
const Expression zb1 = Expression::conj_var(1);

std::function<Complex(const Point&)> as_function(const Expression& e)
{
    return [e](const Point& p) { return evaluate(e, p); };
}

} // namespace

TEST_CASE("construction folds constants and drops 0/1")
{
    CHECK((Expression(2.0) * Expression(3.0)).is_constant());
    CHECK(evaluate(Expression(2.0) * Expression(3.0), Point{}) == Complex(6.0));
    CHECK(Expression(0.0) * z0 == Expression(0.0));
    CHECK(Expression(1.0) * z0 == z0);
    CHECK(z0 + Expression(0.0) == z0);
    CHECK(pow(z0, 1) == z0);
    CHECK(pow(z0, 0) == Expression(1.0));
}

TEST_CASE("structural equality and hashing agree")
{
    const Expression a = z0 * zb1 + exp(z1);
    const Expression b = z0 * zb1 + exp(z1);
    CHECK(a == b);
    CHECK(a.hash() == b.hash());
    CHECK_FALSE(a == z0 * zb1 + exp(z0));
}

TEST_CASE("Wirtinger basics")
{
    CHECK(wirtinger_d(z0, 0, Wirtinger::dzbar).is_zero());
    CHECK(wirtinger_d(z0, 0, Wirtinger::dz).is_one());
    CHECK(wirtinger_d(z0 * zb0, 0, Wirtinger::dz) == zb0);
    CHECK(wirtinger_d(zb1, 1, Wirtinger::dzbar).is_one());
    CHECK(wirtinger_d(zb1, 0, Wirtinger::dzbar).is_zero());
}

TEST_CASE("dlog|z|^2 / dzbar_0 at (1, 0) is 1 and matches finite differences")
{
    const Expression f = log(norm_squared(2));
    const Expression d = wirtinger_d(f, 0, Wirtinger::dzbar);
    const Point p{1.0, 0.0};
    CHECK(std::abs(evaluate(d, p) - 1.0) < 1e-15);
    CHECK(std::abs(oracle::wirtinger_fd(as_function(f), p, 0, true) - 1.0) < 1e-8);
    // the closed form z_0 / |z|^2 elsewhere
    const Point q{Complex(0.3, -1.1), Complex(0.7, 0.2)};
    CHECK(std::abs(evaluate(d, q) - q[0] / (std::norm(q[0]) + std::norm(q[1]))) < 1e-14);
}

TEST_CASE("symbolic derivatives agree with finite differences on a random corpus")
{
    oracle::ExpressionFactory factory(2, 99);
    const auto samples = annulus_samples(2, 20, 5);
    for (int k = 0; k < 30; ++k) {
        const Expression e = factory.make(3);
        const auto f = as_function(e);
        for (const auto& p : samples.points) {
            for (int i = 0; i < 2; ++i) {
                for (bool conj : {false, true}) {
                    const Complex sym = evaluate(wirtinger_d(e, i, conj ? Wirtinger::dzbar : Wirtinger::dz), p);
                    const Complex fd = oracle::wirtinger_fd(f, p, i, conj);
                    CHECK(std::abs(sym - fd) <= 1e-6 * std::max(1.0, std::abs(sym)));
                }
            }
        }
    }
}

TEST_CASE("mixed partials commute")
{
    oracle::ExpressionFactory factory(2, 2024);
    const auto samples = annulus_samples(2, 100, 11);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const Expression e = factory.make(3);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                const Expression a = wirtinger_d(wirtinger_d(e, i, Wirtinger::dz), j, Wirtinger::dzbar);
                const Expression b = wirtinger_d(wirtinger_d(e, j, Wirtinger::dzbar), i, Wirtinger::dz);
                for (const auto& p : samples.points) worst = std::max(worst, std::abs(evaluate(a, p) - evaluate(b, p)));
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("differentiation is linear")
{
    oracle::ExpressionFactory factory(2, 3);
    const auto samples = annulus_samples(2, 50, 3);
    const Complex a(0.4, -1.2), b(2.0, 0.5);
    for (int k = 0; k < 10; ++k) {
        const Expression e1 = factory.make(3);
        const Expression e2 = factory.make(3);
        const Expression lhs = wirtinger_d(Expression(a) * e1 + Expression(b) * e2, 1, Wirtinger::dzbar);
        for (const auto& p : samples.points) {
            const Complex rhs = a * evaluate(wirtinger_d(e1, 1, Wirtinger::dzbar), p) +
                                b * evaluate(wirtinger_d(e2, 1, Wirtinger::dzbar), p);
            CHECK(std::abs(evaluate(lhs, p) - rhs) < 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("evaluation")
{
    CHECK(evaluate(norm_squared(2), Point{1.0, 0.0}) == Complex(1.0));
    CHECK(std::abs(evaluate(z0 / z1, Point{2.0, Complex(0, 1)}) - Complex(0, -2)) < 1e-15);
}

TEST_CASE("evaluation errors carry the point")
{
    try {
        evaluate(z0 / z1, Point{1.0, 0.0});
        FAIL("expected division error");
    } catch (const EvaluationError& e) {
        CHECK(e.kind() == EvaluationError::Kind::division_near_zero);
        CHECK(e.point() == Point{1.0, 0.0});
    }
    try {
        evaluate(log(z0), Point{-1.0, 0.0});
        FAIL("expected log branch error");
    } catch (const EvaluationError& e) {
        CHECK(e.kind() == EvaluationError::Kind::log_branch);
    }
}

TEST_CASE("implicit t: equal weights match the closed form")
{
    for (double r : {0.5, 1.0, 2.5}) {
        const Expression t = Expression::implicit_t(ImplicitTSpec{.weights = {r, r}});
        const auto samples = annulus_samples(2, 100, 17);
        for (const auto& w : samples.points) {
            const double closed = -std::log(std::norm(w[0]) + std::norm(w[1])) / (2 * r);
            CHECK(std::abs(evaluate(t, w) - closed) < 1e-10);
        }
    }
}

TEST_CASE("implicit t vanishes on the unit sphere and satisfies its equation")
{
    const std::vector<double> r{1.0, 1.5};
    const Expression t = Expression::implicit_t(ImplicitTSpec{.weights = r});
    for (const auto& w : sphere_points(2, 50, 1.0, 3)) CHECK(std::abs(evaluate(t, w)) < 1e-12);
    for (const auto& w : annulus_samples(2, 500, 4).points) {
        const Complex v = evaluate(t, w);
        CHECK(std::abs(v.imag()) == 0.0);
        CHECK(std::abs(implicit_t_residual(r, v.real(), w)) < 1e-11);
    }
}

TEST_CASE("implicit t: derivative matches finite differences")
{
    const Expression t = Expression::implicit_t(ImplicitTSpec{.weights = {0.7, 2.0}});
    const auto f = as_function(t);
    for (const auto& p : annulus_samples(2, 30, 8).points) {
        for (int i = 0; i < 2; ++i) {
            for (bool conj : {false, true}) {
                const Complex sym = evaluate(wirtinger_d(t, i, conj ? Wirtinger::dzbar : Wirtinger::dz), p);
                CHECK(std::abs(sym - oracle::wirtinger_fd(f, p, i, conj)) < 1e-6 * std::max(1.0, std::abs(sym)));
            }
        }
    }
}

TEST_CASE("implicit t: Newton cap is reported")
{
    const Expression t = Expression::implicit_t(ImplicitTSpec{.weights = {1.0, 3.0}, .newton_tol = 1e-300, .newton_max_iter = 1});
    try {
        evaluate(t, Point{Complex(0.3, 0.1), Complex(1.4, 0.2)});
        FAIL("expected Newton failure");
    } catch (const EvaluationError& e) {
        CHECK(e.kind() == EvaluationError::Kind::newton_divergence);
    }
}

TEST_CASE("substitute")
{
    const std::vector<Expression> id{z0, z1};
    const std::vector<Expression> idb{zb0, zb1};
    CHECK(substitute(z0 * zb1, id, idb) == z0 * zb1);

    const Complex mu(2.0, 1.0);
    const std::vector<Expression> f{Expression(mu) * z0, z1};
    const std::vector<Expression> fb{conjugate(f[0]), conjugate(f[1])};
    const Expression s = substitute(z0 * zb0, f, fb);
    for (const auto& p : annulus_samples(2, 10, 1).points) {
        CHECK(std::abs(evaluate(s, p) - std::norm(mu) * std::norm(p[0])) < 1e-12);
    }

    const Complex alpha(0.5, 0.1), tt(0.3, -0.2);
    const std::vector<Expression> k{Expression(alpha) * z0 + Expression(tt) * z1, Expression(alpha) * z1};
    const std::vector<Expression> kb{conjugate(k[0]), conjugate(k[1])};
    CHECK(substitute(z0, k, kb) == k[0]);

    CHECK_THROWS_AS(substitute(z0, std::vector<Expression>{z0}, std::vector<Expression>{zb0, zb1}), DimensionMismatch);
}

TEST_CASE("substitute reaches inside implicit t")
{
    const std::vector<double> r{1.0, 2.0};
    const Expression t = Expression::implicit_t(ImplicitTSpec{.weights = r});
    const Complex l0 = std::exp(Complex(-1.0, 0.4)), l1 = std::exp(Complex(-2.0, 1.3));
    const std::vector<Expression> f{Expression(l0) * z0, Expression(l1) * z1};
    const std::vector<Expression> fb{conjugate(f[0]), conjugate(f[1])};
    const Expression moved = substitute(t, f, fb);
    for (const auto& p : annulus_samples(2, 50, 2).points) {
        // t(phi w) = t(w) + 1 when |lambda_i| = e^{-r_i}
        CHECK(std::abs(evaluate(moved, p) - evaluate(t, p) - 1.0) < 1e-11);
    }
}

TEST_CASE("conjugate and numerically_equal")
{
    const Expression e = Expression(Complex(1, 2)) * z0 * zb1;
    CHECK(conjugate(e) == Expression(Complex(1, -2)) * zb0 * z1);
    CHECK(numerically_equal(pow(z0 + z1, 2), z0 * z0 + Expression(2.0) * z0 * z1 + z1 * z1, 2));
    CHECK_FALSE(numerically_equal(z0, zb0, 2));
    CHECK_FALSE(numerically_equal(Expression(1.0) / (z0 - z0), Expression(0.0), 2));
}

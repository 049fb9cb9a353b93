#pragma once
// Independent reference computations used by the tests. None of these call the
// symbolic differentiation or form machinery under test.

#include <lck/exact.hpp>
#include <lck/expr.hpp>
#include <lck/sampling.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using lck::Complex;
using lck::Point;

/// Central differences in Re and Im: d/dz = (d/dx - i d/dy) / 2, d/dzbar = (d/dx + i d/dy) / 2.
inline Complex wirtinger_fd(const std::function<Complex(const Point&)>& f, const Point& p, int i, bool conj,
                            double h = 1e-6)
{
    Point a = p, b = p;
    a[i] += h;
    b[i] -= h;
    const Complex dx = (f(a) - f(b)) / (2 * h);
    a = p;
    b = p;
    a[i] += Complex(0, h);
    b[i] -= Complex(0, h);
    const Complex dy = (f(a) - f(b)) / (2 * h);
    return conj ? 0.5 * (dx + Complex(0, 1) * dy) : 0.5 * (dx - Complex(0, 1) * dy);
}

/// Random expression in n variables built from the safe part of the grammar.
/// Denominators and log arguments are kept away from zero on the annulus.
class ExpressionFactory {
  public:
    ExpressionFactory(int n, std::uint64_t seed) : n_(n), rng_(seed) {}

    lck::Expression make(int depth)
    {
        using lck::Expression;
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
        std::uniform_int_distribution<int> var(0, n_ - 1);
        std::uniform_real_distribution<double> coef(-1.5, 1.5);
        switch (pick(rng_)) {
        case 0: { const double re = coef(rng_); return Expression(Complex(re, coef(rng_))); }
        case 1: return Expression::var(var(rng_));
        case 2: return Expression::conj_var(var(rng_));
        case 3: { auto a = make(depth - 1); return a + make(depth - 1); }
        case 4: { auto a = make(depth - 1); return a - make(depth - 1); }
        case 5: { auto a = make(depth - 1); return a * make(depth - 1); }
        case 6: return make(depth - 1) / (Expression(3.0) + lck::norm_squared(n_));
        case 7: return lck::pow(make(depth - 1), 2);
        case 8: return lck::exp(Expression(0.25) * make(depth - 1));
        default: return lck::log(Expression(1.0) + lck::norm_squared(n_)) * make(depth - 1);
        }
    }

  private:
    int n_;
    std::mt19937_64 rng_;
};

/// Components of a random polynomial map with dyadic coefficients: linear
/// part diagonal-dominant (invertible), plus a few terms of degree 2..max_degree.
inline std::vector<lck::Polynomial> random_polynomial_map(int n, int max_degree, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> num(-16, 16);
    std::uniform_int_distribution<int> expo(0, max_degree);
    std::uniform_int_distribution<int> extra(1, 4);
    const auto dyadic = [&] {
        const int re = num(rng);
        const int im = num(rng);
        return lck::ExactComplex(mpq_class(re, 8), mpq_class(im, 8));
    };
    std::vector<lck::Polynomial> out;
    for (int i = 0; i < n; ++i) {
        lck::Polynomial::Terms t;
        for (int j = 0; j < n; ++j) {
            lck::Monomial m(n, 0);
            m[j] = 1;
            t[m] = i == j ? lck::ExactComplex(mpq_class(5 + (num(rng) & 3), 4)) : dyadic() * lck::ExactComplex(mpq_class(1, 8));
        }
        for (int k = extra(rng); k > 0; --k) {
            lck::Monomial m(n, 0);
            int deg = 0;
            const int target = 2 + expo(rng) % (max_degree - 1);
            while (deg < target) {
                ++m[std::uniform_int_distribution<int>(0, n - 1)(rng)];
                ++deg;
            }
            t[m] = dyadic();
        }
        out.emplace_back(n, std::move(t));
    }
    return out;
}

} // namespace oracle

#pragma once

#include <lck/expr.hpp>

#include <gmpxx.h>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace lck {

/// Gaussian rational re + i im with GMP rationals. Doubles convert exactly.
class ExactComplex {
  public:
    ExactComplex() = default;
    ExactComplex(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }
    ExactComplex(int re) : re_(re), im_(0) {} // NOLINT

    /// Exact binary value of `c`; throws BadParameter for non-finite input.
    static ExactComplex from(Complex c);

    const mpq_class& re() const noexcept { return re_; }
    const mpq_class& im() const noexcept { return im_; }

    Complex to_complex() const;
    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    ExactComplex conj() const { return {re_, -im_}; }
    /// Throws BadParameter on zero.
    ExactComplex inverse() const;
    ExactComplex pow(int k) const;

    friend ExactComplex operator+(const ExactComplex& a, const ExactComplex& b)
    {
        return {a.re_ + b.re_, a.im_ + b.im_};
    }
    friend ExactComplex operator-(const ExactComplex& a, const ExactComplex& b)
    {
        return {a.re_ - b.re_, a.im_ - b.im_};
    }
    friend ExactComplex operator-(const ExactComplex& a) { return {-a.re_, -a.im_}; }
    friend ExactComplex operator*(const ExactComplex& a, const ExactComplex& b)
    {
        return {a.re_ * b.re_ - a.im_ * b.im_, a.re_ * b.im_ + a.im_ * b.re_};
    }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b)
    {
        return a * b.inverse();
    }
    friend bool operator==(const ExactComplex& a, const ExactComplex& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    std::string str() const;

  private:
    mpq_class re_{0};
    mpq_class im_{0};
};

/// Exponent vector of a monomial z_0^{a_0} ... z_{n-1}^{a_{n-1}}.
using Monomial = std::vector<int>;

int total_degree(const Monomial& m);

/// Holomorphic polynomial in n variables with exact coefficients.
class Polynomial {
  public:
    using Terms = std::map<Monomial, ExactComplex>;

    explicit Polynomial(int dim);
    Polynomial(int dim, Terms terms);

    static Polynomial variable(int dim, int i);
    static Polynomial constant(int dim, const ExactComplex& c);

    int dim() const noexcept { return dim_; }
    const Terms& terms() const noexcept { return terms_; }
    /// -1 for the zero polynomial.
    int degree() const;
    bool is_zero() const { return terms_.empty(); }
    ExactComplex coefficient(const Monomial& m) const;
    /// Sum of the terms of total degree k.
    Polynomial homogeneous_part(int k) const;

    Complex operator()(std::span<const Complex> z) const;
    Expression to_expression() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const ExactComplex& c, const Polynomial& p);
    friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

  private:
    void add_term(const Monomial& m, const ExactComplex& c);

    int dim_;
    Terms terms_;
};

} // namespace lck

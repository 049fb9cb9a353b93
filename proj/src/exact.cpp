#include <lck/exact.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

namespace lck {

ExactComplex ExactComplex::from(Complex c)
{
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
        throw BadParameter("coefficient must be finite");
    }
    return {mpq_class(c.real()), mpq_class(c.imag())};
}

Complex ExactComplex::to_complex() const { return {re_.get_d(), im_.get_d()}; }

ExactComplex ExactComplex::inverse() const
{
    if (is_zero()) throw BadParameter("inverse of zero");
    const mpq_class n2 = re_ * re_ + im_ * im_;
    return {re_ / n2, -im_ / n2};
}

ExactComplex ExactComplex::pow(int k) const
{
    if (k < 0) return inverse().pow(-k);
    ExactComplex result(1);
    ExactComplex base = *this;
    while (k) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

std::string ExactComplex::str() const
{
    std::ostringstream os;
    os << '(' << re_ << ", " << im_ << ')';
    return os.str();
}

int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

Polynomial::Polynomial(int dim) : dim_(dim)
{
    if (dim < 1) throw DimensionMismatch("polynomial dimension must be positive");
}

Polynomial::Polynomial(int dim, Terms terms) : Polynomial(dim)
{
    for (const auto& [m, c] : terms) add_term(m, c);
}

Polynomial Polynomial::variable(int dim, int i)
{
    if (i < 0 || i >= dim) throw DimensionMismatch("variable index out of range");
    Monomial m(static_cast<std::size_t>(dim), 0);
    m[static_cast<std::size_t>(i)] = 1;
    Polynomial p(dim);
    p.add_term(m, ExactComplex(1));
    return p;
}

Polynomial Polynomial::constant(int dim, const ExactComplex& c)
{
    Polynomial p(dim);
    p.add_term(Monomial(static_cast<std::size_t>(dim), 0), c);
    return p;
}

void Polynomial::add_term(const Monomial& m, const ExactComplex& c)
{
    if (m.size() != static_cast<std::size_t>(dim_)) {
        throw DimensionMismatch("monomial has " + std::to_string(m.size()) +
                                " exponents, expected " + std::to_string(dim_));
    }
    for (int e : m) {
        if (e < 0) throw BadParameter("monomial exponents must be non-negative");
    }
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

int Polynomial::degree() const
{
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
}

ExactComplex Polynomial::coefficient(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? ExactComplex{} : it->second;
}

Polynomial Polynomial::homogeneous_part(int k) const
{
    Polynomial p(dim_);
    for (const auto& [m, c] : terms_) {
        if (total_degree(m) == k) p.terms_.emplace(m, c);
    }
    return p;
}

Complex Polynomial::operator()(std::span<const Complex> z) const
{
    if (z.size() != static_cast<std::size_t>(dim_)) {
        throw DimensionMismatch("polynomial evaluated at a point of the wrong dimension");
    }
    Complex sum{};
    for (const auto& [m, c] : terms_) {
        Complex term = c.to_complex();
        for (std::size_t j = 0; j < m.size(); ++j) {
            for (int e = 0; e < m[j]; ++e) term *= z[j];
        }
        sum += term;
    }
    return sum;
}

Expression Polynomial::to_expression() const
{
    Expression sum(0.0);
    for (const auto& [m, c] : terms_) {
        Expression term(c.to_complex());
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (m[j] > 0) term = term * pow(Expression::var(static_cast<int>(j)), m[j]);
        }
        sum = sum + term;
    }
    return sum;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b)
{
    if (a.dim_ != b.dim_) throw DimensionMismatch("polynomial sum: dimension mismatch");
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b)
{
    if (a.dim_ != b.dim_) throw DimensionMismatch("polynomial difference: dimension mismatch");
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b)
{
    if (a.dim_ != b.dim_) throw DimensionMismatch("polynomial product: dimension mismatch");
    Polynomial r(a.dim_);
    Monomial m(static_cast<std::size_t>(a.dim_));
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            for (std::size_t j = 0; j < m.size(); ++j) m[j] = ma[j] + mb[j];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Polynomial operator*(const ExactComplex& c, const Polynomial& p)
{
    Polynomial r(p.dim_);
    for (const auto& [m, pc] : p.terms_) r.add_term(m, c * pc);
    return r;
}

} // namespace lck

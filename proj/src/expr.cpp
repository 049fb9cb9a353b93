#include <lck/expr.hpp>
#include <lck/sampling.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace lck {

struct Expression::Node {
    Op op = Op::constant;
    Complex value{};
    int index = 0;
    std::shared_ptr<const ImplicitTSpec> spec;
    std::vector<Expression> args;
    std::size_t hash = 0;
    int var_bound = 0;
    bool holomorphic = true;
};

namespace {

constexpr double division_floor = 1e-14;

void hash_combine(std::size_t& seed, std::size_t v)
{
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_double(double d)
{
    if (d == 0.0) d = 0.0; // +0 and -0 compare equal
    return std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(d));
}

} // namespace

// --- construction ----------------------------------------------------------

Expression::Expression() : Expression(constant(Complex{0.0, 0.0})) {}
Expression::Expression(Complex c) : Expression(constant(c)) {}
Expression::Expression(double c) : Expression(constant(Complex{c, 0.0})) {}

Expression Expression::constant(Complex c)
{
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = c;
    n->hash = static_cast<std::size_t>(Op::constant);
    hash_combine(n->hash, hash_double(c.real()));
    hash_combine(n->hash, hash_double(c.imag()));
    return Expression(std::move(n));
}

namespace {

std::shared_ptr<Expression::Node> leaf(Op op, int i)
{
    if (i < 0) throw DimensionMismatch("variable index must be non-negative");
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->index = i;
    n->var_bound = i + 1;
    n->holomorphic = op == Op::var;
    n->hash = static_cast<std::size_t>(op);
    hash_combine(n->hash, static_cast<std::size_t>(i));
    return n;
}

} // namespace

Expression Expression::var(int i) { return Expression(leaf(Op::var, i)); }
Expression Expression::conj_var(int i) { return Expression(leaf(Op::conj_var, i)); }

Expression Expression::implicit_t(ImplicitTSpec spec, std::vector<Expression> w,
                                  std::vector<Expression> w_conj)
{
    if (spec.weights.empty()) throw BadParameter("implicit t needs at least one weight");
    for (double r : spec.weights) {
        if (!(r > 0.0) || !std::isfinite(r)) throw BadParameter("implicit t weights must be > 0");
    }
    if (!(spec.newton_tol > 0.0) || spec.newton_max_iter < 1) {
        throw BadParameter("implicit t Newton settings must be positive");
    }
    if (w.size() != spec.weights.size() || w_conj.size() != spec.weights.size()) {
        throw DimensionMismatch("implicit t argument count must match the weight count");
    }
    auto n = std::make_shared<Node>();
    n->op = Op::implicit_t;
    n->spec = std::make_shared<const ImplicitTSpec>(std::move(spec));
    n->args = std::move(w);
    n->args.insert(n->args.end(), w_conj.begin(), w_conj.end());
    n->holomorphic = false;
    n->hash = static_cast<std::size_t>(Op::implicit_t);
    for (double r : n->spec->weights) hash_combine(n->hash, hash_double(r));
    hash_combine(n->hash, hash_double(n->spec->newton_tol));
    hash_combine(n->hash, static_cast<std::size_t>(n->spec->newton_max_iter));
    for (const auto& a : n->args) {
        hash_combine(n->hash, a.hash());
        n->var_bound = std::max(n->var_bound, a.variable_bound());
    }
    return Expression(std::move(n));
}

Expression Expression::implicit_t(ImplicitTSpec spec)
{
    const int n = static_cast<int>(spec.weights.size());
    std::vector<Expression> w, wc;
    for (int i = 0; i < n; ++i) {
        w.push_back(var(i));
        wc.push_back(conj_var(i));
    }
    return implicit_t(std::move(spec), std::move(w), std::move(wc));
}

namespace {

Complex ipow(Complex base, int k)
{
    if (k < 0) return Complex(1.0) / ipow(base, -k);
    Complex result(1.0);
    while (k) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

} // namespace

Expression Expression::make(Op op, std::vector<Expression> args, int exponent)
{
    const auto arity = [&](std::size_t k) {
        if (args.size() != k) throw Error("malformed expression: wrong argument count");
    };
    switch (op) {
    case Op::constant:
    case Op::var:
    case Op::conj_var:
    case Op::implicit_t:
        throw Error("Expression::make is for interior nodes only");
    case Op::add:
        arity(2);
        if (args[0].is_constant() && args[1].is_constant()) {
            return constant(args[0].value() + args[1].value());
        }
        if (args[0].is_zero()) return args[1];
        if (args[1].is_zero()) return args[0];
        break;
    case Op::sub:
        arity(2);
        if (args[0].is_constant() && args[1].is_constant()) {
            return constant(args[0].value() - args[1].value());
        }
        if (args[1].is_zero()) return args[0];
        if (args[0].is_zero()) return make(Op::mul, {constant(-1.0), args[1]});
        break;
    case Op::mul:
        arity(2);
        if (args[0].is_constant() && args[1].is_constant()) {
            return constant(args[0].value() * args[1].value());
        }
        if (args[0].is_zero() || args[1].is_zero()) return constant(0.0);
        if (args[0].is_one()) return args[1];
        if (args[1].is_one()) return args[0];
        break;
    case Op::div:
        arity(2);
        if (args[0].is_zero()) return constant(0.0);
        if (args[1].is_one()) return args[0];
        if (args[0].is_constant() && args[1].is_constant() &&
            std::abs(args[1].value()) >= division_floor) {
            return constant(args[0].value() / args[1].value());
        }
        break;
    case Op::int_pow:
        arity(1);
        if (exponent == 0) return constant(1.0);
        if (exponent == 1) return args[0];
        if (args[0].is_constant() &&
            (exponent > 0 || std::abs(args[0].value()) >= division_floor)) {
            return constant(ipow(args[0].value(), exponent));
        }
        break;
    case Op::exp:
        arity(1);
        if (args[0].is_constant()) return constant(std::exp(args[0].value()));
        break;
    case Op::log:
        arity(1);
        if (args[0].is_constant() && args[0].value().real() > 0.0 &&
            args[0].value().imag() == 0.0) {
            return constant(std::log(args[0].value()));
        }
        break;
    }

    auto n = std::make_shared<Node>();
    n->op = op;
    n->index = op == Op::int_pow ? exponent : 0;
    n->args = std::move(args);
    n->hash = static_cast<std::size_t>(op);
    hash_combine(n->hash, static_cast<std::size_t>(n->index));
    for (const auto& a : n->args) {
        hash_combine(n->hash, a.hash());
        n->var_bound = std::max(n->var_bound, a.variable_bound());
        n->holomorphic = n->holomorphic && a.is_holomorphic();
    }
    return Expression(std::move(n));
}

// --- accessors -------------------------------------------------------------

Op Expression::op() const noexcept { return node_->op; }
const std::vector<Expression>& Expression::args() const noexcept { return node_->args; }
Complex Expression::value() const noexcept { return node_->value; }
int Expression::index() const noexcept { return node_->index; }
std::size_t Expression::hash() const noexcept { return node_->hash; }
int Expression::variable_bound() const noexcept { return node_->var_bound; }
bool Expression::is_holomorphic() const noexcept { return node_->holomorphic; }

const ImplicitTSpec& Expression::implicit_spec() const
{
    if (!node_->spec) throw Error("not an implicit t node");
    return *node_->spec;
}

bool Expression::is_zero() const noexcept
{
    return node_->op == Op::constant && node_->value == Complex(0.0, 0.0);
}

bool Expression::is_one() const noexcept
{
    return node_->op == Op::constant && node_->value == Complex(1.0, 0.0);
}

bool operator==(const Expression& a, const Expression& b)
{
    if (a.node_ == b.node_) return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.hash != y.hash || x.op != y.op || x.index != y.index || x.value != y.value) {
        return false;
    }
    if (x.spec || y.spec) {
        if (!x.spec || !y.spec || !(*x.spec == *y.spec)) return false;
    }
    if (x.args.size() != y.args.size()) return false;
    for (std::size_t k = 0; k < x.args.size(); ++k) {
        if (!(x.args[k] == y.args[k])) return false;
    }
    return true;
}

std::string Expression::str() const
{
    std::ostringstream os;
    os.precision(15);
    const auto& a = args();
    switch (op()) {
    case Op::constant: {
        const Complex c = value();
        if (c.imag() == 0.0) {
            os << c.real();
        } else {
            os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
        }
        break;
    }
    case Op::var: os << 'z' << index(); break;
    case Op::conj_var: os << "zb" << index(); break;
    case Op::add: os << '(' << a[0].str() << " + " << a[1].str() << ')'; break;
    case Op::sub: os << '(' << a[0].str() << " - " << a[1].str() << ')'; break;
    case Op::mul: os << a[0].str() << '*' << a[1].str(); break;
    case Op::div: os << a[0].str() << "/(" << a[1].str() << ')'; break;
    case Op::int_pow: os << a[0].str() << '^' << index(); break;
    case Op::exp: os << "exp(" << a[0].str() << ')'; break;
    case Op::log: os << "log(" << a[0].str() << ')'; break;
    case Op::implicit_t: {
        os << "t[";
        const auto& r = implicit_spec().weights;
        for (std::size_t k = 0; k < r.size(); ++k) os << (k ? "," : "") << r[k];
        os << "](";
        for (std::size_t k = 0; k < r.size(); ++k) os << (k ? ", " : "") << a[k].str();
        os << ')';
        break;
    }
    }
    return os.str();
}

// --- arithmetic ------------------------------------------------------------

Expression operator+(const Expression& a, const Expression& b) { return Expression::make(Op::add, {a, b}); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::make(Op::sub, {a, b}); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::make(Op::mul, {a, b}); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::make(Op::div, {a, b}); }
Expression operator-(const Expression& a) { return Expression::make(Op::mul, {Expression(-1.0), a}); }
Expression pow(const Expression& e, int k) { return Expression::make(Op::int_pow, {e}, k); }
Expression exp(const Expression& e) { return Expression::make(Op::exp, {e}); }
Expression log(const Expression& e) { return Expression::make(Op::log, {e}); }

Expression norm_squared(int n)
{
    Expression s(0.0);
    for (int i = 0; i < n; ++i) s = s + Expression::var(i) * Expression::conj_var(i);
    return s;
}

// --- symbolic transforms ---------------------------------------------------

namespace {

using Memo = std::unordered_map<const void*, Expression>;

/// Rebuilds an interior node from transformed arguments.
Expression rebuild(const Expression& e, std::vector<Expression> args)
{
    if (e.op() == Op::implicit_t) {
        const std::size_t n = args.size() / 2;
        std::vector<Expression> w(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(n));
        std::vector<Expression> wc(args.begin() + static_cast<std::ptrdiff_t>(n), args.end());
        return Expression::implicit_t(e.implicit_spec(), std::move(w), std::move(wc));
    }
    return Expression::make(e.op(), std::move(args), e.index());
}

class Differentiator {
  public:
    Differentiator(int i, Wirtinger which) : i_(i), which_(which) {}

    Expression d(const Expression& e)
    {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        Expression r = compute(e);
        memo_.emplace(e.id(), r);
        return r;
    }

  private:
    Expression compute(const Expression& e)
    {
        const auto& a = e.args();
        switch (e.op()) {
        case Op::constant: return Expression(0.0);
        case Op::var:
            return Expression(which_ == Wirtinger::dz && e.index() == i_ ? 1.0 : 0.0);
        case Op::conj_var:
            return Expression(which_ == Wirtinger::dzbar && e.index() == i_ ? 1.0 : 0.0);
        case Op::add: return d(a[0]) + d(a[1]);
        case Op::sub: return d(a[0]) - d(a[1]);
        case Op::mul: return d(a[0]) * a[1] + a[0] * d(a[1]);
        case Op::div: {
            const Expression num = d(a[0]) * a[1] - a[0] * d(a[1]);
            return num.is_zero() ? Expression(0.0) : num / pow(a[1], 2);
        }
        case Op::int_pow: {
            const Expression da = d(a[0]);
            if (da.is_zero()) return Expression(0.0);
            const int k = e.index();
            return Expression(static_cast<double>(k)) * pow(a[0], k - 1) * da;
        }
        case Op::exp: return e * d(a[0]);
        case Op::log: {
            const Expression da = d(a[0]);
            return da.is_zero() ? Expression(0.0) : da / a[0];
        }
        case Op::implicit_t: return implicit(e);
        }
        return Expression(0.0);
    }

    // dt = -sum_j E_j (wbar_j dw_j + w_j dwbar_j) / sum_j 2 r_j w_j wbar_j E_j,
    // E_j = exp(2 r_j t), by implicit differentiation of the defining relation.
    Expression implicit(const Expression& t)
    {
        const auto& r = t.implicit_spec().weights;
        const auto& a = t.args();
        const std::size_t n = r.size();
        Expression num(0.0);
        Expression den(0.0);
        std::vector<Expression> e_j;
        for (std::size_t j = 0; j < n; ++j) {
            const Expression ej = exp(Expression(2.0 * r[j]) * t);
            den = den + Expression(2.0 * r[j]) * a[j] * a[n + j] * ej;
            const Expression inner = a[n + j] * d(a[j]) + a[j] * d(a[n + j]);
            if (!inner.is_zero()) num = num + ej * inner;
        }
        if (num.is_zero()) return Expression(0.0);
        return -(num / den);
    }

    int i_;
    Wirtinger which_;
    Memo memo_;
};

class Substituter {
  public:
    Substituter(std::span<const Expression> z, std::span<const Expression> zbar)
        : z_(z), zbar_(zbar) {}

    Expression apply(const Expression& e)
    {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        Expression r;
        switch (e.op()) {
        case Op::constant: r = e; break;
        case Op::var: r = z_[static_cast<std::size_t>(e.index())]; break;
        case Op::conj_var: r = zbar_[static_cast<std::size_t>(e.index())]; break;
        default: {
            std::vector<Expression> args;
            args.reserve(e.args().size());
            for (const auto& a : e.args()) args.push_back(apply(a));
            r = rebuild(e, std::move(args));
        }
        }
        memo_.emplace(e.id(), r);
        return r;
    }

  private:
    std::span<const Expression> z_;
    std::span<const Expression> zbar_;
    Memo memo_;
};

class Conjugator {
  public:
    Expression apply(const Expression& e)
    {
        if (auto it = memo_.find(e.id()); it != memo_.end()) return it->second;
        Expression r;
        switch (e.op()) {
        case Op::constant: r = Expression::constant(std::conj(e.value())); break;
        case Op::var: r = Expression::conj_var(e.index()); break;
        case Op::conj_var: r = Expression::var(e.index()); break;
        case Op::implicit_t: {
            // t is real: conj t(w, wbar) = t(conj wbar, conj w).
            const auto& a = e.args();
            const std::size_t n = a.size() / 2;
            std::vector<Expression> args;
            for (std::size_t k = 0; k < n; ++k) args.push_back(apply(a[n + k]));
            for (std::size_t k = 0; k < n; ++k) args.push_back(apply(a[k]));
            r = rebuild(e, std::move(args));
            break;
        }
        default: {
            std::vector<Expression> args;
            for (const auto& a : e.args()) args.push_back(apply(a));
            r = rebuild(e, std::move(args));
        }
        }
        memo_.emplace(e.id(), r);
        return r;
    }

  private:
    Memo memo_;
};

} // namespace

Expression wirtinger_d(const Expression& e, int i, Wirtinger which)
{
    if (i < 0) throw DimensionMismatch("variable index must be non-negative");
    return Differentiator(i, which).d(e);
}

Expression conjugate(const Expression& e) { return Conjugator().apply(e); }

Expression substitute(const Expression& e, std::span<const Expression> z_map,
                      std::span<const Expression> zbar_map)
{
    if (z_map.size() != zbar_map.size()) {
        throw DimensionMismatch("substitute: z and zbar maps differ in length");
    }
    if (static_cast<std::size_t>(e.variable_bound()) > z_map.size()) {
        throw DimensionMismatch("substitute: map shorter than the expression's dimension");
    }
    return Substituter(z_map, zbar_map).apply(e);
}

// --- evaluation ------------------------------------------------------------

Evaluator::Evaluator(std::span<const Complex> point) : z_(point.begin(), point.end())
{
    zbar_.reserve(z_.size());
    for (const auto& c : z_) zbar_.push_back(std::conj(c));
}

Complex Evaluator::operator()(const Expression& e)
{
    if (static_cast<std::size_t>(e.variable_bound()) > z_.size()) {
        throw DimensionMismatch("evaluate: point has fewer coordinates than the expression uses");
    }
    // Cache keys are node addresses; keeping the roots alive keeps them unique.
    roots_.push_back(e);
    return eval(e);
}

Complex Evaluator::eval(const Expression& e)
{
    switch (e.op()) {
    case Op::constant: return e.value();
    case Op::var: return z_[static_cast<std::size_t>(e.index())];
    case Op::conj_var: return zbar_[static_cast<std::size_t>(e.index())];
    default: break;
    }
    if (auto it = cache_.find(e.id()); it != cache_.end()) return it->second;

    const auto& a = e.args();
    Complex v;
    switch (e.op()) {
    case Op::add: v = eval(a[0]) + eval(a[1]); break;
    case Op::sub: v = eval(a[0]) - eval(a[1]); break;
    case Op::mul: v = eval(a[0]) * eval(a[1]); break;
    case Op::div: {
        const Complex den = eval(a[1]);
        if (std::abs(den) < division_floor) {
            throw EvaluationError(EvaluationError::Kind::division_near_zero, z_,
                                  "division by a value near zero at " + format_point(z_));
        }
        v = eval(a[0]) / den;
        break;
    }
    case Op::int_pow: {
        const Complex base = eval(a[0]);
        if (e.index() < 0 && std::abs(base) < division_floor) {
            throw EvaluationError(EvaluationError::Kind::division_near_zero, z_,
                                  "negative power of a value near zero at " + format_point(z_));
        }
        v = ipow(base, e.index());
        break;
    }
    case Op::exp: v = std::exp(eval(a[0])); break;
    case Op::log: {
        const Complex x = eval(a[0]);
        if (std::abs(x) < division_floor ||
            (x.real() < 0.0 && std::abs(x.imag()) <= division_floor * std::abs(x.real()))) {
            throw EvaluationError(EvaluationError::Kind::log_branch, z_,
                                  "log argument on the branch cut at " + format_point(z_));
        }
        v = std::log(x);
        break;
    }
    case Op::implicit_t: v = eval_implicit_t(e); break;
    default: break;
    }
    cache_.emplace(e.id(), v);
    return v;
}

double implicit_t_residual(std::span<const double> weights, double t, std::span<const Complex> w)
{
    double f = -1.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        f += std::norm(w[j]) * std::exp(2.0 * weights[j] * t);
    }
    return f;
}

// Safeguarded Newton on the strictly increasing convex F(t) = sum s_j e^{2 r_j t} - 1.
Complex Evaluator::eval_implicit_t(const Expression& e)
{
    const auto& spec = e.implicit_spec();
    const auto& r = spec.weights;
    const auto& a = e.args();
    const std::size_t n = r.size();
    std::vector<double> s(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        s[j] = (eval(a[j]) * eval(a[n + j])).real();
        total += s[j];
    }
    if (!(total > std::numeric_limits<double>::min())) {
        throw EvaluationError(EvaluationError::Kind::division_near_zero, z_,
                              "implicit t undefined at the origin " + format_point(z_));
    }
    const double r_max = *std::max_element(r.begin(), r.end());

    double t = -std::log(total) / (2.0 * r_max);
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < spec.newton_max_iter; ++iter) {
        double f = -1.0;
        double fp = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double term = s[j] * std::exp(2.0 * r[j] * t);
            f += term;
            fp += 2.0 * r[j] * term;
        }
        if (std::abs(f) < spec.newton_tol) return Complex(t, 0.0);
        if (f < 0.0) {
            lo = std::max(lo, t);
        } else {
            hi = std::min(hi, t);
        }
        double next = t - f / fp;
        if (!std::isfinite(next) || next <= lo || next >= hi) {
            if (std::isfinite(lo) && std::isfinite(hi)) {
                next = 0.5 * (lo + hi);
            } else if (!std::isfinite(next)) {
                break;
            }
        }
        t = next;
    }
    throw EvaluationError(EvaluationError::Kind::newton_divergence, z_,
                          "implicit t Newton iteration did not converge at " + format_point(z_));
}

Complex evaluate(const Expression& e, std::span<const Complex> point)
{
    return Evaluator(point)(e);
}

bool numerically_equal(const Expression& a, const Expression& b, int dim, std::uint64_t seed,
                       int num_points, double tol)
{
    const auto samples = annulus_samples(dim, static_cast<std::size_t>(num_points), seed);
    for (const auto& p : samples.points) {
        try {
            Evaluator ev(p);
            if (std::abs(ev(a) - ev(b)) > tol) return false;
        } catch (const EvaluationError&) {
            return false;
        }
    }
    return true;
}

} // namespace lck

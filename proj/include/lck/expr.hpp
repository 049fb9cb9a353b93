#pragma once

#include <lck/errors.hpp>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lck {

enum class Op : std::uint8_t {
    constant,
    var,
    conj_var,
    add,
    sub,
    mul,
    div,
    int_pow,
    exp,
    log,
    implicit_t,
};

/// Parameters of the implicit coordinate t(w) defined by
/// sum_i |w_i|^2 exp(2 r_i t) = 1.
struct ImplicitTSpec {
    std::vector<double> weights;
    double newton_tol = 1e-12;
    int newton_max_iter = 50;

    bool operator==(const ImplicitTSpec&) const = default;
};

/// Which Wirtinger derivative to take: d/dz_i or d/dzbar_i.
enum class Wirtinger : bool { dz = false, dzbar = true };

///
/// Immutable scalar expression in z_0..z_{n-1} and their conjugates.
///
/// Nodes are shared and never mutated, so expressions can be copied freely and
/// evaluated concurrently. Construction applies constant folding and 0/1
/// elimination; there is no other simplification.
///
class Expression {
  public:
    Expression();
    Expression(Complex c); // NOLINT: constants convert implicitly
    Expression(double c);  // NOLINT

    static Expression constant(Complex c);
    static Expression var(int i);
    static Expression conj_var(int i);
    /// t(w) for explicit arguments; `w` and `w_conj` must have the weights' length.
    static Expression implicit_t(ImplicitTSpec spec, std::vector<Expression> w,
                                 std::vector<Expression> w_conj);
    /// t(z) with the coordinate functions as arguments.
    static Expression implicit_t(ImplicitTSpec spec);

    static Expression make(Op op, std::vector<Expression> args, int exponent = 0);

    Op op() const noexcept;
    const std::vector<Expression>& args() const noexcept;
    /// Constant value (Op::constant only).
    Complex value() const noexcept;
    /// Variable index (var/conj_var) or exponent (int_pow).
    int index() const noexcept;
    const ImplicitTSpec& implicit_spec() const;

    std::size_t hash() const noexcept;
    /// One past the largest variable index referenced, 0 for constants.
    int variable_bound() const noexcept;
    /// True when no conjugate variable (or implicit_t node) occurs.
    bool is_holomorphic() const noexcept;

    bool is_constant() const noexcept { return op() == Op::constant; }
    bool is_zero() const noexcept;
    bool is_one() const noexcept;

    /// Structural equality.
    friend bool operator==(const Expression& a, const Expression& b);

    const void* id() const noexcept { return node_.get(); }

    std::string str() const;

    struct Node;

  private:
    explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct ExpressionHash {
    std::size_t operator()(const Expression& e) const noexcept { return e.hash(); }
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression operator-(const Expression& a);
Expression pow(const Expression& e, int k);
Expression exp(const Expression& e);
Expression log(const Expression& e);

/// sum_i z_i zbar_i over the first n variables.
Expression norm_squared(int n);

Expression wirtinger_d(const Expression& e, int i, Wirtinger which);

/// Complex conjugate as an expression (swaps z and zbar, conjugates constants).
Expression conjugate(const Expression& e);

/// Simultaneous substitution z_i -> z_map[i], zbar_i -> zbar_map[i].
Expression substitute(const Expression& e, std::span<const Expression> z_map,
                      std::span<const Expression> zbar_map);

///
/// Evaluates expressions at one point, memoizing shared subtrees.
///
/// Not thread-safe; create one per worker.
///
class Evaluator {
  public:
    explicit Evaluator(std::span<const Complex> point);

    Complex operator()(const Expression& e);

    const Point& point() const noexcept { return z_; }

  private:
    Complex eval(const Expression& e);
    Complex eval_implicit_t(const Expression& e);

    Point z_;
    Point zbar_;
    std::vector<Expression> roots_;
    std::unordered_map<const void*, Complex> cache_;
};

Complex evaluate(const Expression& e, std::span<const Complex> point);

/// F(t, w) = sum_i |w_i|^2 exp(2 r_i t) - 1.
double implicit_t_residual(std::span<const double> weights, double t,
                           std::span<const Complex> w);

///
/// Probabilistic equality: compares values at `num_points` seeded annulus
/// points. Evaluation failures count as inequality.
///
bool numerically_equal(const Expression& a, const Expression& b, int dim,
                       std::uint64_t seed = 1234, int num_points = 64, double tol = 1e-10);

} // namespace lck

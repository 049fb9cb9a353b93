#pragma once

#include <lck/expr.hpp>
#include <lck/sweep.hpp>

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lck {

///
/// Strictly increasing multi-index over the ordered basis
/// (dz_0, ..., dz_{n-1}, dzbar_0, ..., dzbar_{n-1}), stored as a bit set.
/// Basis id k < n is dz_k; id n + k is dzbar_k.
///
class MultiIndex {
  public:
    constexpr MultiIndex() = default;
    explicit constexpr MultiIndex(std::uint32_t bits) : bits_(bits) {}

    /// Throws if `ids` is not strictly increasing.
    static MultiIndex from_ids(std::span<const int> ids);

    constexpr std::uint32_t bits() const noexcept { return bits_; }
    int degree() const noexcept;
    std::vector<int> ids() const;
    constexpr bool contains(int id) const noexcept { return (bits_ >> id) & 1U; }
    /// Number of dz factors.
    int holomorphic_degree(int dim) const noexcept;
    /// Number of dzbar factors.
    int antiholomorphic_degree(int dim) const noexcept;

    std::string str(int dim) const;

    bool operator==(const MultiIndex&) const = default;
    /// Degree first, then lexicographic on the sorted ids.
    std::strong_ordering operator<=>(const MultiIndex& other) const noexcept;

  private:
    std::uint32_t bits_ = 0;
};

/// Sign of dI ^ dJ relative to d(I u J); 0 if I and J overlap.
int wedge_sign(MultiIndex a, MultiIndex b) noexcept;

inline constexpr int max_dimension = 16;

///
/// Complex differential form on a single chart of C^n with Expression
/// coefficients. Immutable; all operations return new forms.
///
class ExteriorForm {
  public:
    using Terms = std::map<MultiIndex, Expression>;

    /// The zero form of the given degree.
    ExteriorForm(int dim, int degree);
    /// Validates indices and prunes structurally-zero coefficients.
    ExteriorForm(int dim, int degree, Terms terms);

    static ExteriorForm function(int dim, Expression f);
    static ExteriorForm basis(int dim, int id);
    static ExteriorForm dz(int dim, int i) { return basis(dim, i); }
    static ExteriorForm dzbar(int dim, int i) { return basis(dim, dim + i); }

    int dim() const noexcept { return dim_; }
    int degree() const noexcept { return degree_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    /// Zero expression when the index is absent.
    Expression coefficient(MultiIndex idx) const;

    /// Equality of term maps with structurally equal coefficients.
    friend bool operator==(const ExteriorForm& a, const ExteriorForm& b);

    std::string str() const;

  private:
    int dim_;
    int degree_;
    Terms terms_;
};

ExteriorForm operator+(const ExteriorForm& a, const ExteriorForm& b);
ExteriorForm operator-(const ExteriorForm& a, const ExteriorForm& b);
ExteriorForm operator-(const ExteriorForm& a);
ExteriorForm operator*(const Expression& f, const ExteriorForm& a);

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b);

/// Holomorphic part of d: sum_i (df/dz_i) dz_i ^ dI.
ExteriorForm del(const ExteriorForm& a);
/// Antiholomorphic part of d: sum_i (df/dzbar_i) dzbar_i ^ dI.
ExteriorForm delbar(const ExteriorForm& a);
std::pair<ExteriorForm, ExteriorForm> del_and_delbar(const ExteriorForm& a);
/// d = del + delbar, summed as term maps.
ExteriorForm exterior_d(const ExteriorForm& a);

/// The (p, q) component.
ExteriorForm bidegree_part(const ExteriorForm& a, int p, int q);

/// Complex conjugate form.
ExteriorForm conjugate(const ExteriorForm& a);

/// Pullback along a holomorphic map z -> f(z). Throws FormError if some
/// component depends on a conjugate variable.
ExteriorForm pullback(std::span<const Expression> f, const ExteriorForm& a);

/// Numeric coefficients of a form at one point.
struct FormValue {
    int dim = 0;
    int degree = 0;
    std::map<MultiIndex, Complex> coefficients;

    Complex at(MultiIndex idx) const;
    /// Max absolute coefficient.
    double norm() const;
};

FormValue evaluate_form(const ExteriorForm& a, std::span<const Complex> point);
FormValue evaluate_form(const ExteriorForm& a, Evaluator& ev);

/// Max absolute coefficient difference over the union of indices.
double residual(const FormValue& a, const FormValue& b);

/// Per-point max |coefficient| of `a` over the sample points.
std::vector<double> residual_profile(const ExteriorForm& a, std::span<const Point> points,
                                     Exec exec = Exec::parallel);

// --- definiteness of (1,1)-forms -------------------------------------------

struct DefinitenessOptions {
    double type_tol = 1e-8;      ///< allowed (2,0)/(0,2) magnitude
    double hermitian_tol = 1e-10; ///< relative to ||H||
    double zero_tol = 1e-9;      ///< eigenvalues with |lambda| below this count as zero
    Exec exec = Exec::parallel;
};

///
/// Coefficient matrix of a (1,1)-form written as -i sum h_ij dz_i ^ dzbar_j,
/// i.e. h_ij = i * coeff(dz_i ^ dzbar_j).
///
struct HermitianMatrixSample {
    Point point;
    Eigen::MatrixXcd matrix;
    Eigen::VectorXd eigenvalues; ///< ascending
    double hermitian_deviation = 0.0;
    double mixed_residual = 0.0; ///< max |(2,0) and (0,2) coefficient|
    int sign = 0;                ///< +1 / -1 when semidefinite with nonzero part, 0 otherwise
    int zero_count = 0;
};

struct DefinitenessReport {
    std::vector<HermitianMatrixSample> samples;
    /// Common sign over all points, 0 if the sign changes or some point is indefinite.
    int sign = 0;
    /// Common sign and no zero eigenvalue anywhere.
    bool definite = false;
    /// Common sign with at least one zero eigenvalue somewhere.
    bool semidefinite = false;
    /// Rank when the same at every point, otherwise -1.
    int rank = -1;
    /// min over points and eigenvalues of sign * lambda (NaN when sign == 0).
    double min_signed_eigenvalue = 0.0;
};

HermitianMatrixSample hermitian_sample(const ExteriorForm& a, std::span<const Complex> point,
                                       const DefinitenessOptions& opts = {});

DefinitenessReport definiteness(const ExteriorForm& a, std::span<const Point> points,
                                const DefinitenessOptions& opts = {});

} // namespace lck

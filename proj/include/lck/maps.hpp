#pragma once

#include <lck/exact.hpp>
#include <lck/sampling.hpp>
#include <lck/sweep.hpp>

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lck {

inline constexpr int default_degree_cap = 16;

///
/// Holomorphic polynomial self-map of C^n fixing the origin, with invertible
/// linear part. Coefficients are exact.
///
class PolyAutomorphism {
  public:
    /// Throws MapError(singular_linear_part) or BadParameter on a constant term.
    explicit PolyAutomorphism(std::vector<Polynomial> components);

    static PolyAutomorphism identity(int n);
    static PolyAutomorphism linear(const Eigen::MatrixXcd& a);

    int dim() const noexcept { return static_cast<int>(components_.size()); }
    int degree() const;
    bool is_linear() const { return degree() <= 1; }
    const std::vector<Polynomial>& components() const noexcept { return components_; }

    Point operator()(std::span<const Complex> z) const;
    std::vector<Expression> to_expressions() const;

    friend bool operator==(const PolyAutomorphism&, const PolyAutomorphism&) = default;

  private:
    std::vector<Polynomial> components_;
};

/// Degree-1 coefficient matrix, read off exactly and rounded to double.
Eigen::MatrixXcd linear_part(const PolyAutomorphism& g);

/// g o h. Throws MapError(degree_overflow) when deg g * deg h exceeds the cap.
PolyAutomorphism compose(const PolyAutomorphism& g, const PolyAutomorphism& h,
                         int degree_cap = default_degree_cap);

/// T_t(z)_i = t^{k_i} z_i with signed integer weights.
struct ScalingMap {
    std::vector<int> weights;
    Complex t{1.0, 0.0};
};

/// T g T^{-1}, computed exactly: the coefficient of z^a in component i is
/// multiplied by t^{k_i - sum_j a_j k_j}.
PolyAutomorphism conjugate_by_scaling(const PolyAutomorphism& g, const ScalingMap& scaling);

///
/// The family t -> T_t g T_t^{-1} for fixed weights, with its coefficientwise
/// limit at t = 0.
///
class ScalingFamily {
  public:
    ScalingFamily(PolyAutomorphism base, std::vector<int> weights);

    const PolyAutomorphism& base() const noexcept { return base_; }
    const std::vector<int>& weights() const noexcept { return weights_; }

    PolyAutomorphism at(Complex t) const;
    /// Power of t multiplying the coefficient of `m` in `component`.
    int t_power(int component, const Monomial& m) const;
    /// Drops terms with positive t-power; throws MapError if a term has a
    /// negative power (the family does not extend to t = 0).
    PolyAutomorphism limit_at_zero() const;

  private:
    PolyAutomorphism base_;
    std::vector<int> weights_;
};

// --- contraction -----------------------------------------------------------

struct ContractionOptions {
    double radius = 1.0;
    double eps = 1e-6;
    int max_iter = 10000;
    std::uint64_t seed = 42;
    double divergence_bound = 1e6;
    Exec exec = Exec::parallel;
};

struct ContractionResult {
    bool is_contraction = false;
    /// Max over start points of the first k with |g^k(z)| < eps; -1 if not reached.
    int iterations_needed = -1;
    double spectral_radius = 0.0;
    /// Max |g^k(z)| at the iteration where each orbit stopped.
    double max_final_norm = 0.0;
    std::size_t num_points = 0;
    std::string reason;
};

double spectral_radius(const Eigen::MatrixXcd& a);

/// Number of start points used: 2 n^2 + 64.
std::size_t contraction_point_count(int n);

struct OrbitOutcome {
    int iterations = -1; ///< first k with |g^k(z)| < eps, -1 when max_iter is exhausted
    double final_norm = 0.0;
};

///
/// Iterates g from each start point. Throws MapError(iteration_diverged) if an
/// orbit leaves the divergence bound.
///
std::vector<OrbitOutcome> orbit_iterations(const PolyAutomorphism& g, std::span<const Point> starts,
                                  double eps, int max_iter, double divergence_bound,
                                  Exec exec = Exec::parallel);

ContractionResult contraction_test(const PolyAutomorphism& g, const ContractionOptions& opts = {});

// --- Jordan normal form ----------------------------------------------------

struct JordanBlock {
    Complex eigenvalue;
    int size = 1;
};

struct JordanOptions {
    double cluster_tol = 1e-8; ///< relative to max(1, ||A||)
    double rank_tol = 1e-8;    ///< singular values below rank_tol * max(1, ||A||) are zero
    int cluster_steps = 4;     ///< retries with the clustering radius widened 100x each time
};

struct JordanDecomposition {
    std::vector<JordanBlock> blocks;
    Eigen::MatrixXcd transform; ///< P with A = P J P^{-1}
    double reconstruction_residual = 0.0; ///< ||A - P J P^{-1}|| / ||A||

    Eigen::MatrixXcd jordan_matrix() const;
};

Eigen::MatrixXcd jordan_block(Complex alpha, int n);

/// Throws MapError(ill_conditioned) when no clustering radius in the ladder
/// gives a consistent chain structure with a well-conditioned transform.
JordanDecomposition jordan_form(const Eigen::MatrixXcd& a, const JordanOptions& opts = {});

// --- covering groups -------------------------------------------------------

///
/// G = H x| Z: a finite unitary group H and a cyclic generator phi.
///
/// The constructor checks unitarity, presence of the identity, and closure of H
/// under products and inverses. Whether phi is a contraction is left to
/// contraction_test.
///
class GroupSpec {
  public:
    GroupSpec(std::vector<Eigen::MatrixXcd> finite_part, PolyAutomorphism generator,
              double relation_tolerance = 1e-10);

    /// H = {I}.
    static GroupSpec cyclic(PolyAutomorphism generator);

    const std::vector<Eigen::MatrixXcd>& finite_part() const noexcept { return finite_part_; }
    const PolyAutomorphism& generator() const noexcept { return generator_; }
    double relation_tolerance() const noexcept { return relation_tolerance_; }
    int dim() const noexcept { return generator_.dim(); }

    /// The cyclic generator followed by the non-identity elements of H.
    std::vector<PolyAutomorphism> generators() const;

  private:
    std::vector<Eigen::MatrixXcd> finite_part_;
    PolyAutomorphism generator_;
    double relation_tolerance_;
};

/// All powers of `u` until the identity recurs (throws past max_order).
std::vector<Eigen::MatrixXcd> cyclic_unitary_group(const Eigen::MatrixXcd& u, int max_order = 1024,
                                                   double tol = 1e-10);

struct FixedPointReport {
    bool fixed_point_free = true;
    /// For each non-identity element of H: distance from 1 to its nearest eigenvalue.
    std::vector<double> distances;
    double min_distance = 0.0;
};

FixedPointReport fixed_point_free_check(const GroupSpec& group, double tol = 1e-10);

///
/// max over samples and components of
/// |Phi_r(t + k, e^{i p k} z) - phi^k(Phi_r(t, z))|, phi = diag(e^{-r_j + i p_j}).
///
double equivariance_check(std::span<const double> r, std::span<const double> p, int k,
                          std::span<const CylinderPoint> samples);

} // namespace lck

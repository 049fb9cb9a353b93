#pragma once

#include <lck/hopf.hpp>
#include <lck/sampling.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace lck {

struct Offender {
    std::size_t index = 0;
    Point point;
    double residual = 0.0;
};

///
/// Outcome of one check. `passed` is exactly (max_residual < tolerance).
///
/// Checks that certify a margin (definiteness, fixed-point freeness) report
/// the negated margin as residual and the negated threshold as tolerance.
///
struct VerificationReport {
    std::string check_name;
    bool passed = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::size_t num_points = 0;
    std::uint64_t seed = 0;
    std::vector<Offender> worst; ///< up to five points, largest residual first
    nlohmann::json details = nlohmann::json::object();
};

/// Builds a report from per-point residuals; NaN counts as failure.
VerificationReport make_report(std::string name, std::span<const double> residuals, const Samples& samples,
                               double tolerance);

nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(std::span<const VerificationReport> reports);

// --- Lee form recovery -----------------------------------------------------

struct LeeSolveResult {
    Point point;
    /// Coefficients on dz_0..dz_{n-1}, dzbar_0..dzbar_{n-1}.
    Eigen::VectorXcd theta_coeffs;
    double residual = 0.0;
    double reality_defect = 0.0;
};

inline constexpr double degenerate_omega_threshold = 1e-10;

///
/// Pointwise least-squares solve of d Omega = theta ^ Omega for theta.
/// Caches d Omega; safe to call concurrently.
///
class LeeSolver {
  public:
    explicit LeeSolver(ExteriorForm omega);

    /// Throws FormError(degenerate_omega) when |det| of the antisymmetric
    /// coefficient matrix is below the threshold.
    LeeSolveResult operator()(std::span<const Complex> point) const;

    const ExteriorForm& omega() const noexcept { return omega_; }

  private:
    ExteriorForm omega_;
    ExteriorForm d_omega_;
};

LeeSolveResult solve_lee_pointwise(const ExteriorForm& omega, std::span<const Complex> point);

std::vector<LeeSolveResult> solve_lee(const ExteriorForm& omega, std::span<const Point> points,
                                      Exec exec = Exec::parallel);

// --- individual checks -----------------------------------------------------

struct CheckOptions {
    double tolerance = 1e-10;
    Exec exec = Exec::parallel;
    DefinitenessOptions definiteness{};
};

/// max_p max(|d Omega - theta ^ Omega|, |d theta|), with the definiteness of
/// the (1,1) part of Omega recorded in the details.
VerificationReport verify_lck(const ExteriorForm& omega, const ExteriorForm& theta, const Samples& samples,
                              const CheckOptions& opts = {});

/// |d Omega - theta ^ Omega| only.
VerificationReport verify_lck_identity(const ExteriorForm& omega, const ExteriorForm& theta,
                                       const Samples& samples, const CheckOptions& opts = {});

/// |d a|.
VerificationReport verify_closed(const std::string& name, const ExteriorForm& a, const Samples& samples,
                                 const CheckOptions& opts = {});

/// Passes when the (1,1) part has one sign and no eigenvalue within
/// zero_tol of 0 at every sample point.
VerificationReport verify_definite(const std::string& name, const ExteriorForm& a, const Samples& samples,
                                   const CheckOptions& opts = {});

struct PotentialReports {
    VerificationReport closedness;   ///< d omega_tilde = 0
    VerificationReport definiteness; ///< omega_tilde = -i del delbar Phi
    VerificationReport homothety;    ///< Phi(gamma z) / Phi(z) constant

    std::vector<VerificationReport> all() const { return {closedness, definiteness, homothety}; }
};

/// Throws NonPositivePotential if Phi is not real and positive on the samples.
PotentialReports verify_potential(const Expression& phi, std::span<const PolyAutomorphism> generators,
                                  const Samples& samples, const CheckOptions& opts = {});
PotentialReports verify_potential(const Expression& phi, const GroupSpec& group, const Samples& samples,
                                  const CheckOptions& opts = {});

/// max_p |g^* a - a|.
VerificationReport verify_invariance(const ExteriorForm& a, const PolyAutomorphism& g, const Samples& samples,
                                     const CheckOptions& opts = {}, const std::string& name = "invariance");

VerificationReport verify_fixed_point_free(const GroupSpec& group, double tol = 1e-10);

VerificationReport verify_contraction(const PolyAutomorphism& g, const ContractionOptions& opts = {});

// --- suite -----------------------------------------------------------------

struct SuiteConfig {
    std::size_t points = 1000;
    std::uint64_t seed = 42;
    std::optional<double> tolerance; ///< defaults to the entry's
    Exec exec = Exec::parallel;
    ContractionOptions contraction{};
};

///
/// Fixed order: lcK identity, Lee closedness, definiteness, potential checks,
/// invariance of each listed form under each generator, fixed-point freeness,
/// contraction. Evaluation failures become failing reports.
///
std::vector<VerificationReport> run_suite(const CatalogEntry& entry, const SuiteConfig& config = {});

bool all_passed(std::span<const VerificationReport> reports);

} // namespace lck

#pragma once

#include <lck/forms.hpp>
#include <lck/maps.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lck {

///
/// A ready-made Hopf manifold W/G with the forms that live on it.
///
/// Form keys used by the suite: "Omega" and "theta" (lcK pair), "psi",
/// "fubini_study", "omega_tilde". `invariant_forms` lists the forms whose
/// invariance under the group generators is checked.
///
struct CatalogEntry {
    std::string name;
    int dim = 2;
    std::map<std::string, ExteriorForm> forms;
    std::vector<std::string> invariant_forms;
    std::optional<Expression> potential;
    GroupSpec group;
    std::map<std::string, Complex> parameters;
    double default_tolerance = 1e-10;

    bool has_form(const std::string& key) const { return forms.count(key) != 0; }
    const ExteriorForm& form(const std::string& key) const;
};

/// Omega, theta, psi and the Fubini-Study form of the standard Hopf surface,
/// with G generated by z -> z / mu. Throws BadParameter unless |mu| > 1.
CatalogEntry example1_entry(Complex mu);

struct PotentialDatum {
    Expression potential;
    GroupSpec group;
};

/// Phi = sum |z_i|^2 on C^n with G generated by z -> z / mu.
PotentialDatum example2_potential(int n, Complex mu);
CatalogEntry example2_entry(int n, Complex mu);

/// (z_0, z_1) -> (alpha z_0 + t z_1, alpha z_1). Throws unless 0 < |alpha| < 1.
PolyAutomorphism kodaira_family(Complex alpha, Complex t);
/// Group data only: no explicit lcK form is attached.
CatalogEntry kodaira_entry(Complex alpha, Complex t);

/// g_t = t^{-1} g(t z): g_1 = g, degree-k terms carry t^{k-1}, g_0 = L(g).
ScalingFamily family_to_linear(const PolyAutomorphism& g);

/// A_t = T_t A T_t^{-1} with weights (n-1, ..., 1, 0): superdiagonal 1s become
/// t, A_0 is the diagonal. Throws MapError(not_jordan) unless A is in Jordan
/// form to within 1e-12.
ScalingFamily family_to_diagonal(const Eigen::MatrixXcd& a);

/// t(w) with sum_i |w_i|^2 exp(2 r_i t(w)) = 1.
Expression implicit_time(std::span<const double> r);

///
/// Weighted Sasaki form carried to W by (t, z) -> (e^{-r_i t} z_i):
///   i (sum r_i |w_i|^2 E_i)^{-1} sum E_i (w_i dwbar_i - wbar_i dw_i),  E_i = e^{2 r_i t(w)}.
/// Agrees with the sphere formula where |w| = 1.
///
ExteriorForm weighted_sasaki(std::span<const double> r);

/// i (sum r_i |z_i|^2)^{-1} sum (z_i dzbar_i - zbar_i dz_i), read on W as is.
ExteriorForm weighted_sasaki_on_sphere(std::span<const double> r);

///
/// theta = dt, psi = weighted_sasaki(r), Omega = -theta ^ psi + d psi, the
/// potential e^{-t}, and G generated by diag(e^{-r_i + i p_i}).
/// Throws BadParameter unless every r_i > 0 and p_i != 0.
///
CatalogEntry vaisman_entry(std::span<const double> r, std::span<const double> p);

struct CatalogParameters {
    Complex mu{2.0, 0.0};
    Complex alpha{0.5, 0.0};
    Complex t{1.0, 0.0};
    int n = 2;
    std::vector<double> r{1.0, 1.5};
    std::vector<double> p{1.0, 2.0};
};

std::vector<std::string> catalog_names();

/// Throws UnknownEntry with the list of valid names.
CatalogEntry catalog_entry(const std::string& name, const CatalogParameters& params = {});

} // namespace lck

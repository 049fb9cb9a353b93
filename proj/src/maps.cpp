#include <lck/maps.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace lck {

namespace {

Monomial unit_monomial(int n, int j)
{
    Monomial m(static_cast<std::size_t>(n), 0);
    m[static_cast<std::size_t>(j)] = 1;
    return m;
}

Eigen::MatrixXcd exact_linear_part(const std::vector<Polynomial>& comps)
{
    const int n = static_cast<int>(comps.size());
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = comps[static_cast<std::size_t>(i)].coefficient(unit_monomial(n, j)).to_complex();
        }
    }
    return a;
}

} // namespace

PolyAutomorphism::PolyAutomorphism(std::vector<Polynomial> components)
    : components_(std::move(components))
{
    const int n = dim();
    if (n < 1) throw DimensionMismatch("automorphism needs at least one component");
    const Monomial zero(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < components_.size(); ++i) {
        if (components_[i].dim() != n) {
            throw DimensionMismatch("component " + std::to_string(i) + " has dimension " +
                                    std::to_string(components_[i].dim()) + ", expected " +
                                    std::to_string(n));
        }
        if (!components_[i].coefficient(zero).is_zero()) {
            throw BadParameter("component " + std::to_string(i) +
                               " has a constant term; automorphisms must fix the origin");
        }
    }
    const Complex det = exact_linear_part(components_).determinant();
    if (std::abs(det) < 1e-12) {
        throw MapError(MapError::Kind::singular_linear_part,
                       "linear part is singular (|det| = " + std::to_string(std::abs(det)) + ")");
    }
}

PolyAutomorphism PolyAutomorphism::identity(int n)
{
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) comps.push_back(Polynomial::variable(n, i));
    return PolyAutomorphism(std::move(comps));
}

PolyAutomorphism PolyAutomorphism::linear(const Eigen::MatrixXcd& a)
{
    if (a.rows() != a.cols() || a.rows() < 1) throw DimensionMismatch("linear map needs a square matrix");
    const int n = static_cast<int>(a.rows());
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) {
        Polynomial::Terms t;
        for (int j = 0; j < n; ++j) {
            const ExactComplex c = ExactComplex::from(a(i, j));
            if (!c.is_zero()) t.emplace(unit_monomial(n, j), c);
        }
        comps.emplace_back(n, std::move(t));
    }
    return PolyAutomorphism(std::move(comps));
}

int PolyAutomorphism::degree() const
{
    int d = 0;
    for (const auto& c : components_) d = std::max(d, c.degree());
    return d;
}

Point PolyAutomorphism::operator()(std::span<const Complex> z) const
{
    Point out;
    out.reserve(components_.size());
    for (const auto& c : components_) out.push_back(c(z));
    return out;
}

std::vector<Expression> PolyAutomorphism::to_expressions() const
{
    std::vector<Expression> out;
    for (const auto& c : components_) out.push_back(c.to_expression());
    return out;
}

Eigen::MatrixXcd linear_part(const PolyAutomorphism& g) { return exact_linear_part(g.components()); }

PolyAutomorphism compose(const PolyAutomorphism& g, const PolyAutomorphism& h, int degree_cap)
{
    if (g.dim() != h.dim()) throw DimensionMismatch("compose: dimension mismatch");
    const int bound = g.degree() * h.degree();
    if (bound > degree_cap) {
        throw MapError(MapError::Kind::degree_overflow,
                       "composition degree " + std::to_string(bound) + " exceeds the cap " +
                           std::to_string(degree_cap));
    }
    const int n = g.dim();
    // powers[j][e] = h_j^e
    std::vector<std::vector<Polynomial>> powers(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        auto& pj = powers[static_cast<std::size_t>(j)];
        pj.push_back(Polynomial::constant(n, ExactComplex(1)));
    }
    const auto power = [&](int j, int e) -> const Polynomial& {
        auto& pj = powers[static_cast<std::size_t>(j)];
        while (static_cast<int>(pj.size()) <= e) pj.push_back(pj.back() * h.components()[static_cast<std::size_t>(j)]);
        return pj[static_cast<std::size_t>(e)];
    };

    std::vector<Polynomial> comps;
    for (const auto& gi : g.components()) {
        Polynomial sum(n);
        for (const auto& [m, c] : gi.terms()) {
            Polynomial term = Polynomial::constant(n, c);
            for (int j = 0; j < n; ++j) {
                const int e = m[static_cast<std::size_t>(j)];
                if (e > 0) term = term * power(j, e);
            }
            sum = sum + term;
        }
        comps.push_back(std::move(sum));
    }
    return PolyAutomorphism(std::move(comps));
}

PolyAutomorphism conjugate_by_scaling(const PolyAutomorphism& g, const ScalingMap& scaling)
{
    const int n = g.dim();
    if (scaling.weights.size() != static_cast<std::size_t>(n)) {
        throw DimensionMismatch("scaling weights must match the map's dimension");
    }
    const ExactComplex t = ExactComplex::from(scaling.t);
    if (t.is_zero()) throw BadParameter("scaling parameter t must be nonzero");
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) {
        Polynomial::Terms terms;
        for (const auto& [m, c] : g.components()[static_cast<std::size_t>(i)].terms()) {
            int power = scaling.weights[static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                power -= m[static_cast<std::size_t>(j)] * scaling.weights[static_cast<std::size_t>(j)];
            }
            terms.emplace(m, c * t.pow(power));
        }
        comps.emplace_back(n, std::move(terms));
    }
    return PolyAutomorphism(std::move(comps));
}

ScalingFamily::ScalingFamily(PolyAutomorphism base, std::vector<int> weights)
    : base_(std::move(base)), weights_(std::move(weights))
{
    if (weights_.size() != static_cast<std::size_t>(base_.dim())) {
        throw DimensionMismatch("scaling weights must match the map's dimension");
    }
}

PolyAutomorphism ScalingFamily::at(Complex t) const
{
    return conjugate_by_scaling(base_, ScalingMap{weights_, t});
}

int ScalingFamily::t_power(int component, const Monomial& m) const
{
    int power = weights_.at(static_cast<std::size_t>(component));
    for (std::size_t j = 0; j < m.size(); ++j) power -= m[j] * weights_[j];
    return power;
}

PolyAutomorphism ScalingFamily::limit_at_zero() const
{
    const int n = base_.dim();
    std::vector<Polynomial> comps;
    for (int i = 0; i < n; ++i) {
        Polynomial::Terms terms;
        for (const auto& [m, c] : base_.components()[static_cast<std::size_t>(i)].terms()) {
            const int power = t_power(i, m);
            if (power < 0) {
                throw MapError(MapError::Kind::degree_overflow,
                               "family coefficient carries t^" + std::to_string(power) +
                                   " and diverges as t -> 0");
            }
            if (power == 0) terms.emplace(m, c);
        }
        comps.emplace_back(n, std::move(terms));
    }
    return PolyAutomorphism(std::move(comps));
}

// --- contraction -----------------------------------------------------------

double spectral_radius(const Eigen::MatrixXcd& a)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::size_t contraction_point_count(int n) { return static_cast<std::size_t>(2 * n * n + 64); }

std::vector<OrbitOutcome> orbit_iterations(const PolyAutomorphism& g, std::span<const Point> starts,
                                           double eps, int max_iter, double divergence_bound,
                                           Exec exec)
{
    return sweep::map_indexed(
        starts.size(),
        [&](std::size_t i) {
            Point z = starts[i];
            OrbitOutcome out;
            for (int k = 0;; ++k) {
                const double r = norm(z);
                out.final_norm = r;
                if (r < eps) {
                    out.iterations = k;
                    return out;
                }
                if (!(r <= divergence_bound)) {
                    throw MapError(MapError::Kind::iteration_diverged,
                                   "orbit of start point " + std::to_string(i) + " reached norm " +
                                       std::to_string(r) + " after " + std::to_string(k) + " steps");
                }
                if (k == max_iter) return out;
                z = g(z);
            }
        },
        exec);
}

ContractionResult contraction_test(const PolyAutomorphism& g, const ContractionOptions& opts)
{
    if (!(opts.radius > 0.0) || !(opts.eps > 0.0) || opts.max_iter < 1) {
        throw BadParameter("contraction test needs radius > 0, eps > 0 and max_iter >= 1");
    }
    ContractionResult r;
    r.spectral_radius = spectral_radius(linear_part(g));
    if (!(r.spectral_radius < 1.0)) {
        r.reason = "spectral radius of the linear part is not below 1";
        return r;
    }
    const auto starts = sphere_points(g.dim(), contraction_point_count(g.dim()), opts.radius, opts.seed);
    r.num_points = starts.size();
    const auto orbits =
        orbit_iterations(g, starts, opts.eps, opts.max_iter, opts.divergence_bound, opts.exec);
    r.iterations_needed = 0;
    for (const auto& o : orbits) {
        r.max_final_norm = std::max(r.max_final_norm, o.final_norm);
        if (o.iterations < 0) {
            r.iterations_needed = -1;
        } else if (r.iterations_needed >= 0) {
            r.iterations_needed = std::max(r.iterations_needed, o.iterations);
        }
    }
    r.is_contraction = r.iterations_needed >= 0;
    if (!r.is_contraction) r.reason = "some orbit did not reach eps within max_iter";
    return r;
}

// --- groups ----------------------------------------------------------------

namespace {

bool contains_matrix(const std::vector<Eigen::MatrixXcd>& set, const Eigen::MatrixXcd& m, double tol)
{
    for (const auto& s : set) {
        if ((s - m).norm() < tol) return true;
    }
    return false;
}

} // namespace

GroupSpec::GroupSpec(std::vector<Eigen::MatrixXcd> finite_part, PolyAutomorphism generator,
                     double relation_tolerance)
    : finite_part_(std::move(finite_part)), generator_(std::move(generator)),
      relation_tolerance_(relation_tolerance)
{
    const int n = generator_.dim();
    if (finite_part_.empty()) throw BadParameter("finite part must contain at least the identity");
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    for (std::size_t k = 0; k < finite_part_.size(); ++k) {
        const auto& u = finite_part_[k];
        if (u.rows() != n || u.cols() != n) {
            throw DimensionMismatch("finite part element " + std::to_string(k) + " has the wrong size");
        }
        if ((u.adjoint() * u - id).norm() >= relation_tolerance_) {
            throw BadParameter("finite part element " + std::to_string(k) + " is not unitary");
        }
    }
    if (!contains_matrix(finite_part_, id, relation_tolerance_)) {
        throw BadParameter("finite part must contain the identity");
    }
    for (const auto& u : finite_part_) {
        if (!contains_matrix(finite_part_, u.adjoint(), relation_tolerance_)) {
            throw BadParameter("finite part is not closed under inverses");
        }
        for (const auto& v : finite_part_) {
            if (!contains_matrix(finite_part_, u * v, relation_tolerance_)) {
                throw BadParameter("finite part is not closed under products");
            }
        }
    }
}

GroupSpec GroupSpec::cyclic(PolyAutomorphism generator)
{
    const int n = generator.dim();
    return GroupSpec({Eigen::MatrixXcd::Identity(n, n)}, std::move(generator));
}

std::vector<PolyAutomorphism> GroupSpec::generators() const
{
    std::vector<PolyAutomorphism> out{generator_};
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim(), dim());
    for (const auto& u : finite_part_) {
        if ((u - id).norm() >= relation_tolerance_) out.push_back(PolyAutomorphism::linear(u));
    }
    return out;
}

std::vector<Eigen::MatrixXcd> cyclic_unitary_group(const Eigen::MatrixXcd& u, int max_order, double tol)
{
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    std::vector<Eigen::MatrixXcd> out{id};
    Eigen::MatrixXcd p = u;
    while ((p - id).norm() >= tol) {
        if (static_cast<int>(out.size()) >= max_order) {
            throw BadParameter("matrix does not generate a finite group of order <= " +
                               std::to_string(max_order));
        }
        out.push_back(p);
        p = p * u;
    }
    return out;
}

FixedPointReport fixed_point_free_check(const GroupSpec& group, double tol)
{
    FixedPointReport r;
    r.min_distance = std::numeric_limits<double>::infinity();
    const int n = group.dim();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    for (const auto& u : group.finite_part()) {
        if ((u - id).norm() < group.relation_tolerance()) continue;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
        const double d = (solver.eigenvalues().array() - Complex(1.0, 0.0)).abs().minCoeff();
        r.distances.push_back(d);
        r.min_distance = std::min(r.min_distance, d);
        if (d <= tol) r.fixed_point_free = false;
    }
    return r;
}

double equivariance_check(std::span<const double> r, std::span<const double> p, int k,
                          std::span<const CylinderPoint> samples)
{
    if (r.size() != p.size()) throw DimensionMismatch("equivariance: r and p lengths differ");
    for (double ri : r) {
        if (!(ri > 0.0)) throw BadParameter("equivariance: weights r_i must be > 0");
    }
    const std::size_t n = r.size();
    double worst = 0.0;
    for (const auto& s : samples) {
        if (s.z.size() != n) throw DimensionMismatch("equivariance: sample dimension mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            // Left: Phi_r at the translated, rotated point.
            const Complex lhs = std::exp(-r[j] * (s.t + k)) * std::polar(1.0, p[j] * k) * s.z[j];
            // Right: k applications of the linear generator to Phi_r(t, z).
            const Complex lambda = std::exp(Complex(-r[j], p[j]));
            Complex rhs = std::exp(-r[j] * s.t) * s.z[j];
            for (int step = 0; step < std::abs(k); ++step) rhs = k > 0 ? rhs * lambda : rhs / lambda;
            worst = std::max(worst, std::abs(lhs - rhs));
        }
    }
    return worst;
}

} // namespace lck

#include <lck/forms.hpp>

#include <Eigen/Eigenvalues>

#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace lck {

// --- MultiIndex ------------------------------------------------------------

MultiIndex MultiIndex::from_ids(std::span<const int> ids)
{
    std::uint32_t bits = 0;
    int prev = -1;
    for (int id : ids) {
        if (id <= prev || id >= 2 * max_dimension) {
            throw DimensionMismatch("multi-index ids must be strictly increasing and < 32");
        }
        bits |= 1U << id;
        prev = id;
    }
    return MultiIndex(bits);
}

int MultiIndex::degree() const noexcept { return std::popcount(bits_); }

std::vector<int> MultiIndex::ids() const
{
    std::vector<int> out;
    for (std::uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
}

int MultiIndex::holomorphic_degree(int dim) const noexcept
{
    return std::popcount(bits_ & ((1U << dim) - 1U));
}

int MultiIndex::antiholomorphic_degree(int dim) const noexcept
{
    return degree() - holomorphic_degree(dim);
}

std::string MultiIndex::str(int dim) const
{
    std::ostringstream os;
    bool first = true;
    for (int id : ids()) {
        if (!first) os << '^';
        first = false;
        if (id < dim) {
            os << "dz" << id;
        } else {
            os << "dzb" << id - dim;
        }
    }
    if (first) os << '1';
    return os.str();
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const noexcept
{
    if (auto c = degree() <=> other.degree(); c != 0) return c;
    const std::uint32_t diff = bits_ ^ other.bits_;
    if (diff == 0) return std::strong_ordering::equal;
    // The index holding the lowest differing id is lexicographically smaller.
    const std::uint32_t low = diff & (~diff + 1U);
    return (bits_ & low) ? std::strong_ordering::less : std::strong_ordering::greater;
}

int wedge_sign(MultiIndex a, MultiIndex b) noexcept
{
    if (a.bits() & b.bits()) return 0;
    int swaps = 0;
    for (std::uint32_t bb = b.bits(); bb; bb &= bb - 1) {
        const int j = std::countr_zero(bb);
        const std::uint32_t above = j >= 31 ? 0U : ~((2U << j) - 1U);
        swaps += std::popcount(a.bits() & above);
    }
    return (swaps & 1) ? -1 : 1;
}

// --- ExteriorForm ----------------------------------------------------------

namespace {

void check_dim(int dim)
{
    if (dim < 1 || dim > max_dimension) {
        throw DimensionMismatch("form dimension must be in [1, " + std::to_string(max_dimension) + "]");
    }
}

void check_same(const ExteriorForm& a, const ExteriorForm& b, const char* what)
{
    if (a.dim() != b.dim()) throw DimensionMismatch(std::string(what) + ": dimension mismatch");
}

void accumulate(ExteriorForm::Terms& terms, MultiIndex idx, const Expression& c)
{
    if (c.is_zero()) return;
    auto [it, inserted] = terms.try_emplace(idx, c);
    if (!inserted) it->second = it->second + c;
}

} // namespace

ExteriorForm::ExteriorForm(int dim, int degree) : dim_(dim), degree_(degree)
{
    check_dim(dim);
    if (degree < 0 || degree > 2 * dim) throw DimensionMismatch("form degree out of range");
}

ExteriorForm::ExteriorForm(int dim, int degree, Terms terms) : ExteriorForm(dim, degree)
{
    const std::uint32_t allowed = dim == 16 ? 0xFFFFFFFFU : (1U << (2 * dim)) - 1U;
    for (auto& [idx, c] : terms) {
        if (idx.degree() != degree || (idx.bits() & ~allowed)) {
            throw DimensionMismatch("term index " + idx.str(dim) + " does not fit the form");
        }
        if (static_cast<int>(c.variable_bound()) > dim) {
            throw DimensionMismatch("coefficient uses a variable beyond the form's dimension");
        }
        if (!c.is_zero()) terms_.emplace(idx, std::move(c));
    }
}

ExteriorForm ExteriorForm::function(int dim, Expression f)
{
    Terms t;
    t.emplace(MultiIndex{}, std::move(f));
    return ExteriorForm(dim, 0, std::move(t));
}

ExteriorForm ExteriorForm::basis(int dim, int id)
{
    check_dim(dim);
    if (id < 0 || id >= 2 * dim) throw DimensionMismatch("basis id out of range");
    Terms t;
    t.emplace(MultiIndex(1U << id), Expression(1.0));
    return ExteriorForm(dim, 1, std::move(t));
}

Expression ExteriorForm::coefficient(MultiIndex idx) const
{
    auto it = terms_.find(idx);
    return it == terms_.end() ? Expression(0.0) : it->second;
}

bool operator==(const ExteriorForm& a, const ExteriorForm& b)
{
    if (a.dim_ != b.dim_ || a.degree_ != b.degree_ || a.terms_.size() != b.terms_.size()) {
        return false;
    }
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib) {
        if (!(ia->first == ib->first) || !(ia->second == ib->second)) return false;
    }
    return true;
}

std::string ExteriorForm::str() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [idx, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '[' << c.str() << "] " << idx.str(dim_);
    }
    return os.str();
}

ExteriorForm operator+(const ExteriorForm& a, const ExteriorForm& b)
{
    check_same(a, b, "form sum");
    if (a.degree() != b.degree()) throw DimensionMismatch("form sum: degree mismatch");
    ExteriorForm::Terms t = a.terms();
    for (const auto& [idx, c] : b.terms()) accumulate(t, idx, c);
    return ExteriorForm(a.dim(), a.degree(), std::move(t));
}

ExteriorForm operator-(const ExteriorForm& a)
{
    ExteriorForm::Terms t;
    for (const auto& [idx, c] : a.terms()) t.emplace(idx, -c);
    return ExteriorForm(a.dim(), a.degree(), std::move(t));
}

ExteriorForm operator-(const ExteriorForm& a, const ExteriorForm& b)
{
    check_same(a, b, "form difference");
    if (a.degree() != b.degree()) throw DimensionMismatch("form difference: degree mismatch");
    ExteriorForm::Terms t = a.terms();
    for (const auto& [idx, c] : b.terms()) {
        auto [it, inserted] = t.try_emplace(idx, -c);
        if (!inserted) it->second = it->second - c;
    }
    return ExteriorForm(a.dim(), a.degree(), std::move(t));
}

ExteriorForm operator*(const Expression& f, const ExteriorForm& a)
{
    ExteriorForm::Terms t;
    for (const auto& [idx, c] : a.terms()) t.emplace(idx, f * c);
    return ExteriorForm(a.dim(), a.degree(), std::move(t));
}

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b)
{
    check_same(a, b, "wedge");
    const int degree = a.degree() + b.degree();
    if (degree > 2 * a.dim()) return ExteriorForm(a.dim(), 2 * a.dim());
    ExteriorForm::Terms t;
    for (const auto& [ia, ca] : a.terms()) {
        for (const auto& [ib, cb] : b.terms()) {
            const int s = wedge_sign(ia, ib);
            if (s == 0) continue;
            const Expression c = s > 0 ? ca * cb : -(ca * cb);
            accumulate(t, MultiIndex(ia.bits() | ib.bits()), c);
        }
    }
    return ExteriorForm(a.dim(), degree, std::move(t));
}

namespace {

ExteriorForm directional_d(const ExteriorForm& a, Wirtinger which)
{
    const int n = a.dim();
    if (a.degree() == 2 * n) return ExteriorForm(n, 2 * n);
    ExteriorForm::Terms t;
    for (const auto& [idx, c] : a.terms()) {
        for (int i = 0; i < n; ++i) {
            const int id = which == Wirtinger::dz ? i : n + i;
            const MultiIndex one(1U << id);
            const int s = wedge_sign(one, idx);
            if (s == 0) continue;
            const Expression dc = wirtinger_d(c, i, which);
            if (dc.is_zero()) continue;
            accumulate(t, MultiIndex(one.bits() | idx.bits()), s > 0 ? dc : -dc);
        }
    }
    return ExteriorForm(n, a.degree() + 1, std::move(t));
}

} // namespace

ExteriorForm del(const ExteriorForm& a) { return directional_d(a, Wirtinger::dz); }
ExteriorForm delbar(const ExteriorForm& a) { return directional_d(a, Wirtinger::dzbar); }

std::pair<ExteriorForm, ExteriorForm> del_and_delbar(const ExteriorForm& a)
{
    return {del(a), delbar(a)};
}

ExteriorForm exterior_d(const ExteriorForm& a)
{
    auto [d1, d2] = del_and_delbar(a);
    return d1 + d2;
}

ExteriorForm bidegree_part(const ExteriorForm& a, int p, int q)
{
    ExteriorForm::Terms t;
    if (p + q == a.degree()) {
        for (const auto& [idx, c] : a.terms()) {
            if (idx.holomorphic_degree(a.dim()) == p) t.emplace(idx, c);
        }
    }
    return ExteriorForm(a.dim(), a.degree(), std::move(t));
}

ExteriorForm conjugate(const ExteriorForm& a)
{
    const int n = a.dim();
    ExteriorForm result(n, a.degree());
    for (const auto& [idx, c] : a.terms()) {
        ExteriorForm piece = ExteriorForm::function(n, conjugate(c));
        for (int id : idx.ids()) {
            piece = wedge(piece, ExteriorForm::basis(n, id < n ? id + n : id - n));
        }
        result = result + piece;
    }
    return result;
}

ExteriorForm pullback(std::span<const Expression> f, const ExteriorForm& a)
{
    const int n = a.dim();
    if (f.size() != static_cast<std::size_t>(n)) {
        throw DimensionMismatch("pullback: map has " + std::to_string(f.size()) +
                                " components, form lives in dimension " + std::to_string(n));
    }
    std::vector<Expression> fbar;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!f[i].is_holomorphic()) {
            throw FormError(FormError::Kind::non_holomorphic_map,
                            "pullback: component " + std::to_string(i) +
                                " depends on a conjugate variable");
        }
        fbar.push_back(conjugate(f[i]));
    }

    // Images of the basis covectors: dz_i -> sum_j df_i/dz_j dz_j and its conjugate.
    std::vector<ExteriorForm> image;
    image.reserve(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        ExteriorForm::Terms t;
        for (int j = 0; j < n; ++j) {
            t.emplace(MultiIndex(1U << j), wirtinger_d(f[static_cast<std::size_t>(i)], j, Wirtinger::dz));
        }
        image.emplace_back(n, 1, std::move(t));
    }
    for (int i = 0; i < n; ++i) {
        ExteriorForm::Terms t;
        for (int j = 0; j < n; ++j) {
            t.emplace(MultiIndex(1U << (n + j)),
                      wirtinger_d(fbar[static_cast<std::size_t>(i)], j, Wirtinger::dzbar));
        }
        image.emplace_back(n, 1, std::move(t));
    }

    ExteriorForm result(n, a.degree());
    for (const auto& [idx, c] : a.terms()) {
        ExteriorForm piece = ExteriorForm::function(n, substitute(c, f, fbar));
        for (int id : idx.ids()) piece = wedge(piece, image[static_cast<std::size_t>(id)]);
        result = result + piece;
    }
    return result;
}

// --- evaluation ------------------------------------------------------------

Complex FormValue::at(MultiIndex idx) const
{
    auto it = coefficients.find(idx);
    return it == coefficients.end() ? Complex{} : it->second;
}

double FormValue::norm() const
{
    double m = 0.0;
    for (const auto& [idx, c] : coefficients) m = std::max(m, std::abs(c));
    return m;
}

FormValue evaluate_form(const ExteriorForm& a, Evaluator& ev)
{
    FormValue v{a.dim(), a.degree(), {}};
    for (const auto& [idx, c] : a.terms()) {
        try {
            v.coefficients.emplace(idx, ev(c));
        } catch (const EvaluationError& e) {
            throw EvaluationError(e.kind(), e.point(),
                                  std::string(e.what()) + " (coefficient of " + idx.str(a.dim()) + ")");
        }
    }
    return v;
}

FormValue evaluate_form(const ExteriorForm& a, std::span<const Complex> point)
{
    if (point.size() != static_cast<std::size_t>(a.dim())) {
        throw DimensionMismatch("evaluate_form: point dimension differs from the form's");
    }
    Evaluator ev(point);
    return evaluate_form(a, ev);
}

double residual(const FormValue& a, const FormValue& b)
{
    double m = 0.0;
    for (const auto& [idx, c] : a.coefficients) m = std::max(m, std::abs(c - b.at(idx)));
    for (const auto& [idx, c] : b.coefficients) {
        if (!a.coefficients.contains(idx)) m = std::max(m, std::abs(c));
    }
    return m;
}

std::vector<double> residual_profile(const ExteriorForm& a, std::span<const Point> points, Exec exec)
{
    return sweep::map_indexed(
        points.size(), [&](std::size_t i) { return evaluate_form(a, points[i]).norm(); }, exec);
}

// --- definiteness ----------------------------------------------------------

HermitianMatrixSample hermitian_sample(const ExteriorForm& a, std::span<const Complex> point,
                                       const DefinitenessOptions& opts)
{
    const int n = a.dim();
    if (a.degree() != 2) throw FormError(FormError::Kind::not_type11, "definiteness needs a 2-form");
    const FormValue v = evaluate_form(a, point);

    HermitianMatrixSample s;
    s.point.assign(point.begin(), point.end());
    s.matrix = Eigen::MatrixXcd::Zero(n, n);
    const Complex i_unit(0.0, 1.0);
    for (const auto& [idx, c] : v.coefficients) {
        if (idx.holomorphic_degree(n) != 1) {
            s.mixed_residual = std::max(s.mixed_residual, std::abs(c));
            continue;
        }
        const auto ids = idx.ids();
        s.matrix(ids[0], ids[1] - n) = i_unit * c;
    }
    if (s.mixed_residual >= opts.type_tol) {
        throw FormError(FormError::Kind::not_type11,
                        "form has (2,0)/(0,2) part of size " + std::to_string(s.mixed_residual) +
                            " at " + format_point(s.point));
    }
    const double scale = s.matrix.norm();
    s.hermitian_deviation = (s.matrix - s.matrix.adjoint()).norm();
    if (s.hermitian_deviation > opts.hermitian_tol * scale) {
        throw FormError(FormError::Kind::non_hermitian,
                        "coefficient matrix is not Hermitian at " + format_point(s.point));
    }
    const Eigen::MatrixXcd h = 0.5 * (s.matrix + s.matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
    s.eigenvalues = solver.eigenvalues();

    int pos = 0;
    int neg = 0;
    for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
        const double lam = s.eigenvalues[k];
        if (lam > opts.zero_tol) {
            ++pos;
        } else if (lam < -opts.zero_tol) {
            ++neg;
        } else {
            ++s.zero_count;
        }
    }
    s.sign = (pos > 0 && neg == 0) ? 1 : (neg > 0 && pos == 0) ? -1 : 0;
    return s;
}

DefinitenessReport definiteness(const ExteriorForm& a, std::span<const Point> points,
                                const DefinitenessOptions& opts)
{
    DefinitenessReport r;
    r.samples = sweep::map_indexed(
        points.size(), [&](std::size_t i) { return hermitian_sample(a, points[i], opts); },
        opts.exec);
    if (r.samples.empty()) return r;

    r.sign = r.samples.front().sign;
    r.rank = a.dim() - r.samples.front().zero_count;
    bool any_zero = false;
    for (const auto& s : r.samples) {
        if (s.sign != r.sign) r.sign = 0;
        if (a.dim() - s.zero_count != r.rank) r.rank = -1;
        any_zero = any_zero || s.zero_count > 0;
    }
    r.definite = r.sign != 0 && !any_zero;
    r.semidefinite = r.sign != 0 && any_zero;
    if (r.sign == 0) {
        r.min_signed_eigenvalue = std::numeric_limits<double>::quiet_NaN();
    } else {
        r.min_signed_eigenvalue = std::numeric_limits<double>::infinity();
        for (const auto& s : r.samples) {
            for (Eigen::Index k = 0; k < s.eigenvalues.size(); ++k) {
                r.min_signed_eigenvalue = std::min(r.min_signed_eigenvalue, r.sign * s.eigenvalues[k]);
            }
        }
    }
    return r;
}

} // namespace lck

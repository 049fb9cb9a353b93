#include <lck/maps.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace lck {

namespace {

struct Cluster {
    Complex eigenvalue;
    int multiplicity = 0;
};

std::vector<Cluster> cluster_eigenvalues(const Eigen::VectorXcd& ev, double tol)
{
    // Single-linkage grouping, then the mean of each group.
    const int n = static_cast<int>(ev.size());
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (label[static_cast<std::size_t>(i)] >= 0) continue;
        std::vector<int> stack{i};
        label[static_cast<std::size_t>(i)] = next;
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            for (int b = 0; b < n; ++b) {
                if (label[static_cast<std::size_t>(b)] < 0 && std::abs(ev(a) - ev(b)) < tol) {
                    label[static_cast<std::size_t>(b)] = next;
                    stack.push_back(b);
                }
            }
        }
        ++next;
    }
    std::vector<Cluster> out(static_cast<std::size_t>(next));
    for (int i = 0; i < n; ++i) {
        auto& c = out[static_cast<std::size_t>(label[static_cast<std::size_t>(i)])];
        c.eigenvalue += ev(i);
        ++c.multiplicity;
    }
    for (auto& c : out) c.eigenvalue /= static_cast<double>(c.multiplicity);
    std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
        const double ma = std::abs(a.eigenvalue), mb = std::abs(b.eigenvalue);
        if (ma != mb) return ma > mb;
        return std::arg(a.eigenvalue) < std::arg(b.eigenvalue);
    });
    return out;
}

int numerical_rank(const Eigen::MatrixXcd& m, double tol)
{
    if (m.cols() == 0 || m.rows() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > tol ? 1 : 0;
    return r;
}

/// Columns spanning the numerical null space of m.
Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& m, double tol)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > tol ? 1 : 0;
    return svd.matrixV().rightCols(m.cols() - r);
}

Eigen::MatrixXcd hstack(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b)
{
    Eigen::MatrixXcd out(a.rows(), a.cols() + b.cols());
    out << a, b;
    return out;
}

constexpr double max_transform_condition_inverse = 1e-7;
constexpr double subspace_gap = 1e-3;

[[noreturn]] void ill_conditioned(const std::string& what)
{
    throw MapError(MapError::Kind::ill_conditioned, "jordan_form: " + what);
}

} // namespace

Eigen::MatrixXcd jordan_block(Complex alpha, int n)
{
    if (n < 1) throw BadParameter("Jordan block size must be positive");
    Eigen::MatrixXcd j = alpha * Eigen::MatrixXcd::Identity(n, n);
    for (int i = 0; i + 1 < n; ++i) j(i, i + 1) = 1.0;
    return j;
}

Eigen::MatrixXcd JordanDecomposition::jordan_matrix() const
{
    int n = 0;
    for (const auto& b : blocks) n += b.size;
    Eigen::MatrixXcd j = Eigen::MatrixXcd::Zero(n, n);
    int at = 0;
    for (const auto& b : blocks) {
        j.block(at, at, b.size, b.size) = jordan_block(b.eigenvalue, b.size);
        at += b.size;
    }
    return j;
}

namespace {

JordanDecomposition decompose(const Eigen::MatrixXcd& a, const std::vector<Cluster>& clusters, double scale,
                              const JordanOptions& opts)
{
    const int n = static_cast<int>(a.rows());
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);

    JordanDecomposition out;
    out.transform.resize(n, 0);

    for (const auto& cl : clusters) {
        const int m = cl.multiplicity;
        const Eigen::MatrixXcd shifted = a - cl.eigenvalue * id;

        // Orthonormal basis of the generalized eigenspace: the m smallest right
        // singular vectors of (A - lambda I)^m, required to be separated by a gap.
        Eigen::MatrixXcd shifted_m = id;
        for (int k = 0; k < m; ++k) shifted_m = shifted_m * shifted;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(shifted_m, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const double drop = sv(n - m);
        const double keep = m < n ? sv(n - m - 1) : std::numeric_limits<double>::infinity();
        if (!(drop <= opts.rank_tol * std::pow(scale, m)) || !(drop < subspace_gap * keep)) {
            ill_conditioned("generalized eigenspace of " + std::to_string(cl.eigenvalue.real()) + "+" +
                            std::to_string(cl.eigenvalue.imag()) + "i is not separated (multiplicity " +
                            std::to_string(m) + ")");
        }
        const Eigen::MatrixXcd basis_v = svd.matrixV().rightCols(m);
        // Restriction of A - lambda I to that subspace.
        const Eigen::MatrixXcd nil = basis_v.adjoint() * shifted * basis_v;
        const Eigen::MatrixXcd idm = Eigen::MatrixXcd::Identity(m, m);
        const double bscale = std::max(1.0, nil.norm());

        // powers[k] = nil^k, ranks[k] = rank(nil^k), k = 0..m
        std::vector<Eigen::MatrixXcd> powers{idm};
        std::vector<int> ranks{m};
        for (int k = 1; k <= m; ++k) {
            powers.push_back(powers.back() * nil);
            ranks.push_back(numerical_rank(powers.back(), opts.rank_tol * std::pow(bscale, k)));
        }
        if (ranks[static_cast<std::size_t>(m)] != 0) ill_conditioned("restricted operator is not nilpotent");
        int top = 0;
        for (int k = 1; k <= m; ++k) {
            if (ranks[static_cast<std::size_t>(k - 1)] < ranks[static_cast<std::size_t>(k)]) {
                ill_conditioned("rank sequence of (A - lambda I)^k is not monotone");
            }
            if (ranks[static_cast<std::size_t>(k)] < ranks[static_cast<std::size_t>(k - 1)]) top = k;
        }

        // at_level[k] holds chain vectors already placed at depth k (from longer chains).
        std::vector<Eigen::MatrixXcd> at_level(static_cast<std::size_t>(top + 1), Eigen::MatrixXcd(m, 0));
        std::vector<std::pair<int, Eigen::VectorXcd>> chains; // (length, top vector)
        for (int k = top; k >= 1; --k) {
            const auto rk = [&](int j) { return ranks[static_cast<std::size_t>(j)]; };
            const int at_least_k = rk(k - 1) - rk(k);
            const int at_least_k1 = k + 1 <= m ? rk(k) - rk(k + 1) : 0;
            const int new_chains = at_least_k - at_least_k1;
            if (new_chains < 0) ill_conditioned("inconsistent block counts");
            if (new_chains == 0) continue;

            const double tol_k = opts.rank_tol * std::pow(bscale, k);
            const double tol_k1 = opts.rank_tol * std::pow(bscale, k - 1);
            const Eigen::MatrixXcd kernel_k = null_space(powers[static_cast<std::size_t>(k)], tol_k);
            const Eigen::MatrixXcd kernel_k1 =
                k > 1 ? null_space(powers[static_cast<std::size_t>(k - 1)], tol_k1) : Eigen::MatrixXcd(m, 0);
            Eigen::MatrixXcd basis = hstack(kernel_k1, at_level[static_cast<std::size_t>(k)]);
            int basis_rank = numerical_rank(basis, opts.rank_tol);
            if (basis_rank != basis.cols()) ill_conditioned("chain vectors are numerically dependent");

            int found = 0;
            for (Eigen::Index c = 0; c < kernel_k.cols() && found < new_chains; ++c) {
                const Eigen::VectorXcd v = kernel_k.col(c);
                const Eigen::MatrixXcd trial = hstack(basis, v);
                if (numerical_rank(trial, opts.rank_tol) == basis_rank + 1) {
                    basis = trial;
                    ++basis_rank;
                    ++found;
                    chains.emplace_back(k, v);
                    Eigen::VectorXcd w = v;
                    for (int d = k - 1; d >= 1; --d) {
                        w = nil * w;
                        at_level[static_cast<std::size_t>(d)] = hstack(at_level[static_cast<std::size_t>(d)], w);
                    }
                }
            }
            if (found != new_chains) ill_conditioned("could not complete the Jordan chains");
        }

        for (const auto& [len, v] : chains) {
            Eigen::MatrixXcd cols(n, len);
            Eigen::VectorXcd w = v;
            for (int j = len - 1; j >= 0; --j) {
                cols.col(j) = basis_v * w;
                w = nil * w;
            }
            out.transform = hstack(out.transform, cols);
            out.blocks.push_back({cl.eigenvalue, len});
        }
    }

    if (out.transform.cols() != n) ill_conditioned("chains do not span C^n");
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(out.transform);
    if (!lu.isInvertible()) ill_conditioned("transform is singular");
    const Eigen::MatrixXcd rebuilt = out.transform * out.jordan_matrix() * lu.inverse();
    const double an = a.norm();
    out.reconstruction_residual = an > 0.0 ? (a - rebuilt).norm() / an : (a - rebuilt).norm();
    if (!(out.reconstruction_residual < 1e-8)) {
        ill_conditioned("reconstruction residual " + std::to_string(out.reconstruction_residual) +
                        " exceeds 1e-8");
    }
    Eigen::MatrixXcd unit = out.transform;
    unit.colwise().normalize();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(unit);
    const auto& sv = svd.singularValues();
    if (!(sv(n - 1) > max_transform_condition_inverse * sv(0))) {
        ill_conditioned("chain vectors are nearly parallel");
    }
    return out;
}

} // namespace

JordanDecomposition jordan_form(const Eigen::MatrixXcd& a, const JordanOptions& opts)
{
    if (a.rows() != a.cols() || a.rows() < 1) throw DimensionMismatch("jordan_form needs a square matrix");
    const int n = static_cast<int>(a.rows());
    if (n > 16) throw BadParameter("jordan_form supports n <= 16");
    if (!a.allFinite()) throw BadParameter("jordan_form: matrix has non-finite entries");

    const double scale = std::max(1.0, a.norm());
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
    // A defective eigenvalue of index k splits by about eps^(1/k) in floating
    // point, so the clustering radius is widened until the structure is consistent.
    std::string last;
    for (int step = 0; step < opts.cluster_steps; ++step) {
        const double tol = opts.cluster_tol * std::pow(100.0, step) * scale;
        try {
            return decompose(a, cluster_eigenvalues(solver.eigenvalues(), tol), scale, opts);
        } catch (const MapError& e) {
            if (e.kind() != MapError::Kind::ill_conditioned) throw;
            last = e.what();
        }
    }
    throw MapError(MapError::Kind::ill_conditioned, last);
}

} // namespace lck

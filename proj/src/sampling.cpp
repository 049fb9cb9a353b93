#include <lck/sampling.hpp>

#include <cmath>
#include <random>
#include <sstream>

namespace lck {

namespace {

Point random_direction(int dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    Point p(static_cast<std::size_t>(dim));
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& c : p) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            c = Complex(re, im);
            n2 += std::norm(c);
        }
    } while (n2 < 1e-24);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& c : p) c *= inv;
    return p;
}

void check_dim(int dim)
{
    if (dim < 1) throw DimensionMismatch("sampling dimension must be positive");
}

} // namespace

std::string format_point(const Point& p)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << p[i].real() << (p[i].imag() < 0 ? "-" : "+") << std::abs(p[i].imag()) << 'i';
    }
    os << ')';
    return os.str();
}

double norm(const Point& p)
{
    double s = 0.0;
    for (const auto& c : p) s += std::norm(c);
    return std::sqrt(s);
}

Samples annulus_samples(int dim, std::size_t count, std::uint64_t seed, double inner,
                        double outer)
{
    check_dim(dim);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> radius(inner, outer);
    Samples s{dim, seed, {}};
    s.points.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Point p = random_direction(dim, rng);
        const double r = radius(rng);
        for (auto& c : p) c *= r;
        s.points.push_back(std::move(p));
    }
    return s;
}

std::vector<Point> sphere_points(int dim, std::size_t count, double radius, std::uint64_t seed)
{
    check_dim(dim);
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        Point p = random_direction(dim, rng);
        for (auto& c : p) c *= radius;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<CylinderPoint> cylinder_points(int dim, std::size_t count, std::uint64_t seed,
                                           double t_extent)
{
    check_dim(dim);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> time(-t_extent, t_extent);
    std::vector<CylinderPoint> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        CylinderPoint c;
        c.t = time(rng);
        c.z = random_direction(dim, rng);
        out.push_back(std::move(c));
    }
    return out;
}

} // namespace lck

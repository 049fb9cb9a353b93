#pragma once

#include <lck/errors.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lck {

inline constexpr double annulus_inner_radius = 0.5;
inline constexpr double annulus_outer_radius = 2.0;

/// A seeded sample set; the seed is echoed into every report built from it.
struct Samples {
    int dim = 0;
    std::uint64_t seed = 0;
    std::vector<Point> points;
};

/// Points with uniformly distributed direction and |z| uniform in [inner, outer].
Samples annulus_samples(int dim, std::size_t count, std::uint64_t seed,
                        double inner = annulus_inner_radius,
                        double outer = annulus_outer_radius);

/// Uniformly distributed points on the sphere |z| = radius.
std::vector<Point> sphere_points(int dim, std::size_t count, double radius, std::uint64_t seed);

/// A point (t, z) of R x S^{2n-1}.
struct CylinderPoint {
    double t = 0.0;
    Point z;
};

std::vector<CylinderPoint> cylinder_points(int dim, std::size_t count, std::uint64_t seed,
                                           double t_extent = 1.0);

double norm(const Point& p);

} // namespace lck

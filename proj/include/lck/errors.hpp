#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace lck {

using Complex = std::complex<double>;
using Point = std::vector<Complex>;

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class BadParameter : public Error {
  public:
    using Error::Error;
};

class UnknownEntry : public Error {
  public:
    using Error::Error;
};

class NonPositivePotential : public Error {
  public:
    using Error::Error;
};

/// Raised by numeric evaluation; carries the point at which it happened.
class EvaluationError : public Error {
  public:
    enum class Kind { division_near_zero, newton_divergence, log_branch };

    EvaluationError(Kind kind, Point point, const std::string& what)
        : Error(what), kind_(kind), point_(std::move(point)) {}

    Kind kind() const noexcept { return kind_; }
    const Point& point() const noexcept { return point_; }

  private:
    Kind kind_;
    Point point_;
};

class FormError : public Error {
  public:
    enum class Kind { not_type11, non_hermitian, non_holomorphic_map, degenerate_omega };

    FormError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

class MapError : public Error {
  public:
    enum class Kind {
        singular_linear_part,
        degree_overflow,
        iteration_diverged,
        ill_conditioned,
        not_jordan,
    };

    MapError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

  private:
    Kind kind_;
};

std::string format_point(const Point& p);

} // namespace lck

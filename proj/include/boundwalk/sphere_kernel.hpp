#pragma once

// Geometry on the closed nonnegative half-sphere with the angle metric.
//
// Points are unit vectors with nonnegative coordinates; the distance between
// two points is the angle they subtend at the origin.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace boundwalk {

inline constexpr double kPi = 3.14159265358979323846;

/// Two sphere points closer than this are treated as equal.
inline constexpr double kSphereEqualTol = 1e-9;

class Angle {
public:
  constexpr Angle() = default;
  /// Throws std::domain_error unless 0 <= radians <= pi (NaN rejected).
  explicit Angle(double radians);

  constexpr double radians() const { return radians_; }

  friend constexpr bool operator==(Angle, Angle) = default;
  friend constexpr auto operator<=>(Angle a, Angle b) { return a.radians_ <=> b.radians_; }

private:
  double radians_ = 0.0;
};

class SpherePoint {
public:
  /// Accepts a vector that is already unit length within `tol`. Coordinates
  /// in [-1e-12, 0) are clamped to zero and the result is renormalized.
  static SpherePoint from_unit(std::vector<double> coords, double tol = 1e-12);

  /// The vertex rho(e_axis) of the spherical simplex.
  static SpherePoint vertex(std::size_t dim, std::size_t axis);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const { return coords_; }

private:
  explicit SpherePoint(std::vector<double> coords) : coords_(std::move(coords)) {}
  friend SpherePoint radial_project(std::span<const double> x);

  std::vector<double> coords_;
};

/// x / |x|. Throws std::domain_error for the zero vector or negative entries.
SpherePoint radial_project(std::span<const double> x);
SpherePoint radial_project(std::span<const std::int64_t> x);

/// Angle at the origin between a and b.
///
/// Evaluated as 2*atan2(|a-b|, |a+b|), which agrees with the clamped arccos
/// of the dot product but keeps full relative precision for tiny angles.
Angle angle_between(const SpherePoint& a, const SpherePoint& b);

/// Angle between rho(x) and rho(y) for nonzero nonnegative vectors, without
/// materializing either projection.
double vector_angle(std::span<const double> x, std::span<const double> y);

bool same_point(const SpherePoint& a, const SpherePoint& b, double tol = kSphereEqualTol);

/// Point on the great-circle arc from a to b at fraction t of the way.
SpherePoint slerp(const SpherePoint& a, const SpherePoint& b, double t);

/// Side opposite the vertex angle `at_w` in a spherical triangle whose other
/// two sides (meeting at w) are `aw` and `bw`. Spherical law of cosines.
Angle third_side(Angle aw, Angle bw, Angle at_w);

/// asin(1/|x|): upper bound on how far a single unit basis step moves the
/// projection of x. Throws std::domain_error when |x| < 1.
Angle chord_step_bound(std::span<const double> x);
Angle chord_step_bound(std::span<const std::int64_t> x);

/// Central projection from the vertex rho(e_axis) onto the opposite face:
/// zero the coordinate and renormalize. Throws std::domain_error at the
/// vertex itself.
SpherePoint psi_collapse(const SpherePoint& q, std::size_t axis);

enum class ApproachVerdict { holds, fails, inapplicable };

/// Given a' on the arc [a, w], b strictly closer to w than a' is, and all
/// pairwise distances at most pi/2, reports whether d(b, a') < d(b, a).
/// Configurations that violate those hypotheses are `inapplicable`.
ApproachVerdict monotone_approach(const SpherePoint& a, const SpherePoint& a_prime,
                                  const SpherePoint& w, const SpherePoint& b);

inline bool monotone_approach_holds(const SpherePoint& a, const SpherePoint& a_prime,
                                    const SpherePoint& w, const SpherePoint& b) {
  return monotone_approach(a, a_prime, w, b) == ApproachVerdict::holds;
}

}  // namespace boundwalk

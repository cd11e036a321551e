#include "boundwalk/sphere_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace boundwalk {

namespace {

constexpr double kNegClamp = 1e-12;

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double norm(std::span<const std::int64_t> x) {
  double s = 0.0;
  for (auto v : x) {
    const double d = static_cast<double>(v);
    s += d * d;
  }
  return std::sqrt(s);
}

void require_same_dim(const SpherePoint& a, const SpherePoint& b, const char* what) {
  if (a.dim() != b.dim())
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

Angle::Angle(double radians) : radians_(radians) {
  if (!(radians >= 0.0 && radians <= kPi))
    throw std::domain_error("Angle: value outside [0, pi]: " + std::to_string(radians));
}

SpherePoint SpherePoint::from_unit(std::vector<double> coords, double tol) {
  if (coords.empty()) throw std::domain_error("SpherePoint: empty coordinate vector");
  for (double& c : coords) {
    if (!std::isfinite(c)) throw std::domain_error("SpherePoint: non-finite coordinate");
    if (c < 0.0) {
      if (c < -kNegClamp) throw std::domain_error("SpherePoint: negative coordinate");
      c = 0.0;
    }
  }
  const double n = norm(coords);
  if (std::abs(n - 1.0) > tol)
    throw std::domain_error("SpherePoint: vector is not unit length");
  for (double& c : coords) c /= n;
  return SpherePoint(std::move(coords));
}

SpherePoint SpherePoint::vertex(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw std::out_of_range("SpherePoint::vertex: axis out of range");
  std::vector<double> c(dim, 0.0);
  c[axis] = 1.0;
  return SpherePoint(std::move(c));
}

SpherePoint radial_project(std::span<const double> x) {
  if (x.empty()) throw std::domain_error("radial_project: empty vector");
  std::vector<double> c(x.begin(), x.end());
  for (double& v : c) {
    if (!std::isfinite(v)) throw std::domain_error("radial_project: non-finite coordinate");
    if (v < 0.0) {
      if (v < -kNegClamp) throw std::domain_error("radial_project: negative coordinate");
      v = 0.0;
    }
  }
  // Dividing by the largest entry first makes the result depend only on the
  // ratios x_i / max, so exact multiples of x give identical points.
  const double top = *std::max_element(c.begin(), c.end());
  if (!(top > 0.0)) throw std::domain_error("radial_project: zero vector");
  for (double& v : c) v /= top;
  const double n = norm(c);
  for (double& v : c) v /= n;
  return SpherePoint(std::move(c));
}

SpherePoint radial_project(std::span<const std::int64_t> x) {
  std::vector<double> c(x.size());
  std::transform(x.begin(), x.end(), c.begin(), [](std::int64_t v) { return static_cast<double>(v); });
  return radial_project(std::span<const double>(c));
}

Angle angle_between(const SpherePoint& a, const SpherePoint& b) {
  require_same_dim(a, b, "angle_between");
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    const double s = a[i] + b[i];
    diff += d * d;
    sum += s * s;
  }
  return Angle(std::clamp(2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum)), 0.0, kPi));
}

double vector_angle(std::span<const double> x, std::span<const double> y) {
  return angle_between(radial_project(x), radial_project(y)).radians();
}

bool same_point(const SpherePoint& a, const SpherePoint& b, double tol) {
  return angle_between(a, b).radians() <= tol;
}

SpherePoint slerp(const SpherePoint& a, const SpherePoint& b, double t) {
  require_same_dim(a, b, "slerp");
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("slerp: t outside [0, 1]");
  const double theta = angle_between(a, b).radians();
  if (theta < 1e-15) return a;
  const double s = std::sin(theta);
  const double wa = std::sin((1.0 - t) * theta) / s;
  const double wb = std::sin(t * theta) / s;
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = wa * a[i] + wb * b[i];
  return radial_project(std::span<const double>(c));
}

Angle third_side(Angle aw, Angle bw, Angle at_w) {
  // Haversine form: both hav(c) and 1 - hav(c) are sums of nonnegative
  // terms, so atan2 stays accurate near 0 and near pi.
  const double a = aw.radians(), b = bw.radians(), w = at_w.radians();
  const double ss = std::sin(a) * std::sin(b);
  const double h = std::pow(std::sin((a - b) / 2), 2) + ss * std::pow(std::sin(w / 2), 2);
  const double g = std::pow(std::cos((a + b) / 2), 2) + ss * std::pow(std::cos(w / 2), 2);
  return Angle(std::min(2 * std::atan2(std::sqrt(h), std::sqrt(g)), std::numbers::pi));
}

Angle chord_step_bound(std::span<const double> x) {
  const double n = norm(x);
  if (!(n >= 1.0)) throw std::domain_error("chord_step_bound: |x| < 1");
  return Angle(std::asin(1.0 / n));
}

Angle chord_step_bound(std::span<const std::int64_t> x) {
  const double n = norm(x);
  if (!(n >= 1.0)) throw std::domain_error("chord_step_bound: |x| < 1");
  return Angle(std::asin(1.0 / n));
}

SpherePoint psi_collapse(const SpherePoint& q, std::size_t axis) {
  if (axis >= q.dim()) throw std::out_of_range("psi_collapse: axis out of range");
  std::vector<double> c(q.coords().begin(), q.coords().end());
  c[axis] = 0.0;
  if (norm(c) < 1e-12) throw std::domain_error("psi_collapse: undefined at the collapse vertex");
  return radial_project(std::span<const double>(c));
}

ApproachVerdict monotone_approach(const SpherePoint& a, const SpherePoint& a_prime,
                                  const SpherePoint& w, const SpherePoint& b) {
  require_same_dim(a, a_prime, "monotone_approach");
  require_same_dim(a, w, "monotone_approach");
  require_same_dim(a, b, "monotone_approach");
  constexpr double tol = 1e-9;
  const double aw = angle_between(a, w).radians();
  const double apw = angle_between(a_prime, w).radians();
  const double aap = angle_between(a, a_prime).radians();
  const double bw = angle_between(b, w).radians();
  const double ba = angle_between(b, a).radians();
  const double bap = angle_between(b, a_prime).radians();

  // a' must sit on the arc [a, w].
  if (std::abs(aap + apw - aw) > tol) return ApproachVerdict::inapplicable;
  if (!(bw < apw)) return ApproachVerdict::inapplicable;
  for (double d : {aw, apw, aap, bw, ba, bap})
    if (d > kPi / 2 + tol) return ApproachVerdict::inapplicable;
  return bap < ba ? ApproachVerdict::holds : ApproachVerdict::fails;
}

}  // namespace boundwalk

#pragma once

// Vertex-directed paths on the standard simplex and their images on the
// spherical simplex.
//
// A directed path is a chain of straight moves, each of which either stays
// put or travels part of the way (possibly all of it) toward one vertex.
// Paths live either on the Euclidean simplex K = conv(e_1..e_n) in
// barycentric coordinates, or on the spherical simplex L = rho(K); radial
// projection carries segments of K onto great-circle arcs of L and so
// preserves directedness.

#include "boundwalk/sphere_kernel.hpp"

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace boundwalk {

class SimplexPoint {
public:
  /// Entries in [-1e-12, 0) are clamped to zero; the sum must be 1 within `tol`.
  static SimplexPoint from_bary(std::vector<double> bary, double tol = 1e-12);
  static SimplexPoint vertex(std::size_t dim, std::size_t axis);
  static SimplexPoint barycenter(std::size_t dim);

  std::size_t dim() const { return bary_.size(); }
  double operator[](std::size_t i) const { return bary_[i]; }
  std::span<const double> bary() const { return bary_; }

  /// Indices of the coordinates above `tol`: the smallest face containing
  /// the point.
  std::vector<std::size_t> support(double tol = 1e-12) const;

private:
  explicit SimplexPoint(std::vector<double> bary) : bary_(std::move(bary)) {}
  std::vector<double> bary_;
};

double distance(const SimplexPoint& a, const SimplexPoint& b);
double distance_to_segment(const SimplexPoint& p, const SimplexPoint& a, const SimplexPoint& b);

enum class StepKind { constant, aimed };

template <class Point>
struct DirectedStep {
  StepKind kind = StepKind::constant;
  std::size_t vertex = 0;  // meaningful for aimed steps only
  Point end;
};

template <class Point>
struct DirectedPath {
  Point start;
  std::vector<DirectedStep<Point>> steps;

  const Point& end() const { return steps.empty() ? start : steps.back().end; }
  const Point& point(std::size_t i) const { return i == 0 ? start : steps[i - 1].end; }
  std::size_t aimed_count() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += s.kind == StepKind::aimed;
    return n;
  }
};

using SimplexPath = DirectedPath<SimplexPoint>;
using SpherePath = DirectedPath<SpherePoint>;

template <class Point>
class Polyline {
public:
  explicit Polyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw std::invalid_argument("Polyline: needs at least one vertex");
  }
  std::span<const Point> vertices() const { return vertices_; }
  const Point& front() const { return vertices_.front(); }
  const Point& back() const { return vertices_.back(); }
  std::size_t size() const { return vertices_.size(); }

private:
  std::vector<Point> vertices_;
};

using SimplexPolyline = Polyline<SimplexPoint>;
using SpherePolyline = Polyline<SpherePoint>;

/// Checks chaining and that every aimed step ends on the segment (or arc)
/// from its start toward its vertex, no farther than the vertex.
bool is_well_formed(const SimplexPath& path, double tol = 1e-9);
bool is_well_formed(const SpherePath& path, double tol = 1e-9);

/// Diagnostics from the outermost level of a line_approx call.
struct LineApproxTrace {
  std::size_t outer_iterations = 0;
  /// Distance from the current point to [v, q''] at the start of each
  /// outer iteration, plus the final value.
  std::vector<double> distance_to_axis;
};

/// Hard cap on outer iterations of one line_approx level.
inline constexpr std::size_t kLineApproxIterationCap = 1'000'000;

/// Directed path from q that stays within eps/2 of the segment [q, q'] and
/// ends within eps/2 of q'. `face` lists the vertices spanning the face whose
/// relative interior must contain q'.
///
/// Throws std::domain_error when q' is not interior to `face` or eps <= 0,
/// and std::runtime_error if the iteration cap is reached.
SimplexPath line_approx(const SimplexPoint& q, const SimplexPoint& q_prime,
                        std::span<const std::size_t> face, double eps,
                        LineApproxTrace* trace = nullptr);

/// Directed path from q within eps/2 of [q, q'] and ending within eps/8 of
/// q', built without recursion: points of the segment a stride apart are
/// joined by sequences of vertex moves that land on them exactly, the stride
/// halving until every corner stays within eps/2. Much shorter than
/// line_approx's output, which matters once a path is shadowed by a walk.
SimplexPath stride_approx(const SimplexPoint& q, const SimplexPoint& q_prime, double eps);

enum class DirectedScheme { recursive, stride };

/// Directed path from `start` within Hausdorff distance eps of `path`, ending
/// within eps/2 of its last vertex. `start` must lie within eps of the first
/// vertex. Each polyline segment is handled by line_approx (recursive) or
/// stride_approx.
SimplexPath direct_approx(const SimplexPolyline& path, const SimplexPoint& start, double eps,
                          DirectedScheme scheme = DirectedScheme::recursive);

/// Merges consecutive aimed steps toward the same vertex and drops steps
/// that do not move.
SimplexPath compact(const SimplexPath& path, double tol = 1e-15);

SpherePoint simplex_to_sphere(const SimplexPoint& p);
/// Inverse of simplex_to_sphere: p / sum(p).
SimplexPoint sphere_to_simplex(const SpherePoint& p);
SpherePath simplex_to_sphere(const SimplexPath& path);
SimplexPolyline sphere_to_simplex(const SpherePolyline& path);

/// Lipschitz constant of radial projection restricted to K in dimension n:
/// angle(rho(p), rho(p')) <= sqrt(n) * |p - p'|.
double projection_lipschitz(std::size_t dim);

/// line_approx carried out on K and projected to L, with the angular budget
/// eps converted through projection_lipschitz.
SpherePath line_approx_sphere(const SpherePoint& from, const SpherePoint& to, double eps,
                              DirectedScheme scheme = DirectedScheme::recursive);

/// Points along the path no more than `spacing` apart (Euclidean for K,
/// angular for L), including every vertex.
std::vector<SimplexPoint> sample_path(const SimplexPath& path, double spacing);
std::vector<SpherePoint> sample_path(const SpherePath& path, double spacing);
std::vector<SimplexPoint> sample_polyline(const SimplexPolyline& path, double spacing);
std::vector<SpherePoint> sample_polyline(const SpherePolyline& path, double spacing);

/// Hausdorff distance between a directed path and a polyline on K, both
/// sampled at `spacing`; point-to-segment distances are exact.
double sampled_hausdorff(const SimplexPath& path, const SimplexPolyline& line, double spacing);

}  // namespace boundwalk

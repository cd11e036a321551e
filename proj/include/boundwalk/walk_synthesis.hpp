#pragma once

// Lattice walks over the standard basis whose radial projections track
// prescribed paths on the spherical simplex.
//
// Step indices are 1-based throughout: index i means "add e_i". Walks built
// here only ever use positive indices.

#include "boundwalk/simplex_paths.hpp"
#include "boundwalk/sphere_kernel.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <span>
#include <vector>

namespace boundwalk {

using IntVec = std::vector<std::int64_t>;

struct LatticeWalk {
  IntVec start;
  std::vector<int> indices;

  std::size_t size() const { return indices.size(); }
  /// Position after k steps; k = 0 is the start.
  IntVec position(std::size_t k) const;
  std::vector<IntVec> positions() const;
};

/// Adds step `index` (signed, 1-based) to `x`.
void apply_step(IntVec& x, int index);

double norm(std::span<const std::int64_t> x);

/// Radius above which a stationary walk with tolerance eps exists in
/// dimension n: csc(eps/2) for n = 2, max(csc(eps/3), 2 R(eps/3, n-1)) above.
double stationary_radius(double eps, std::size_t n);

/// Lazily produces a walk from x whose projections all stay within eps of
/// rho(x). The top coordinate direction (the smallest coordinate of x) is
/// handled by inserting runs of that basis vector whenever the remaining
/// coordinates have pulled the projection more than eps/3 away from it; the
/// rest is a stationary walk one dimension down with tolerance eps/3.
class StationaryWalker {
public:
  /// Throws std::domain_error unless every coordinate of x is positive and
  /// |x| > stationary_radius(eps, n).
  StationaryWalker(IntVec x, double eps);
  ~StationaryWalker();
  StationaryWalker(StationaryWalker&&) noexcept;
  StationaryWalker& operator=(StationaryWalker&&) noexcept;

  int next();
  const IntVec& position() const { return pos_; }

private:
  struct Level;
  IntVec pos_;
  std::unique_ptr<Level> root_;
};

std::vector<int> stationary_walk(const IntVec& x, double eps, std::size_t min_steps);

/// Per-segment record of a shadowing run: the distance from the projection
/// of the running sum to the segment's terminal after each aimed segment.
struct ShadowAudit {
  double delta = 0.0;
  double eps1 = 0.0;
  std::vector<double> terminal_distance;  // entry 0 is the start
  std::vector<std::size_t> segment_end;   // steps emitted after each segment
};

/// csc(eps1/(4N)) for N aimed segments (0 when there are none): below this
/// a single step can move the projection more than a segment's share.
double segment_radius(const SpherePath& path, double eps1);

/// segment_radius, raised so that the stationary stretches (run at eps2/8)
/// are always available. Starting here never fails for lack of norm.
double shadow_radius(const SpherePath& path, double eps1, double eps2);

/// Walk from x whose projection stays within eps1 of `path` and ends within
/// eps2 of its endpoint, at least `min_len` steps long. The closing stretch
/// toward the endpoint is planned with stride_approx.
///
/// Throws std::domain_error when |x| < segment_radius or rho(x) is not within
/// eps1/2 of the path start, or when padding is needed but the norm is below
/// the stationary radius; std::logic_error if the per-segment drift bound is
/// ever violated.
std::vector<int> shadow_walk(const SpherePath& path, const IntVec& x, double eps1, double eps2,
                             std::size_t min_len, ShadowAudit* audit = nullptr);

class TargetSet {
public:
  /// Vertices must be unit vectors with nonnegative coordinates (within
  /// 1e-9, renormalized); edges must join distinct valid vertices and the
  /// graph must be connected. Throws std::domain_error otherwise.
  TargetSet(std::size_t dim, std::vector<std::vector<double>> vertices,
            std::vector<std::pair<std::size_t, std::size_t>> edges, std::size_t basepoint);

  std::size_t dim() const { return dim_; }
  std::span<const SpherePoint> vertices() const { return vertices_; }
  std::span<const std::pair<std::size_t, std::size_t>> edges() const { return edges_; }
  std::size_t basepoint() const { return basepoint_; }
  const SpherePoint& base() const { return vertices_[basepoint_]; }

  /// Points along every edge no more than `spacing` apart, plus isolated
  /// vertices.
  std::vector<SpherePoint> sample(double spacing) const;

  /// Exact angular distance from p to the skeleton.
  double distance(const SpherePoint& p) const;

private:
  std::size_t dim_;
  std::vector<SpherePoint> vertices_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::size_t basepoint_;
};

/// Distance from p to the great-circle arc [a, b] (b != -a).
double arc_distance(const SpherePoint& p, const SpherePoint& a, const SpherePoint& b);

struct Phase {
  std::size_t k = 0;
  double eps = 0.0;
  std::vector<SpherePoint> net;   // 1/k-net of the skeleton
  SpherePolyline loop;            // closed tour from the basepoint through the net
  SimplexPath directed;           // directed approximation, chained from the previous phase
  std::size_t aimed_segments = 0;
  double radius = 0.0;            // norm required before the phase starts
};

class PhasePlanner {
public:
  explicit PhasePlanner(TargetSet target, DirectedScheme scheme = DirectedScheme::stride);

  const TargetSet& target() const { return target_; }
  DirectedScheme scheme() const { return scheme_; }
  /// Phases are built in order; asking for phase k builds 1..k.
  const Phase& phase(std::size_t k);

private:
  TargetSet target_;
  DirectedScheme scheme_;
  std::deque<Phase> phases_;
};

std::vector<Phase> plan_phases(const TargetSet& target, std::size_t phases,
                               DirectedScheme scheme = DirectedScheme::stride);

/// Arc-length net: every edge cut into ceil(length * k) equal pieces.
std::vector<SpherePoint> skeleton_net(const TargetSet& target, std::size_t k);

/// Closed tour from the basepoint through every edge: an Euler circuit when
/// all degrees are even, otherwise every edge walked out and back.
std::vector<std::size_t> skeleton_tour(const TargetSet& target);

struct SynthesisConfig {
  /// Each phase is padded to at least this many steps.
  std::size_t min_phase_steps = 1000;
  /// How each phase loop is turned into a directed path.
  DirectedScheme scheme = DirectedScheme::stride;
};

/// The infinite walk from the origin: a ramp to a point near the basepoint
/// with large enough norm, then one shadowing walk per phase.
class SynthesisStream {
public:
  explicit SynthesisStream(TargetSet target, SynthesisConfig config = {});
  ~SynthesisStream();
  SynthesisStream(SynthesisStream&&) noexcept;
  SynthesisStream& operator=(SynthesisStream&&) noexcept;

  int next();

  std::size_t steps() const { return steps_; }
  const IntVec& position() const { return pos_; }

  /// 0 while in the ramp, then the phase the most recently emitted step
  /// belongs to.
  std::size_t phase() const { return emitting_phase_; }
  /// Phase the next step will belong to. Does not build that phase's walk.
  std::size_t upcoming_phase();
  /// Step count at which phase k (k >= 1) began; only valid once started.
  std::size_t phase_begin(std::size_t k) const { return begins_.at(k); }
  std::size_t phases_started() const { return begins_.size() - 1; }
  const Phase& phase_plan(std::size_t k) { return planner_.phase(k); }
  const TargetSet& target() const { return planner_.target(); }

private:
  struct Playback;
  void refill();

  SynthesisConfig config_;
  PhasePlanner planner_;
  IntVec pos_;
  std::size_t steps_ = 0;
  std::unique_ptr<Playback> playback_;
  std::size_t buffered_phase_ = 0;
  std::size_t emitting_phase_ = 0;
  bool ramp_done_ = false;
  std::vector<std::size_t> begins_{0};
};

}  // namespace boundwalk

#pragma once

// Finite-scale checks that the projections of a walk accumulate on a target
// set: Hausdorff distances between point sets on the sphere, projected tail
// clouds, and per-phase convergence reports.

#include "boundwalk/sphere_kernel.hpp"
#include "boundwalk/walk_synthesis.hpp"

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace boundwalk {

/// Nearest-neighbour index over sphere points (kd-tree on the unit vectors;
/// chord length is monotone in angle).
class SphereIndex {
public:
  explicit SphereIndex(std::span<const SpherePoint> points);
  ~SphereIndex();
  SphereIndex(SphereIndex&&) noexcept;
  SphereIndex& operator=(SphereIndex&&) noexcept;

  std::size_t size() const;
  /// Index of a nearest point and its angle to p.
  std::pair<std::size_t, double> nearest(const SpherePoint& p) const;

private:
  struct Tree;
  std::unique_ptr<Tree> tree_;
};

/// sup over a in A of the angle from a to B.
double directed_hausdorff(std::span<const SpherePoint> a, std::span<const SpherePoint> b);
/// Symmetric Hausdorff distance. Both throw std::domain_error on an empty set.
double hausdorff(std::span<const SpherePoint> a, std::span<const SpherePoint> b);
double hausdorff_brute(std::span<const SpherePoint> a, std::span<const SpherePoint> b);

struct TailCloud {
  std::vector<SpherePoint> points;
  std::size_t from_step = 0;
  std::size_t to_step = 0;
};

/// Projections of the positions after from_step..size() steps. Positions at
/// the origin are skipped. Throws std::domain_error if from_step > size()
/// or nothing is left.
TailCloud tail_cloud(const LatticeWalk& prefix, std::size_t from_step);

/// Tolerance schedule 2^-k + 1/k + resolution/2 (+ slack) and the Z
/// sampling resolution min(1/(10k), 1e-3).
double phase_resolution(std::size_t k);
double phase_tolerance(std::size_t k, double slack = 0.0);

struct PhaseResult {
  std::size_t phase = 0;
  std::size_t begin_step = 0;  // first step of the phase
  std::size_t end_step = 0;    // steps consumed when the phase closed
  bool complete = false;
  std::size_t cloud_points = 0;
  std::size_t thinned_points = 0;
  double cloud_to_target = 0.0;  // exact, over every position
  double target_to_cloud = 0.0;  // Z samples against the thinned cloud
  double d_h = 0.0;
  double resolution = 0.0;
  double thinning = 0.0;
  double eps_term = 0.0;
  double net_term = 0.0;
  double sampling_slack = 0.0;
  double extra_slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ConvergenceReport {
  std::size_t requested_phases = 0;
  std::size_t prefix_length = 0;
  std::vector<PhaseResult> phases;

  bool pass() const;
  /// key=value lines, reals printed with 17 significant digits.
  std::string serialize() const;
};

struct VerifyConfig {
  double tolerance_slack = 0.0;
};

/// Consumes positions one at a time and keeps per-phase statistics.
/// Phase k's cloud is every position whose incoming step belongs to phase k.
class ConvergenceMonitor {
public:
  ConvergenceMonitor(const TargetSet& target, std::size_t phases, VerifyConfig config = {});

  /// `step` is the 1-based step count that produced `x`.
  void observe(std::size_t step, std::size_t phase, const IntVec& x);
  /// Closes the open phase; `last_complete` says whether it actually ended.
  ConvergenceReport finish(bool last_complete);

private:
  struct Open {
    PhaseResult result;
    std::vector<SpherePoint> thinned;
  };
  void close();

  const TargetSet& target_;
  std::size_t phases_;
  VerifyConfig config_;
  std::size_t last_step_ = 0;
  std::unique_ptr<Open> open_;
  std::vector<PhaseResult> done_;
};

/// Runs the stream through `phases` complete phases (or until max_steps
/// steps, if nonzero) and reports each phase.
ConvergenceReport convergence_report(SynthesisStream& stream, std::size_t phases, VerifyConfig config = {},
                                     std::size_t max_steps = 0);

}  // namespace boundwalk

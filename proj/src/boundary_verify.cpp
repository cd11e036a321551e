#include "boundwalk/boundary_verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace boundwalk {

struct SphereIndex::Tree {
  struct Node {
    std::size_t begin, end;  // range in order
    std::size_t axis = 0;
    double split = 0.0;
    int left = -1, right = -1;
  };

  std::size_t dim = 0;
  std::vector<double> coords;  // row-major, one row per input point
  std::vector<std::size_t> order;
  std::vector<Node> nodes;
  std::span<const SpherePoint> points;

  static constexpr std::size_t kLeaf = 8;

  double at(std::size_t p, std::size_t a) const { return coords[p * dim + a]; }

  int build(std::size_t begin, std::size_t end) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({begin, end});
    if (end - begin <= kLeaf) return id;
    std::size_t axis = 0;
    double widest = -1.0;
    for (std::size_t a = 0; a < dim; ++a) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t i = begin; i < end; ++i) {
        lo = std::min(lo, at(order[i], a));
        hi = std::max(hi, at(order[i], a));
      }
      if (hi - lo > widest) {
        widest = hi - lo;
        axis = a;
      }
    }
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(mid),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t l, std::size_t r) { return at(l, axis) < at(r, axis); });
    const double split = at(order[mid], axis);
    const int l = build(begin, mid);
    const int r = build(mid, end);
    nodes[static_cast<std::size_t>(id)].axis = axis;
    nodes[static_cast<std::size_t>(id)].split = split;
    nodes[static_cast<std::size_t>(id)].left = l;
    nodes[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  void search(int id, std::span<const double> q, std::size_t& best, double& best_d2) const {
    const Node& nd = nodes[static_cast<std::size_t>(id)];
    if (nd.left < 0) {
      for (std::size_t i = nd.begin; i < nd.end; ++i) {
        const std::size_t p = order[i];
        double d2 = 0.0;
        for (std::size_t a = 0; a < dim && d2 < best_d2; ++a) {
          const double d = at(p, a) - q[a];
          d2 += d * d;
        }
        if (d2 < best_d2 || (d2 == best_d2 && p < best)) {
          best_d2 = d2;
          best = p;
        }
      }
      return;
    }
    const double diff = q[nd.axis] - nd.split;
    const int near = diff < 0 ? nd.left : nd.right;
    const int far = diff < 0 ? nd.right : nd.left;
    search(near, q, best, best_d2);
    if (diff * diff <= best_d2) search(far, q, best, best_d2);
  }
};

SphereIndex::SphereIndex(std::span<const SpherePoint> points) : tree_(std::make_unique<Tree>()) {
  if (points.empty()) throw std::domain_error("SphereIndex: empty point set");
  Tree& t = *tree_;
  t.dim = points.front().dim();
  t.points = points;
  t.coords.reserve(points.size() * t.dim);
  for (const auto& p : points) {
    if (p.dim() != t.dim) throw std::invalid_argument("SphereIndex: dimension mismatch");
    t.coords.insert(t.coords.end(), p.coords().begin(), p.coords().end());
  }
  t.order.resize(points.size());
  std::iota(t.order.begin(), t.order.end(), std::size_t{0});
  t.build(0, points.size());
}

SphereIndex::~SphereIndex() = default;
SphereIndex::SphereIndex(SphereIndex&&) noexcept = default;
SphereIndex& SphereIndex::operator=(SphereIndex&&) noexcept = default;

std::size_t SphereIndex::size() const { return tree_->order.size(); }

std::pair<std::size_t, double> SphereIndex::nearest(const SpherePoint& p) const {
  if (p.dim() != tree_->dim) throw std::invalid_argument("SphereIndex::nearest: dimension mismatch");
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  tree_->search(0, p.coords(), best, best_d2);
  return {best, angle_between(p, tree_->points[best]).radians()};
}

double directed_hausdorff(std::span<const SpherePoint> a, std::span<const SpherePoint> b) {
  if (a.empty() || b.empty()) throw std::domain_error("hausdorff: empty point set");
  const SphereIndex index(b);
  double h = 0.0;
  for (const auto& p : a) h = std::max(h, index.nearest(p).second);
  return h;
}

double hausdorff(std::span<const SpherePoint> a, std::span<const SpherePoint> b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

double hausdorff_brute(std::span<const SpherePoint> a, std::span<const SpherePoint> b) {
  if (a.empty() || b.empty()) throw std::domain_error("hausdorff: empty point set");
  auto one_way = [](std::span<const SpherePoint> x, std::span<const SpherePoint> y) {
    double h = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, angle_between(p, q).radians());
      h = std::max(h, best);
    }
    return h;
  };
  return std::max(one_way(a, b), one_way(b, a));
}

TailCloud tail_cloud(const LatticeWalk& prefix, std::size_t from_step) {
  if (from_step > prefix.size()) throw std::domain_error("tail_cloud: from_step beyond the prefix");
  TailCloud cloud;
  cloud.from_step = from_step;
  cloud.to_step = prefix.size();
  IntVec x = prefix.position(from_step);
  auto add = [&] {
    if (std::any_of(x.begin(), x.end(), [](std::int64_t v) { return v != 0; }))
      cloud.points.push_back(radial_project(std::span<const std::int64_t>(x)));
  };
  add();
  for (std::size_t k = from_step; k < prefix.size(); ++k) {
    apply_step(x, prefix.indices[k]);
    add();
  }
  if (cloud.points.empty()) throw std::domain_error("tail_cloud: no nonzero positions");
  return cloud;
}

double phase_resolution(std::size_t k) {
  if (k == 0) throw std::domain_error("phase_resolution: phases start at 1");
  return std::min(1.0 / (10.0 * static_cast<double>(k)), 1e-3);
}

double phase_tolerance(std::size_t k, double slack) {
  return std::ldexp(1.0, -static_cast<int>(k)) + 1.0 / static_cast<double>(k) + phase_resolution(k) / 2 + slack;
}

bool ConvergenceReport::pass() const {
  if (phases.size() != requested_phases) return false;
  return std::all_of(phases.begin(), phases.end(), [](const PhaseResult& p) { return p.pass; });
}

namespace {

std::string real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ConvergenceReport::serialize() const {
  std::ostringstream s;
  s << "requested_phases=" << requested_phases << '\n'
    << "prefix_length=" << prefix_length << '\n'
    << "pass=" << (pass() ? "true" : "false") << '\n';
  for (const auto& p : phases) {
    s << '\n'
      << "phase=" << p.phase << '\n'
      << "begin_step=" << p.begin_step << '\n'
      << "prefix_length=" << p.end_step << '\n'
      << "complete=" << (p.complete ? "true" : "false") << '\n'
      << "cloud_points=" << p.cloud_points << '\n'
      << "thinned_points=" << p.thinned_points << '\n'
      << "cloud_to_target=" << real(p.cloud_to_target) << '\n'
      << "target_to_cloud=" << real(p.target_to_cloud) << '\n'
      << "d_H=" << real(p.d_h) << '\n'
      << "resolution=" << real(p.resolution) << '\n'
      << "thinning=" << real(p.thinning) << '\n'
      << "eps_term=" << real(p.eps_term) << '\n'
      << "net_term=" << real(p.net_term) << '\n'
      << "sampling_slack=" << real(p.sampling_slack) << '\n'
      << "extra_slack=" << real(p.extra_slack) << '\n'
      << "tolerance=" << real(p.tolerance) << '\n'
      << "pass=" << (p.pass ? "true" : "false") << '\n';
  }
  return s.str();
}

ConvergenceMonitor::ConvergenceMonitor(const TargetSet& target, std::size_t phases, VerifyConfig config)
    : target_(target), phases_(phases), config_(config) {
  if (phases == 0) throw std::domain_error("convergence report: at least one phase");
}

void ConvergenceMonitor::observe(std::size_t step, std::size_t phase, const IntVec& x) {
  last_step_ = step;
  if (phase == 0 || phase > phases_) return;
  if (open_ && open_->result.phase != phase) {
    open_->result.complete = true;
    close();
  }
  if (!open_) {
    open_ = std::make_unique<Open>();
    auto& r = open_->result;
    r.phase = phase;
    r.begin_step = step;
    r.resolution = phase_resolution(phase);
    r.thinning = r.resolution / 4;
  }
  auto& r = open_->result;
  const SpherePoint p = radial_project(std::span<const std::int64_t>(x));
  ++r.cloud_points;
  r.cloud_to_target = std::max(r.cloud_to_target, target_.distance(p));
  if (open_->thinned.empty() || angle_between(open_->thinned.back(), p).radians() >= r.thinning)
    open_->thinned.push_back(p);
  r.end_step = step;
}

void ConvergenceMonitor::close() {
  auto& r = open_->result;
  const auto samples = target_.sample(r.resolution);
  r.thinned_points = open_->thinned.size();
  r.target_to_cloud = directed_hausdorff(samples, open_->thinned);
  r.d_h = std::max(r.cloud_to_target, r.target_to_cloud);
  r.eps_term = std::ldexp(1.0, -static_cast<int>(r.phase));
  r.net_term = 1.0 / static_cast<double>(r.phase);
  r.sampling_slack = r.resolution / 2;
  r.extra_slack = config_.tolerance_slack;
  r.tolerance = phase_tolerance(r.phase, config_.tolerance_slack);
  r.pass = r.complete && r.d_h <= r.tolerance;
  done_.push_back(r);
  open_.reset();
}

ConvergenceReport ConvergenceMonitor::finish(bool last_complete) {
  if (open_) {
    open_->result.complete = last_complete;
    close();
  }
  ConvergenceReport report;
  report.requested_phases = phases_;
  report.prefix_length = last_step_;
  report.phases = std::move(done_);
  done_.clear();
  return report;
}

ConvergenceReport convergence_report(SynthesisStream& stream, std::size_t phases, VerifyConfig config,
                                     std::size_t max_steps) {
  ConvergenceMonitor monitor(stream.target(), phases, config);
  while (stream.upcoming_phase() <= phases) {
    if (max_steps && stream.steps() >= max_steps) return monitor.finish(false);
    stream.next();
    monitor.observe(stream.steps(), stream.phase(), stream.position());
  }
  return monitor.finish(true);
}

}  // namespace boundwalk

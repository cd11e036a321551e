#include "boundwalk/walk_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace boundwalk {

namespace {

constexpr std::int64_t kMaxRun = 10'000'000'000;

double csc_or_one(double angle) {
  if (!(angle > 0.0)) throw std::domain_error("radius for a non-positive tolerance");
  return angle >= kPi / 2 ? 1.0 : 1.0 / std::sin(angle);
}

std::int64_t coordinate_sum(const IntVec& x) { return std::accumulate(x.begin(), x.end(), std::int64_t{0}); }

// Angle between x and p without building rho(x).
double angle_to(const IntVec& x, const SpherePoint& p) {
  const double n = norm(x);
  double diff = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = static_cast<double>(x[i]) / n;
    diff += (u - p[i]) * (u - p[i]);
    sum += (u + p[i]) * (u + p[i]);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

// Angle from x + extra * e_axis to the vertex e_axis, over the given axes.
double angle_to_axis(const IntVec& x, std::span<const std::size_t> axes, std::size_t axis,
                     std::int64_t extra) {
  double rest = 0.0;
  for (std::size_t i : axes) {
    if (i == axis) continue;
    const double v = static_cast<double>(x[i]);
    rest += v * v;
  }
  return std::atan2(std::sqrt(rest), static_cast<double>(x[axis] + extra));
}

// Smallest m >= 0 with angle(x + m e_axis, e_axis) below theta (strictly, or
// not, as asked). The closed form is a first guess; the predicate decides.
std::int64_t copies_toward(const IntVec& x, std::span<const std::size_t> axes, std::size_t axis,
                           double theta, bool strict) {
  auto ok = [&](std::int64_t m) {
    const double a = angle_to_axis(x, axes, axis, m);
    return strict ? a < theta : a <= theta;
  };
  if (ok(0)) return 0;
  if (!(theta > 0.0)) throw std::domain_error("copies_toward: unreachable threshold");
  double rest = 0.0;
  for (std::size_t i : axes)
    if (i != axis) rest += static_cast<double>(x[i]) * static_cast<double>(x[i]);
  const double guess = std::sqrt(rest) / std::tan(std::min(theta, kPi / 2)) - static_cast<double>(x[axis]);
  if (!(guess < static_cast<double>(kMaxRun)))
    throw std::length_error("copies_toward: a single run would exceed 1e10 steps");
  auto m = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(guess)));
  while (!ok(m)) ++m;
  while (m > 1 && ok(m - 1)) --m;
  return m;
}

std::vector<std::size_t> all_axes(std::size_t n) {
  std::vector<std::size_t> a(n);
  std::iota(a.begin(), a.end(), std::size_t{0});
  return a;
}

std::optional<std::size_t> vertex_axis(const SpherePoint& p) {
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (p[i] >= 1.0 - 1e-15 && angle_between(p, SpherePoint::vertex(p.dim(), i)).radians() <= 1e-12) return i;
  return std::nullopt;
}

// A walk kept as pieces rather than steps: runs of one index, explicit
// steps, or stationary stretches replayed from their start position.
struct Piece {
  enum class Kind { run, steps, stationary };
  Kind kind = Kind::run;
  int index = 0;
  std::int64_t count = 0;
  std::vector<int> steps;
  IntVec start;
  double eps = 0.0;
};

class Emitter {
public:
  explicit Emitter(const IntVec& x) : sum_(x) {}

  void run(std::size_t axis, std::int64_t m) {
    if (m <= 0) return;
    pieces_.push_back({Piece::Kind::run, static_cast<int>(axis) + 1, m, {}, {}, 0.0});
    sum_[axis] += m;
    size_ += static_cast<std::size_t>(m);
  }

  /// `count` stationary steps at tolerance eps.
  void stationary(double eps, std::int64_t count) {
    stationary_while(eps, [&](const StationaryWalker&, std::int64_t done) { return done < count; });
  }

  /// Stationary steps until the norm exceeds `radius`.
  void stationary_until(double eps, double radius) {
    stationary_while(eps, [&](const StationaryWalker& w, std::int64_t) { return !(norm(w.position()) > radius); });
  }

  const IntVec& sum() const { return sum_; }
  std::size_t size() const { return size_; }
  std::vector<Piece> take() { return std::move(pieces_); }

private:
  template <class More>
  void stationary_while(double eps, More more) {
    StationaryWalker w(sum_, eps);
    std::int64_t done = 0;
    while (more(w, done)) {
      w.next();
      ++done;
    }
    if (done == 0) return;
    pieces_.push_back({Piece::Kind::stationary, 0, done, {}, sum_, eps});
    sum_ = w.position();
    size_ += static_cast<std::size_t>(done);
  }

  IntVec sum_;
  std::size_t size_ = 0;
  std::vector<Piece> pieces_;
};

class PiecePlayer {
public:
  explicit PiecePlayer(std::vector<Piece> pieces = {}) : pieces_(std::move(pieces)) {}

  bool done() {
    while (at_ < pieces_.size() && used_ == length(pieces_[at_])) {
      ++at_;
      used_ = 0;
      walker_.reset();
    }
    return at_ == pieces_.size();
  }

  int next() {
    if (done()) throw std::logic_error("PiecePlayer: exhausted");
    const Piece& p = pieces_[at_];
    const std::int64_t i = used_++;
    switch (p.kind) {
      case Piece::Kind::run:
        return p.index;
      case Piece::Kind::steps:
        return p.steps[static_cast<std::size_t>(i)];
      case Piece::Kind::stationary:
        if (!walker_) walker_.emplace(p.start, p.eps);
        return walker_->next();
    }
    throw std::logic_error("PiecePlayer: bad piece");
  }

private:
  static std::int64_t length(const Piece& p) {
    return p.kind == Piece::Kind::steps ? static_cast<std::int64_t>(p.steps.size()) : p.count;
  }
  std::vector<Piece> pieces_;
  std::size_t at_ = 0;
  std::int64_t used_ = 0;
  std::optional<StationaryWalker> walker_;
};

// The segment-by-segment part of the shadowing construction.
void shadow_segments(Emitter& e, const SpherePath& path, double eps1, ShadowAudit* audit) {
  const std::size_t n = path.start.dim();
  const auto axes = all_axes(n);
  const std::size_t count = path.aimed_count();
  const double delta = count ? eps1 / (4.0 * static_cast<double>(count)) : 0.0;
  double prev = angle_to(e.sum(), path.start);
  if (audit) {
    audit->delta = delta;
    audit->eps1 = eps1;
    audit->terminal_distance = {prev};
    audit->segment_end = {e.size()};
  }
  for (const auto& s : path.steps) {
    if (s.kind != StepKind::aimed) continue;
    const std::size_t a = s.vertex;
    const SpherePoint w = SpherePoint::vertex(n, a);
    const double terminal_to_w = angle_between(s.end, w).radians();
    std::int64_t m = 0;
    if (terminal_to_w <= 1e-12) {
      m = copies_toward(e.sum(), axes, a, eps1 / 2, true);
    } else if (terminal_to_w > angle_to_axis(e.sum(), axes, a, 0)) {
      m = 0;
    } else {
      m = copies_toward(e.sum(), axes, a, terminal_to_w, true);
    }
    e.run(a, m);
    const double d = angle_to(e.sum(), s.end);
    const double bound = std::max(eps1 / 2, prev + delta);
    if (d > bound + 1e-12)
      throw std::logic_error("shadow_walk: drift bound violated at segment " +
                             std::to_string(audit ? audit->segment_end.size() : 0) + ": distance " +
                             std::to_string(d) + " exceeds " + std::to_string(bound));
    prev = d;
    if (audit) {
      audit->terminal_distance.push_back(d);
      audit->segment_end.push_back(e.size());
    }
  }
}

}  // namespace

IntVec LatticeWalk::position(std::size_t k) const {
  if (k > indices.size()) throw std::out_of_range("LatticeWalk::position: step out of range");
  IntVec x = start;
  for (std::size_t i = 0; i < k; ++i) apply_step(x, indices[i]);
  return x;
}

std::vector<IntVec> LatticeWalk::positions() const {
  std::vector<IntVec> out{start};
  out.reserve(indices.size() + 1);
  IntVec x = start;
  for (int idx : indices) {
    apply_step(x, idx);
    out.push_back(x);
  }
  return out;
}

void apply_step(IntVec& x, int index) {
  const auto a = static_cast<std::size_t>(std::abs(index));
  if (index == 0 || a > x.size()) throw std::out_of_range("apply_step: index out of range");
  x[a - 1] += index > 0 ? 1 : -1;
}

double norm(std::span<const std::int64_t> x) {
  double s = 0.0;
  for (auto v : x) s += static_cast<double>(v) * static_cast<double>(v);
  return std::sqrt(s);
}

double stationary_radius(double eps, std::size_t n) {
  if (!(eps > 0.0)) throw std::domain_error("stationary_radius: eps must be positive");
  if (n <= 1) return 0.0;
  if (n == 2) return csc_or_one(eps / 2);
  return std::max(csc_or_one(eps / 3), 2.0 * stationary_radius(eps / 3, n - 1));
}

struct StationaryWalker::Level {
  Level(const IntVec& x, std::vector<std::size_t> ax, double e) : axes(std::move(ax)), eps(e) {
    if (axes.size() == 2) {
      target = std::atan2(static_cast<double>(x[axes[1]]), static_cast<double>(x[axes[0]]));
    } else if (axes.size() >= 3) {
      dropped = axes.front();
      for (std::size_t i : axes)
        if (x[i] <= x[dropped]) dropped = i;
      std::vector<std::size_t> rest;
      for (std::size_t i : axes)
        if (i != dropped) rest.push_back(i);
      start_to_vertex = angle_to_axis(x, axes, dropped, 0);
      inner = std::make_unique<Level>(x, std::move(rest), eps / 3);
    }
  }

  std::size_t next(const IntVec& x) {
    if (axes.size() == 1) return axes[0];
    if (axes.size() == 2) {
      const double a = static_cast<double>(x[axes[0]]), b = static_cast<double>(x[axes[1]]);
      const double first = std::abs(std::atan2(b, a + 1.0) - target);
      const double second = std::abs(std::atan2(b + 1.0, a) - target);
      return second < first ? axes[1] : axes[0];
    }
    if (pending == 0 && angle_to_axis(x, axes, dropped, 0) - start_to_vertex > eps / 3)
      pending = copies_toward(x, axes, dropped, start_to_vertex, false);
    if (pending > 0) {
      --pending;
      return dropped;
    }
    return inner->next(x);
  }

  std::vector<std::size_t> axes;
  double eps;
  double target = 0.0;
  std::size_t dropped = 0;
  double start_to_vertex = 0.0;
  std::int64_t pending = 0;
  std::unique_ptr<Level> inner;
};

StationaryWalker::StationaryWalker(IntVec x, double eps) : pos_(std::move(x)) {
  if (pos_.empty()) throw std::domain_error("stationary_walk: empty start");
  for (auto v : pos_)
    if (v <= 0) throw std::domain_error("stationary_walk: start needs positive coordinates");
  if (!(norm(pos_) > stationary_radius(eps, pos_.size())))
    throw std::domain_error("stationary_walk: start norm " + std::to_string(norm(pos_)) + " not above " +
                            std::to_string(stationary_radius(eps, pos_.size())));
  root_ = std::make_unique<Level>(pos_, all_axes(pos_.size()), eps);
}

StationaryWalker::~StationaryWalker() = default;
StationaryWalker::StationaryWalker(StationaryWalker&&) noexcept = default;
StationaryWalker& StationaryWalker::operator=(StationaryWalker&&) noexcept = default;

int StationaryWalker::next() {
  const std::size_t axis = root_->next(pos_);
  ++pos_[axis];
  return static_cast<int>(axis) + 1;
}

std::vector<int> stationary_walk(const IntVec& x, double eps, std::size_t min_steps) {
  StationaryWalker w(x, eps);
  std::vector<int> out;
  out.reserve(min_steps);
  for (std::size_t i = 0; i < min_steps; ++i) out.push_back(w.next());
  return out;
}

double segment_radius(const SpherePath& path, double eps1) {
  const std::size_t count = path.aimed_count();
  return count ? csc_or_one(eps1 / (4.0 * static_cast<double>(count))) : 0.0;
}

double shadow_radius(const SpherePath& path, double eps1, double eps2) {
  eps2 = std::min(eps2, eps1 / 4);
  return std::max(segment_radius(path, eps1), stationary_radius(eps2 / 8, path.start.dim()));
}

namespace {

std::vector<Piece> shadow_pieces(const SpherePath& path, const IntVec& x, double eps1, double eps2,
                                 std::size_t min_len, ShadowAudit* audit) {
  const std::size_t n = path.start.dim();
  if (x.size() != n) throw std::invalid_argument("shadow_walk: dimension mismatch");
  if (!(eps1 > 0.0) || !(eps2 > 0.0)) throw std::domain_error("shadow_walk: tolerances must be positive");
  for (auto v : x)
    if (v < 0) throw std::domain_error("shadow_walk: negative start coordinate");
  const double radius = segment_radius(path, eps1);
  if (!(norm(x) >= radius))
    throw std::domain_error("shadow_walk: start norm " + std::to_string(norm(x)) + " below required " +
                            std::to_string(radius));
  if (!(angle_to(x, path.start) < eps1 / 2))
    throw std::domain_error("shadow_walk: start projection not within eps1/2 of the path");
  eps2 = std::min(eps2, eps1 / 4);

  Emitter e(x);
  shadow_segments(e, path, eps1, audit);

  // Tail: a short directed path to the endpoint, shadowed at eps2/2 once the
  // norm is large enough for it.
  const SpherePoint& end = path.end();
  const SpherePoint here = radial_project(std::span<const std::int64_t>(e.sum()));
  if (angle_between(here, end).radians() > eps2 / 2) {
    const SpherePath tail = line_approx_sphere(here, end, eps2 / 4, DirectedScheme::stride);
    const std::size_t count = tail.aimed_count();
    if (count > 0) {
      const double tail_radius = csc_or_one(eps2 / 2 / (4.0 * static_cast<double>(count)));
      if (!(norm(e.sum()) > tail_radius)) e.stationary_until(eps2 / 8, tail_radius);
      shadow_segments(e, tail, eps2 / 2, nullptr);
    }
  }

  if (e.size() < min_len) {
    const auto remaining = static_cast<std::int64_t>(min_len - e.size());
    if (auto axis = vertex_axis(end)) {
      e.run(*axis, remaining);
    } else {
      e.stationary(eps2 / 8, remaining);
    }
  }
  return e.take();
}

}  // namespace

std::vector<int> shadow_walk(const SpherePath& path, const IntVec& x, double eps1, double eps2,
                             std::size_t min_len, ShadowAudit* audit) {
  PiecePlayer player(shadow_pieces(path, x, eps1, eps2, min_len, audit));
  std::vector<int> out;
  while (!player.done()) out.push_back(player.next());
  return out;
}

double arc_distance(const SpherePoint& p, const SpherePoint& a, const SpherePoint& b) {
  const double to_a = angle_between(p, a).radians();
  const double to_b = angle_between(p, b).radians();
  double c = 0.0, pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    c += a[i] * b[i];
    pa += p[i] * a[i];
    pb += p[i] * b[i];
  }
  const double det = 1.0 - c * c;
  if (det > 1e-24) {
    const double alpha = (pa - c * pb) / det;
    const double beta = (pb - c * pa) / det;
    if (alpha >= 0.0 && beta >= 0.0 && alpha + beta > 0.0) {
      std::vector<double> foot(p.dim());
      for (std::size_t i = 0; i < foot.size(); ++i) foot[i] = std::max(0.0, alpha * a[i] + beta * b[i]);
      return std::min({to_a, to_b, angle_between(p, radial_project(std::span<const double>(foot))).radians()});
    }
  }
  return std::min(to_a, to_b);
}

TargetSet::TargetSet(std::size_t dim, std::vector<std::vector<double>> vertices,
                     std::vector<std::pair<std::size_t, std::size_t>> edges, std::size_t basepoint)
    : dim_(dim), edges_(std::move(edges)), basepoint_(basepoint) {
  if (dim < 2) throw std::domain_error("target: dimension must be at least 2");
  if (vertices.empty()) throw std::domain_error("target: no vertices");
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    auto& c = vertices[v];
    const std::string tag = "target: vertex " + std::to_string(v);
    if (c.size() != dim) throw std::domain_error(tag + " has the wrong dimension");
    double sq = 0.0;
    for (double& x : c) {
      if (!std::isfinite(x)) throw std::domain_error(tag + " is not finite");
      if (x < -1e-9) throw std::domain_error(tag + " has a negative coordinate");
      x = std::max(0.0, x);
      sq += x * x;
    }
    if (std::abs(std::sqrt(sq) - 1.0) > 1e-9) throw std::domain_error(tag + " is not a unit vector");
    vertices_.push_back(radial_project(std::span<const double>(c)));
  }
  const std::size_t count = vertices_.size();
  if (basepoint_ >= count) throw std::domain_error("target: basepoint out of range");
  std::vector<std::vector<std::size_t>> adj(count);
  for (const auto& [a, b] : edges_) {
    if (a >= count || b >= count) throw std::domain_error("target: edge endpoint out of range");
    if (a == b) throw std::domain_error("target: edge joins a vertex to itself");
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> seen(count, false);
  std::vector<std::size_t> stack{basepoint_};
  seen[basepoint_] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[u])
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
  }
  if (reached != count) throw std::domain_error("target: skeleton is disconnected");
}

std::vector<SpherePoint> TargetSet::sample(double spacing) const {
  if (!(spacing > 0.0)) throw std::domain_error("TargetSet::sample: spacing must be positive");
  std::vector<SpherePoint> out(vertices_.begin(), vertices_.end());
  for (const auto& [a, b] : edges_) {
    const double len = angle_between(vertices_[a], vertices_[b]).radians();
    const auto pieces = static_cast<std::size_t>(std::max(1.0, std::ceil(len / spacing)));
    for (std::size_t j = 1; j < pieces; ++j)
      out.push_back(slerp(vertices_[a], vertices_[b], static_cast<double>(j) / static_cast<double>(pieces)));
  }
  return out;
}

double TargetSet::distance(const SpherePoint& p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : vertices_) best = std::min(best, angle_between(p, v).radians());
  for (const auto& [a, b] : edges_) best = std::min(best, arc_distance(p, vertices_[a], vertices_[b]));
  return best;
}

namespace {

std::size_t edge_pieces(const TargetSet& t, std::size_t a, std::size_t b, std::size_t k) {
  const double len = angle_between(t.vertices()[a], t.vertices()[b]).radians();
  return static_cast<std::size_t>(std::max(1.0, std::ceil(len * static_cast<double>(k))));
}

}  // namespace

std::vector<SpherePoint> skeleton_net(const TargetSet& target, std::size_t k) {
  if (k == 0) throw std::domain_error("skeleton_net: k must be positive");
  const auto verts = target.vertices();
  std::vector<SpherePoint> out(verts.begin(), verts.end());
  for (const auto& [a, b] : target.edges()) {
    const std::size_t pieces = edge_pieces(target, a, b, k);
    for (std::size_t j = 1; j < pieces; ++j)
      out.push_back(slerp(verts[a], verts[b], static_cast<double>(j) / static_cast<double>(pieces)));
  }
  return out;
}

std::vector<std::size_t> skeleton_tour(const TargetSet& target) {
  const std::size_t count = target.vertices().size();
  const auto edges = target.edges();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(count);  // (neighbour, edge)
  for (std::size_t e = 0; e < edges.size(); ++e) {
    adj[edges[e].first].push_back({edges[e].second, e});
    adj[edges[e].second].push_back({edges[e].first, e});
  }
  const bool eulerian =
      std::all_of(adj.begin(), adj.end(), [](const auto& nb) { return nb.size() % 2 == 0; });
  std::vector<bool> used(edges.size(), false);
  std::vector<std::size_t> tour;

  if (eulerian) {
    std::vector<std::size_t> next(count, 0), stack{target.basepoint()};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      auto& i = next[u];
      while (i < adj[u].size() && used[adj[u][i].second]) ++i;
      if (i == adj[u].size()) {
        tour.push_back(u);
        stack.pop_back();
      } else {
        used[adj[u][i].second] = true;
        stack.push_back(adj[u][i].first);
      }
    }
    std::reverse(tour.begin(), tour.end());
    return tour;
  }

  // Every edge out and back, depth first.
  std::vector<bool> seen(count, false);
  seen[target.basepoint()] = true;
  tour.push_back(target.basepoint());
  std::vector<std::pair<std::size_t, std::size_t>> stack{{target.basepoint(), 0}};
  while (!stack.empty()) {
    auto& [u, i] = stack.back();
    while (i < adj[u].size() && used[adj[u][i].second]) ++i;
    if (i == adj[u].size()) {
      stack.pop_back();
      if (!stack.empty()) tour.push_back(stack.back().first);
      continue;
    }
    const auto [w, e] = adj[u][i];
    used[e] = true;
    tour.push_back(w);
    if (!seen[w]) {
      seen[w] = true;
      stack.push_back({w, 0});
    } else {
      tour.push_back(u);
    }
  }
  return tour;
}

PhasePlanner::PhasePlanner(TargetSet target, DirectedScheme scheme)
    : target_(std::move(target)), scheme_(scheme) {}

const Phase& PhasePlanner::phase(std::size_t k) {
  if (k == 0) throw std::out_of_range("PhasePlanner::phase: phases start at 1");
  const std::size_t n = target_.dim();
  const double lip = projection_lipschitz(n);
  while (phases_.size() < k) {
    const std::size_t j = phases_.size() + 1;
    const double eps = std::ldexp(1.0, -static_cast<int>(j));
    const auto verts = target_.vertices();
    const auto tour = skeleton_tour(target_);
    std::vector<SpherePoint> loop{verts[tour.front()]};
    for (std::size_t i = 1; i < tour.size(); ++i) {
      const std::size_t pieces = edge_pieces(target_, tour[i - 1], tour[i], j);
      for (std::size_t p = 1; p <= pieces; ++p)
        loop.push_back(p == pieces ? verts[tour[i]]
                                   : slerp(verts[tour[i - 1]], verts[tour[i]],
                                           static_cast<double>(p) / static_cast<double>(pieces)));
    }
    SpherePolyline line(std::move(loop));
    const SimplexPoint start = phases_.empty() ? sphere_to_simplex(target_.base()) : phases_.back().directed.end();
    SimplexPath directed = direct_approx(sphere_to_simplex(line), start, eps / lip, scheme_);
    const double previous = phases_.empty() ? 0.0 : phases_.back().radius;
    const double radius = std::max(previous, shadow_radius(simplex_to_sphere(directed), eps, eps / 4));
    const std::size_t aimed = directed.aimed_count();
    phases_.push_back(Phase{j, eps, skeleton_net(target_, j), std::move(line), std::move(directed), aimed, radius});
  }
  return phases_[k - 1];
}

std::vector<Phase> plan_phases(const TargetSet& target, std::size_t phases, DirectedScheme scheme) {
  PhasePlanner planner(target, scheme);
  std::vector<Phase> out;
  for (std::size_t k = 1; k <= phases; ++k) out.push_back(planner.phase(k));
  return out;
}

struct SynthesisStream::Playback {
  PiecePlayer player;
};

SynthesisStream::SynthesisStream(TargetSet target, SynthesisConfig config)
    : config_(config),
      planner_(std::move(target), config.scheme),
      pos_(planner_.target().dim(), 0),
      playback_(std::make_unique<Playback>()) {}

SynthesisStream::~SynthesisStream() = default;
SynthesisStream::SynthesisStream(SynthesisStream&&) noexcept = default;
SynthesisStream& SynthesisStream::operator=(SynthesisStream&&) noexcept = default;

int SynthesisStream::next() {
  while (playback_->player.done()) refill();
  const int index = playback_->player.next();
  apply_step(pos_, index);
  if (emitting_phase_ != buffered_phase_) {
    emitting_phase_ = buffered_phase_;
    begins_.push_back(steps_);
  }
  ++steps_;
  return index;
}

std::size_t SynthesisStream::upcoming_phase() {
  if (!ramp_done_) refill();
  // An exhausted playback means the next step opens the following phase;
  // its walk is only built when that step is asked for.
  return playback_->player.done() ? buffered_phase_ + 1 : buffered_phase_;
}

void SynthesisStream::refill() {
  const std::size_t n = planner_.target().dim();

  if (!ramp_done_) {
    ramp_done_ = true;
    const Phase& first = planner_.phase(1);
    const SpherePoint aim = simplex_to_sphere(first.directed.start);
    IntVec v(n);
    for (double lambda = std::max(1.0, first.radius);; lambda *= 1.1) {
      for (std::size_t i = 0; i < n; ++i)
        v[i] = std::max<std::int64_t>(1, std::llround(lambda * aim[i]));
      if (norm(v) > first.radius && angle_to(v, aim) < first.eps / 2) break;
    }
    // Largest remaining deficit first, lowest axis on ties.
    IntVec at(n, 0);
    const std::int64_t total = coordinate_sum(v);
    Piece ramp{Piece::Kind::steps, 0, 0, {}, {}, 0.0};
    ramp.steps.reserve(static_cast<std::size_t>(total));
    for (std::int64_t s = 0; s < total; ++s) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < n; ++i)
        if (v[i] - at[i] > v[best] - at[best]) best = i;
      ++at[best];
      ramp.steps.push_back(static_cast<int>(best) + 1);
    }
    buffered_phase_ = 0;
    if (!ramp.steps.empty()) {
      playback_->player = PiecePlayer({std::move(ramp)});
      return;
    }
  }

  // The stream position equals the end of the played-back walk here.
  const std::size_t k = buffered_phase_ + 1;
  const Phase& phase = planner_.phase(k);
  const double next_radius = planner_.phase(k + 1).radius;
  const double reach = std::ceil(projection_lipschitz(n) * next_radius) + 1.0 - static_cast<double>(coordinate_sum(pos_));
  const std::size_t min_len = std::max<std::size_t>(config_.min_phase_steps, reach > 0.0 ? static_cast<std::size_t>(reach) : 0);
  playback_->player =
      PiecePlayer(shadow_pieces(simplex_to_sphere(phase.directed), pos_, phase.eps, phase.eps / 4, min_len, nullptr));
  buffered_phase_ = k;
}

}  // namespace boundwalk

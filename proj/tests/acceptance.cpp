// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// criterion fails.

#include "boundwalk/boundary_verify.hpp"
#include "boundwalk/cat0_model.hpp"
#include "boundwalk/simplex_paths.hpp"
#include "boundwalk/walk_synthesis.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <unordered_map>

using namespace boundwalk;
using namespace testing_support;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> unit(std::vector<double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

std::string phase_list(const ConvergenceReport& r) {
  std::string s;
  for (const auto& p : r.phases)
    s += fmt(" k=%zu[%zu..%zu%s] d_H=%.4g tau=%.4g;", p.phase, p.begin_step, p.end_step,
             p.complete ? "" : " incomplete", p.d_h, p.tolerance);
  return s;
}

Outcome vertex_limit() {
  const auto t0 = std::chrono::steady_clock::now();
  SynthesisStream s(TargetSet(2, {{1, 0}}, {}, 0));
  const auto r = convergence_report(s, 3);
  const double secs = seconds_since(t0);
  const bool ok = r.phases.size() == 3 && r.phases.back().complete && r.phases.back().d_h <= 0.01 && secs < 5;
  return {ok, phase_list(r) + fmt(" steps=%zu time=%.2fs", r.prefix_length, secs)};
}

Outcome edge_limit() {
  const auto t0 = std::chrono::steady_clock::now();
  SynthesisStream s(TargetSet(3, {{1, 0, 0}, {0, 1, 0}}, {{0, 1}}, 0));
  const auto r = convergence_report(s, 4, {}, 1000000);
  const double secs = seconds_since(t0);
  bool ok = r.phases.size() == 4 && r.pass() && r.prefix_length <= 1000000 && secs < 60;
  ok = ok && r.phases[3].d_h <= 0.15;
  return {ok, phase_list(r) + fmt(" steps=%zu (cap 1e6) time=%.2fs", r.prefix_length, secs)};
}

Outcome loop_limit() {
  const auto t0 = std::chrono::steady_clock::now();
  SynthesisStream s(TargetSet(4, {unit({2, 1, 1, 1}), unit({1, 2, 1, 1}), unit({1, 1, 2, 1})},
                              {{0, 1}, {1, 2}, {2, 0}}, 0));
  const auto r = convergence_report(s, 3);
  const double secs = seconds_since(t0);
  bool ok = r.phases.size() == 3 && r.phases.back().complete && r.phases.back().d_h <= 0.2;
  for (std::size_t k = 2; ok && k < r.phases.size(); ++k) ok = r.phases[k].d_h < r.phases[k - 1].d_h;
  return {ok, phase_list(r) + fmt(" steps=%zu time=%.2fs", r.prefix_length, secs)};
}

/// Random aimed segments of modest length that stay away from their vertex.
SpherePath random_directed(Rng& g, std::size_t n, std::size_t segments) {
  std::uniform_real_distribution<double> len(0.01, 0.12);
  std::uniform_int_distribution<std::size_t> v(0, n - 1);
  SpherePath p{random_sphere(g, n), {}};
  while (p.aimed_count() < segments) {
    const std::size_t w = v(g);
    const auto& from = p.end();
    const double to_vertex = angle_between(from, SpherePoint::vertex(n, w)).radians();
    if (to_vertex < 0.4) continue;
    p.steps.push_back({StepKind::aimed, w, slerp(from, SpherePoint::vertex(n, w), len(g) / to_vertex)});
  }
  return p;
}

Outcome drift_bound() {
  Rng g(2024);
  std::uniform_int_distribution<std::size_t> segs(1, 20);
  std::uniform_real_distribution<double> e(0.05, 0.3);
  std::size_t violations = 0, checked = 0, longest = 0;
  for (int r = 0; r < 100; ++r) {
    const std::size_t n = 2 + r % 3;
    const auto path = random_directed(g, n, segs(g));
    const double eps1 = e(g);
    const double radius = shadow_radius(path, eps1, eps1 / 4);
    IntVec x(n);
    for (std::size_t i = 0; i < n; ++i)
      x[i] = std::max<std::int64_t>(1, std::llround(1.5 * radius * path.start[i]));
    ShadowAudit audit;
    std::vector<int> w;
    try {
      w = shadow_walk(path, x, eps1, eps1 / 4, 0, &audit);
    } catch (const std::logic_error&) {
      ++violations;
      continue;
    }
    longest = std::max(longest, w.size());
    // Recompute every terminal distance from the integer positions.
    IntVec y = x;
    double prev = oracle_angle(y, coords(path.start));
    std::size_t seg = 0, done = 0;
    for (const auto& s : path.steps) {
      if (s.kind != StepKind::aimed) continue;
      ++seg;
      for (; done < audit.segment_end[seg]; ++done) ++y[static_cast<std::size_t>(w[done] - 1)];
      const double d = oracle_angle(y, coords(s.end));
      const double bound = std::max(eps1 / 2, prev + eps1 / (4.0 * path.aimed_count()));
      ++checked;
      if (d > bound + 1e-12) ++violations;
      prev = d;
    }
  }
  return {violations == 0, fmt(" runs=100 segments_checked=%zu violations=%zu longest_walk=%zu", checked,
                               violations, longest)};
}

Outcome project_segment() {
  Rng g(5);
  std::uniform_real_distribution<double> rad(1, 100);
  std::size_t bad_bound = 0, bad_aim = 0;
  double worst_slack = -INFINITY;
  for (int r = 0; r < 10000; ++r) {
    const std::size_t n = 2 + r % 4;
    auto x = random_positive(g, n);
    const double target = rad(g), cur = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    for (double& v : x) v *= target / cur;
    const std::size_t i = static_cast<std::size_t>(r) % n;
    auto y = x;
    y[i] += 1;
    const double moved = oracle_angle(x, y);
    const double bound = std::asin(1 / target);
    worst_slack = std::max(worst_slack, moved - bound);
    if (moved > bound + 1e-12) ++bad_bound;
    std::vector<double> e(n, 0);
    e[i] = 1;
    // rho(y) lies on the arc from rho(x) to w_i.
    if (std::abs(oracle_angle(x, y) + oracle_angle(y, e) - oracle_angle(x, e)) > 1e-12) ++bad_aim;
  }
  return {bad_bound == 0 && bad_aim == 0,
          fmt(" samples=10000 bound_violations=%zu off_arc=%zu max(angle-asin(1/|x|))=%.3g", bad_bound, bad_aim,
              worst_slack)};
}

Outcome gets_close() {
  Rng g(13);
  std::uniform_real_distribution<double> u(0, 1), side(0, pi), ang(0, pi);
  std::size_t accepted = 0, failed = 0, proposals = 0;
  while (accepted < 10000) {
    ++proposals;
    const std::size_t n = 3 + accepted % 2;
    const auto a = random_sphere(g, n), w = random_sphere(g, n), b = random_sphere(g, n);
    const auto ap = slerp(a, w, u(g));
    if (!(angle_between(b, w).radians() < angle_between(ap, w).radians())) continue;
    if (angle_between(a, ap).radians() < 1e-6) continue;
    const auto v = monotone_approach(a, ap, w, b);
    if (v == ApproachVerdict::inapplicable) continue;
    ++accepted;
    if (v != ApproachVerdict::holds) ++failed;
  }
  double worst = 0;
  for (int r = 0; r < 10000; ++r) {
    const double aw = side(g), bw = side(g), c = ang(g);
    const std::vector<double> pa{std::sin(aw), 0, std::cos(aw)};
    const std::vector<double> pb{std::sin(bw) * std::cos(c), std::sin(bw) * std::sin(c), std::cos(bw)};
    worst = std::max(worst, std::abs(third_side(Angle(aw), Angle(bw), Angle(c)).radians() - oracle_angle(pa, pb)));
  }
  return {failed == 0 && worst <= 1e-10,
          fmt(" quadruples=10000 (of %zu proposals) failures=%zu third_side_max_err=%.3g", proposals, failed, worst)};
}

/// Sup over dense samples of `chain` of the distance to the segments of
/// `line`. A sample stops scanning once it is within the running maximum.
double chain_to_chain(const std::vector<std::vector<double>>& chain, const std::vector<std::vector<double>>& line,
                      double spacing) {
  double h = 0;
  for (const auto& p : densify(chain, spacing)) {
    double best = line.size() == 1 ? oracle_dist(p, line[0]) : INFINITY;
    for (std::size_t i = 1; i < line.size() && best > h; ++i)
      best = std::min(best, oracle_segment_dist(p, line[i - 1], line[i]));
    h = std::max(h, best);
  }
  return h;
}

/// Uniform grid over points of the simplex. nearest() is exact: a hit in the
/// 3^n block around the query closer than one cell cannot be beaten outside
/// it, otherwise every point is scanned.
class Grid {
public:
  Grid(std::vector<std::vector<double>> pts, double cell) : pts_(std::move(pts)), cell_(cell) {
    for (std::size_t i = 0; i < pts_.size(); ++i) cells_[key(pts_[i], {})].push_back(i);
  }

  double nearest(const std::vector<double>& q) const {
    const std::size_t n = q.size();
    double best = INFINITY;
    std::vector<int> off(n, -1);
    while (true) {
      if (const auto it = cells_.find(key(q, off)); it != cells_.end())
        for (std::size_t i : it->second) best = std::min(best, oracle_dist(q, pts_[i]));
      std::size_t j = 0;
      while (j < n && off[j] == 1) off[j++] = -1;
      if (j == n) break;
      ++off[j];
    }
    if (best <= cell_) return best;
    for (const auto& p : pts_) best = std::min(best, oracle_dist(q, p));
    return best;
  }

private:
  std::string key(const std::vector<double>& p, const std::vector<int>& off) const {
    std::string k;
    for (std::size_t i = 0; i < p.size(); ++i)
      k += std::to_string(static_cast<long>(std::floor(p[i] / cell_)) + (off.empty() ? 0 : off[i])) + ',';
    return k;
  }
  std::vector<std::vector<double>> pts_;
  double cell_;
  std::unordered_map<std::string, std::vector<std::size_t>> cells_;
};

Outcome direct_contract() {
  Rng g(7);
  std::uniform_real_distribution<double> e(0.02, 0.2);
  std::uniform_int_distribution<std::size_t> len(2, 5);
  std::size_t bad = 0;
  double worst_ratio = 0;
  for (int r = 0; r < 100; ++r) {
    const std::size_t n = 3 + r % 2;
    std::vector<SimplexPoint> v;
    for (std::size_t i = len(g); i > 0; --i) v.push_back(random_simplex(g, n));
    const SimplexPolyline line(v);
    const double eps = e(g);
    const auto p = direct_approx(line, v.front(), eps);
    std::vector<std::vector<double>> lv;
    for (const auto& q : v) lv.push_back(coords(q));
    const auto pv = path_vertices(p);
    const double spacing = eps / 50;
    // Line samples against dense path samples: overestimates the distance to
    // the path by at most spacing / 2.
    const Grid grid(densify(pv, spacing), eps / 2);
    double back = 0;
    for (const auto& q : densify(lv, spacing)) back = std::max(back, grid.nearest(q));
    const double h = std::max(chain_to_chain(pv, lv, spacing), back);
    const double end = oracle_dist(pv.back(), lv.back());
    worst_ratio = std::max({worst_ratio, h / eps, 2 * end / eps});
    if (h > eps || end > eps / 2 || !is_well_formed(p)) ++bad;
  }
  return {bad == 0, fmt(" polylines=100 failures=%zu max(d_H/eps, 2*end/eps)=%.3f", bad, worst_ratio)};
}

Outcome in_place() {
  Rng g(8);
  std::uniform_real_distribution<double> e(0.02, 0.1), jitter(1.0, 1.3);
  std::size_t bad = 0;
  double worst_ratio = 0;
  for (int r = 0; r < 50; ++r) {
    const std::size_t n = 2 + r % 3;
    const double eps = e(g);
    const double radius = stationary_radius(eps, n);
    IntVec x(n);
    for (auto& c : x) c = static_cast<std::int64_t>(std::ceil(radius * jitter(g)));
    const std::vector<double> start(x.begin(), x.end());
    const auto w = stationary_walk(x, eps, 10000);
    IntVec y = x;
    for (int i : w) {
      ++y[static_cast<std::size_t>(i - 1)];
      const double d = oracle_angle(y, start);
      worst_ratio = std::max(worst_ratio, d / eps);
      if (d > eps) ++bad;
    }
  }
  return {bad == 0, fmt(" starts=50 steps=10000 violations=%zu max(angle/eps)=%.3f", bad, worst_ratio)};
}

Outcome algebra() {
  Rng g(9);
  std::size_t bad = 0;
  auto element = [&](std::size_t n) {
    std::uniform_int_distribution<int> l(1, static_cast<int>(n)), len(0, 15);
    std::uniform_int_distribution<std::int64_t> t(-9, 9);
    std::bernoulli_distribution sign(0.5);
    std::vector<int> w(static_cast<std::size_t>(len(g)));
    for (auto& x : w) x = sign(g) ? l(g) : -l(g);
    IntVec v(n);
    for (auto& x : v) x = t(g);
    return GroupWord(n, w, v);
  };
  for (int r = 0; r < 1000; ++r) {
    const std::size_t n = 2 + r % 3;
    const auto a = element(n), b = element(n);
    if (!(phi(a * b) == phi(a) * phi(b))) ++bad;
    if (!(phi_inverse(phi(a)) == a) || !(phi(phi_inverse(b)) == b)) ++bad;
  }
  std::uniform_int_distribution<std::int64_t> c(-1000, 1000);
  for (int r = 0; r < 1000; ++r) {
    const std::size_t n = 2 + r % 3;
    const std::size_t i = 1 + static_cast<std::size_t>(r) % n;
    IntVec x(n + 1), moved(n + 1);
    for (auto& v : x) v = c(g);
    const std::int64_t a0 = c(g);
    auto rhs = f_on_flat<std::int64_t>(i, x);
    moved[0] = x[0] + a0;
    rhs[0] += a0;
    rhs[i] += a0;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::int64_t v = c(g);
      moved[j] = x[j] + v;
      rhs[j] += v;
    }
    if (f_on_flat<std::int64_t>(i, moved) != rhs) ++bad;
  }
  for (int r = 0; r < 1000; ++r) {
    const std::size_t n = 2 + r % 3;
    std::uniform_int_distribution<int> l(1, static_cast<int>(n));
    LatticeWalk walk{IntVec(n, 0), std::vector<int>(static_cast<std::size_t>(r % 60))};
    for (auto& x : walk.indices) x = l(g);
    const auto half = walk_from_word(word_from_indices(walk.indices, n).letters(), n);
    const auto pos = walk.positions();
    for (std::size_t k = 0; k < pos.size(); ++k)
      if (half[k] != to_half_plane(pos[k])) ++bad;
  }
  return {bad == 0, fmt(" phi_pairs=1000 equivariance_samples=1000 round_trips=1000 mismatches=%zu", bad)};
}

Outcome hausdorff_oracle() {
  Rng g(10);
  std::uniform_int_distribution<std::size_t> size(1, 1000);
  double worst = 0;
  for (int r = 0; r < 100; ++r) {
    const std::size_t n = 2 + r % 4;
    std::vector<SpherePoint> a, b;
    for (std::size_t i = size(g); i > 0; --i) a.push_back(random_sphere(g, n));
    for (std::size_t i = size(g); i > 0; --i) b.push_back(random_sphere(g, n));
    worst = std::max(worst, std::abs(hausdorff(a, b) - hausdorff_brute(a, b)));
  }
  return {worst <= 1e-12, fmt(" pairs=100 max_abs_diff=%.3g", worst)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"vertex limit", vertex_limit},
      {"edge limit", edge_limit},
      {"loop limit", loop_limit},
      {"shadow_walk drift bound", drift_bound},
      {"projected step bound", project_segment},
      {"monotone approach oracle", gets_close},
      {"direct approximation contract", direct_contract},
      {"stationary walk contract", in_place},
      {"algebra", algebra},
      {"hausdorff oracle", hausdorff_oracle},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string(" exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s %zu %s:%s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

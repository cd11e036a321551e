#include "boundwalk/simplex_paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace boundwalk {

namespace {

using Vec = std::vector<double>;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

double dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Vec unit_vec(std::size_t n, std::size_t axis) {
  Vec v(n, 0.0);
  v[axis] = 1.0;
  return v;
}

// Moves x a fraction t of the way toward vertex e_v.
Vec toward(std::span<const double> x, std::size_t v, double t) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = (1.0 - t) * x[i];
  r[v] += t;
  return r;
}

double dist_to_segment(std::span<const double> p, std::span<const double> a,
                       std::span<const double> b) {
  const Vec ab = sub(b, a);
  const Vec ap = sub(p, a);
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(ap, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = ap[i] - t * ab[i];
    s += d * d;
  }
  return std::sqrt(s);
}

SimplexPoint make_point(Vec v) { return SimplexPoint::from_bary(std::move(v), 1e-9); }

// A stop region registered by one recursion level: the path must halt the
// first time it gets `radius` away from the segment [a, a + len * u].
struct StopRule {
  StopRule(const Vec& from, const Vec& to, double r, int lvl) : a(from), u(sub(to, from)), radius(r), level(lvl) {
    len = norm(u);
    if (len > 0.0)
      for (double& x : u) x /= len;
  }

  double distance(std::span<const double> p) const {
    const double t = std::clamp(proj(p), 0.0, len);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p[i] - a[i] - t * u[i];
      s += d * d;
    }
    return std::sqrt(s);
  }

  // Parameter s in [0, 1] where x + s * (y - x) first reaches `radius`,
  // given that x is inside and y is not. The distance is convex along the
  // line, so the crossing is unique; it is found piece by piece.
  double exit(std::span<const double> x, std::span<const double> y) const {
    const std::size_t n = x.size();
    double w0w0 = 0.0, w0d = 0.0, dd = 0.0, t0 = 0.0, td = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double w = x[i] - a[i], d = y[i] - x[i];
      w0w0 += w * w;
      w0d += w * d;
      dd += d * d;
      t0 += w * u[i];
      td += d * u[i];
    }
    const double r2 = radius * radius;
    auto largest_root = [](double qa, double qb, double qc) {
      if (!(qa > 0.0)) return std::numeric_limits<double>::quiet_NaN();
      const double disc = qb * qb - qa * qc;
      return (-qb + std::sqrt(std::max(0.0, disc))) / qa;
    };
    const double slack = 1e-9 * std::max(1.0, len);
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](double s, double lo, double hi) {
      if (!std::isfinite(s)) return;
      const double t = t0 + s * td;
      if (t >= lo - slack && t <= hi + slack) best = std::min(best, s);
    };
    // Cylinder around the segment.
    consider(largest_root(dd - td * td, w0d - t0 * td, w0w0 - t0 * t0 - r2), 0.0, len);
    // Ball around a.
    consider(largest_root(dd, w0d, w0w0 - r2), -std::numeric_limits<double>::infinity(), 0.0);
    // Ball around the far end.
    consider(largest_root(dd, w0d - len * td, w0w0 - 2.0 * len * t0 + len * len - r2), len,
             std::numeric_limits<double>::infinity());
    if (std::isfinite(best)) return std::clamp(best, 0.0, 1.0);
    double lo = 0.0, hi = 1.0;
    Vec m(n);
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      for (std::size_t i = 0; i < n; ++i) m[i] = x[i] + mid * (y[i] - x[i]);
      (distance(m) < radius ? lo : hi) = mid;
    }
    return hi;
  }

  Vec a;
  Vec u;
  double len = 0.0;
  double radius = 0.0;
  int level = 0;

private:
  double proj(std::span<const double> p) const {
    double t = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) t += (p[i] - a[i]) * u[i];
    return t;
  }
};

class PathBuilder {
public:
  explicit PathBuilder(const SimplexPoint& start)
      : path_{start, {}}, current_(start.bary().begin(), start.bary().end()) {}

  const Vec& current() const { return current_; }
  std::size_t dim() const { return current_.size(); }

  // Moves a fraction t toward vertex v, truncating at the earliest exit from
  // an active stop region. Returns false when truncated.
  bool aim(std::size_t v, double t) {
    if (t <= 0.0) return true;
    Vec end = t >= 1.0 ? unit_vec(dim(), v) : toward(current_, v, t);
    double cut = 1.0;
    int hit = -1;
    for (const auto& rule : stops_) {
      if (rule.distance(end) < rule.radius) continue;
      const double s = rule.distance(current_) >= rule.radius ? 0.0 : rule.exit(current_, end);
      if (s < cut || (s == cut && hit >= 0 && rule.level < hit)) {
        cut = s;
        hit = rule.level;
      }
    }
    if (hit >= 0) {
      triggered_ = hit;
      end = toward(current_, v, t * cut);
    }
    if (cut > 0.0) push(StepKind::aimed, v, std::move(end));
    return hit < 0;
  }

  void push_stop(StopRule rule) { stops_.push_back(std::move(rule)); }
  void pop_stop() { stops_.pop_back(); }

  int triggered() const { return triggered_; }
  void clear_trigger() { triggered_ = -1; }

  SimplexPath take() { return std::move(path_); }

private:
  void push(StepKind kind, std::size_t v, Vec end) {
    current_ = end;
    path_.steps.push_back({kind, v, make_point(std::move(end))});
  }

  SimplexPath path_;
  Vec current_;
  std::vector<StopRule> stops_;
  int triggered_ = -1;
};

struct Frame {
  PathBuilder& builder;
  LineApproxTrace* trace;
};

constexpr double kCoincide = 1e-12;

// If target lies on the segment from x toward some vertex of `face`,
// returns that vertex and the fraction.
std::optional<std::pair<std::size_t, double>> direct_hit(const Vec& x, const Vec& target,
                                                         std::span<const std::size_t> face) {
  for (std::size_t w : face) {
    if (x[w] >= 1.0) continue;
    const double t = (target[w] - x[w]) / (1.0 - x[w]);
    if (!(t > 0.0 && t <= 1.0 + 1e-12)) continue;
    const Vec p = toward(x, w, std::min(t, 1.0));
    if (dist(p, target) <= 1e-12) return std::make_pair(w, std::min(t, 1.0));
  }
  return std::nullopt;
}

// Sine of the angle between lines (x->target) and (w->target).
double crossing_sine(const Vec& x, const Vec& target, const Vec& w) {
  const Vec a = sub(target, x);
  const Vec b = sub(w, target);
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

// Return leg toward the pivot. Moving toward the pivot alone lands at the
// right place along the approach line but keeps any sideways error from the
// excursion; small moves toward other vertices afterwards remove that error,
// so the leg ends on the line itself. Falls back to the plain pivot move when
// the error is negligible or the correction would not be small.
bool return_to_line(PathBuilder& b, const Vec& p, std::size_t pivot, double t, const Vec& target,
                    const Vec& ua) {
  const std::size_t n = p.size();
  const Vec plain = toward(p, pivot, t);
  const double along = dot(sub(plain, target), ua);
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::max(0.0, target[i] + along * ua[i]);
  double alpha = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    if (p[i] > 0.0) alpha = std::min(alpha, y[i] / p[i]);
  if (dist(plain, y) <= 1e-13 || !(alpha >= 0.5 * (1.0 - t))) return b.aim(pivot, t);

  // y = alpha * p + sum_w beta_w e_w, reached by the pivot move followed by
  // one move per corrected vertex.
  Vec beta(n);
  for (std::size_t i = 0; i < n; ++i) beta[i] = std::max(0.0, y[i] - alpha * p[i]);
  std::vector<std::size_t> order{pivot};
  for (std::size_t i = 0; i < n; ++i)
    if (i != pivot && beta[i] > 0.0) order.push_back(i);
  std::vector<double> frac(order.size());
  double mass = 1.0;
  for (std::size_t j = order.size(); j-- > 0;) {
    frac[j] = mass > 0.0 ? std::min(1.0, beta[order[j]] / mass) : 0.0;
    mass -= beta[order[j]];
  }
  for (std::size_t j = 0; j < order.size(); ++j)
    if (!b.aim(order[j], frac[j])) return false;
  return true;
}

// One recursion level: drives the builder from its current point to within
// eps/2 of `target` (interior of `face`) without leaving the eps/2
// neighborhood of the starting segment. Returns false if an enclosing
// level's stop rule fired.
bool approach(Frame& f, const Vec& target, std::vector<std::size_t> face, double eps, int level) {
  PathBuilder& b = f.builder;
  const std::size_t n = b.dim();
  const Vec origin = b.current();
  const bool top = level == 0 && f.trace != nullptr;

  if (dist(origin, target) <= kCoincide) return true;
  if (auto hit = direct_hit(origin, target, face)) return b.aim(hit->first, hit->second);
  if (dist(origin, target) <= eps / 2) return true;
  if (face.size() < 2) throw std::logic_error("line_approx: vertex target missed by direct hit");

  // Pick the pivot vertex: farthest from the target, among those whose line
  // through the target crosses [origin, target] at a usable angle.
  std::vector<std::size_t> order(face.begin(), face.end());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return dist(unit_vec(n, x), target) > dist(unit_vec(n, y), target);
  });
  std::size_t pivot = order.front();
  double best_sine = -1.0;
  for (std::size_t w : order) {
    const double s = crossing_sine(origin, target, unit_vec(n, w));
    if (s >= 0.1) {
      pivot = w;
      break;
    }
    if (s > best_sine) {
      best_sine = s;
      pivot = w;
    }
  }

  const Vec pv = unit_vec(n, pivot);
  const double lambda = target[pivot];
  Vec opposite(n);
  for (std::size_t i = 0; i < n; ++i) opposite[i] = (target[i] - lambda * pv[i]) / (1.0 - lambda);
  opposite[pivot] = 0.0;
  std::vector<std::size_t> sub_face;
  for (std::size_t w : face)
    if (w != pivot) sub_face.push_back(w);

  // Plane through target spanned by the approach line and the pivot line.
  Vec ua = sub(origin, target);
  const double ua_len = norm(ua);
  for (double& x : ua) x /= ua_len;
  Vec ub = sub(opposite, target);
  {
    const double proj = dot(ub, ua);
    for (std::size_t i = 0; i < n; ++i) ub[i] -= proj * ua[i];
    const double len = norm(ub);
    if (len < 1e-14) throw std::logic_error("line_approx: degenerate pivot plane");
    for (double& x : ub) x /= len;
  }
  const double pivot_height = dot(sub(pv, target), ub);
  const double excursion = eps / 2;

  auto off_plane = [&](const Vec& p) {
    const Vec d = sub(p, target);
    const double sa = dot(d, ua), sb = dot(d, ub);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = d[i] - sa * ua[i] - sb * ub[i];
      s += r * r;
    }
    return std::sqrt(s);
  };
  auto axis_distance = [&](const Vec& p) { return dist_to_segment(p, pv, opposite); };

  std::size_t iter = 0;
  while (true) {
    const Vec c = b.current();
    if (top) f.trace->distance_to_axis.push_back(axis_distance(c));
    if (dist(c, target) <= eps / 2) break;
    if (iter >= kLineApproxIterationCap)
      throw std::runtime_error("line_approx: iteration cap reached");
    ++iter;
    if (top) f.trace->outer_iterations = iter;

    // Recursion tolerance: eps / 2^i for the smallest admissible i >= 3.
    // Unless the sub-face target is already within eps/4 of the target, the
    // excursion must end strictly above the approach line, and its error must
    // stay small next to the advance the return leg would make from the ideal
    // exit point.
    const double axis_d = axis_distance(c);
    const double drift = off_plane(c);
    double limit = std::min(axis_d / 4, eps / 4 - drift);
    if (dist(opposite, target) > eps / 4) {
      auto exit_point = [&](double radius) {
        const StopRule rule(origin, target, radius, level);
        if (rule.distance(opposite) < radius || rule.distance(c) >= radius) return opposite;
        const double s = rule.exit(c, opposite);
        Vec x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = c[i] + s * (opposite[i] - c[i]);
        return x;
      };
      limit = std::min(limit, dot(sub(exit_point(excursion / 2), target), ub) / 2);
      const Vec x = exit_point(excursion);
      const double hx = dot(sub(x, target), ub);
      if (hx > 0.0) {
        const double t = hx / (hx - pivot_height);
        Vec dir = sub(pv, x);
        Vec y(n);
        for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + t * dir[i];
        const double cosb = dot(dir, ua) / norm(dir);
        const double sinb = std::sqrt(std::max(0.0, 1.0 - cosb * cosb));
        limit = std::min(limit, dist(y, c) * sinb / 4);
      }
    }
    double tol = eps / 8;
    int halvings = 3;
    while (!(tol <= limit) && halvings < 200) {
      tol /= 2;
      ++halvings;
    }
    if (!(tol <= limit) || !(limit > 0.0)) throw std::runtime_error("line_approx: no admissible recursion tolerance");

    b.push_stop(StopRule(origin, target, excursion, level));
    const bool ok = approach(f, opposite, sub_face, tol, level + 1);
    b.pop_stop();
    if (!ok) {
      if (b.triggered() < level) return false;
      b.clear_trigger();
    }
    if (dist(b.current(), target) <= eps / 2) continue;

    const Vec p = b.current();
    const double hp = dot(sub(p, target), ub);
    if (!(hp > 0.0)) throw std::runtime_error("line_approx: excursion ended below the approach line");
    const double t = hp / (hp - pivot_height);
    if (!return_to_line(b, p, pivot, t, target, ua)) return false;
  }
  return true;
}

void require_positive(double eps, const char* what) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw std::domain_error(std::string(what) + ": eps must be positive");
}

}  // namespace

SimplexPoint SimplexPoint::from_bary(std::vector<double> bary, double tol) {
  if (bary.empty()) throw std::domain_error("SimplexPoint: empty coordinate vector");
  double sum = 0.0;
  for (double& c : bary) {
    if (!std::isfinite(c)) throw std::domain_error("SimplexPoint: non-finite coordinate");
    if (c < 0.0) {
      if (c < -1e-12) throw std::domain_error("SimplexPoint: negative coordinate");
      c = 0.0;
    }
    sum += c;
  }
  if (std::abs(sum - 1.0) > tol) throw std::domain_error("SimplexPoint: coordinates do not sum to 1");
  for (double& c : bary) c /= sum;
  return SimplexPoint(std::move(bary));
}

SimplexPoint SimplexPoint::vertex(std::size_t dim, std::size_t axis) {
  if (axis >= dim) throw std::out_of_range("SimplexPoint::vertex: axis out of range");
  return SimplexPoint(unit_vec(dim, axis));
}

SimplexPoint SimplexPoint::barycenter(std::size_t dim) {
  if (dim == 0) throw std::domain_error("SimplexPoint::barycenter: zero dimension");
  return SimplexPoint(Vec(dim, 1.0 / static_cast<double>(dim)));
}

std::vector<std::size_t> SimplexPoint::support(double tol) const {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < bary_.size(); ++i)
    if (bary_[i] > tol) s.push_back(i);
  return s;
}

double distance(const SimplexPoint& a, const SimplexPoint& b) { return dist(a.bary(), b.bary()); }

double distance_to_segment(const SimplexPoint& p, const SimplexPoint& a, const SimplexPoint& b) {
  return dist_to_segment(p.bary(), a.bary(), b.bary());
}

bool is_well_formed(const SimplexPath& path, double tol) {
  const std::size_t n = path.start.dim();
  const SimplexPoint* prev = &path.start;
  for (const auto& s : path.steps) {
    if (s.end.dim() != n) return false;
    if (s.kind == StepKind::constant) {
      if (distance(*prev, s.end) > tol) return false;
    } else {
      if (s.vertex >= n) return false;
      const SimplexPoint w = SimplexPoint::vertex(n, s.vertex);
      if (distance_to_segment(s.end, *prev, w) > tol) return false;
      // Moving toward w never decreases the w coordinate.
      if (s.end[s.vertex] + tol < (*prev)[s.vertex]) return false;
    }
    prev = &s.end;
  }
  return true;
}

bool is_well_formed(const SpherePath& path, double tol) {
  const std::size_t n = path.start.dim();
  const SpherePoint* prev = &path.start;
  for (const auto& s : path.steps) {
    if (s.end.dim() != n) return false;
    if (s.kind == StepKind::constant) {
      if (!same_point(*prev, s.end, tol)) return false;
    } else {
      if (s.vertex >= n) return false;
      const SpherePoint w = SpherePoint::vertex(n, s.vertex);
      const double total = angle_between(*prev, w).radians();
      const double a = angle_between(*prev, s.end).radians();
      const double b = angle_between(s.end, w).radians();
      if (std::abs(a + b - total) > tol) return false;
    }
    prev = &s.end;
  }
  return true;
}

SimplexPath line_approx(const SimplexPoint& q, const SimplexPoint& q_prime,
                        std::span<const std::size_t> face, double eps, LineApproxTrace* trace) {
  require_positive(eps, "line_approx");
  const std::size_t n = q.dim();
  if (q_prime.dim() != n) throw std::invalid_argument("line_approx: dimension mismatch");
  if (face.empty()) throw std::domain_error("line_approx: empty face");
  std::vector<bool> in_face(n, false);
  for (std::size_t w : face) {
    if (w >= n) throw std::domain_error("line_approx: face index out of range");
    in_face[w] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (in_face[i] && !(q_prime[i] > 1e-12))
      throw std::domain_error("line_approx: target is on the boundary of the face");
    if (!in_face[i] && q_prime[i] != 0.0)
      throw std::domain_error("line_approx: target is outside the face");
  }
  if (trace) *trace = {};

  PathBuilder builder(q);
  Frame frame{builder, trace};
  std::vector<std::size_t> f(face.begin(), face.end());
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  const Vec target(q_prime.bary().begin(), q_prime.bary().end());
  approach(frame, target, std::move(f), eps, 0);
  return builder.take();
}

SimplexPath stride_approx(const SimplexPoint& q, const SimplexPoint& q_prime, double eps) {
  require_positive(eps, "stride_approx");
  const std::size_t n = q.dim();
  if (q_prime.dim() != n) throw std::invalid_argument("stride_approx: dimension mismatch");
  SimplexPath out{q, {}};
  const Vec a(q.bary().begin(), q.bary().end());
  const Vec b(q_prime.bary().begin(), q_prime.bary().end());
  if (dist(a, b) <= 1e-15) return out;
  for (std::size_t v = 0; v < n; ++v)
    if (b[v] == 1.0) {
      out.steps.push_back({StepKind::aimed, v, q_prime});
      return out;
    }

  const double limit = eps / 2 * (1.0 - 1e-9);
  Vec c = a;
  double h = dist(a, b);
  std::vector<std::pair<std::size_t, double>> moves;
  std::vector<Vec> corners;
  for (std::size_t iter = 0;; ++iter) {
    if (iter >= kLineApproxIterationCap) throw std::runtime_error("stride_approx: iteration cap reached");
    const double r = dist(c, b);
    if (r <= eps / 8) break;
    h = std::min(2.0 * h, r);
    for (;;) {
      if (!(h > 1e-300)) throw std::runtime_error("stride_approx: stride underflow");
      Vec y = b;
      if (h < r)
        for (std::size_t i = 0; i < n; ++i) y[i] = c[i] + h / r * (b[i] - c[i]);
      double alpha = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        if (c[i] > 0.0) alpha = std::min(alpha, std::max(0.0, y[i]) / c[i]);
      moves.clear();
      for (std::size_t i = 0; i < n; ++i) {
        const double beta = std::max(0.0, y[i]) - alpha * c[i];
        if (beta > 0.0) moves.push_back({i, beta});
      }
      std::stable_sort(moves.begin(), moves.end(), [](const auto& l, const auto& r2) { return l.second > r2.second; });
      corners.clear();
      bool ok = alpha > 0.0;
      double mass = alpha;
      Vec p = c;
      for (std::size_t j = 0; ok && j < moves.size(); ++j) {
        mass += moves[j].second;
        p = toward(p, moves[j].first, std::min(1.0, moves[j].second / mass));
        ok = dist_to_segment(p, a, b) <= limit;
        corners.push_back(p);
      }
      if (ok) break;
      h /= 2;
    }
    for (std::size_t j = 0; j < moves.size(); ++j)
      out.steps.push_back({StepKind::aimed, moves[j].first, make_point(corners[j])});
    if (!corners.empty()) c = corners.back();
  }
  return compact(out);
}

SimplexPath compact(const SimplexPath& path, double tol) {
  SimplexPath out{path.start, {}};
  for (const auto& s : path.steps) {
    const SimplexPoint& from = out.end();
    if (distance(from, s.end) <= tol) continue;
    if (s.kind == StepKind::aimed && !out.steps.empty() && out.steps.back().kind == StepKind::aimed &&
        out.steps.back().vertex == s.vertex) {
      out.steps.back().end = s.end;
      continue;
    }
    out.steps.push_back(s);
  }
  return out;
}

SimplexPath direct_approx(const SimplexPolyline& path, const SimplexPoint& start, double eps,
                          DirectedScheme scheme) {
  require_positive(eps, "direct_approx");
  const std::size_t n = start.dim();
  for (const auto& v : path.vertices())
    if (v.dim() != n) throw std::invalid_argument("direct_approx: dimension mismatch");
  const double gap = distance(start, path.front());
  if (!(gap < eps)) throw std::domain_error("direct_approx: start is not within eps of the path");

  const double budget = eps / 2;
  SimplexPath out{start, {}};
  auto append = [&](const SimplexPoint& target, double tol) {
    const auto leg = scheme == DirectedScheme::stride ? stride_approx(out.end(), target, tol)
                                                      : line_approx(out.end(), target, target.support(), tol);
    out.steps.insert(out.steps.end(), leg.steps.begin(), leg.steps.end());
  };

  // Lead-in from start: keep within eps - gap of [start, path(0)].
  append(path.front(), std::min(budget, 2.0 * (eps - gap)));
  for (std::size_t i = 1; i < path.size(); ++i) append(path.vertices()[i], budget);
  return compact(out);
}

SpherePoint simplex_to_sphere(const SimplexPoint& p) { return radial_project(p.bary()); }

SimplexPoint sphere_to_simplex(const SpherePoint& p) {
  Vec c(p.coords().begin(), p.coords().end());
  const double s = std::accumulate(c.begin(), c.end(), 0.0);
  for (double& x : c) x /= s;
  return SimplexPoint::from_bary(std::move(c), 1e-9);
}

SpherePath simplex_to_sphere(const SimplexPath& path) {
  SpherePath out{simplex_to_sphere(path.start), {}};
  out.steps.reserve(path.steps.size());
  for (const auto& s : path.steps) out.steps.push_back({s.kind, s.vertex, simplex_to_sphere(s.end)});
  return out;
}

SimplexPolyline sphere_to_simplex(const SpherePolyline& path) {
  std::vector<SimplexPoint> v;
  v.reserve(path.size());
  for (const auto& p : path.vertices()) v.push_back(sphere_to_simplex(p));
  return SimplexPolyline(std::move(v));
}

double projection_lipschitz(std::size_t dim) { return std::sqrt(static_cast<double>(dim)); }

SpherePath line_approx_sphere(const SpherePoint& from, const SpherePoint& to, double eps,
                              DirectedScheme scheme) {
  require_positive(eps, "line_approx_sphere");
  const SimplexPoint a = sphere_to_simplex(from);
  const SimplexPoint b = sphere_to_simplex(to);
  const double tol = eps / projection_lipschitz(from.dim());
  const auto path = scheme == DirectedScheme::stride ? stride_approx(a, b, tol) : line_approx(a, b, b.support(), tol);
  return simplex_to_sphere(compact(path));
}

std::vector<SimplexPoint> sample_path(const SimplexPath& path, double spacing) {
  require_positive(spacing, "sample_path");
  std::vector<SimplexPoint> out{path.start};
  const SimplexPoint* prev = &path.start;
  for (const auto& s : path.steps) {
    const double len = distance(*prev, s.end);
    const auto pieces = static_cast<std::size_t>(std::ceil(len / spacing));
    for (std::size_t k = 1; k < pieces; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(pieces);
      Vec p(prev->dim());
      for (std::size_t i = 0; i < p.size(); ++i) p[i] = (1.0 - t) * (*prev)[i] + t * s.end[i];
      out.push_back(make_point(std::move(p)));
    }
    out.push_back(s.end);
    prev = &s.end;
  }
  return out;
}

std::vector<SpherePoint> sample_path(const SpherePath& path, double spacing) {
  require_positive(spacing, "sample_path");
  std::vector<SpherePoint> out{path.start};
  const SpherePoint* prev = &path.start;
  for (const auto& s : path.steps) {
    const double len = angle_between(*prev, s.end).radians();
    const auto pieces = static_cast<std::size_t>(std::ceil(len / spacing));
    for (std::size_t k = 1; k < pieces; ++k)
      out.push_back(slerp(*prev, s.end, static_cast<double>(k) / static_cast<double>(pieces)));
    out.push_back(s.end);
    prev = &s.end;
  }
  return out;
}

std::vector<SimplexPoint> sample_polyline(const SimplexPolyline& path, double spacing) {
  SimplexPath as_path{path.front(), {}};
  for (std::size_t i = 1; i < path.size(); ++i)
    as_path.steps.push_back({StepKind::aimed, 0, path.vertices()[i]});
  return sample_path(as_path, spacing);
}

std::vector<SpherePoint> sample_polyline(const SpherePolyline& path, double spacing) {
  SpherePath as_path{path.front(), {}};
  for (std::size_t i = 1; i < path.size(); ++i)
    as_path.steps.push_back({StepKind::aimed, 0, path.vertices()[i]});
  return sample_path(as_path, spacing);
}

namespace {

// Points stored row-major in one flat array.
struct Chain {
  std::size_t dim = 0;
  Vec data;
  std::size_t size() const { return dim ? data.size() / dim : 0; }
  std::span<const double> at(std::size_t i) const { return {data.data() + i * dim, dim}; }
  void push(std::span<const double> p) { data.insert(data.end(), p.begin(), p.end()); }
};

// Largest distance from a point of `pts` to the chain, scanning outward from
// the previous best segment and stopping early once a segment is closer than
// the running maximum, which starts at `floor`.
double one_sided(const Chain& pts, const Chain& chain, double floor = 0.0) {
  const std::size_t segs = chain.size() > 1 ? chain.size() - 1 : 0;
  double h = floor;
  std::size_t hint = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto p = pts.at(k);
    if (segs == 0) {
      h = std::max(h, dist(p, chain.at(0)));
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t off = 0; off < segs && best > h; ++off) {
      for (int sign : {1, -1}) {
        if (off == 0 && sign < 0) continue;
        const auto i = static_cast<std::ptrdiff_t>(hint) + sign * static_cast<std::ptrdiff_t>(off);
        if (i < 0 || i >= static_cast<std::ptrdiff_t>(segs)) continue;
        const double d = dist_to_segment(p, chain.at(i), chain.at(i + 1));
        if (d < best) {
          best = d;
          hint = static_cast<std::size_t>(i);
        }
      }
    }
    h = std::max(h, best);
  }
  return h;
}

Chain samples(std::span<const SimplexPoint> vertices, double spacing) {
  Chain out{vertices.front().dim(), {}};
  out.push(vertices.front().bary());
  Vec q(out.dim);
  for (std::size_t k = 1; k < vertices.size(); ++k) {
    const auto a = vertices[k - 1].bary(), b = vertices[k].bary();
    const auto pieces = static_cast<std::size_t>(std::ceil(dist(a, b) / spacing));
    for (std::size_t j = 1; j < pieces; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(pieces);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = (1.0 - t) * a[i] + t * b[i];
      out.push(q);
    }
    out.push(b);
  }
  return out;
}

}  // namespace

double sampled_hausdorff(const SimplexPath& path, const SimplexPolyline& line, double spacing) {
  require_positive(spacing, "sampled_hausdorff");
  std::vector<SimplexPoint> path_vertices{path.start};
  for (const auto& s : path.steps) path_vertices.push_back(s.end);
  Chain path_chain{path.start.dim(), {}}, line_chain{path.start.dim(), {}};
  for (const auto& v : path_vertices) path_chain.push(v.bary());
  for (const auto& v : line.vertices()) line_chain.push(v.bary());
  const double h = one_sided(samples(path_vertices, spacing), line_chain);
  return one_sided(samples(line.vertices(), spacing), path_chain, h);
}

}  // namespace boundwalk

#pragma once

// Shared helpers for the test suites: seeded generators and oracles that
// recompute quantities in long double without going through the library.

#include "boundwalk/simplex_paths.hpp"
#include "boundwalk/sphere_kernel.hpp"

#include <cmath>
#include <numbers>
#include <cstdint>
#include <random>
#include <vector>

namespace testing_support {

using Rng = std::mt19937_64;

inline std::vector<double> random_positive(Rng& g, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(n);
  for (double& x : v) x = e(g) + 1e-3;
  return v;
}

inline boundwalk::SpherePoint random_sphere(Rng& g, std::size_t n) {
  return boundwalk::radial_project(std::span<const double>(random_positive(g, n)));
}

inline boundwalk::SimplexPoint random_simplex(Rng& g, std::size_t n) {
  auto v = random_positive(g, n);
  double s = 0;
  for (double x : v) s += x;
  for (double& x : v) x /= s;
  return boundwalk::SimplexPoint::from_bary(v);
}

/// Angle between two nonzero vectors via long double acos, clamped.
template <class A, class B>
double oracle_angle(const A& a, const B& b) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += static_cast<long double>(a[i]) * b[i];
    aa += static_cast<long double>(a[i]) * a[i];
    bb += static_cast<long double>(b[i]) * b[i];
  }
  long double c = ab / std::sqrt(aa * bb);
  if (c > 1) c = 1;
  if (c < -1) c = -1;
  // acos loses precision near 0; switch to the chord form there.
  if (c > 0.99) {
    long double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const long double u = a[i] / std::sqrt(aa) - b[i] / std::sqrt(bb);
      d += u * u;
    }
    return static_cast<double>(2 * std::asin(std::sqrt(d) / 2));
  }
  if (c < -0.99) {
    long double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const long double u = a[i] / std::sqrt(aa) + b[i] / std::sqrt(bb);
      d += u * u;
    }
    return static_cast<double>(std::numbers::pi_v<long double> - 2 * std::asin(std::sqrt(d) / 2));
  }
  return static_cast<double>(std::acos(c));
}

inline std::vector<double> coords(const boundwalk::SpherePoint& p) { return {p.coords().begin(), p.coords().end()}; }
inline std::vector<double> coords(const boundwalk::SimplexPoint& p) { return {p.bary().begin(), p.bary().end()}; }

inline double oracle_dist(const std::vector<double>& a, const std::vector<double>& b) {
  long double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (static_cast<long double>(a[i]) - b[i]) * (a[i] - b[i]);
  return static_cast<double>(std::sqrt(s));
}

inline double oracle_segment_dist(const std::vector<double>& p, const std::vector<double>& a,
                                  const std::vector<double>& b) {
  long double ab2 = 0, apab = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    ab2 += (static_cast<long double>(b[i]) - a[i]) * (b[i] - a[i]);
    apab += (static_cast<long double>(p[i]) - a[i]) * (b[i] - a[i]);
  }
  long double t = ab2 > 0 ? apab / ab2 : 0;
  t = t < 0 ? 0 : (t > 1 ? 1 : t);
  long double s = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double d = p[i] - (a[i] + t * (b[i] - a[i]));
    s += d * d;
  }
  return static_cast<double>(std::sqrt(s));
}

/// Dense samples of a chain of Euclidean segments, at most `spacing` apart.
inline std::vector<std::vector<double>> densify(const std::vector<std::vector<double>>& chain, double spacing) {
  std::vector<std::vector<double>> out{chain.front()};
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const auto& a = chain[i - 1];
    const auto& b = chain[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(oracle_dist(a, b) / spacing)));
    for (int j = 1; j <= pieces; ++j) {
      std::vector<double> p(a.size());
      for (std::size_t k = 0; k < a.size(); ++k) p[k] = a[k] + (b[k] - a[k]) * j / pieces;
      out.push_back(p);
    }
  }
  return out;
}

/// Sup over dense samples of `chain` of the distance to the polyline `line`.
inline double oracle_chain_to_polyline(const std::vector<std::vector<double>>& chain,
                                       const std::vector<std::vector<double>>& line, double spacing) {
  double h = 0;
  for (const auto& p : densify(chain, spacing)) {
    double best = line.size() == 1 ? oracle_dist(p, line[0]) : INFINITY;
    for (std::size_t i = 1; i < line.size(); ++i) best = std::min(best, oracle_segment_dist(p, line[i - 1], line[i]));
    h = std::max(h, best);
  }
  return h;
}

template <class Path>
std::vector<std::vector<double>> path_vertices(const Path& path) {
  std::vector<std::vector<double>> out{coords(path.start)};
  for (const auto& s : path.steps) out.push_back(coords(s.end));
  return out;
}

}  // namespace testing_support

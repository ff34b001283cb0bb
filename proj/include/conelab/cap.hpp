#pragma once

// Spherical-cap measures, the cap-decay function Phi, the Fourier transform
// of surface measure, and the empirical checks for the doubling /
// comparability / direction-stability estimates of caps.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "conelab/gauge.hpp"
#include "conelab/sphere.hpp"

namespace conelab {

struct CapQuery {
  SpherePoint base;
  double height = 0.0;  // tangent-plane distance s > 0
};

// Tangent-plane distances of every node to the cap's base plane.
inline Eigen::ArrayXd tangent_distances(const SphereQuadrature& rule,
                                        const SpherePoint& base) {
  const double c0 = base.position.dot(base.normal);
  return (c0 - (rule.points.transpose() * base.normal).array());
}

// Surface measure of the cap { zeta : d(zeta, T_base) < s } by summing the
// weights of nodes satisfying the strict inequality.
inline double cap_measure(const SphereQuadrature& rule, const SpherePoint& base,
                          double s) {
  const Eigen::ArrayXd td = tangent_distances(rule, base);
  KahanSum sum;
  for (int i = 0; i < rule.size(); ++i)
    if (td[i] < s) sum.add(rule.weights[i]);
  return sum.value();
}

// Batch version for an ascending list of heights; one pass over the nodes.
inline std::vector<double> cap_measure_multi(const SphereQuadrature& rule,
                                             const SpherePoint& base,
                                             const std::vector<double>& heights) {
  const int m = static_cast<int>(heights.size());
  const Eigen::ArrayXd td = tangent_distances(rule, base);
  std::vector<KahanSum> bucket(m + 1);
  for (int i = 0; i < rule.size(); ++i) {
    // First height strictly above td[i]; the node belongs to that cap and
    // every larger one.
    const int idx = static_cast<int>(
        std::upper_bound(heights.begin(), heights.end(), td[i]) -
        heights.begin());
    bucket[idx].add(rule.weights[i]);
  }
  std::vector<double> measures(m, 0.0);
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    acc += bucket[k].value();
    measures[k] = acc;
  }
  return measures;
}

// Streaming variant for very high resolutions (d = 2): nodes are generated
// on the fly, never materialized, so boundary-cell error can be pushed below
// 1e-6 without holding the rule in memory.
inline std::vector<double> cap_measure_streamed(const Gauge& g,
                                                const SpherePoint& base,
                                                const std::vector<double>& heights,
                                                std::int64_t resolution) {
  if (g.dim() != 2)
    throw std::invalid_argument("cap_measure_streamed: d = 2 only");
  const int m = static_cast<int>(heights.size());
  std::vector<KahanSum> bucket(m + 1);
  const double c0 = base.position.dot(base.normal);
  for (std::int64_t i = 0; i < resolution; ++i) {
    const double th = kTwoPi * (i + 0.5) / double(resolution);
    Vec u(2);
    u << std::cos(th), std::sin(th);
    const double r = g(u);
    const Vec grad = g.gradient(u);
    const double w = (kTwoPi / double(resolution)) * grad.norm() / (r * r);
    const double td = c0 - (u / r).dot(base.normal);
    const int idx = static_cast<int>(
        std::upper_bound(heights.begin(), heights.end(), td) -
        heights.begin());
    bucket[idx].add(w);
  }
  std::vector<double> measures(m, 0.0);
  double acc = 0.0;
  for (int k = 0; k < m; ++k) {
    acc += bucket[k].value();
    measures[k] = acc;
  }
  return measures;
}

struct PhiProfile {
  Vec direction;
  double value = 0.0;
  std::vector<double> r_grid;
  double r_argmax = 0.0;
};

inline std::vector<double> default_phi_r_grid() {
  return octave_spaced(std::pow(2.0, -10), std::pow(2.0, 14), 8);
}

// Phi(theta) = sup_r sigma[B(xi(r theta), 1/r)] (1+r)^((d-1)/2), discretized
// on the log-spaced r grid. The base point depends only on the direction.
inline PhiProfile phi_profile(const Gauge& g, const SphereQuadrature& rule,
                              const Vec& direction,
                              std::vector<double> r_grid = {}) {
  if (r_grid.empty()) r_grid = default_phi_r_grid();
  const SpherePoint base = gauss_point(g, direction);
  // heights s = 1/r, ascending in s = descending in r
  std::vector<double> heights(r_grid.size());
  for (size_t k = 0; k < r_grid.size(); ++k)
    heights[k] = 1.0 / r_grid[r_grid.size() - 1 - k];
  const std::vector<double> measures = cap_measure_multi(rule, base, heights);
  PhiProfile prof;
  prof.direction = direction.normalized();
  prof.r_grid = r_grid;
  const double e = 0.5 * (g.dim() - 1);
  for (size_t k = 0; k < r_grid.size(); ++k) {
    const double r = r_grid[k];
    const double sigma = measures[r_grid.size() - 1 - k];
    const double v = sigma * std::pow(1.0 + r, e);
    if (v > prof.value) {
      prof.value = v;
      prof.r_argmax = r;
    }
  }
  return prof;
}

// Tabulated Phi over directions (d = 2), evaluated by periodic linear
// interpolation in the polar angle. Angles are cell midpoints so the table
// never lands exactly on a symmetry axis of the built-in gauges.
class PhiTable {
 public:
  PhiTable() = default;
  PhiTable(const Gauge& g, const SphereQuadrature& rule, int n_dirs = 1024,
           std::vector<double> r_grid = {}) {
    if (g.dim() != 2)
      throw std::invalid_argument("PhiTable: implemented for d = 2");
    values_.resize(n_dirs);
    for (int i = 0; i < n_dirs; ++i) {
      const double th = kTwoPi * (i + 0.5) / n_dirs;
      Vec dir(2);
      dir << std::cos(th), std::sin(th);
      values_[i] = phi_profile(g, rule, dir, r_grid).value;
    }
    max_ = *std::max_element(values_.begin(), values_.end());
  }

  double operator()(const Vec& direction) const {
    const double th = std::atan2(direction[1], direction[0]);
    const int n = static_cast<int>(values_.size());
    double pos = th / kTwoPi * n - 0.5;
    pos -= std::floor(pos / n) * n;
    const int i0 = static_cast<int>(std::floor(pos));
    const double frac = pos - i0;
    const int a = ((i0 % n) + n) % n;
    const int b = (a + 1) % n;
    return (1.0 - frac) * values_[a] + frac * values_[b];
  }

  double max_value() const { return max_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  double max_ = 0.0;
};

// ---------------------------------------------------------------------------
// Fourier transform of surface measure

inline int surface_fourier_required_resolution(const Gauge& g,
                                               const SphereQuadrature& rule,
                                               double abs_x,
                                               int nodes_per_period = 16) {
  if (g.dim() == 2) {
    const double arclen = rule.total_measure();
    return std::max(64, static_cast<int>(std::ceil(
                            nodes_per_period * abs_x * arclen / kTwoPi)));
  }
  // d = 3: azimuth count against the longest oscillation track.
  double rmax = 0.0;
  for (int i = 0; i < rule.size(); ++i)
    rmax = std::max(rmax, rule.points.col(i).norm());
  return std::max(64, static_cast<int>(std::ceil(nodes_per_period * abs_x *
                                                 kPi * rmax / kTwoPi)));
}

// int_Sigma exp(-i <x, zeta>) dsigma(zeta). Refuses when the rule is too
// coarse for the oscillation rule (>= 16 nodes per period).
inline Cplx surface_fourier(const Gauge& g, const SphereQuadrature& rule,
                            const Vec& x) {
  const int required =
      surface_fourier_required_resolution(g, rule, x.norm());
  const int have = (g.dim() == 2) ? rule.size()
                                  : static_cast<int>(std::sqrt(2.0 * rule.size()));
  if (have < required)
    throw ResolutionError(
        "surface_fourier: resolution too coarse for |x|, need >= " +
            std::to_string(required),
        required);
  const Eigen::ArrayXd phase = (rule.points.transpose() * x).array();
  KahanSum re, im;
  for (int i = 0; i < rule.size(); ++i) {
    re.add(rule.weights[i] * std::cos(phase[i]));
    im.add(-rule.weights[i] * std::sin(phase[i]));
  }
  return {re.value(), im.value()};
}

// ---------------------------------------------------------------------------
// Empirical constants for the cap estimates

struct DoublingRow {
  double s = 0, gamma = 0, ratio = 0;
};

struct DoublingReport {
  std::vector<DoublingRow> rows;
  double worst_ratio = 0.0;
};

// sigma[B(xi0, gamma s)] / (gamma^e sigma[B(xi0, s)]) with the two-regime
// exponent e = (d-1)/2 for gamma >= 1 and e = (d-1)/k for gamma < 1.
inline DoublingReport doubling_check(const Gauge& g,
                                     const SphereQuadrature& rule,
                                     const std::vector<CapQuery>& caps,
                                     const std::vector<double>& gammas) {
  DoublingReport rep;
  const int k = g.contact_order();
  for (const CapQuery& q : caps) {
    for (double gm : gammas) {
      const double e =
          gm >= 1.0 ? 0.5 * (g.dim() - 1) : double(g.dim() - 1) / k;
      const double num = cap_measure(rule, q.base, gm * q.height);
      const double den =
          std::pow(gm, e) * cap_measure(rule, q.base, q.height);
      const double ratio = den > 0 ? num / den : 0.0;
      rep.rows.push_back({q.height, gm, ratio});
      rep.worst_ratio = std::max(rep.worst_ratio, ratio);
    }
  }
  return rep;
}

// Worst two-sided constant of (2.3)-type comparability over points sampled
// inside the cap.
inline double comparability_check(const Gauge& g, const SphereQuadrature& rule,
                                  const CapQuery& q, int n_samples = 100) {
  const Eigen::ArrayXd td = tangent_distances(rule, q.base);
  std::vector<int> inside;
  for (int i = 0; i < rule.size(); ++i)
    if (td[i] < q.height) inside.push_back(i);
  if (inside.empty()) return 1.0;
  const double sigma0 = cap_measure(rule, q.base, q.height);
  double worst = 1.0;
  const int stride = std::max<size_t>(1, inside.size() / n_samples);
  for (size_t j = 0; j < inside.size(); j += stride) {
    const SpherePoint p = node_at(rule, inside[j]);
    const double sigma = cap_measure(rule, p, q.height);
    if (sigma > 0)
      worst = std::max({worst, sigma0 / sigma, sigma / sigma0});
  }
  return worst;
}

// Smallest C with d(xi(x-y), T_xi(x)) <= C / |x| over random admissible
// samples (y in B(0;s), x outside B(0;2s), 0 < s <= 1).
inline double lemma22_check(const Gauge& g, int n_samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double s = rng.log_uniform(0.01, 1.0);
    const double ry = s * std::pow(rng.uniform(), 1.0 / g.dim());
    const Vec y = rng.unit_vector(g.dim()) * ry;
    const double rx = rng.log_uniform(2.0 * s, 100.0);
    const Vec x = rng.unit_vector(g.dim()) * rx;
    if ((x - y).squaredNorm() == 0.0) continue;
    const SpherePoint at_x = gauss_point(g, x);
    const Vec moved = gauss_point(g, x - y).position;
    const double td = tangent_distance(moved, at_x);
    worst = std::max(worst, td * rx);
  }
  return worst;
}

// Smallest C with Phi((x-y)/|x-y|) <= C Phi(x/|x|) over samples |x| > 2|y|.
inline double lemma23_check(const Gauge& g, const PhiTable& phi, int n_samples,
                            std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double rx = rng.log_uniform(0.1, 100.0);
    const Vec x = rng.unit_vector(g.dim()) * rx;
    const double ry = rng.uniform(1e-6, 0.5) * rx;
    const Vec y = rng.unit_vector(g.dim()) * ry;
    const Vec z = x - y;
    if (z.squaredNorm() == 0.0) continue;
    const double ratio = phi(z.normalized()) / phi(x.normalized());
    worst = std::max(worst, ratio);
  }
  return worst;
}

// Discrete (int_{S^{d-1}} Phi^p)^{1/p} over the direction sphere, d = 2.
inline double phi_lp_norm(const Gauge& g, const SphereQuadrature& rule,
                          double p, int angular_resolution,
                          std::vector<double> r_grid = {}) {
  if (p <= 0.0 || p > 2.0)
    throw std::invalid_argument("phi_lp_norm: p in (0, 2] required");
  if (g.dim() != 2)
    throw std::invalid_argument("phi_lp_norm: implemented for d = 2");
  KahanSum acc;
  for (int i = 0; i < angular_resolution; ++i) {
    const double th = kTwoPi * (i + 0.5) / angular_resolution;
    Vec dir(2);
    dir << std::cos(th), std::sin(th);
    const double v = phi_profile(g, rule, dir, r_grid).value;
    acc.add(std::pow(v, p) * (kTwoPi / angular_resolution));
  }
  return std::pow(acc.value(), 1.0 / p);
}

}  // namespace conelab

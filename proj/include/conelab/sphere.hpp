#pragma once

// Surface quadrature on the unit sphere Sigma_rho of a gauge, the
// circumradius gamma of the unit ball, and the contact-order probe.
//
// Nodes come from radially projecting a rule on the round sphere S^{d-1};
// the surface-measure weight of a direction cell dOmega is
//     d sigma = |grad rho(u)| / rho(u)^d  dOmega,
// which follows from comparing ordinary polar coordinates with the
// gauge polar coordinates d xi = r^{d-1} <zeta, n(zeta)> dr dsigma.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conelab/gauge.hpp"
#include "conelab/quadrature.hpp"

namespace conelab {

struct SphereQuadrature {
  Eigen::MatrixXd points;   // d x N, nodes on Sigma_rho
  Eigen::MatrixXd normals;  // d x N, outer unit normals
  Eigen::ArrayXd weights;   // N, surface measure

  int size() const { return static_cast<int>(weights.size()); }
  double total_measure() const { return weights.sum(); }
};

inline SpherePoint node_at(const SphereQuadrature& rule, int i) {
  SpherePoint p;
  p.position = rule.points.col(i);
  p.normal = rule.normals.col(i);
  p.weight = rule.weights[i];
  return p;
}

// Quadrature nodes with weights for the surface measure d sigma.
// d = 2: midpoint rule in the polar angle (spectrally accurate, the
// integrand is smooth and periodic). d = 3: Gauss–Legendre in cos(theta)
// times midpoints in the azimuth.
inline SphereQuadrature parametrize_sphere(const Gauge& g, int resolution) {
  if (resolution < 8)
    throw std::invalid_argument("parametrize_sphere: resolution >= 8 required");
  const int d = g.dim();
  SphereQuadrature rule;
  if (d == 2) {
    const int n = resolution;
    rule.points.resize(2, n);
    rule.normals.resize(2, n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
      const double th = kTwoPi * (i + 0.5) / n;
      Vec u(2);
      u << std::cos(th), std::sin(th);
      const double r = g(u);
      const Vec grad = g.gradient(u);  // 0-homogeneous, same at u and u/r
      rule.points.col(i) = u / r;
      rule.normals.col(i) = grad.normalized();
      rule.weights[i] = (kTwoPi / n) * grad.norm() / std::pow(r, d);
    }
  } else if (d == 3) {
    const int n_az = resolution;
    const int n_polar = std::max(8, resolution / 2);
    const GaussRule& gl = gauss_legendre(n_polar);
    const int n = n_az * n_polar;
    rule.points.resize(3, n);
    rule.normals.resize(3, n);
    rule.weights.resize(n);
    int idx = 0;
    for (int ip = 0; ip < n_polar; ++ip) {
      const double c = gl.nodes[ip];
      const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
      for (int ia = 0; ia < n_az; ++ia) {
        const double phi = kTwoPi * (ia + 0.5) / n_az;
        Vec u(3);
        u << s * std::cos(phi), s * std::sin(phi), c;
        const double r = g(u);
        const Vec grad = g.gradient(u);
        rule.points.col(idx) = u / r;
        rule.normals.col(idx) = grad.normalized();
        rule.weights[idx] =
            gl.weights[ip] * (kTwoPi / n_az) * grad.norm() / std::pow(r, d);
        ++idx;
      }
    }
  } else {
    throw std::invalid_argument(
        "parametrize_sphere: surface quadrature implemented for d = 2, 3");
  }
  return rule;
}

struct UnitBallData {
  double gamma = 1.0;  // sup of |xi| over the unit ball (circumradius)
  SphereQuadrature nodes;
};

namespace detail {

// Local refinement of max |zeta| over directions: shrinking-stencil search
// around a seed direction (enough for the smooth maxima of the built-ins).
inline double refine_gamma(const Gauge& g, Vec u_best, double val_best) {
  const int d = g.dim();
  double step = 0.05;
  for (int round = 0; round < 60; ++round) {
    bool improved = false;
    for (int j = 0; j < d; ++j) {
      for (double sgn : {-1.0, 1.0}) {
        Vec u = u_best;
        u[j] += sgn * step;
        u.normalize();
        const double v = 1.0 / g(u);  // |zeta| = |u| / rho(u) with |u| = 1
        if (v > val_best) {
          val_best = v;
          u_best = u;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
    if (step < 1e-13) break;
  }
  return val_best;
}

}  // namespace detail

inline UnitBallData gamma_sup(const Gauge& g, int resolution = 0) {
  if (resolution == 0) resolution = (g.dim() == 2) ? 8192 : 256;
  UnitBallData data;
  data.nodes = parametrize_sphere(g, resolution);
  int best = 0;
  double best_norm = 0.0;
  for (int i = 0; i < data.nodes.size(); ++i) {
    const double n = data.nodes.points.col(i).norm();
    if (n > best_norm) {
      best_norm = n;
      best = i;
    }
  }
  const Vec u = data.nodes.points.col(best).normalized();
  data.gamma = detail::refine_gamma(g, u, best_norm);
  return data;
}

// Fits the contact order k in tangent_distance ~ c * (chord length)^k by
// log-log regression along a tangent probe direction. Returns the fitted
// exponent as a real; callers round if they want the integer order.
inline double type_order(const Gauge& g, const SpherePoint& zeta,
                         const std::vector<double>& probe_radii) {
  if (probe_radii.size() < 3)
    throw std::invalid_argument("type_order: need >= 3 probe radii");
  // Tangent direction: the coordinate axis least aligned with the normal,
  // orthogonalized against it.
  const int d = g.dim();
  int axis = 0;
  double best = std::abs(zeta.normal[0]);
  for (int j = 1; j < d; ++j) {
    const double a = std::abs(zeta.normal[j]);
    if (a < best) {
      best = a;
      axis = j;
    }
  }
  Vec u = Vec::Zero(d);
  u[axis] = 1.0;
  u -= zeta.normal * zeta.normal[axis];
  u.normalize();

  std::vector<double> chord, dist;
  for (double h : probe_radii) {
    const Vec q = radial_to_sphere(g, zeta.position + h * u);
    const double td = tangent_distance(q, zeta);
    const double c = (q - zeta.position).norm();
    if (td > 0.0 && c > 0.0) {
      chord.push_back(c);
      dist.push_back(td);
    }
  }
  if (chord.size() < 3)
    throw std::runtime_error("type_order: degenerate probe (no positive data)");
  return fit_loglog(chord, dist).slope;
}

inline std::vector<double> default_probe_radii() {
  return log_spaced(3e-3, 0.3, 13);
}

}  // namespace conelab

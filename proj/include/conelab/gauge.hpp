#pragma once

// Homogeneous distance functions (gauges) and the pointwise geometry of
// their unit spheres: evaluation, gradients, supporting (Gauss) points and
// tangent-plane distances. Built-ins are the Euclidean norm and the smooth
// convex l^q gauges with even q >= 4; arbitrary gauges can be registered
// with callables for rho and its gradient.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "conelab/common.hpp"

namespace conelab {

class Gauge {
 public:
  enum class Kind { euclidean, lq, custom };

  using RhoFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  static Gauge euclidean(int dim) {
    check_dim(dim);
    Gauge g;
    g.kind_ = Kind::euclidean;
    g.dim_ = dim;
    g.contact_order_ = 2;
    return g;
  }

  static Gauge lq(int dim, int q) {
    check_dim(dim);
    if (q < 4 || q % 2 != 0)
      throw std::invalid_argument("Gauge::lq: q must be an even integer >= 4");
    Gauge g;
    g.kind_ = Kind::lq;
    g.dim_ = dim;
    g.q_ = q;
    g.contact_order_ = q;
    return g;
  }

  // `contact_order` is the worst contact order of the unit sphere, used by
  // the small-cap doubling exponent (d-1)/k.
  static Gauge custom(int dim, RhoFn rho, GradFn grad, int contact_order = 2) {
    check_dim(dim);
    Gauge g;
    g.kind_ = Kind::custom;
    g.dim_ = dim;
    g.rho_ = std::move(rho);
    g.grad_ = std::move(grad);
    g.contact_order_ = contact_order;
    return g;
  }

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  int lq_exponent() const { return q_; }
  int contact_order() const { return contact_order_; }

  // rho(xi); 0 at the origin by continuity of the gauge.
  double operator()(const Vec& xi) const {
    switch (kind_) {
      case Kind::euclidean:
        return xi.norm();
      case Kind::lq: {
        // (sum xi_i^q)^(1/q), factored through the max for overflow safety.
        const double m = xi.cwiseAbs().maxCoeff();
        if (m == 0.0) return 0.0;
        double s = 0.0;
        for (int i = 0; i < dim_; ++i) s += std::pow(std::abs(xi[i]) / m, q_);
        return m * std::pow(s, 1.0 / q_);
      }
      case Kind::custom: {
        if (xi.isZero(0.0)) return 0.0;
        const double v = rho_(xi);
        if (!std::isfinite(v))
          throw std::runtime_error("Gauge: custom rho returned non-finite value");
        return v;
      }
    }
    return 0.0;
  }

  Vec gradient(const Vec& xi) const {
    if (xi.squaredNorm() == 0.0)
      throw std::domain_error("Gauge::gradient: rho is not smooth at 0");
    switch (kind_) {
      case Kind::euclidean:
        return xi / xi.norm();
      case Kind::lq: {
        const double r = (*this)(xi);
        Vec g(dim_);
        for (int i = 0; i < dim_; ++i)
          g[i] = std::pow(std::abs(xi[i]) / r, q_ - 1) *
                 (xi[i] < 0 ? -1.0 : 1.0);
        return g;
      }
      case Kind::custom: {
        Vec g = grad_(xi);
        if (!g.allFinite())
          throw std::runtime_error(
              "Gauge: custom gradient returned non-finite value");
        return g;
      }
    }
    return Vec::Zero(dim_);
  }

 private:
  static void check_dim(int dim) {
    if (dim < 2) throw std::invalid_argument("Gauge: dimension must be >= 2");
  }

  Kind kind_ = Kind::euclidean;
  int dim_ = 2;
  int q_ = 0;
  int contact_order_ = 2;
  RhoFn rho_;
  GradFn grad_;
};

// A point of the unit sphere Sigma_rho together with its outer unit normal
// and (when it comes from a quadrature rule) its surface-measure weight.
struct SpherePoint {
  Vec position;
  Vec normal;
  double weight = 0.0;
};

inline SpherePoint sphere_point_at(const Gauge& g, const Vec& position,
                                   double weight = 0.0) {
  SpherePoint p;
  p.position = position;
  p.normal = g.gradient(position).normalized();
  p.weight = weight;
  return p;
}

// Radial projection of a nonzero direction onto Sigma_rho.
inline Vec radial_to_sphere(const Gauge& g, const Vec& u) {
  const double r = g(u);
  if (r <= 0.0)
    throw std::domain_error("radial_to_sphere: direction has rho <= 0");
  return u / r;
}

// Signed distance from xi to the tangent plane of Sigma_rho at xi0,
// measured along the outer normal at xi0. Nonnegative when the sphere is
// convex and both points lie on it.
inline double tangent_distance(const Vec& xi, const SpherePoint& xi0) {
  return (xi0.position - xi).dot(xi0.normal);
}

namespace detail {

// Newton iteration on the Lagrange system { grad rho(z) = mu * xhat,
// rho(z) = 1 } for custom gauges; convexity gives a unique solution.
inline SpherePoint gauss_point_newton(const Gauge& g, const Vec& xhat,
                                      Vec z0, int max_iter, double tol) {
  const int d = g.dim();
  Vec z = std::move(z0);
  double mu = g.gradient(z).norm();
  double best_residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iter; ++iter) {
    const Vec grad = g.gradient(z);
    Eigen::VectorXd f(d + 1);
    f.head(d) = grad - mu * xhat;
    f[d] = g(z) - 1.0;
    const double res = f.norm();
    best_residual = std::min(best_residual, res);
    if (res < tol) return sphere_point_at(g, z);

    // Hessian of rho by central differences of the gradient.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(d + 1, d + 1);
    const double h = 1e-6 * std::max(1.0, z.norm());
    for (int j = 0; j < d; ++j) {
      Vec zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      jac.col(j).head(d) = (g.gradient(zp) - g.gradient(zm)) / (2.0 * h);
    }
    jac.col(d).head(d) = -xhat;
    jac.row(d).head(d) = grad.transpose();
    Eigen::VectorXd step = jac.fullPivLu().solve(-f);
    z += step.head(d);
    mu += step[d];
    if (g(z) <= 0.0) z = xhat;  // fell off the star domain; restart near xhat
  }
  throw std::runtime_error(
      "gauss_point: Newton did not converge, best residual " +
      format_double(best_residual, 6));
}

}  // namespace detail

// The point of Sigma_rho whose outer unit normal points along x, i.e. the
// maximizer of <x, zeta> over the sphere. Closed form for the built-in
// gauges; seeded Newton on the Lagrange system otherwise.
inline SpherePoint gauss_point(const Gauge& g, const Vec& x,
                               int seed_resolution = 512, int max_iter = 64,
                               double tol = 1e-12) {
  if (x.squaredNorm() == 0.0)
    throw std::domain_error("gauss_point: direction must be nonzero");
  const Vec xhat = x.normalized();
  switch (g.kind()) {
    case Gauge::Kind::euclidean:
      return sphere_point_at(g, xhat);
    case Gauge::Kind::lq: {
      // grad rho || x  <=>  z_i^(q-1) proportional to x_i.
      const int q = g.lq_exponent();
      Vec z(g.dim());
      for (int i = 0; i < g.dim(); ++i)
        z[i] = (xhat[i] < 0 ? -1.0 : 1.0) *
               std::pow(std::abs(xhat[i]), 1.0 / (q - 1));
      return sphere_point_at(g, radial_to_sphere(g, z));
    }
    case Gauge::Kind::custom: {
      // Seed with the best of a deterministic direction scan.
      const int d = g.dim();
      Vec best = xhat;
      double best_val = -std::numeric_limits<double>::infinity();
      Rng rng(0x5EEDu + static_cast<std::uint64_t>(seed_resolution));
      for (int i = 0; i < seed_resolution; ++i) {
        Vec u(d);
        if (d == 2) {
          const double th = kTwoPi * (i + 0.5) / seed_resolution;
          u << std::cos(th), std::sin(th);
        } else {
          u = rng.unit_vector(d);
        }
        const Vec zeta = radial_to_sphere(g, u);
        const double val = xhat.dot(zeta);
        if (val > best_val) {
          best_val = val;
          best = zeta;
        }
      }
      return detail::gauss_point_newton(g, xhat, best, max_iter, tol);
    }
  }
  throw std::logic_error("gauss_point: unreachable");
}

}  // namespace conelab

#pragma once

// Angular partition of unity on the gauge sphere (d = 2): centers along the
// curve, each cutoff equal to 1 on the 2^(-M/2)-cap around its center and
// supported in the doubled cap, extended 0-homogeneously to the plane.
//
// Plateaus force the center spacing to 2.5 * 2^(-M/2) in arclength: a point
// where one cutoff equals 1 must be outside every other support, and the
// complementary smooth ramps at the cell boundaries keep the exact sum
// sum_l Xi_l = 1.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conelab/gauge.hpp"

namespace conelab {

namespace detail {

// C-infinity unit ramp: 0 at x <= 0, 1 at x >= 1.
inline double smooth_ramp(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

}  // namespace detail

class AngularPartition {
 public:
  AngularPartition(const Gauge& g, int M, int table_size = 1 << 16)
      : gauge_(&g), M_(M) {
    if (g.dim() != 2)
      throw std::invalid_argument(
          "AngularPartition: implemented for d = 2 spheres");
    if (M < 4 || M % 2 != 0)
      throw std::invalid_argument("AngularPartition: M must be even and >= 4");

    // Cumulative arclength over the angle, midpoint rule on a fine grid.
    theta_grid_.resize(table_size + 1);
    arclen_.resize(table_size + 1);
    arclen_[0] = 0.0;
    theta_grid_[0] = 0.0;
    for (int i = 0; i < table_size; ++i) {
      const double th = kTwoPi * (i + 0.5) / table_size;
      Vec u(2), up(2);
      u << std::cos(th), std::sin(th);
      up << -std::sin(th), std::cos(th);
      const double r = g(u);
      const Vec grad = g.gradient(u);
      const Vec dz = up / r - u * (grad.dot(up)) / (r * r);
      theta_grid_[i + 1] = kTwoPi * (i + 1) / table_size;
      arclen_[i + 1] = arclen_[i] + dz.norm() * (kTwoPi / table_size);
    }
    total_ = arclen_.back();

    cap_radius_ = std::exp2(-0.5 * M);
    const double target_spacing = 2.5 * cap_radius_;
    count_ = std::max(4, static_cast<int>(std::floor(total_ / target_spacing)));
    spacing_ = total_ / count_;
    ramp_width_ = 0.3 * cap_radius_;

    centers_sigma_.resize(count_);
    centers_.resize(count_);
    for (int l = 0; l < count_; ++l) {
      centers_sigma_[l] = (l + 0.5) * spacing_;
      const double th = theta_of_sigma(centers_sigma_[l]);
      Vec u(2);
      u << std::cos(th), std::sin(th);
      centers_[l] = radial_to_sphere(g, u);
    }
  }

  int size() const { return count_; }
  int M() const { return M_; }
  double cap_radius() const { return cap_radius_; }  // 2^(-M/2), Euclidean
  double total_arclength() const { return total_; }
  const Vec& center(int l) const { return centers_[l]; }

  // Xi_l evaluated at a sphere point; Pi_l(xi) = Xi_l(xi / rho(xi)).
  double cutoff(int l, const Vec& zeta) const {
    const double sigma = sigma_of_point(zeta);
    double u = sigma - centers_sigma_[l];
    u -= total_ * std::round(u / total_);  // wrap to [-L/2, L/2]
    const double plateau = 0.5 * spacing_ - 0.5 * ramp_width_;
    const double au = std::abs(u);
    if (au <= plateau) return 1.0;
    if (au >= plateau + ramp_width_) return 0.0;
    return 1.0 - detail::smooth_ramp((au - plateau) / ramp_width_);
  }

  // 0-homogeneous extension on the annulus (well-defined for any xi != 0).
  double extended(int l, const Vec& xi) const {
    return cutoff(l, radial_to_sphere(*gauge_, xi));
  }

  double sum_at(const Vec& zeta) const {
    double s = 0.0;
    for (int l = 0; l < count_; ++l) s += cutoff(l, zeta);
    return s;
  }

  // Support guarantee used by the membership test: Euclidean distance from
  // the center beyond which the cutoff vanishes.
  double support_radius() const {
    return 0.5 * spacing_ + 0.5 * ramp_width_;  // arclength bound >= chord
  }

 private:
  double theta_of_sigma(double sigma) const {
    const auto it = std::lower_bound(arclen_.begin(), arclen_.end(), sigma);
    if (it == arclen_.begin()) return theta_grid_.front();
    if (it == arclen_.end()) return theta_grid_.back();
    const int i = static_cast<int>(it - arclen_.begin());
    const double f = (sigma - arclen_[i - 1]) / (arclen_[i] - arclen_[i - 1]);
    return theta_grid_[i - 1] + f * (theta_grid_[i] - theta_grid_[i - 1]);
  }

  double sigma_of_point(const Vec& zeta) const {
    double th = std::atan2(zeta[1], zeta[0]);
    if (th < 0) th += kTwoPi;
    const double pos = th / kTwoPi * (theta_grid_.size() - 1);
    const int i = std::min<int>(static_cast<int>(pos),
                                static_cast<int>(theta_grid_.size()) - 2);
    const double f = pos - i;
    return arclen_[i] + f * (arclen_[i + 1] - arclen_[i]);
  }

  const Gauge* gauge_;
  int M_;
  int count_ = 0;
  double cap_radius_ = 0.0;
  double spacing_ = 0.0;
  double ramp_width_ = 0.0;
  double total_ = 0.0;
  std::vector<double> theta_grid_, arclen_;
  std::vector<double> centers_sigma_;
  std::vector<Vec> centers_;
};

}  // namespace conelab

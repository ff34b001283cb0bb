#pragma once

// Smooth dyadic partitions of unity: a compactly supported bump eta on
// (1/2, 2) normalized by its own dyadic sum, so that
//     sum_l w(2^-l t) = 1 for every t > 0
// holds exactly by construction. The same object serves as the tau-window
// psi and, composed with 2^(k+1)(1 - rho/|tau|), as the edge window phi.

#include <cmath>
#include <stdexcept>
#include <utility>

namespace conelab {

class DyadicWindow {
 public:
  // `sharpness` scales the exponent of the underlying bump; any positive
  // value yields a valid partition member (used to re-run decay fits with a
  // second window).
  explicit DyadicWindow(double sharpness = 1.0) : sharpness_(sharpness) {
    if (sharpness <= 0.0)
      throw std::invalid_argument("DyadicWindow: sharpness must be positive");
  }

  double operator()(double t) const {
    const double b = bump(t);
    if (b == 0.0) return 0.0;
    return b / dyadic_sum(t);
  }

  // Centered finite difference; only smoothness checks need it.
  double derivative(double t, double h = 1e-6) const {
    return ((*this)(t + h) - (*this)(t - h)) / (2.0 * h);
  }

  static constexpr double support_lo() { return 0.5; }
  static constexpr double support_hi() { return 2.0; }

 private:
  double bump(double t) const {
    if (t <= 0.5 || t >= 2.0) return 0.0;
    return std::exp(-sharpness_ / ((t - 0.5) * (2.0 - t)));
  }

  // sum_l bump(2^-l t); at most two dyadic translates of (1/2, 2) cover any
  // t > 0, so the sum has at most two terms.
  double dyadic_sum(double t) const {
    const double l0 = std::floor(std::log2(t));
    double s = 0.0;
    for (int dl = -1; dl <= 1; ++dl) {
      s += bump(t * std::exp2(-(l0 + dl)));
    }
    return s;
  }

  double sharpness_;
};

struct WindowPair {
  DyadicWindow psi;  // dyadic in tau
  DyadicWindow phi;  // dyadic in 1 - rho/|tau|
};

inline WindowPair make_windows(double sharpness = 1.0) {
  return {DyadicWindow(sharpness), DyadicWindow(sharpness)};
}

}  // namespace conelab

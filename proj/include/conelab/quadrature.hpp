#pragma once

// Gauss–Legendre rules (Golub–Welsch through Eigen's tridiagonal
// eigensolver) plus composite-panel drivers for oscillatory integrands.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>

#include "conelab/common.hpp"

namespace conelab {

struct GaussRule {
  Eigen::ArrayXd nodes;    // on (-1, 1)
  Eigen::ArrayXd weights;  // sum to 2
};

namespace detail {

inline GaussRule compute_gauss_legendre(int n) {
  // Jacobi matrix of the Legendre three-term recurrence; its eigenvalues are
  // the nodes and the squared first eigenvector components give the weights.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1 > 0 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub);
  GaussRule rule;
  rule.nodes = es.eigenvalues().array();
  rule.weights = 2.0 * es.eigenvectors().row(0).array().square();
  return rule;
}

}  // namespace detail

inline const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end())
    it = cache.emplace(n, detail::compute_gauss_legendre(n)).first;
  return it->second;
}

// Composite Gauss–Legendre over [a, b] split into `panels` equal panels.
// Keeps the per-panel phase of oscillatory integrands small so the fixed
// order stays in its spectral regime.
template <typename F>
Cplx integrate_panels(F&& f, double a, double b, int panels, int order = 16) {
  const GaussRule& rule = gauss_legendre(order);
  KahanSum re, im;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (int i = 0; i < order; ++i) {
      const Cplx v = f(mid + 0.5 * h * rule.nodes[i]);
      const double w = 0.5 * h * rule.weights[i];
      re.add(w * v.real());
      im.add(w * v.imag());
    }
  }
  return {re.value(), im.value()};
}

// Panel count for a total accumulated phase (radians): about 8 rad per
// 16-point panel keeps Gauss–Legendre far inside spectral convergence.
inline int panels_for_phase(double phase_span, int min_panels = 2) {
  int p = int(std::ceil(std::abs(phase_span) / 8.0)) + min_panels;
  return p;
}

// Adaptive Simpson; used by test oracles and a few scalar normalizations
// where an implementation-independent path is wanted. A minimum subdivision
// depth is enforced so symmetric integrands cannot fake early convergence.
template <typename F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12,
                        int depth = 30, int min_splits = 6) {
  auto simpson = [&](double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(mid) + f(hi));
  };
  struct Rec {
    double a, b, whole;
    int depth, forced;
  };
  const double whole = simpson(a, b);
  std::vector<Rec> stack{{a, b, whole, depth, min_splits}};
  double total = 0.0;
  while (!stack.empty()) {
    Rec r = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (r.a + r.b);
    const double left = simpson(r.a, mid);
    const double right = simpson(mid, r.b);
    const bool converged =
        r.forced <= 0 && std::abs(left + right - r.whole) < 15.0 * tol;
    if (r.depth <= 0 || converged) {
      total += left + right + (left + right - r.whole) / 15.0;
    } else {
      stack.push_back({r.a, mid, left, r.depth - 1, r.forced - 1});
      stack.push_back({mid, r.b, right, r.depth - 1, r.forced - 1});
    }
  }
  return total;
}

}  // namespace conelab

#pragma once

// Quadrature evaluation of the cone-multiplier convolution kernels.
//
// In gauge polar coordinates the xi-integral collapses onto the scalar
// edge profile
//     G(a) = int_0^1 e^{iau} W(u) (1-u)^delta u^(d-1) du,
// so that (folding the two tau half-lines, the symbol is even in tau)
//     K(x,t) = 2 (2pi)^-(d+1) int psi(tau) cos(t tau) tau^d
//                  [ sum_i w_i <zeta_i, n_i> G(tau <x, zeta_i>) ] dtau.
// G is band-limited to frequencies in [0,1], so a uniform table with local
// Lagrange interpolation reproduces it to ~1e-9 relative; the edge factor
// (1-u)^delta is handled by the substitution u = 1 - v^2, which turns the
// critical-index powers into smooth integrands.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "conelab/cap.hpp"
#include "conelab/partition.hpp"
#include "conelab/quadrature.hpp"
#include "conelab/sphere.hpp"
#include "conelab/windows.hpp"

namespace conelab {

// Which part of the radial symbol profile the kernel carries.
enum class EdgeMode {
  full,       // (1 - u)_+^delta
  remainder,  // Cordoba k = 0 piece: edge power times (1 - varphi)
  dyadic,     // Cordoba k >= 1 piece: extra phi(2^(k+1) (1-u)) factor
  annulus,    // varphi-localized part: sum of all k >= 1 pieces
};

namespace detail {

// sum_{k>=1} phi(2^(k+1) s): the varphi cutoff as a function of s = 1 - u.
inline double annulus_weight(const DyadicWindow& phi, double s) {
  if (s <= 0.0) return 1.0;  // u -> 1 limit: all mass in the tail
  if (s >= 0.5) return 0.0;
  const int k0 = static_cast<int>(std::floor(-std::log2(s)));
  double acc = 0.0;
  for (int k = std::max(1, k0 - 2); k <= k0 + 1; ++k)
    acc += phi(std::exp2(k + 1) * s);
  return acc;
}

}  // namespace detail

// Uniform table of G(a) for a >= 0 plus 6-point Lagrange interpolation;
// negative arguments go through conjugate symmetry.
class EdgeProfile {
 public:
  EdgeProfile(int d, double delta, EdgeMode mode, int cordoba_k, double a_max,
              const DyadicWindow& phi_window)
      : d_(d), delta_(delta), a_max_(a_max) {
    if (a_max <= 1.0) throw std::invalid_argument("EdgeProfile: a_max too small");
    const int n = static_cast<int>(std::ceil(a_max / spacing_)) + 8;
    table_.resize(n);
    for (int i = 0; i < n; ++i)
      table_[i] = direct(d, delta, mode, cordoba_k, i * spacing_, phi_window);
  }

  Cplx operator()(double a) const {
    const double aa = std::abs(a);
    if (aa > a_max_)
      throw ResolutionError("EdgeProfile: argument beyond table range", aa);
    const double pos = aa / spacing_;
    int i0 = static_cast<int>(std::floor(pos)) - 2;
    i0 = std::max(0, std::min<int>(i0, static_cast<int>(table_.size()) - 6));
    const double x = pos - i0;
    // 6-point Lagrange weights on the uniform stencil {0,...,5}.
    double w[6];
    for (int j = 0; j < 6; ++j) {
      double num = 1.0, den = 1.0;
      for (int m = 0; m < 6; ++m) {
        if (m == j) continue;
        num *= (x - m);
        den *= (j - m);
      }
      w[j] = num / den;
    }
    Cplx v = 0.0;
    for (int j = 0; j < 6; ++j) v += w[j] * table_[i0 + j];
    return a >= 0.0 ? v : std::conj(v);
  }

  double a_max() const { return a_max_; }

  // Single-point quadrature, also usable as an interpolation-free oracle.
  static Cplx direct(int d, double delta, EdgeMode mode, int cordoba_k,
                     double a, const DyadicWindow& phi_window) {
    switch (mode) {
      case EdgeMode::full:
      case EdgeMode::annulus: {
        // u = 1 - v^2: 2 e^{ia} int_0^1 e^{-iav^2} v^(2 delta + 1)
        //              (1 - v^2)^(d-1) W(1 - v^2) dv
        auto f = [&](double v) -> Cplx {
          const double u = 1.0 - v * v;
          double w = std::pow(v, 2.0 * delta + 1.0) * std::pow(u, d - 1);
          if (mode == EdgeMode::annulus)
            w *= detail::annulus_weight(phi_window, v * v);
          return w * std::exp(Cplx(0.0, -a * v * v));
        };
        const Cplx inner =
            integrate_panels(f, 0.0, 1.0, panels_for_phase(std::abs(a)), 16);
        return 2.0 * std::exp(Cplx(0.0, a)) * inner;
      }
      case EdgeMode::remainder: {
        // Smooth away from the edge: direct integration in u.
        auto f = [&](double u) -> Cplx {
          const double w0 = 1.0 - detail::annulus_weight(phi_window, 1.0 - u);
          if (w0 <= 0.0) return 0.0;
          return w0 * std::pow(1.0 - u, delta) * std::pow(u, d - 1) *
                 std::exp(Cplx(0.0, a * u));
        };
        return integrate_panels(f, 0.0, 1.0, panels_for_phase(std::abs(a)) + 4,
                                16);
      }
      case EdgeMode::dyadic: {
        // s = 1 - u restricted to ~2^-k: substitute w = 2^(k+1) s.
        const double scale = std::exp2(-cordoba_k - 1);
        auto f = [&](double w) -> Cplx {
          const double s = scale * w;
          return phi_window(w) * std::pow(s, delta) * std::pow(1.0 - s, d - 1) *
                 std::exp(Cplx(0.0, -a * s));
        };
        const Cplx inner = integrate_panels(
            f, 0.5, 2.0, panels_for_phase(std::abs(a) * scale * 1.5) + 2, 16);
        return scale * std::exp(Cplx(0.0, a)) * inner;
      }
    }
    return 0.0;
  }

 private:
  static constexpr double spacing_ = 0.125;
  int d_;
  double delta_;
  double a_max_;
  std::vector<Cplx> table_;
};

struct KernelOptions {
  double delta = 1.5;
  EdgeMode mode = EdgeMode::full;
  int cordoba_k = 0;          // for EdgeMode::dyadic
  double a_max = 64.0;        // covers tau * <x, zeta> for the planned points
  int angular_min = 512;
  int nodes_per_period = 16;  // oscillation rule on the sphere
  double window_sharpness = 1.0;
};

class KernelEvaluator {
 public:
  KernelEvaluator(const Gauge& g, double gamma, KernelOptions opt)
      : gauge_(&g),
        gamma_(gamma),
        opt_(opt),
        psi_(opt.window_sharpness),
        phi_(opt.window_sharpness),
        profile_(g.dim(), opt.delta, opt.mode, opt.cordoba_k, opt.a_max, phi_) {
    // Prebuild the ladder of angular rules needed up to the table range:
    // at() can see |x| up to a_max / 2 (tau <= 2, gamma >= 1 only shrinks
    // that); sizes double from angular_min until the requirement is met.
    SphereQuadrature probe = parametrize_sphere(g, 64);
    arclen_ = probe.total_measure();
    const int needed = required_angular(opt.a_max / 2.0);
    for (int n = opt.angular_min;; n *= 2) {
      rules_.push_back(build_rule(n));
      if (n >= needed) break;
    }
  }

  const Gauge& gauge() const { return *gauge_; }
  double gamma() const { return gamma_; }
  double delta() const { return opt_.delta; }
  const DyadicWindow& psi() const { return psi_; }
  const DyadicWindow& phi_window() const { return phi_; }
  const EdgeProfile& profile() const { return profile_; }

  // K at level l = 0.
  Cplx at(const Vec& x, double t) const {
    return integrate(x, t, 0.5, 2.0,
                     [this](double tau) { return psi_(tau); }, nullptr, -1);
  }

  // Fast path through the exact dilation identity.
  Cplx at_level(int l, const Vec& x, double t) const {
    const double s = std::exp2(l);
    return std::pow(s, gauge_->dim() + 1) * at(s * x, s * t);
  }

  // Direct quadrature of the level-l kernel over tau in (2^(l-1), 2^(l+1));
  // deliberately panelled differently from the fast path so the scaling
  // identity is a real cross-check.
  Cplx at_level_direct(int l, const Vec& x, double t,
                       int extra_panels = 7) const {
    const double s = std::exp2(l);
    return integrate(x, t, 0.5 * s, 2.0 * s,
                     [this, s](double tau) { return psi_(tau / s); }, nullptr,
                     extra_panels);
  }

  // Angular piece: extra cutoff Xi_piece(zeta) in the surface integral.
  // Meaningful with EdgeMode::annulus (the varphi-localized kernel).
  Cplx at_angular_piece(const AngularPartition& part, int piece, const Vec& x,
                        double t) const {
    std::function<double(const Vec&)> cut = [&part, piece](const Vec& zeta) {
      return part.cutoff(piece, zeta);
    };
    return integrate(x, t, 0.5, 2.0,
                     [this](double tau) { return psi_(tau); }, &cut, -1);
  }

  int required_angular(double abs_x) const {
    return std::max(opt_.angular_min,
                    static_cast<int>(std::ceil(opt_.nodes_per_period * 2.0 *
                                               abs_x * arclen_ / kTwoPi)));
  }

 private:
  struct AngularRule {
    SphereQuadrature rule;
    Eigen::ArrayXd cw;  // weight * <zeta, n>
  };

  AngularRule build_rule(int n) const {
    AngularRule r;
    r.rule = parametrize_sphere(*gauge_, n);
    r.cw.resize(r.rule.size());
    for (int i = 0; i < r.rule.size(); ++i)
      r.cw[i] = r.rule.weights[i] *
                r.rule.points.col(i).dot(r.rule.normals.col(i));
    return r;
  }

  const AngularRule& rule_for(double abs_x) const {
    const int needed = required_angular(abs_x);
    for (const AngularRule& r : rules_)
      if (r.rule.size() >= needed) return r;
    throw ResolutionError("KernelEvaluator: |x| beyond prepared angular rules",
                          needed);
  }

  template <typename WindowFn>
  Cplx integrate(const Vec& x, double t, double tau_lo, double tau_hi,
                 WindowFn&& window,
                 const std::function<double(const Vec&)>* angular_anchor,
                 int extra_panels) const;

  template <typename WindowFn, typename AngularFn>
  Cplx integrate_impl(const Vec& x, double t, double tau_lo, double tau_hi,
                      WindowFn&& window, AngularFn&& angular,
                      bool use_angular, int extra_panels) const {
    const double abs_x = x.norm();
    const AngularRule& ar = rule_for(abs_x * tau_hi / 2.0);
    const int n_ang = ar.rule.size();
    const int d = gauge_->dim();

    // <x, zeta_i> once per node; optional partition cutoff folded into cw.
    Eigen::ArrayXd dots = (ar.rule.points.transpose() * x).array();
    Eigen::ArrayXd cw = ar.cw;
    if (use_angular) {
      for (int i = 0; i < n_ang; ++i) {
        const double a = angular(ar.rule.points.col(i));
        cw[i] = a == 0.0 ? 0.0 : cw[i] * a;
      }
    }

    const double phase_span =
        (tau_hi - tau_lo) * (std::abs(t) + gamma_ * abs_x);
    int panels = panels_for_phase(phase_span) + 8;
    if (extra_panels > 0) panels += extra_panels;
    const GaussRule& gl = gauss_legendre(16);
    const double h = (tau_hi - tau_lo) / panels;
    KahanSum re, im;
    for (int p = 0; p < panels; ++p) {
      const double mid = tau_lo + (p + 0.5) * h;
      for (int q = 0; q < 16; ++q) {
        const double tau = mid + 0.5 * h * gl.nodes[q];
        const double wq = 0.5 * h * gl.weights[q];
        const double win = window(tau);
        if (win == 0.0) continue;
        Cplx s = 0.0;
        for (int i = 0; i < n_ang; ++i) {
          if (cw[i] == 0.0) continue;
          s += cw[i] * profile_(tau * dots[i]);
        }
        const double factor =
            wq * win * std::cos(t * tau) * std::pow(tau, d);
        re.add(factor * s.real());
        im.add(factor * s.imag());
      }
    }
    const double norm = 2.0 * std::pow(kTwoPi, -(d + 1));
    return {norm * re.value(), norm * im.value()};
  }

  const Gauge* gauge_;
  double gamma_;
  KernelOptions opt_;
  DyadicWindow psi_, phi_;
  EdgeProfile profile_;
  double arclen_ = kTwoPi;
  std::vector<AngularRule> rules_;
};

template <typename WindowFn>
Cplx KernelEvaluator::integrate(
    const Vec& x, double t, double tau_lo, double tau_hi, WindowFn&& window,
    const std::function<double(const Vec&)>* angular_anchor,
    int extra_panels) const {
  if (angular_anchor) {
    return integrate_impl(x, t, tau_lo, tau_hi, window, *angular_anchor, true,
                          extra_panels);
  }
  auto unit = [](const Vec&) { return 1.0; };
  return integrate_impl(x, t, tau_lo, tau_hi, window, unit, false,
                        extra_panels);
}

}  // namespace conelab

#pragma once

// The cone multiplier acting on sampled fields: forward transform,
// pointwise symbol, inverse transform. The symbol is the continuum
// expression sampled at the grid frequencies; the tau = 0 hyperplane gets
// the positive-part convention (0 for xi != 0, 1 for xi = 0).

#include <Eigen/Dense>

#include <cmath>
#include <optional>

#include "conelab/field.hpp"
#include "conelab/gauge.hpp"
#include "conelab/windows.hpp"

namespace conelab {

struct ConeSymbol {
  const Gauge* gauge = nullptr;
  double delta = 1.0;
  std::optional<int> level;       // dyadic tau window psi(2^-l |tau|)
  const DyadicWindow* psi = nullptr;  // required when level is set
};

inline double symbol_eval(const ConeSymbol& sym, const Vec& xi, double tau) {
  const double at = std::abs(tau);
  double base;
  if (at == 0.0) {
    base = xi.squaredNorm() == 0.0 ? 1.0 : 0.0;
  } else {
    const double r = (*sym.gauge)(xi);
    base = r >= at ? 0.0 : std::pow(1.0 - r / at, sym.delta);
  }
  if (sym.level) {
    base *= (*sym.psi)(std::exp2(-*sym.level) * at);
  }
  return base;
}

namespace detail {

inline void multiply_symbol(const ConeSymbol& sym, SampledField& f) {
  const int d = f.rank() - 1;
  if (sym.gauge->dim() != d)
    throw std::invalid_argument("apply_T: gauge dimension vs field rank");
  // Iterate the grid with an explicit index tuple; frequencies are looked
  // up per axis.
  std::vector<int> idx(f.rank(), 0);
  Vec xi(d);
  const std::int64_t n = f.size();
  for (std::int64_t flat = 0; flat < n; ++flat) {
    for (int a = 0; a < d; ++a) xi[a] = f.frequency(a, idx[a]);
    const double tau = f.frequency(d, idx[d]);
    f.data()[flat] *= symbol_eval(sym, xi, tau);
    // advance the tuple (last axis fastest)
    for (int a = f.rank() - 1; a >= 0; --a) {
      if (++idx[a] < f.shape()[a]) break;
      idx[a] = 0;
    }
  }
}

}  // namespace detail

// T^delta f: diagonal in frequency, linear, contraction on L2.
inline SampledField apply_T(const ConeSymbol& sym, const SampledField& f) {
  SampledField out = f;
  fft_forward(out);
  detail::multiply_symbol(sym, out);
  fft_inverse(out);
  return out;
}

// Dyadic piece T_l: same with the tau window at level l.
inline SampledField apply_Tl(const ConeSymbol& sym, int level,
                             const SampledField& f,
                             const DyadicWindow& psi) {
  ConeSymbol s = sym;
  s.level = level;
  s.psi = &psi;
  return apply_T(s, f);
}

}  // namespace conelab

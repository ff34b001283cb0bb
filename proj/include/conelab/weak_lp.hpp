#pragma once

// Distribution functions, weak-L^p quasinorms and the two summation lemmas
// for weak-type pieces (the Stein–Taibleson–Weiss bound and its dyadic
// variant).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "conelab/field.hpp"

namespace conelab {

// |{ |g| > lambda }| in volume units (strict inequality).
inline double distribution_function(const SampledField& g, double lambda) {
  if (lambda <= 0.0)
    throw std::invalid_argument("distribution_function: lambda > 0 required");
  std::int64_t count = 0;
  for (std::int64_t i = 0; i < g.size(); ++i)
    if (std::abs(g.data()[i]) > lambda) ++count;
  return count * g.cell_volume();
}

struct WeakLpReport {
  double p = 1.0;
  std::vector<double> lambdas;        // ascending
  std::vector<double> distribution;   // nonincreasing in lambda
  double quasinorm = 0.0;             // sup lambda |{|g|>lambda}|^(1/p)
  double lambda_argmax = 0.0;
};

inline std::vector<double> default_lambda_grid(double peak, int octaves = 12,
                                               int per_octave = 8) {
  if (peak <= 0.0) return {1.0};
  std::vector<double> grid =
      octave_spaced(peak * std::exp2(-octaves), peak, per_octave);
  return grid;
}

namespace detail {

// One pass over the values: every |v| contributes to all lambdas below it.
inline std::vector<double> distribution_sweep(
    const std::vector<double>& magnitudes, double cell_volume,
    const std::vector<double>& lambdas) {
  const int m = static_cast<int>(lambdas.size());
  std::vector<std::int64_t> add(m + 1, 0);
  for (double v : magnitudes) {
    const int idx = static_cast<int>(
        std::lower_bound(lambdas.begin(), lambdas.end(), v) - lambdas.begin());
    // v contributes to lambdas[k] for k < idx (strict >).
    if (idx > 0) ++add[idx - 1];
  }
  std::vector<double> dist(m, 0.0);
  std::int64_t acc = 0;
  for (int k = m - 1; k >= 0; --k) {
    acc += add[k];
    dist[k] = acc * cell_volume;
  }
  return dist;
}

}  // namespace detail

// Weak quasinorm of a field, with an optional cell mask (e.g. cone sector).
template <typename MaskFn>
WeakLpReport weak_quasinorm_masked(const SampledField& g, double p,
                                   MaskFn&& keep_cell,
                                   std::vector<double> lambdas = {}) {
  std::vector<double> mags;
  mags.reserve(g.size());
  std::vector<int> idx(g.rank(), 0);
  for (std::int64_t flat = 0; flat < g.size(); ++flat) {
    if (keep_cell(idx)) mags.push_back(std::abs(g.data()[flat]));
    for (int a = g.rank() - 1; a >= 0; --a) {
      if (++idx[a] < g.shape()[a]) break;
      idx[a] = 0;
    }
  }
  WeakLpReport rep;
  rep.p = p;
  double peak = 0.0;
  for (double v : mags) peak = std::max(peak, v);
  rep.lambdas = lambdas.empty() ? default_lambda_grid(peak) : std::move(lambdas);
  rep.distribution =
      detail::distribution_sweep(mags, g.cell_volume(), rep.lambdas);
  for (size_t k = 0; k < rep.lambdas.size(); ++k) {
    const double q =
        rep.lambdas[k] * std::pow(rep.distribution[k], 1.0 / p);
    if (q > rep.quasinorm) {
      rep.quasinorm = q;
      rep.lambda_argmax = rep.lambdas[k];
    }
  }
  return rep;
}

inline WeakLpReport weak_quasinorm(const SampledField& g, double p,
                                   std::vector<double> lambdas = {}) {
  return weak_quasinorm_masked(
      g, p, [](const std::vector<int>&) { return true; }, std::move(lambdas));
}

// ---------------------------------------------------------------------------
// Summation lemmas on synthetic pieces: values live on a shared abstract
// grid of equal cells.

struct SumCheckReport {
  double bound_constant = 0.0;  // the lemma's constant actually used
  double worst_ratio = 0.0;     // max over lambda of measured / bound
  double lambda_at_worst = 0.0;
  bool pass = false;
};

// Stein–Taibleson–Weiss: if |{h_k > l}| <= A l^-p and a in l^p, then
// |{sum a_k h_k > l}| <= (2-p)/(1-p) ||a||_p^p A l^-p.
inline SumCheckReport stw_sum_check(double p,
                                    const std::vector<Eigen::ArrayXd>& pieces,
                                    const std::vector<double>& weights,
                                    double cell_volume, double A,
                                    const std::vector<double>& lambdas) {
  if (pieces.empty() || pieces.size() != weights.size())
    throw std::invalid_argument("stw_sum_check: pieces/weights mismatch");
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("stw_sum_check: p in (0,1) required");

  // Hypothesis check per piece (input error on violation).
  for (const Eigen::ArrayXd& h : pieces) {
    for (double lambda : lambdas) {
      const double measure =
          double((h > lambda).count()) * cell_volume;
      if (measure > A * std::pow(lambda, -p) * (1.0 + 1e-9))
        throw std::invalid_argument(
            "stw_sum_check: a piece violates its own weak-type hypothesis");
    }
  }

  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(pieces[0].size());
  double ap = 0.0;
  for (size_t k = 0; k < pieces.size(); ++k) {
    sum += weights[k] * pieces[k];
    ap += std::pow(weights[k], p);
  }
  SumCheckReport rep;
  rep.bound_constant = (2.0 - p) / (1.0 - p) * ap * A;
  for (double lambda : lambdas) {
    const double measure = double((sum > lambda).count()) * cell_volume;
    const double ratio = measure / (rep.bound_constant * std::pow(lambda, -p));
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.lambda_at_worst = lambda;
    }
  }
  rep.pass = rep.worst_ratio <= 1.0;
  return rep;
}

struct Lemma42Report {
  double piece_constant = 0.0;  // max_l sup_l lambda^p 2^(a l p) measure
  double sum_constant = 0.0;    // sup lambda^p |{ sum |g_l| > lambda }|
};

// Dyadic variant: pieces with |{|g_l| > lambda}| <= c 2^(-a l p) lambda^-p
// sum to a weak-type function; reports the empirical constants.
inline Lemma42Report lemma42_check(double p, double a,
                                   const std::vector<Eigen::ArrayXd>& pieces,
                                   double cell_volume,
                                   const std::vector<double>& lambdas) {
  Lemma42Report rep;
  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(pieces[0].size());
  for (size_t l = 0; l < pieces.size(); ++l) {
    const Eigen::ArrayXd mag = pieces[l].abs();
    sum += mag;
    for (double lambda : lambdas) {
      const double measure = double((mag > lambda).count()) * cell_volume;
      rep.piece_constant =
          std::max(rep.piece_constant, measure * std::pow(lambda, p) *
                                           std::exp2(a * double(l + 1) * p));
    }
  }
  for (double lambda : lambdas) {
    const double measure = double((sum > lambda).count()) * cell_volume;
    rep.sum_constant =
        std::max(rep.sum_constant, measure * std::pow(lambda, p));
  }
  return rep;
}

}  // namespace conelab

#pragma once

// Small shared utilities: deterministic RNG, compensated summation, grid
// builders and least-squares line fits used by the regression-style checks.

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <mutex>
#include <thread>
#include <vector>

namespace conelab {

using Vec = Eigen::VectorXd;
using Cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Raised when a quadrature resolution (or table range) cannot honor the
// oscillation rule for the requested evaluation point.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, double required)
      : std::runtime_error(what), required_(required) {}
  double required() const { return required_; }

 private:
  double required_;
};

// splitmix64: tiny, seedable, bit-exact on every platform. Doubles are built
// from the top 53 bits so streams do not depend on libstdc++ internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // log-uniform over [lo, hi], lo > 0
  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
  }

  double normal() {
    // Box–Muller; consumes two uniforms.
    double u1 = uniform(), u2 = uniform();
    u1 = std::max(u1, 0x1.0p-60);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

  Vec unit_vector(int dim) {
    Vec v(dim);
    double n2 = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = normal();
      n2 = v.squaredNorm();
    } while (n2 < 1e-12);
    return v / std::sqrt(n2);
  }

 private:
  std::uint64_t state_;
};

class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline std::vector<double> linear_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = lo + (hi - lo) * (n == 1 ? 0.0 : double(i) / (n - 1));
  return out;
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(llo + (lhi - llo) * (n == 1 ? 0.0 : double(i) / (n - 1)));
  return out;
}

// Dyadic grid with a fixed number of points per octave, lo..hi inclusive.
inline std::vector<double> octave_spaced(double lo, double hi, int per_octave) {
  std::vector<double> out;
  const double step = std::pow(2.0, 1.0 / per_octave);
  for (double v = lo; v <= hi * (1.0 + 1e-12); v *= step) out.push_back(v);
  return out;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

inline LinearFit fit_line(const std::vector<double>& xs,
                          const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 paired samples");
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double vx = sxx - sx * sx / n;
  if (vx <= 0.0)
    throw std::invalid_argument("fit_line: degenerate abscissa (zero variance)");
  LinearFit f;
  f.slope = (sxy - sx * sy / n) / vx;
  f.intercept = (sy - f.slope * sx) / n;
  const double vy = syy - sy * sy / n;
  f.r2 = vy > 0 ? f.slope * f.slope * vx / vy : 1.0;
  return f;
}

// log-log power-law fit: returns exponent of y ~ c x^k. Nonpositive samples
// are rejected, they indicate the caller fed values below its noise floor.
inline LinearFit fit_loglog(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  lx.reserve(xs.size());
  ly.reserve(ys.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > 0 && ys[i] > 0) {
      lx.push_back(std::log2(xs[i]));
      ly.push_back(std::log2(ys[i]));
    }
  }
  return fit_line(lx, ly);
}

// Worker cap for parallel maps; the CLI sets it from CONELAB_THREADS.
inline int& thread_cap() {
  static int cap = static_cast<int>(std::thread::hardware_concurrency());
  return cap;
}

// Parallel map over [0, n): each index writes only its own slots, so the
// result is identical for every thread count. The first worker exception
// is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn) {
  const int workers = std::max(1, std::min<int>(thread_cap(),
                                                static_cast<int>(n)));
  if (workers == 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      try {
        for (std::int64_t i = next.fetch_add(1);
             i < n && !failed.load(std::memory_order_relaxed);
             i = next.fetch_add(1))
          fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// Critical index delta(p) = d (1/p - 1/2) - 1/2 for the weak H^p bound.
inline double delta_critical(double p, int d) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("delta_critical: p must lie in (0, 1)");
  if (d < 2) throw std::domain_error("delta_critical: d >= 2 required");
  return d * (1.0 / p - 0.5) - 0.5;
}

inline std::string format_double(double v, int sig = 12) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", sig, v);
  return buf;
}

}  // namespace conelab

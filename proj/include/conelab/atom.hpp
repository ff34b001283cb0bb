#pragma once

// (p, nu)-atoms on cubes: a smooth bump times a pseudo-random polynomial,
// orthogonalized against all monomials of degree <= nu in the bump-weighted
// discrete inner product, then rescaled to sit just under the size bound
// |Q|^(-1/p). Moments vanish on the grid by construction.

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "conelab/field.hpp"

namespace conelab {

struct Cube {
  Vec center;      // (d+1)-vector
  double side = 1.0;  // the atom cube's edge length ("diameter" scale)
  double volume(int rank) const { return std::pow(side, rank); }
};

struct Atom {
  double p = 0.5;
  int nu = 1;
  Cube cube;
  SampledField values;
};

namespace detail {

inline void enumerate_multi_indices(int dims, int max_degree,
                                    std::vector<std::vector<int>>& out,
                                    std::vector<int>& cur, int pos, int left) {
  if (pos == dims) {
    out.push_back(cur);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    cur[pos] = k;
    enumerate_multi_indices(dims, max_degree, out, cur, pos + 1, left - k);
  }
}

inline std::vector<std::vector<int>> multi_indices(int dims, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(dims, 0);
  enumerate_multi_indices(dims, max_degree, out, cur, 0, max_degree);
  return out;
}

inline double monomial(const Vec& y, const std::vector<int>& alpha) {
  double v = 1.0;
  for (size_t i = 0; i < alpha.size(); ++i)
    for (int k = 0; k < alpha[i]; ++k) v *= y[i];
  return v;
}

}  // namespace detail

inline int min_moment_order(double p, int rank) {
  return static_cast<int>(std::ceil(rank * (1.0 / p - 1.0)));
}

// Builds the atom on the given grid; cells outside the cube stay zero.
inline Atom make_atom(double p, int nu, const Cube& cube, std::uint64_t seed,
                      const std::vector<int>& shape, const Vec& extents,
                      int max_retries = 8) {
  const int rank = static_cast<int>(shape.size());
  if (cube.center.size() != rank)
    throw std::invalid_argument("make_atom: cube rank mismatch");
  if (nu < min_moment_order(p, rank))
    throw std::invalid_argument(
        "make_atom: nu below the moment order (d+1)(1/p - 1)");

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    SampledField field(shape, extents);
    Rng rng(seed + 0x9e37 * attempt);

    // Cells inside the cube with their normalized coordinates.
    std::vector<std::int64_t> cells;
    std::vector<Vec> ys;
    std::vector<int> idx(rank, 0);
    Vec y(rank);
    for (std::int64_t flat = 0; flat < field.size(); ++flat) {
      bool inside = true;
      for (int a = 0; a < rank && inside; ++a) {
        y[a] = 2.0 * (field.coordinate(a, idx[a]) - cube.center[a]) / cube.side;
        inside = std::abs(y[a]) < 1.0;
      }
      if (inside) {
        cells.push_back(flat);
        ys.push_back(y);
      }
      for (int a = rank - 1; a >= 0; --a) {
        if (++idx[a] < shape[a]) break;
        idx[a] = 0;
      }
    }
    if (cells.size() < 8)
      throw std::invalid_argument(
          "make_atom: grid Nyquist insufficient for the cube");

    const auto moments = detail::multi_indices(rank, nu);
    const auto poly_basis = detail::multi_indices(rank, nu + 1);
    Eigen::VectorXd coeffs(poly_basis.size());
    for (int i = 0; i < coeffs.size(); ++i) coeffs[i] = rng.uniform(-1.0, 1.0);

    // bump and raw values per cell
    std::vector<double> bump(cells.size());
    Eigen::VectorXd raw(cells.size());
    for (size_t c = 0; c < cells.size(); ++c) {
      double b = 1.0;
      for (int a = 0; a < rank; ++a)
        b *= std::exp(-1.0 / (1.0 - ys[c][a] * ys[c][a]));
      bump[c] = b;
      double r = 0.0;
      for (size_t m = 0; m < poly_basis.size(); ++m)
        r += coeffs[m] * detail::monomial(ys[c], poly_basis[m]);
      raw[c] = b * r;
    }

    // Gram system: atom = bump * (r - sum_beta c_beta y^beta) with
    // <atom, y^alpha> = 0 for all |alpha| <= nu.
    const int m = static_cast<int>(moments.size());
    Eigen::MatrixXd gram(m, m);
    Eigen::VectorXd rhs(m);
    for (int i = 0; i < m; ++i) {
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (size_t c = 0; c < cells.size(); ++c)
          s += bump[c] * detail::monomial(ys[c], moments[i]) *
               detail::monomial(ys[c], moments[j]);
        gram(i, j) = gram(j, i) = s;
      }
      double b = 0.0;
      for (size_t c = 0; c < cells.size(); ++c)
        b += raw[c] * detail::monomial(ys[c], moments[i]);
      rhs[i] = b;
    }
    const Eigen::VectorXd sol = gram.ldlt().solve(rhs);

    double max_abs = 0.0;
    for (size_t c = 0; c < cells.size(); ++c) {
      double v = raw[c];
      for (int i = 0; i < m; ++i)
        v -= sol[i] * bump[c] * detail::monomial(ys[c], moments[i]);
      field.data()[cells[c]] = v;
      max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs < 1e-12) continue;  // degenerate draw, retry

    const double bound = std::pow(cube.volume(rank), -1.0 / p);
    field.data() *= 0.95 * bound / max_abs;

    Atom atom;
    atom.p = p;
    atom.nu = nu;
    atom.cube = cube;
    atom.values = std::move(field);
    return atom;
  }
  throw std::runtime_error("make_atom: degenerate seed, retries exhausted");
}

// Discrete moment int a(x) x^alpha dx over the grid.
inline double atom_moment(const Atom& atom, const std::vector<int>& alpha) {
  const SampledField& f = atom.values;
  const int rank = f.rank();
  std::vector<int> idx(rank, 0);
  KahanSum acc;
  Vec x(rank);
  for (std::int64_t flat = 0; flat < f.size(); ++flat) {
    const Cplx v = f.data()[flat];
    if (v != Cplx(0.0, 0.0)) {
      for (int a = 0; a < rank; ++a) x[a] = f.coordinate(a, idx[a]);
      acc.add(v.real() * detail::monomial(x, alpha));
    }
    for (int a = rank - 1; a >= 0; --a) {
      if (++idx[a] < f.shape()[a]) break;
      idx[a] = 0;
    }
  }
  return acc.value() * f.cell_volume();
}

}  // namespace conelab

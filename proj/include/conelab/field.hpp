#pragma once

// Uniform complex grids over (d+1)-dimensional boxes and the discrete
// Fourier transform used to apply multipliers. Storage is row-major (last
// axis fastest); cell centers put index n/2 at the box center so an atom
// centered at the origin sits on a grid point.

#include <unsupported/Eigen/FFT>

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelab/common.hpp"

namespace conelab {

class SampledField {
 public:
  SampledField() = default;
  SampledField(std::vector<int> shape, Vec extents, Vec origin = Vec())
      : shape_(std::move(shape)), extents_(std::move(extents)) {
    if (shape_.empty() || extents_.size() != int(shape_.size()))
      throw std::invalid_argument("SampledField: shape/extent rank mismatch");
    for (size_t i = 0; i < shape_.size(); ++i) {
      if (shape_[i] < 2 || extents_[i] <= 0.0)
        throw std::invalid_argument("SampledField: bad shape or extent");
    }
    origin_ = origin.size() ? origin : Vec::Zero(rank());
    strides_.assign(shape_.size(), 1);
    for (int a = rank() - 2; a >= 0; --a)
      strides_[a] = strides_[a + 1] * shape_[a + 1];
    data_ = Eigen::VectorXcd::Zero(size());
  }

  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }
  const Vec& extents() const { return extents_; }
  const Vec& origin() const { return origin_; }
  std::int64_t size() const {
    return std::accumulate(shape_.begin(), shape_.end(), std::int64_t(1),
                           std::multiplies<>());
  }

  double spacing(int axis) const { return extents_[axis] / shape_[axis]; }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < rank(); ++a) v *= spacing(a);
    return v;
  }

  Eigen::VectorXcd& data() { return data_; }
  const Eigen::VectorXcd& data() const { return data_; }

  std::int64_t flat_index(const std::vector<int>& idx) const {
    std::int64_t f = 0;
    for (int a = 0; a < rank(); ++a) f += strides_[a] * idx[a];
    return f;
  }

  std::vector<int> multi_index(std::int64_t flat) const {
    std::vector<int> idx(rank());
    for (int a = 0; a < rank(); ++a) {
      idx[a] = static_cast<int>(flat / strides_[a]);
      flat %= strides_[a];
    }
    return idx;
  }

  // Physical coordinate of a cell center along one axis.
  double coordinate(int axis, int idx) const {
    return origin_[axis] + (idx - shape_[axis] / 2) * spacing(axis);
  }

  // Grid frequency (DFT convention) along one axis.
  double frequency(int axis, int idx) const {
    const int n = shape_[axis];
    const int k = idx < (n + 1) / 2 ? idx : idx - n;
    return kTwoPi * k / extents_[axis];
  }

  double norm_l2() const {
    return std::sqrt(data_.squaredNorm() * cell_volume());
  }

  bool same_grid(const SampledField& o) const {
    return shape_ == o.shape_ && (extents_ - o.extents_).norm() == 0.0;
  }

 private:
  std::vector<int> shape_;
  Vec extents_;
  Vec origin_;
  std::vector<std::int64_t> strides_;
  Eigen::VectorXcd data_;
};

namespace detail {

inline void fft_axis(SampledField& f, int axis, bool forward) {
  const int n = f.shape()[axis];
  const std::int64_t total = f.size();
  const std::int64_t lines = total / n;
  // Stride pattern: iterate all index tuples with `axis` fixed to 0.
  std::int64_t stride = 1;
  for (int a = f.rank() - 1; a > axis; --a) stride *= f.shape()[a];

  Eigen::FFT<double> fft;
  std::vector<Cplx> line(n), out(n);
  Cplx* base = f.data().data();
  const std::int64_t block = stride * n;
  for (std::int64_t l = 0; l < lines; ++l) {
    // Decompose the line id into (outer block, inner offset).
    const std::int64_t outer = l / stride;
    const std::int64_t inner = l % stride;
    Cplx* p = base + outer * block + inner;
    for (int i = 0; i < n; ++i) line[i] = p[std::int64_t(i) * stride];
    if (forward)
      fft.fwd(out, line);
    else
      fft.inv(out, line);
    for (int i = 0; i < n; ++i) p[std::int64_t(i) * stride] = out[i];
  }
}

}  // namespace detail

// In-place unnormalized forward DFT over every axis.
inline void fft_forward(SampledField& f) {
  for (int a = 0; a < f.rank(); ++a) detail::fft_axis(f, a, true);
}

// In-place inverse DFT (normalized by 1/N per axis, so ifft(fft(f)) = f).
inline void fft_inverse(SampledField& f) {
  for (int a = 0; a < f.rank(); ++a) detail::fft_axis(f, a, false);
}

// ---------------------------------------------------------------------------
// Flat binary I/O: little-endian complex doubles plus a text sidecar with
// the grid geometry. `path` gets the raw data, `path.meta` the sidecar.

inline void write_field(const SampledField& f, const std::string& path) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    out.write(reinterpret_cast<const char*>(f.data().data()),
              sizeof(Cplx) * f.size());
  }
  std::ofstream meta(path + ".meta");
  meta << "rank " << f.rank() << "\n";
  meta << "shape";
  for (int a = 0; a < f.rank(); ++a) meta << " " << f.shape()[a];
  meta << "\nextent";
  for (int a = 0; a < f.rank(); ++a)
    meta << " " << format_double(f.extents()[a]);
  meta << "\norigin";
  for (int a = 0; a < f.rank(); ++a)
    meta << " " << format_double(f.origin()[a]);
  meta << "\n";
}

inline SampledField read_field(const std::string& path) {
  std::ifstream meta(path + ".meta");
  if (!meta) throw std::runtime_error("read_field: missing sidecar for " + path);
  std::string key;
  int rank = 0;
  meta >> key >> rank;
  if (key != "rank" || rank < 1)
    throw std::runtime_error("read_field: malformed sidecar");
  std::vector<int> shape(rank);
  Vec extents(rank), origin(rank);
  meta >> key;
  for (int a = 0; a < rank; ++a) meta >> shape[a];
  meta >> key;
  for (int a = 0; a < rank; ++a) meta >> extents[a];
  meta >> key;
  for (int a = 0; a < rank; ++a) meta >> origin[a];
  SampledField f(shape, extents, origin);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_field: cannot open " + path);
  in.read(reinterpret_cast<char*>(f.data().data()), sizeof(Cplx) * f.size());
  if (!in) throw std::runtime_error("read_field: truncated data in " + path);
  return f;
}

}  // namespace conelab

#pragma once

// Deterministic CSV emission: fixed %.12g formatting so identical runs are
// byte-identical.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "conelab/common.hpp"

namespace conelab {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns)
      : out_(path), n_cols_(columns.size()) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path);
    for (size_t i = 0; i < columns.size(); ++i) {
      if (i) out_ << ",";
      out_ << columns[i];
    }
    out_ << "\n";
  }

  void row(const std::vector<double>& values) {
    if (values.size() != n_cols_)
      throw std::invalid_argument("csv: column count mismatch");
    for (size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ",";
      out_ << format_double(values[i]);
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
  size_t n_cols_;
};

}  // namespace conelab

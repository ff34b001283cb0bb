#pragma once

// The space-time region families used by the envelope bounds, with the
// defining inequalities evaluated verbatim (strict vs non-strict exactly as
// they cut the plane into disjoint pieces for fixed l and gamma).

#include <Eigen/Dense>

#include <cmath>
#include <optional>

#include "conelab/common.hpp"

namespace conelab {

enum class RegionFamily { A, B, C, D, E };

struct RegionLabel {
  RegionFamily family;
  int l = 0;
  int j = 0;  // only meaningful for family E
};

inline const char* region_name(RegionFamily f) {
  switch (f) {
    case RegionFamily::A: return "A";
    case RegionFamily::B: return "B";
    case RegionFamily::C: return "C";
    case RegionFamily::D: return "D";
    case RegionFamily::E: return "E";
  }
  return "?";
}

// Classifies (x, t) against the five families at level l (and dyadic cone
// shell j for family E). Returns the unique matching label, or nullopt when
// the point lies in none of them (e.g. an E-type point whose shell is not j).
inline std::optional<RegionLabel> classify_region(const Vec& x, double t,
                                                  int l, int j, double gamma) {
  const double scale = std::exp2(l);
  const double gx = gamma * x.norm();
  const double at = std::abs(t);
  const double cone_gap = std::abs(at - gx);

  if (scale * gx <= 4.0) {
    if (scale * at > 2.0) return RegionLabel{RegionFamily::A, l, 0};
    return std::nullopt;
  }
  // From here on 2^l gamma |x| > 4.
  if (scale * at <= 2.0) {
    if (cone_gap > 1.0 / scale) return RegionLabel{RegionFamily::B, l, 0};
    return std::nullopt;
  }
  // 2^l |t| > 2 as well.
  if (cone_gap <= 1.0 / scale) return RegionLabel{RegionFamily::C, l, 0};
  const bool off_cone_sector = (at <= 0.5 * gamma * x.norm()) || (at > 2.0 * gx);
  if (off_cone_sector) return RegionLabel{RegionFamily::D, l, 0};
  // Cone-adjacent sector: dyadic shells in the cone gap.
  if (j >= 1 && cone_gap > std::exp2(j - 1) / scale &&
      cone_gap <= std::exp2(j) / scale)
    return RegionLabel{RegionFamily::E, l, j};
  return std::nullopt;
}

}  // namespace conelab

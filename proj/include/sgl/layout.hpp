#pragma once

#include <vector>

namespace sgl {

/// Column layout of a steerable-coefficient matrix: for each angular index
/// m = -M..M there are ell[m+M] radial columns, stored contiguously in
/// ascending m, and inside each angular block in ascending radial index.
struct AngularLayout {
  int M = 0;
  std::vector<int> ell;      // 2M+1 radial counts, index m + M
  std::vector<int> offsets;  // exclusive prefix sums of ell
  int D = 0;                 // total column count

  /// Builds a layout from the radial counts (must have 2M+1 non-negative
  /// entries); computes offsets and the total dimension.
  static AngularLayout from_counts(int M, std::vector<int> counts);

  int count(int m) const { return ell[static_cast<std::size_t>(m + M)]; }
  int offset(int m) const { return offsets[static_cast<std::size_t>(m + M)]; }
  /// Flat column of radial index l (0-based) at angular index m.
  int column(int m, int l) const { return offset(m) + l; }

  bool operator==(const AngularLayout& other) const {
    return M == other.M && ell == other.ell;
  }
};

}  // namespace sgl

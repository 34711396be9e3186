#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mprofile/types.hpp"
#include "mprofile/window_stats.hpp"

namespace mprofile {

/// A run of consecutive cells (i, i + diagonal) on one diagonal of the
/// upper-triangular distance matrix, starting at row `start_row`.
struct DiagonalSegment {
  std::size_t diagonal = 0;
  std::size_t start_row = 0;
  std::size_t length = 0;

  friend bool operator==(const DiagonalSegment&,
                         const DiagonalSegment&) = default;
};

/// Profile under construction, exclusively owned by one worker.
///
/// Holds squared distances: candidates are ranked by (squared distance,
/// neighbor index), and the square root is taken once when profiles are
/// merged. sqrt is monotone, so the merged Euclidean profile is the same as
/// ranking Euclidean distances cell by cell.
class LocalProfile {
 public:
  LocalProfile() = default;
  explicit LocalProfile(std::size_t n_sub)
      : dist2(n_sub, kNoDistance), nn(n_sub, kNoNeighbor) {}

  std::size_t size() const noexcept { return dist2.size(); }

  /// Keeps (d2, neighbor) if it beats the current entry of `row`. Equal
  /// distances go to the lower neighbor index.
  void offer(std::size_t row, double d2, std::uint64_t neighbor) noexcept {
    double& cur = dist2[row];
    if (d2 < cur || (d2 == cur && neighbor < nn[row])) {
      assert(!(d2 > cur));
      cur = d2;
      nn[row] = neighbor;
    }
  }

  std::vector<double> dist2;
  std::vector<std::uint64_t> nn;
};

/// Direct dot product of windows i and j.
inline double init_qt(std::span<const double> t, std::size_t m, std::size_t i,
                      std::size_t j) noexcept {
  double qt = 0.0;
  for (std::size_t k = 0; k < m; ++k) qt += t[i + k] * t[j + k];
  return qt;
}

/// Dot product for (i+1, j+1) given the one for (i, j).
inline double step_qt(double qt, std::span<const double> t, std::size_t i,
                      std::size_t j, std::size_t m) noexcept {
  // One add on the loop-carried chain instead of two.
  return qt + (t[i + m] * t[j + m] - t[i] * t[j]);
}

/// Centered covariance sum_k (t[i+k] - mu_i)(t[j+k] - mu_j), computed
/// directly.
inline double init_cov(std::span<const double> t, const WindowStats& st,
                       std::size_t i, std::size_t j) noexcept {
  const double mi = st.mu[i];
  const double mj = st.mu[j];
  double cov = 0.0;
  for (std::size_t k = 0; k < st.window; ++k) {
    cov += (t[i + k] - mi) * (t[j + k] - mj);
  }
  return cov;
}

/// Covariance for (i+1, j+1) given the one for (i, j). Unlike the raw dot
/// product this never subtracts two large nearly equal terms, so it stays
/// accurate on series far from zero.
inline double step_cov(double cov, const WindowStats& st, std::size_t i,
                       std::size_t j) noexcept {
  return cov + (st.df[i] * st.dg[j] + st.df[j] * st.dg[i]);
}

/// Squared distances below this are rounding noise from rho ~ 1 and read as 0.
inline constexpr double kSquaredDistanceFloor = 1e-14;

/// Squared z-normalized distance 2m(1 - rho) from the centered covariance.
/// Both windows flat -> 0, exactly one flat -> 2m.
inline double sq_distance_from_cov(double cov, const WindowStats& st,
                                   std::size_t i, std::size_t j) noexcept {
  if (st.flat[i] & st.flat[j]) return 0.0;
  // A flat window has inv_norm 0, which yields rho = 0 and 2m.
  const double m = static_cast<double>(st.window);
  const double rho =
      std::clamp(cov * st.inv_norm[i] * st.inv_norm[j], -1.0, 1.0);
  const double d2 = 2.0 * m * (1.0 - rho);
  return d2 < kSquaredDistanceFloor ? 0.0 : d2;
}

/// Squared distance from the raw dot product of windows i and j.
inline double cell_sq_distance(double qt, const WindowStats& st, std::size_t i,
                               std::size_t j) noexcept {
  const double m = static_cast<double>(st.window);
  return sq_distance_from_cov(qt - m * st.mu[i] * st.mu[j], st, i, j);
}

/// z-normalized Euclidean distance of windows i and j from their raw dot
/// product.
inline double cell_distance(double qt, const WindowStats& st, std::size_t i,
                            std::size_t j) noexcept {
  return std::sqrt(cell_sq_distance(qt, st, i, j));
}

/// Walks every cell of `seg`, offering each distance to both rows it
/// touches. The covariance is seeded directly at the segment start and
/// advanced with step_cov. Returns the number of cells processed.
std::size_t traverse_segment(const DiagonalSegment& seg,
                             std::span<const double> t, const WindowStats& st,
                             LocalProfile& lp);

/// Number of cells on diagonal d of a matrix with n_sub rows.
inline std::size_t diagonal_length(std::size_t n_sub,
                                   std::size_t diagonal) noexcept {
  return n_sub - diagonal;
}

}  // namespace mprofile

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mprofile/types.hpp"

namespace mprofile {

/// Per-window statistics for z-normalization.
///
/// inv_norm[i] is 1 / ||T_i - mu_i||, the reciprocal Euclidean norm of the
/// mean-centered window, or 0 for flat (constant) windows.
///
/// df and dg drive the centered covariance update along a diagonal:
/// df[i] = (t[i+m] - t[i]) / 2 and dg[i] = (t[i+m] - mu[i+1]) + (t[i] - mu[i]),
/// with the last entry 0.
struct WindowStats {
  std::size_t window = 0;
  std::vector<double> mu;
  std::vector<double> inv_norm;
  std::vector<std::uint8_t> flat;
  std::vector<double> df;
  std::vector<double> dg;
  bool any_flat = false;

  std::size_t size() const noexcept { return mu.size(); }
  bool is_flat(std::size_t i) const noexcept { return flat[i] != 0; }
};

/// Series of at most this many samples use the per-window two-pass scheme;
/// longer series use compensated rolling sums.
inline constexpr std::size_t kTwoPassLimit = std::size_t{1} << 20;

/// Throws ConfigError unless the window fits (1 <= m <= n). The tighter
/// 4 <= m <= n/2 range of a profile run is enforced by RunConfig::validate.
WindowStats compute_stats(const TimeSeries& ts, std::size_t m);

/// Same as compute_stats, forcing the rolling-sum path. Exposed for tests.
WindowStats compute_stats_rolling(std::span<const double> values,
                                  std::size_t m);

/// Flatness test on a centered sum of squares.
inline bool is_flat_window(double centered_ss, double mean,
                           std::size_t m) noexcept {
  const double scale = mean * mean > 1.0 ? mean * mean : 1.0;
  return centered_ss <= 1e-13 * static_cast<double>(m) * scale;
}

}  // namespace mprofile

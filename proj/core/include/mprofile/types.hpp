#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mprofile {

/// Distance held by a profile entry that has not seen any candidate yet.
inline constexpr double kNoDistance = std::numeric_limits<double>::infinity();
/// Neighbor index paired with kNoDistance.
inline constexpr std::uint64_t kNoNeighbor =
    std::numeric_limits<std::uint64_t>::max();

inline constexpr std::size_t kMinSeriesLength = 4;
inline constexpr std::size_t kMinWindow = 4;

/// A validated, chronologically ordered real-valued series.
///
/// Construction goes through `TimeSeries::from_values`, which enforces
/// n >= 4 and finiteness of every sample.
class TimeSeries {
 public:
  TimeSeries() = default;

  /// Throws TooShortError or ValidationError.
  static TimeSeries from_values(std::vector<double> values,
                                std::string label = {});

  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  const std::string& label() const noexcept { return label_; }

  /// Number of length-m subsequences.
  std::size_t subsequence_count(std::size_t m) const noexcept {
    return m > values_.size() ? 0 : values_.size() - m + 1;
  }

 private:
  std::vector<double> values_;
  std::string label_;
};

/// Nearest-neighbor distance and index per subsequence.
struct MatrixProfile {
  std::vector<double> dist;
  std::vector<std::uint64_t> nn;
  std::size_t window = 0;
  std::size_t exclusion = 0;

  std::size_t size() const noexcept { return dist.size(); }
  bool has_neighbor(std::size_t i) const noexcept {
    return nn[i] != kNoNeighbor;
  }

  friend bool operator==(const MatrixProfile&, const MatrixProfile&) = default;
};

/// Parameters of one matrix profile run.
struct RunConfig {
  std::size_t m = 0;
  std::size_t ez = 0;
  std::size_t workers = 1;
  std::size_t segment_len = 4096;
  std::uint64_t order_seed = 0;
  std::size_t snapshot_interval = 8;
  std::optional<double> time_budget;

  /// Defaults: ez = ceil(m/4), workers = hardware concurrency,
  /// segment_len = 4096, order_seed = 0, snapshot_interval = workers * 8.
  static RunConfig defaults_for(std::size_t m);

  /// Throws ConfigError unless the config is usable for a series of length n.
  void validate(std::size_t n) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline std::size_t default_exclusion(std::size_t m) noexcept {
  return (m + 3) / 4;
}

}  // namespace mprofile

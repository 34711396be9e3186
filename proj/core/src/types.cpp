#include "mprofile/types.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "mprofile/error.hpp"

namespace mprofile {

TimeSeries TimeSeries::from_values(std::vector<double> values,
                                   std::string label) {
  if (values.size() < kMinSeriesLength) {
    throw TooShortError("series has " + std::to_string(values.size()) +
                        " samples, need at least " +
                        std::to_string(kMinSeriesLength));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ValidationError(
          "non-finite sample at index " + std::to_string(i), i);
    }
  }
  TimeSeries ts;
  ts.values_ = std::move(values);
  ts.label_ = std::move(label);
  return ts;
}

RunConfig RunConfig::defaults_for(std::size_t m) {
  RunConfig c;
  c.m = m;
  c.ez = default_exclusion(m);
  const unsigned hw = std::thread::hardware_concurrency();
  c.workers = hw == 0 ? 1 : hw;
  c.segment_len = 4096;
  c.order_seed = 0;
  c.snapshot_interval = c.workers * 8;
  return c;
}

void RunConfig::validate(std::size_t n) const {
  if (m < kMinWindow) {
    throw ConfigError("window length m=" + std::to_string(m) +
                      " is below the minimum of " +
                      std::to_string(kMinWindow));
  }
  if (m > n / 2) {
    throw ConfigError("window length m=" + std::to_string(m) +
                      " exceeds n/2 for n=" + std::to_string(n));
  }
  if (ez < 1) throw ConfigError("exclusion zone must be >= 1");
  if (n - m + 1 < ez + 2) {
    throw ConfigError("exclusion zone ez=" + std::to_string(ez) +
                      " leaves no admissible pair");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (segment_len < 1) throw ConfigError("segment length must be >= 1");
  if (snapshot_interval < 1) {
    throw ConfigError("snapshot interval must be >= 1");
  }
  if (time_budget && !(*time_budget >= 0.0)) {
    throw ConfigError("time budget must be >= 0 seconds");
  }
}

}  // namespace mprofile

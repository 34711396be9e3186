#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mprofile/diagonal_engine.hpp"
#include "mprofile/partition_planner.hpp"
#include "mprofile/types.hpp"

namespace mprofile {

/// Merged view of a run at a quiesce point.
///
/// Every finite entry is an upper bound on the exact profile entry; the
/// bound tightens monotonically over the snapshots of one run.
struct Snapshot {
  MatrixProfile profile;
  double fraction_done = 0.0;
  double wall_time = 0.0;
  bool exact = false;
};

using SnapshotCallback = std::function<void(const Snapshot&)>;

/// Everything needed to continue a run: cursors index into each worker's
/// segment list of the plan rebuilt from `config`; `merged` holds the
/// squared-distance profile of all completed segments.
struct RunState {
  RunConfig config;
  std::uint64_t series_length = 0;
  std::uint32_t series_checksum = 0;
  std::vector<std::uint64_t> cursors;
  LocalProfile merged;
};

struct RunOptions {
  /// Called at each quiesce point on the coordinating thread.
  SnapshotCallback on_snapshot;
  /// Cooperative cancellation, polled once per segment.
  const std::atomic<bool>* cancel = nullptr;
  /// When set, a checkpoint is written at every snapshot and when a run is
  /// interrupted.
  std::optional<std::filesystem::path> checkpoint_path;
  /// Called by a worker before it starts a segment.
  std::function<void(std::size_t worker, const DiagonalSegment&)>
      before_segment;
};

/// Elementwise minimum; ties go to the lower neighbor index. Entries that
/// are unset in every input stay unset. Throws std::logic_error on length
/// mismatch.
MatrixProfile merge(std::span<const LocalProfile> locals);

/// merge() without the final square root.
LocalProfile merge_squared(std::span<const LocalProfile> locals);

/// Euclidean view of a squared-distance profile.
MatrixProfile to_matrix_profile(const LocalProfile& lp, std::size_t window,
                                std::size_t exclusion);

/// Computes the matrix profile of `ts`. Returns the final snapshot, with
/// exact == true unless the run was cancelled or ran out of time budget.
/// Throws ConfigError for an invalid config, WorkerFailure if a worker fails.
Snapshot run(const TimeSeries& ts, const RunConfig& config,
             const RunOptions& options = {});

/// Continues from a saved state. Throws CheckpointError if `ts` is not the
/// series the state was taken from.
Snapshot run_from_state(const TimeSeries& ts, const RunState& state,
                        const RunOptions& options = {});

/// Loads the checkpoint at `path` and finishes the run. `time_budget`
/// overrides the stored budget when given.
Snapshot resume(const std::filesystem::path& path, const TimeSeries& ts,
                const RunOptions& options = {},
                std::optional<double> time_budget = std::nullopt);

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Layout (little-endian): "MPXC", u32 version, config echo, series length
/// and CRC-32, per-worker cursors, squared dist[] as f64, nn[] as u64, then the
/// CRC-32 of all preceding bytes.
void save_checkpoint(const RunState& state, const std::filesystem::path& path);
RunState load_checkpoint(const std::filesystem::path& path);

/// CRC-32 over the raw sample bytes.
std::uint32_t series_checksum(const TimeSeries& ts);

}  // namespace mprofile

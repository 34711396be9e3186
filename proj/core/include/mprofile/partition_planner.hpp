#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "mprofile/diagonal_engine.hpp"

namespace mprofile {

/// Assignment of every admissible diagonal segment to a worker.
///
/// Diagonals d in [ez+1, n_sub-1] are packed whole onto workers with
/// longest-processing-time-first greedy, cut into segments of at most
/// `segment_len` cells, and each worker's list is shuffled with a seeded
/// Fisher-Yates permutation so that any prefix samples the whole matrix.
struct WorkPlan {
  std::vector<std::vector<DiagonalSegment>> assignments;
  std::vector<std::uint64_t> cells_per_worker;
  std::uint64_t total_cells = 0;
  std::uint64_t order_seed = 0;

  std::size_t n_sub = 0;
  std::size_t exclusion = 0;
  std::size_t segment_len = 0;

  std::size_t workers() const noexcept { return assignments.size(); }
  /// Workers that received no diagonal at all.
  std::size_t empty_workers() const noexcept;

  friend bool operator==(const WorkPlan&, const WorkPlan&) = default;
};

/// Throws ConfigError when n_sub < ez + 2, workers == 0 or segment_len == 0.
WorkPlan plan(std::size_t n_sub, std::size_t ez, std::size_t workers,
              std::size_t segment_len, std::uint64_t order_seed);

/// Fraction of total cells covered by the first units_done[w] segments of
/// each worker's list.
double coverage_fraction(const WorkPlan& plan,
                         std::span<const std::uint64_t> units_done);

/// Cells contained in the first `units` segments of worker w.
std::uint64_t cells_in_prefix(const WorkPlan& plan, std::size_t worker,
                              std::uint64_t units);

/// One line per segment: "worker diagonal start_row length".
void write_plan_dump(const WorkPlan& plan, std::ostream& out);

/// Sum over admissible diagonals of their lengths.
std::uint64_t admissible_cells(std::size_t n_sub, std::size_t ez) noexcept;

}  // namespace mprofile

#include "mprofile/partition_planner.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <queue>
#include <random>
#include <string>
#include <utility>

#include "mprofile/error.hpp"

namespace mprofile {
namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// std::uniform_int_distribution is implementation-defined; plans must be
// identical across standard libraries, so draw by unbiased rejection.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) return r % bound;
  }
}

void shuffle_segments(std::vector<DiagonalSegment>& segs, std::uint64_t seed,
                      std::size_t worker) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(worker)));
  for (std::size_t i = segs.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(draw_below(rng, i));
    std::swap(segs[i - 1], segs[j]);
  }
}

}  // namespace

std::size_t WorkPlan::empty_workers() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(assignments.begin(), assignments.end(),
                    [](const auto& list) { return list.empty(); }));
}

std::uint64_t admissible_cells(std::size_t n_sub, std::size_t ez) noexcept {
  if (n_sub < ez + 2) return 0;
  // Lengths run from n_sub-ez-1 down to 1.
  const std::uint64_t longest = n_sub - ez - 1;
  return longest * (longest + 1) / 2;
}

WorkPlan plan(std::size_t n_sub, std::size_t ez, std::size_t workers,
              std::size_t segment_len, std::uint64_t order_seed) {
  if (n_sub < ez + 2) {
    throw ConfigError("n_sub=" + std::to_string(n_sub) + " with ez=" +
                      std::to_string(ez) + " has no admissible diagonal");
  }
  if (workers == 0) throw ConfigError("workers must be >= 1");
  if (segment_len == 0) throw ConfigError("segment length must be >= 1");

  WorkPlan wp;
  wp.assignments.resize(workers);
  wp.cells_per_worker.assign(workers, 0);
  wp.total_cells = admissible_cells(n_sub, ez);
  wp.order_seed = order_seed;
  wp.n_sub = n_sub;
  wp.exclusion = ez;
  wp.segment_len = segment_len;

  // LPT: diagonal lengths fall as d grows, so ascending d is longest-first.
  using Load = std::pair<std::uint64_t, std::size_t>;
  std::priority_queue<Load, std::vector<Load>, std::greater<>> bins;
  for (std::size_t w = 0; w < workers; ++w) bins.emplace(0, w);

  std::vector<std::vector<std::size_t>> diagonals(workers);
  for (std::size_t d = ez + 1; d < n_sub; ++d) {
    auto [load, w] = bins.top();
    bins.pop();
    const std::uint64_t len = diagonal_length(n_sub, d);
    diagonals[w].push_back(d);
    wp.cells_per_worker[w] = load + len;
    bins.emplace(load + len, w);
  }

  for (std::size_t w = 0; w < workers; ++w) {
    auto& segs = wp.assignments[w];
    for (std::size_t d : diagonals[w]) {
      const std::size_t len = diagonal_length(n_sub, d);
      for (std::size_t start = 0; start < len; start += segment_len) {
        segs.push_back({d, start, std::min(segment_len, len - start)});
      }
    }
    shuffle_segments(segs, order_seed, w);
  }
  return wp;
}

std::uint64_t cells_in_prefix(const WorkPlan& plan, std::size_t worker,
                              std::uint64_t units) {
  const auto& segs = plan.assignments.at(worker);
  const auto end = std::min<std::uint64_t>(units, segs.size());
  std::uint64_t cells = 0;
  for (std::uint64_t s = 0; s < end; ++s) cells += segs[s].length;
  return cells;
}

double coverage_fraction(const WorkPlan& plan,
                         std::span<const std::uint64_t> units_done) {
  if (plan.total_cells == 0) return 0.0;
  std::uint64_t done = 0;
  const std::size_t w_end = std::min(units_done.size(), plan.workers());
  for (std::size_t w = 0; w < w_end; ++w) {
    done += cells_in_prefix(plan, w, units_done[w]);
  }
  return static_cast<double>(done) / static_cast<double>(plan.total_cells);
}

void write_plan_dump(const WorkPlan& plan, std::ostream& out) {
  for (std::size_t w = 0; w < plan.workers(); ++w) {
    for (const auto& s : plan.assignments[w]) {
      out << w << ' ' << s.diagonal << ' ' << s.start_row << ' ' << s.length
          << '\n';
    }
  }
}

}  // namespace mprofile

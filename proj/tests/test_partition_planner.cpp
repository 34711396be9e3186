#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "mprofile/error.hpp"
#include "mprofile/partition_planner.hpp"
#include "oracle/plan_check.hpp"

using namespace mprofile;

namespace {

std::set<std::size_t> diagonals_of(const WorkPlan& p, std::size_t w) {
  std::set<std::size_t> out;
  for (const auto& s : p.assignments[w]) out.insert(s.diagonal);
  return out;
}

// Plain LPT by linear scan: the lightest worker takes the next diagonal,
// lowest worker index on ties.
std::vector<std::set<std::size_t>> naive_lpt(std::size_t n_sub, std::size_t ez,
                                             std::size_t workers) {
  std::vector<std::set<std::size_t>> out(workers);
  std::vector<std::uint64_t> load(workers, 0);
  for (std::size_t d = ez + 1; d < n_sub; ++d) {
    const auto w = static_cast<std::size_t>(
        std::min_element(load.begin(), load.end()) - load.begin());
    out[w].insert(d);
    load[w] += n_sub - d;
  }
  return out;
}

}  // namespace

TEST(Plan, TwoWorkersSplitTenRowsEvenly) {
  const auto p = plan(10, 1, 2, 4096, 0);
  EXPECT_EQ(p.total_cells, 36u);
  EXPECT_EQ(p.cells_per_worker, (std::vector<std::uint64_t>{18, 18}));
  EXPECT_EQ(diagonals_of(p, 0), (std::set<std::size_t>{2, 5, 6, 9}));
  EXPECT_EQ(diagonals_of(p, 1), (std::set<std::size_t>{3, 4, 7, 8}));
}

TEST(Plan, SingleWorkerGetsEverything) {
  const auto p = plan(50, 3, 1, 7, 9);
  ASSERT_EQ(p.workers(), 1u);
  EXPECT_EQ(p.cells_per_worker[0], p.total_cells);
  EXPECT_EQ(oracle::check_cover(p), "");
}

TEST(Plan, SurplusWorkersStayEmpty) {
  const auto p = plan(5, 1, 8, 4096, 0);
  EXPECT_EQ(p.workers(), 8u);
  EXPECT_EQ(p.empty_workers(), 5u);
  EXPECT_EQ(p.total_cells, 3u + 2u + 1u);
  EXPECT_EQ(oracle::check_cover(p), "");
}

TEST(Plan, AdmissibleCellCount) {
  EXPECT_EQ(admissible_cells(10, 1), 36u);
  EXPECT_EQ(admissible_cells(3, 1), 1u);
  EXPECT_EQ(admissible_cells(2, 1), 0u);
}

TEST(Plan, RejectsBadArguments) {
  EXPECT_THROW(plan(3, 2, 1, 8, 0), ConfigError);
  EXPECT_THROW(plan(10, 1, 0, 8, 0), ConfigError);
  EXPECT_THROW(plan(10, 1, 2, 0, 0), ConfigError);
  EXPECT_NO_THROW(plan(3, 1, 1, 8, 0));
}

TEST(Plan, MatchesNaiveLpt) {
  for (std::size_t n_sub : {12u, 57u, 200u}) {
    for (std::size_t workers : {1u, 3u, 5u, 16u}) {
      const auto p = plan(n_sub, 2, workers, 9, 4);
      const auto want = naive_lpt(n_sub, 2, workers);
      for (std::size_t w = 0; w < workers; ++w) {
        EXPECT_EQ(diagonals_of(p, w), want[w]) << n_sub << " " << workers;
      }
    }
  }
}

TEST(Plan, DisjointCoverAndBalance) {
  for (std::size_t n_sub : {3u, 17u, 64u, 129u, 300u}) {
    for (std::size_t ez : {1u, 4u, 16u}) {
      if (n_sub < ez + 2) continue;
      for (std::size_t workers = 1; workers <= 16; workers += 3) {
        for (std::size_t seg : {1u, 5u, 4096u}) {
          const auto p = plan(n_sub, ez, workers, seg, n_sub * 31 + workers);
          ASSERT_EQ(oracle::check_cover(p), "")
              << n_sub << " " << ez << " " << workers << " " << seg;
          ASSERT_LE(oracle::load_spread(p), n_sub - 1 - ez);
        }
      }
    }
  }
}

TEST(Plan, SegmentsRespectLength) {
  const auto p = plan(100, 2, 3, 8, 1);
  for (const auto& list : p.assignments) {
    for (const auto& s : list) {
      EXPECT_LE(s.length, 8u);
      // Cuts fall on multiples of the segment length.
      EXPECT_EQ(s.start_row % 8, 0u);
    }
  }
}

TEST(Plan, Deterministic) {
  EXPECT_EQ(plan(300, 16, 4, 13, 77), plan(300, 16, 4, 13, 77));
  EXPECT_NE(plan(300, 16, 4, 13, 77).assignments,
            plan(300, 16, 4, 13, 78).assignments);
}

TEST(Plan, SeedOnlyReordersSegments) {
  auto a = plan(120, 3, 3, 6, 1);
  auto b = plan(120, 3, 3, 6, 2);
  const auto key = [](const DiagonalSegment& s) {
    return std::pair(s.diagonal, s.start_row);
  };
  for (std::size_t w = 0; w < 3; ++w) {
    auto& x = a.assignments[w];
    auto& y = b.assignments[w];
    std::sort(x.begin(), x.end(), [&](auto& l, auto& r) { return key(l) < key(r); });
    std::sort(y.begin(), y.end(), [&](auto& l, auto& r) { return key(l) < key(r); });
    EXPECT_EQ(x, y);
  }
}

TEST(Plan, QuarterPrefixTouchesMostRows) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (std::size_t workers : {1u, 4u, 8u}) {
      const auto p = plan(256, 16, workers, 32, seed);
      EXPECT_GE(oracle::quarter_prefix_row_coverage(p), 0.5) << seed;
    }
  }
}

TEST(Plan, PrefixSamplesNearAndFarDiagonals) {
  // Without the shuffle the first quarter of a worker's list would hold
  // only its shortest-lag diagonals.
  const std::size_t n_sub = 1000;
  const auto p = plan(n_sub, 10, 2, 50, 3);
  for (const auto& list : p.assignments) {
    std::size_t near = 0;
    std::size_t far = 0;
    for (std::size_t u = 0; u < list.size() / 4; ++u) {
      (list[u].diagonal < n_sub / 2 ? near : far)++;
    }
    EXPECT_GT(near, 0u);
    EXPECT_GT(far, 0u);
  }
}

TEST(Coverage, EmptyAndComplete) {
  const auto p = plan(10, 1, 2, 4096, 0);
  const std::vector<std::uint64_t> none{0, 0};
  EXPECT_EQ(coverage_fraction(p, none), 0.0);
  const std::vector<std::uint64_t> all{p.assignments[0].size(),
                                       p.assignments[1].size()};
  EXPECT_EQ(coverage_fraction(p, all), 1.0);
}

TEST(Coverage, LongestDiagonalAloneIsEightOfThirtySix) {
  // Find an ordering where worker 0 starts with its 8-cell diagonal.
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto p = plan(10, 1, 2, 4096, seed);
    if (p.assignments[0].front().length != 8) continue;
    const std::vector<std::uint64_t> done{1, 0};
    EXPECT_DOUBLE_EQ(coverage_fraction(p, done), 8.0 / 36.0);
    return;
  }
  FAIL() << "no seed put the longest diagonal first";
}

TEST(Coverage, MonotoneInUnitsDone) {
  const auto p = plan(80, 2, 3, 5, 11);
  double last = 0.0;
  std::vector<std::uint64_t> done(3, 0);
  for (bool progressed = true; progressed;) {
    progressed = false;
    for (std::size_t w = 0; w < 3; ++w) {
      if (done[w] < p.assignments[w].size()) {
        ++done[w];
        progressed = true;
        const double f = coverage_fraction(p, done);
        ASSERT_GT(f, last);
        last = f;
      }
    }
  }
  EXPECT_EQ(last, 1.0);
}

TEST(PlanDump, GoldenText) {
  std::ostringstream out;
  write_plan_dump(plan(7, 2, 2, 2, 5), out);
  // Diagonals 3..6 have lengths 4,3,2,1: w0 gets 3 and 6, w1 gets 4 and 5.
  EXPECT_EQ(out.str(),
            "0 3 0 2\n"
            "0 6 0 1\n"
            "0 3 2 2\n"
            "1 5 0 2\n"
            "1 4 0 2\n"
            "1 4 2 1\n");
}

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>

#include "json.hpp"
#include "mprofile/anytime_runtime.hpp"
#include "mprofile/profile_analytics.hpp"
#include "oracle/brute_force.hpp"
#include "oracle/patterns.hpp"
#include "test_support.hpp"

using namespace mprofile;
using testing_support::series;

namespace {

MatrixProfile small_profile() {
  MatrixProfile mp;
  mp.dist = {0.5, 3.0, 0.5, 2.0};
  mp.nn = {2, 3, 0, 1};
  mp.window = 4;
  return mp;
}

MatrixProfile exact_profile(std::span<const double> v, std::size_t m,
                            std::size_t ez) {
  RunConfig c;
  c.m = m;
  c.ez = ez;
  c.workers = 2;
  c.segment_len = 16;
  return run(series(std::vector<double>(v.begin(), v.end())), c).profile;
}

void expect_non_overlapping(const PatternSet& set) {
  for (std::size_t a = 0; a < set.entries.size(); ++a) {
    for (std::size_t b = a + 1; b < set.entries.size(); ++b) {
      const auto x = set.entries[a].index;
      const auto y = set.entries[b].index;
      EXPECT_GT(x > y ? x - y : y - x, set.exclusion);
    }
  }
}

}  // namespace

TEST(TopMotifs, LowestEntryWithIndexTieBreak) {
  const auto set = top_motifs(small_profile(), 1, 0);
  ASSERT_EQ(set.entries.size(), 1u);
  EXPECT_EQ(set.entries[0], (PatternEntry{0, 2, 0.5}));
  EXPECT_EQ(set.kind, PatternKind::kMotif);
  EXPECT_FALSE(set.no_finite_entries);
}

TEST(TopMotifs, PartnerIsExcluded) {
  const auto set = top_motifs(small_profile(), 4, 0);
  ASSERT_EQ(set.entries.size(), 2u);
  EXPECT_EQ(set.entries[1], (PatternEntry{3, 1, 2.0}));
}

TEST(TopMotifs, ExhaustionReturnsFewerThanK) {
  const auto set = top_motifs(small_profile(), 10, 1);
  EXPECT_EQ(set.k, 10u);
  EXPECT_LT(set.entries.size(), 10u);
  EXPECT_FALSE(set.entries.empty());
}

TEST(TopMotifs, AllSentinelProfile) {
  MatrixProfile mp;
  mp.dist.assign(5, kNoDistance);
  mp.nn.assign(5, kNoNeighbor);
  const auto set = top_motifs(mp, 3, 1);
  EXPECT_TRUE(set.entries.empty());
  EXPECT_TRUE(set.no_finite_entries);
  EXPECT_TRUE(top_discords(mp, 3, 1).no_finite_entries);
}

TEST(TopDiscords, Largest) {
  const auto set = top_discords(small_profile(), 1, 0);
  ASSERT_EQ(set.entries.size(), 1u);
  EXPECT_EQ(set.entries[0].index, 1u);
  EXPECT_EQ(set.entries[0].distance, 3.0);
  EXPECT_FALSE(set.entries[0].nn_index.has_value());
}

TEST(TopDiscords, TwoLargest) {
  const auto set = top_discords(small_profile(), 2, 0);
  ASSERT_EQ(set.entries.size(), 2u);
  EXPECT_EQ(set.entries[0].index, 1u);
  EXPECT_EQ(set.entries[1].index, 3u);
  EXPECT_EQ(set.entries[1].distance, 2.0);
}

TEST(TopDiscords, SentinelsAreSkipped) {
  auto mp = small_profile();
  mp.dist[1] = kNoDistance;
  mp.nn[1] = kNoNeighbor;
  const auto set = top_discords(mp, 1, 0);
  EXPECT_EQ(set.entries[0].index, 3u);
}

TEST(Patterns, PlantedMotifIsFound) {
  const std::size_t m = 32;
  const auto v = oracle::planted_motif_series(100, 350, m);
  const auto mp = exact_profile(v, m, 8);
  const auto set = top_motifs(mp, 1, 8);
  ASSERT_EQ(set.entries.size(), 1u);
  EXPECT_EQ(set.entries[0].index, 100u);
  EXPECT_EQ(set.entries[0].nn_index, 350u);
  // Recurrence drift in qt is magnified by the square root near zero.
  EXPECT_LT(set.entries[0].distance, 1e-6);
  const auto ref = oracle::to_matrix_profile(oracle::profile(v, m, 8), m, 8);
  const auto want = top_motifs(ref, 1, 8);
  EXPECT_EQ(want.entries[0].index, 100u);
}

TEST(Patterns, PlantedSpikeIsTopDiscord) {
  // The reported window must overlap the 8-sample spike.
  const std::size_t m = 32;
  const std::size_t at = 300;
  for (std::uint64_t seed : {1u, 4u, 9u}) {
    const auto v = oracle::planted_spike_series(seed, at);
    const auto set = top_discords(exact_profile(v, m, 8), 1, 8);
    const auto idx = set.entries.at(0).index;
    EXPECT_TRUE(oracle::window_covers_spike(idx, m, at)) << seed << " " << idx;
    const auto ref = oracle::to_matrix_profile(oracle::profile(v, m, 8), m, 8);
    const auto want = top_discords(ref, 1, 8);
    EXPECT_EQ(idx, want.entries[0].index) << seed;
  }
}

TEST(Patterns, MatchesNaiveGreedyOnExactProfiles) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::size_t n = 40 + 8 * seed;
    const std::size_t m = seed % 2 ? 4 : 8;
    const std::size_t ez = default_exclusion(m);
    const auto v = testing_support::uniform_noise(n, seed);
    const auto got = exact_profile(v, m, ez);
    const auto ref =
        oracle::to_matrix_profile(oracle::profile(v, m, ez), m, ez);

    const auto motifs = top_motifs(got, 4, ez);
    const auto want_m = oracle::naive_greedy(ref, 4, ez, true);
    ASSERT_EQ(motifs.entries.size(), want_m.size()) << seed;
    for (std::size_t r = 0; r < want_m.size(); ++r) {
      // A mutual pair has two equal entries; compare the pair unordered.
      const auto& e = motifs.entries[r];
      const std::set<std::uint64_t> pair{e.index, *e.nn_index};
      const std::set<std::uint64_t> want_pair{want_m[r], ref.nn[want_m[r]]};
      EXPECT_EQ(pair, want_pair) << seed << " rank " << r;
      EXPECT_NEAR(e.distance, ref.dist[want_m[r]], 1e-8);
    }

    const auto discords = top_discords(got, 4, ez);
    const auto want_d = oracle::naive_greedy(ref, 4, ez, false);
    ASSERT_EQ(discords.entries.size(), want_d.size()) << seed;
    for (std::size_t r = 0; r < want_d.size(); ++r) {
      EXPECT_EQ(discords.entries[r].index, want_d[r]) << seed << " rank " << r;
      EXPECT_NEAR(discords.entries[r].distance, ref.dist[want_d[r]], 1e-8);
    }
  }
}

TEST(Patterns, OrderedAndNonOverlapping) {
  const auto v = testing_support::random_walk(600, 31);
  for (std::size_t ez : {0u, 4u, 20u}) {
    const auto mp = exact_profile(v, 16, 4);
    const auto motifs = top_motifs(mp, 10, ez);
    const auto discords = top_discords(mp, 10, ez);
    expect_non_overlapping(motifs);
    expect_non_overlapping(discords);
    for (std::size_t r = 1; r < motifs.entries.size(); ++r) {
      EXPECT_LE(motifs.entries[r - 1].distance, motifs.entries[r].distance);
    }
    for (std::size_t r = 1; r < discords.entries.size(); ++r) {
      EXPECT_GE(discords.entries[r - 1].distance, discords.entries[r].distance);
    }
  }
}

TEST(Patterns, PartialSnapshotBoundsExactDiscords) {
  const auto v = testing_support::random_walk(800, 41);
  RunConfig c;
  c.m = 16;
  c.ez = 4;
  c.workers = 2;
  c.segment_len = 32;
  c.snapshot_interval = 4;
  const auto ts = series(v);
  const auto exact = run(ts, c).profile;
  std::atomic<bool> cancel{false};
  RunOptions opt;
  opt.cancel = &cancel;
  opt.on_snapshot = [&](const Snapshot& s) {
    if (s.fraction_done > 0.3) cancel = true;
  };
  const auto partial = run(ts, c, opt);
  ASSERT_FALSE(partial.exact);
  for (const auto& e : top_discords(exact, 5, 4).entries) {
    EXPECT_LE(e.distance, partial.profile.dist[e.index]);
  }
  for (const auto& e : top_discords(partial.profile, 5, 4).entries) {
    EXPECT_GE(e.distance, exact.dist[e.index]);
  }
}

TEST(JsonReport, FieldsAndOrder) {
  const auto text = to_json_report(top_motifs(small_profile(), 2, 0), 4);
  const auto doc = nlohmann::ordered_json::parse(text);
  ASSERT_TRUE(doc.is_array());
  ASSERT_EQ(doc.size(), 2u);
  std::vector<std::string> keys;
  for (const auto& [key, _] : doc[0].items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"kind", "rank", "index",
                                            "nn_index", "distance", "window"}));
  EXPECT_EQ(doc[0]["kind"], "motif");
  EXPECT_EQ(doc[0]["rank"], 1);
  EXPECT_EQ(doc[0]["index"], 0);
  EXPECT_EQ(doc[0]["nn_index"], 2);
  EXPECT_EQ(doc[0]["distance"], 0.5);
  EXPECT_EQ(doc[0]["window"], 4);
  EXPECT_EQ(doc[1]["rank"], 2);
}

TEST(JsonReport, DiscordsHaveNullNeighbor) {
  const auto doc = nlohmann::json::parse(
      to_json_report(top_discords(small_profile(), 1, 0), 4));
  EXPECT_EQ(doc[0]["kind"], "discord");
  EXPECT_TRUE(doc[0]["nn_index"].is_null());
  EXPECT_EQ(doc[0]["distance"], 3.0);
}

TEST(JsonReport, EmptySetIsEmptyArray) {
  MatrixProfile mp;
  mp.dist.assign(3, kNoDistance);
  mp.nn.assign(3, kNoNeighbor);
  EXPECT_EQ(to_json_report(top_motifs(mp, 2, 0), 4), "[]");
}

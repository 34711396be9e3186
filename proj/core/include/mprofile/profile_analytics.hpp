#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mprofile/types.hpp"

namespace mprofile {

struct PatternEntry {
  std::size_t index = 0;
  std::optional<std::uint64_t> nn_index;  // motifs only
  double distance = 0.0;

  friend bool operator==(const PatternEntry&, const PatternEntry&) = default;
};

enum class PatternKind { kMotif, kDiscord };

/// Top-k motifs (ascending distance) or discords (descending distance).
/// No two reported indices lie within `exclusion` of each other.
struct PatternSet {
  PatternKind kind = PatternKind::kMotif;
  std::vector<PatternEntry> entries;
  std::size_t k = 0;
  std::size_t exclusion = 0;
  /// Set when the profile held no finite entry at all.
  bool no_finite_entries = false;
};

using MotifSet = PatternSet;
using DiscordSet = PatternSet;

MotifSet top_motifs(const MatrixProfile& mp, std::size_t k, std::size_t ez);
DiscordSet top_discords(const MatrixProfile& mp, std::size_t k,
                        std::size_t ez);

/// JSON array of {kind, rank, index, nn_index, distance, window}.
std::string to_json_report(const PatternSet& set, std::size_t window);

}  // namespace mprofile

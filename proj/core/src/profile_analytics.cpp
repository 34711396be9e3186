#include "mprofile/profile_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace mprofile {
namespace {

std::vector<std::size_t> finite_indices(const MatrixProfile& mp) {
  std::vector<std::size_t> idx;
  idx.reserve(mp.size());
  for (std::size_t i = 0; i < mp.size(); ++i) {
    if (std::isfinite(mp.dist[i])) idx.push_back(i);
  }
  return idx;
}

void mask_around(std::vector<bool>& mask, std::uint64_t center,
                 std::size_t ez) {
  if (center >= mask.size()) return;
  const std::size_t lo = center > ez ? center - ez : 0;
  const std::size_t hi = std::min<std::size_t>(mask.size() - 1, center + ez);
  for (std::size_t i = lo; i <= hi; ++i) mask[i] = true;
}

template <class Better>
PatternSet select(const MatrixProfile& mp, std::size_t k, std::size_t ez,
                  PatternKind kind, Better better) {
  PatternSet out;
  out.kind = kind;
  out.k = k;
  out.exclusion = ez;

  auto order = finite_indices(mp);
  if (order.empty()) {
    out.no_finite_entries = true;
    return out;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return better(mp.dist[a], mp.dist[b]);
                   });

  std::vector<bool> excluded(mp.size(), false);
  for (std::size_t i : order) {
    if (out.entries.size() == k) break;
    if (excluded[i]) continue;
    PatternEntry e;
    e.index = i;
    e.distance = mp.dist[i];
    mask_around(excluded, i, ez);
    if (kind == PatternKind::kMotif) {
      e.nn_index = mp.nn[i];
      mask_around(excluded, mp.nn[i], ez);
    }
    out.entries.push_back(e);
  }
  return out;
}

}  // namespace

MotifSet top_motifs(const MatrixProfile& mp, std::size_t k, std::size_t ez) {
  return select(mp, k, ez, PatternKind::kMotif, std::less<double>{});
}

DiscordSet top_discords(const MatrixProfile& mp, std::size_t k,
                        std::size_t ez) {
  return select(mp, k, ez, PatternKind::kDiscord, std::greater<double>{});
}

std::string to_json_report(const PatternSet& set, std::size_t window) {
  nlohmann::ordered_json report = nlohmann::ordered_json::array();
  const char* kind = set.kind == PatternKind::kMotif ? "motif" : "discord";
  for (std::size_t r = 0; r < set.entries.size(); ++r) {
    const auto& e = set.entries[r];
    nlohmann::ordered_json row;
    row["kind"] = kind;
    row["rank"] = r + 1;
    row["index"] = e.index;
    if (e.nn_index) {
      row["nn_index"] = *e.nn_index;
    } else {
      row["nn_index"] = nullptr;
    }
    row["distance"] = e.distance;
    row["window"] = window;
    report.push_back(std::move(row));
  }
  return report.dump(2);
}

}  // namespace mprofile

#include "mprofile/cost_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "file_util.hpp"
#include "mprofile/error.hpp"
#include "mprofile/partition_planner.hpp"
#include "mprofile/types.hpp"

namespace mprofile {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void require_positive(const std::string& platform, const char* field,
                      double v) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw ConfigError("platform '" + platform + "': " + field +
                      " must be finite and > 0");
  }
}

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

}  // namespace

void PlatformModel::validate() const {
  if (name.empty()) throw ConfigError("platform without a name");
  require_positive(name, "peak_flops", peak_flops);
  require_positive(name, "mem_bw", mem_bw);
  require_positive(name, "static_power", static_power);
  require_positive(name, "e_op", e_op);
  require_positive(name, "e_byte", e_byte);
}

WorkloadModel WorkloadModel::for_series(std::size_t n, std::size_t m) {
  RunConfig cfg;
  cfg.m = m;
  cfg.ez = default_exclusion(m);
  cfg.validate(n);
  WorkloadModel w;
  w.total_cells =
      static_cast<double>(admissible_cells(n - m + 1, cfg.ez));
  return w;
}

const char* to_string(Bound b) noexcept {
  return b == Bound::kMemory ? "memory" : "compute";
}

RuntimeEstimate estimate_runtime(const PlatformModel& p,
                                 const WorkloadModel& w) {
  RuntimeEstimate r;
  r.compute_seconds = w.total_flops() / p.peak_flops;
  r.memory_seconds = w.total_bytes() / p.mem_bw;
  r.bound = r.memory_seconds >= r.compute_seconds ? Bound::kMemory
                                                  : Bound::kCompute;
  r.seconds = std::max(r.compute_seconds, r.memory_seconds);
  return r;
}

double estimate_energy(const PlatformModel& p, const WorkloadModel& w,
                       double runtime) {
  return p.static_power * runtime + p.e_op * w.total_flops() +
         p.e_byte * w.total_bytes();
}

Comparison compare(const PlatformModel& a, const PlatformModel& b,
                   const WorkloadModel& w) {
  const double ta = estimate_runtime(a, w).seconds;
  const double tb = estimate_runtime(b, w).seconds;
  return {ta / tb, estimate_energy(a, w, ta) / estimate_energy(b, w, tb)};
}

std::vector<PlatformModel> parse_platforms(const std::string& text) {
  std::vector<PlatformModel> out;
  std::istringstream in(text);
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ParseError("line " + std::to_string(line) + ": expected key=value",
                       line);
    }
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key == "name") {
      out.emplace_back().name = value;
      continue;
    }
    if (out.empty()) {
      throw ParseError("line " + std::to_string(line) + ": '" + key +
                           "' before any name= line",
                       line);
    }
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ParseError("line " + std::to_string(line) + ": bad number '" +
                           value + "'",
                       line);
    }
    PlatformModel& p = out.back();
    if (key == "peak_flops") {
      p.peak_flops = v;
    } else if (key == "mem_bw") {
      p.mem_bw = v;
    } else if (key == "static_power") {
      p.static_power = v;
    } else if (key == "e_op") {
      p.e_op = v;
    } else if (key == "e_byte") {
      p.e_byte = v;
    } else {
      throw ParseError("line " + std::to_string(line) + ": unknown key '" +
                           key + "'",
                       line);
    }
  }
  for (const auto& p : out) p.validate();
  return out;
}

std::vector<PlatformModel> load_platforms(const std::filesystem::path& path) {
  return parse_platforms(detail::read_file(path));
}

void write_comparison_table(const std::vector<PlatformModel>& platforms,
                            const WorkloadModel& w, bool csv,
                            std::ostream& out) {
  static constexpr const char* kHeader[] = {
      "platform", "runtime_s", "bound",  "energy_j",
      "speedup",  "energy_ratio"};
  std::vector<std::vector<std::string>> rows;
  if (platforms.empty()) return;
  const PlatformModel& base = platforms.front();
  for (const auto& p : platforms) {
    const auto rt = estimate_runtime(p, w);
    const auto cmp = compare(base, p, w);
    rows.push_back({p.name, fmt(rt.seconds), to_string(rt.bound),
                    fmt(estimate_energy(p, w, rt.seconds)), fmt(cmp.speedup, 4),
                    fmt(cmp.energy_ratio, 4)});
  }

  if (csv) {
    for (std::size_t c = 0; c < std::size(kHeader); ++c) {
      out << (c ? "," : "") << kHeader[c];
    }
    out << '\n';
    for (const auto& r : rows) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
      out << '\n';
    }
    return;
  }

  std::vector<std::size_t> width(std::size(kHeader));
  for (std::size_t c = 0; c < width.size(); ++c) {
    width[c] = std::string_view(kHeader[c]).size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto emit = [&](auto cell) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c]))
          << cell(c);
    }
    out << '\n';
  };
  emit([&](std::size_t c) { return std::string(kHeader[c]); });
  for (const auto& r : rows) emit([&](std::size_t c) { return r[c]; });
  out << "# workload: cells=" << fmt(w.total_cells, 12)
      << " ops/cell=" << fmt(w.flops_per_cell)
      << " bytes/cell=" << fmt(w.bytes_per_cell)
      << "; ratios are relative to " << base.name << '\n';
}

}  // namespace mprofile

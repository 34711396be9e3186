#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace mprofile {

/// Roofline and energy parameters of one platform.
struct PlatformModel {
  std::string name;
  double peak_flops = 0.0;    // ops / s
  double mem_bw = 0.0;        // bytes / s
  double static_power = 0.0;  // W
  double e_op = 0.0;          // J / op
  double e_byte = 0.0;        // J / byte

  /// Throws ConfigError unless every numeric field is finite and > 0.
  void validate() const;
};

/// Streaming model of the profile kernel: per cell, 4 ops for the dot
/// product update, 3 for the correlation, 2 for the distance and 1 for the
/// min-update; two fresh 8-byte samples are read.
inline constexpr double kDefaultFlopsPerCell = 10.0;
inline constexpr double kDefaultBytesPerCell = 16.0;

struct WorkloadModel {
  double total_cells = 0.0;
  double flops_per_cell = kDefaultFlopsPerCell;
  double bytes_per_cell = kDefaultBytesPerCell;

  double total_flops() const noexcept { return total_cells * flops_per_cell; }
  double total_bytes() const noexcept { return total_cells * bytes_per_cell; }
  double operational_intensity() const noexcept {
    return flops_per_cell / bytes_per_cell;
  }

  /// Cells of a full profile of a length-n series with window m and the
  /// default exclusion zone. Throws ConfigError on an invalid (n, m).
  static WorkloadModel for_series(std::size_t n, std::size_t m);
};

enum class Bound { kCompute, kMemory };

const char* to_string(Bound b) noexcept;

struct RuntimeEstimate {
  double seconds = 0.0;
  double compute_seconds = 0.0;
  double memory_seconds = 0.0;
  Bound bound = Bound::kMemory;
};

/// max(compute time, memory time); memory-bound when memory time >= compute
/// time.
RuntimeEstimate estimate_runtime(const PlatformModel& p,
                                 const WorkloadModel& w);

/// static_power * runtime + e_op * flops + e_byte * bytes.
double estimate_energy(const PlatformModel& p, const WorkloadModel& w,
                       double runtime);

struct Comparison {
  double speedup = 1.0;       // t_a / t_b
  double energy_ratio = 1.0;  // E_a / E_b
};

/// Ratios > 1 mean `b` is the better platform.
Comparison compare(const PlatformModel& a, const PlatformModel& b,
                   const WorkloadModel& w);

/// Reads blocks of key=value lines. A `name=` line starts a new platform;
/// '#' starts a comment. Throws ParseError / ConfigError / IoError.
std::vector<PlatformModel> load_platforms(const std::filesystem::path& path);
std::vector<PlatformModel> parse_platforms(const std::string& text);

/// Reference comparison figures the shipped platform fixtures are tuned to
/// reproduce. Area ratios are report-only; nothing models area.
namespace reported {
inline constexpr double kSpeedupVsMulticoreAvg = 9.9;
inline constexpr double kSpeedupVsMulticoreMax = 14.2;
inline constexpr double kEnergyRatioVsMulticoreAvg = 19.4;
inline constexpr double kEnergyRatioVsMulticoreMax = 27.2;
inline constexpr double kSpeedupVsGeneralNdp = 6.3;
inline constexpr double kEnergyRatioVsGeneralNdp = 10.2;
inline constexpr double kEnergyRatioVsManycore = 11.0;
inline constexpr double kEnergyRatioVsGpu = 4.1;
inline constexpr double kAreaRatioVsManycore = 9.6;
inline constexpr double kAreaRatioVsGpu = 1.8;
}  // namespace reported

/// Comparison table of every platform against the first one.
/// `csv` selects CSV output, otherwise aligned text.
void write_comparison_table(const std::vector<PlatformModel>& platforms,
                            const WorkloadModel& w, bool csv,
                            std::ostream& out);

}  // namespace mprofile

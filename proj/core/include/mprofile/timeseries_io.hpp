#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "mprofile/types.hpp"

namespace mprofile {

/// Input layout of a series file.
///   text   - one decimal value per line
///   csv    - header row plus comma separated rows; `column` selects by
///            header name, or by 0-based position when it is all digits and
///            matches no header
///   f64le  - raw little-endian IEEE-754 doubles
struct SeriesFormat {
  enum class Kind { kText, kCsv, kF64le };
  Kind kind = Kind::kText;
  std::string column;

  /// Parses "text", "f64le" or "csv:COL". Throws ConfigError.
  static SeriesFormat parse(std::string_view spec);
};

enum class ProfileFormat { kCsv, kF64lePair };

/// Throws ConfigError for anything other than "csv" / "f64le-pair".
ProfileFormat parse_profile_format(std::string_view spec);

TimeSeries load_series(const std::filesystem::path& path,
                       const SeriesFormat& format);

/// Writes `values` as raw little-endian doubles.
void write_series_f64le(std::span<const double> values,
                        const std::filesystem::path& path);

/// csv: header `index,distance,nn_index`, distances with 17 significant
/// digits, missing neighbors written as -1.
/// f64le-pair: all distances, then all neighbor indices as u64.
void write_profile(const MatrixProfile& mp, const std::filesystem::path& path,
                   ProfileFormat format);

/// Stream flavor of the csv writer (used for stdout output).
void write_profile_csv(const MatrixProfile& mp, std::ostream& out);

/// Inverse of write_profile. window/exclusion are not stored and come back 0.
MatrixProfile read_profile(const std::filesystem::path& path,
                           ProfileFormat format);

/// `%.17g` rendering of `value`, with ".0" appended when the result would
/// otherwise read as an integer ("0.0", "0.5", "0.10000000000000001").
std::string format_distance(double value);

}  // namespace mprofile

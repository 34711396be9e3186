#include "mprofile/timeseries_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <vector>

#include "file_util.hpp"
#include "le_bytes.hpp"
#include "mprofile/error.hpp"

namespace mprofile {
namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '\n';
  };
  const auto b = std::find_if(s.begin(), s.end(), not_space);
  const auto e = std::find_if(s.rbegin(), s.rend(), not_space).base();
  return b < e ? std::string_view(&*b, static_cast<std::size_t>(e - b))
               : std::string_view{};
}

/// Splits into lines and drops blank lines at the end of the input.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = line.find(',', pos);
    fields.push_back(trim(line.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view token, double& out) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

bool parse_index(std::string_view token, std::uint64_t& out) {
  if (token.empty()) return false;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc{} && ptr == token.data() + token.size();
}

[[noreturn]] void bad_number(const std::filesystem::path& path,
                             std::size_t line, std::string_view token) {
  throw ParseError(path.string() + ":" + std::to_string(line) +
                       ": malformed number '" + std::string(token) + "'",
                   line);
}

std::vector<double> parse_text(const std::filesystem::path& path,
                               std::string_view data) {
  std::vector<double> values;
  const auto lines = split_lines(data);
  values.reserve(lines.size());
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const std::string_view token = trim(lines[l]);
    double v = 0.0;
    if (!parse_double(token, v)) bad_number(path, l + 1, token);
    values.push_back(v);
  }
  return values;
}

std::vector<double> parse_csv(const std::filesystem::path& path,
                              std::string_view data,
                              const std::string& column) {
  const auto lines = split_lines(data);
  if (lines.empty()) throw ParseError(path.string() + ": empty csv", 1);
  const auto header = split_fields(lines[0]);
  std::size_t col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == column) {
      col = c;
      break;
    }
  }
  if (col == header.size()) {
    std::uint64_t pos = 0;
    if (parse_index(column, pos) && pos < header.size()) {
      col = static_cast<std::size_t>(pos);
    } else {
      throw ParseError(path.string() + ": no csv column '" + column + "'", 1);
    }
  }
  std::vector<double> values;
  values.reserve(lines.size() - 1);
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_fields(lines[l]);
    if (col >= fields.size()) {
      throw ParseError(path.string() + ":" + std::to_string(l + 1) +
                           ": row has no column " + std::to_string(col),
                       l + 1);
    }
    double v = 0.0;
    if (!parse_double(fields[col], v)) bad_number(path, l + 1, fields[col]);
    values.push_back(v);
  }
  return values;
}

std::vector<double> parse_f64le(const std::filesystem::path& path,
                                std::string_view data) {
  if (data.size() % 8 != 0) {
    throw ParseError(path.string() + ": size " + std::to_string(data.size()) +
                         " is not a multiple of 8 bytes",
                     0);
  }
  const auto bytes = std::span(
      reinterpret_cast<const unsigned char*>(data.data()), data.size());
  std::vector<double> values(data.size() / 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = detail::get_f64(bytes.subspan(8 * i, 8));
  }
  return values;
}

}  // namespace

SeriesFormat SeriesFormat::parse(std::string_view spec) {
  if (spec == "text") return {Kind::kText, {}};
  if (spec == "f64le") return {Kind::kF64le, {}};
  if (spec.starts_with("csv:") && spec.size() > 4) {
    return {Kind::kCsv, std::string(spec.substr(4))};
  }
  throw ConfigError("unknown series format '" + std::string(spec) +
                    "' (expected text, csv:COL or f64le)");
}

ProfileFormat parse_profile_format(std::string_view spec) {
  if (spec == "csv") return ProfileFormat::kCsv;
  if (spec == "f64le-pair") return ProfileFormat::kF64lePair;
  throw ConfigError("unknown output format '" + std::string(spec) +
                    "' (expected csv or f64le-pair)");
}

TimeSeries load_series(const std::filesystem::path& path,
                       const SeriesFormat& format) {
  const std::string data = detail::read_file(path);
  std::vector<double> values;
  switch (format.kind) {
    case SeriesFormat::Kind::kText:
      values = parse_text(path, data);
      break;
    case SeriesFormat::Kind::kCsv:
      values = parse_csv(path, data, format.column);
      break;
    case SeriesFormat::Kind::kF64le:
      values = parse_f64le(path, data);
      break;
  }
  return TimeSeries::from_values(std::move(values), path.filename().string());
}

void write_series_f64le(std::span<const double> values,
                        const std::filesystem::path& path) {
  std::string out;
  out.reserve(values.size() * 8);
  for (double v : values) detail::put_f64(out, v);
  detail::write_file_atomic(path, out);
}

std::string format_distance(double value) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", value);
  std::string s(buf, static_cast<std::size_t>(len));
  if (s.find_first_of(".eEna") == std::string::npos) s += ".0";
  return s;
}

void write_profile_csv(const MatrixProfile& mp, std::ostream& out) {
  out << "index,distance,nn_index\n";
  for (std::size_t i = 0; i < mp.size(); ++i) {
    out << i << ',' << format_distance(mp.dist[i]) << ',';
    if (mp.nn[i] == kNoNeighbor) {
      out << "-1";
    } else {
      out << mp.nn[i];
    }
    out << '\n';
  }
}

void write_profile(const MatrixProfile& mp, const std::filesystem::path& path,
                   ProfileFormat format) {
  std::string data;
  if (format == ProfileFormat::kCsv) {
    std::ostringstream os;
    write_profile_csv(mp, os);
    data = std::move(os).str();
  } else {
    data.reserve(mp.size() * 16);
    for (double d : mp.dist) detail::put_f64(data, d);
    for (std::uint64_t nn : mp.nn) detail::put_u64(data, nn);
  }
  detail::write_file_atomic(path, data);
}

MatrixProfile read_profile(const std::filesystem::path& path,
                           ProfileFormat format) {
  const std::string data = detail::read_file(path);
  MatrixProfile mp;
  if (format == ProfileFormat::kF64lePair) {
    if (data.size() % 16 != 0) {
      throw ParseError(path.string() + ": size is not a multiple of 16", 0);
    }
    const std::size_t n = data.size() / 16;
    const auto bytes = std::span(
        reinterpret_cast<const unsigned char*>(data.data()), data.size());
    mp.dist.resize(n);
    mp.nn.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      mp.dist[i] = detail::get_f64(bytes.subspan(8 * i, 8));
      mp.nn[i] = detail::get_u64(bytes.subspan(8 * (n + i), 8));
    }
    return mp;
  }

  const auto lines = split_lines(data);
  if (lines.empty() || trim(lines[0]) != "index,distance,nn_index") {
    throw ParseError(path.string() + ": missing profile csv header", 1);
  }
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const auto fields = split_fields(lines[l]);
    std::uint64_t idx = 0;
    double dist = 0.0;
    if (fields.size() != 3 || !parse_index(fields[0], idx) ||
        idx != l - 1 || !parse_double(fields[1], dist)) {
      throw ParseError(path.string() + ":" + std::to_string(l + 1) +
                           ": malformed profile row",
                       l + 1);
    }
    std::uint64_t nn = kNoNeighbor;
    if (fields[2] != "-1" && !parse_index(fields[2], nn)) {
      throw ParseError(path.string() + ":" + std::to_string(l + 1) +
                           ": malformed neighbor index",
                       l + 1);
    }
    mp.dist.push_back(dist);
    mp.nn.push_back(nn);
  }
  return mp;
}

}  // namespace mprofile

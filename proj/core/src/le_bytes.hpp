#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

// Little-endian encode/decode independent of host byte order.
namespace mprofile::detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

inline void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

inline void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline std::uint32_t get_u32(std::span<const unsigned char> in) {
  std::uint32_t v = 0;
  for (int b = 3; b >= 0; --b) v = (v << 8) | in[b];
  return v;
}

inline std::uint64_t get_u64(std::span<const unsigned char> in) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | in[b];
  return v;
}

inline double get_f64(std::span<const unsigned char> in) {
  return std::bit_cast<double>(get_u64(in));
}

/// Sequential reader over a byte buffer; `ok()` turns false on overrun.
class ByteReader {
 public:
  explicit ByteReader(std::span<const unsigned char> data) : data_(data) {}

  bool ok() const noexcept { return ok_; }
  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }

  std::uint32_t u32() { return take(4) ? get_u32(data_.subspan(pos_ - 4, 4)) : 0; }
  std::uint64_t u64() { return take(8) ? get_u64(data_.subspan(pos_ - 8, 8)) : 0; }
  double f64() { return std::bit_cast<double>(u64()); }

 private:
  bool take(std::size_t n) {
    if (!ok_ || remaining() < n) {
      ok_ = false;
      return false;
    }
    pos_ += n;
    return true;
  }

  std::span<const unsigned char> data_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

}  // namespace mprofile::detail

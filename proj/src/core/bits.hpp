#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace scompress {

// Finite bitstring, most-significant bit first. Lengths are always explicit:
// size accounting |kept| + |bits| must be unambiguous.
class Bits {
 public:
  Bits() = default;

  void push(bool b) { data_.push_back(b ? 1 : 0); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool at(std::size_t i) const { return data_.at(i) != 0; }

  void append(const Bits& other) {
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
  }

  std::string to_string() const {
    std::string s;
    s.reserve(data_.size());
    for (auto b : data_) s.push_back(b ? '1' : '0');
    return s;
  }

  static Bits from_string(const std::string& s) {
    Bits b;
    for (char c : s) {
      if (c == '0')
        b.push(false);
      else if (c == '1')
        b.push(true);
      else
        fail(ErrorCode::DecodeError, "bitstring contains non-bit character");
    }
    return b;
  }

  bool operator==(const Bits& o) const { return data_ == o.data_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }

 private:
  std::vector<std::uint8_t> data_;
};

class BitWriter {
 public:
  // Fixed-width big-endian field. width == 0 writes nothing (value must be 0).
  void write_uint(std::uint64_t value, int width) {
    if (width == 0) {
      if (value != 0) fail(ErrorCode::InvalidArgument, "value too wide for field");
      return;
    }
    if (width < 64 && (value >> width) != 0)
      fail(ErrorCode::InvalidArgument, "value too wide for field");
    for (int i = width - 1; i >= 0; --i) bits_.push(((value >> i) & 1u) != 0);
  }

  // Elias gamma, x >= 1: floor(log2 x) zeros, then x in binary.
  void write_gamma(std::uint64_t x) {
    if (x == 0) fail(ErrorCode::InvalidArgument, "gamma code needs x >= 1");
    int n = 0;
    while ((x >> (n + 1)) != 0) ++n;
    for (int i = 0; i < n; ++i) bits_.push(false);
    write_uint(x, n + 1);
  }

  void write_bits(const Bits& b) { bits_.append(b); }

  const Bits& bits() const { return bits_; }

 private:
  Bits bits_;
};

class BitReader {
 public:
  explicit BitReader(const Bits& b) : bits_(b) {}

  std::uint64_t read_uint(int width) {
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v = (v << 1) | (next() ? 1u : 0u);
    return v;
  }

  std::uint64_t read_gamma() {
    int n = 0;
    while (!next()) {
      ++n;
      if (n > 63) fail(ErrorCode::DecodeError, "gamma code overflow");
    }
    std::uint64_t v = 1;
    for (int i = 0; i < n; ++i) v = (v << 1) | (next() ? 1u : 0u);
    return v;
  }

  Bits read_bits(std::size_t count) {
    Bits out;
    for (std::size_t i = 0; i < count; ++i) out.push(next());
    return out;
  }

  bool done() const { return pos_ == bits_.size(); }
  std::size_t remaining() const { return bits_.size() - pos_; }

 private:
  bool next() {
    if (pos_ >= bits_.size()) fail(ErrorCode::DecodeError, "bitstring truncated");
    return bits_.at(pos_++);
  }

  const Bits& bits_;
  std::size_t pos_ = 0;
};

}  // namespace scompress

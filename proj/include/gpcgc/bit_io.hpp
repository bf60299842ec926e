#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpcgc/errors.hpp"

namespace gpcgc {

// MSB-first bit packer. Bytes are zero-padded on flush.
class BitWriter {
public:
  void put_bit(bool b) {
    cur_ = static_cast<uint8_t>((cur_ << 1) | (b ? 1 : 0));
    if (++fill_ == 8) {
      bytes_.push_back(cur_);
      cur_ = 0;
      fill_ = 0;
    }
    ++bit_count_;
  }

  // Writes the low `nbits` of value, most significant bit first.
  void put_bits(uint64_t value, int nbits) {
    for (int i = nbits - 1; i >= 0; --i) put_bit((value >> i) & 1);
  }

  uint64_t bit_count() const { return bit_count_; }

  // Pads the final partial byte with zeros and returns the buffer.
  std::vector<uint8_t> finish() {
    if (fill_ > 0) {
      bytes_.push_back(static_cast<uint8_t>(cur_ << (8 - fill_)));
      cur_ = 0;
      fill_ = 0;
    }
    return std::move(bytes_);
  }

private:
  std::vector<uint8_t> bytes_;
  uint8_t cur_ = 0;
  int fill_ = 0;
  uint64_t bit_count_ = 0;
};

// MSB-first bit reader over a byte span. Reading past the end throws a
// truncated-stream error.
class BitReader {
public:
  explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  bool get_bit() {
    if (pos_ >= bytes_.size() * 8)
      throw StreamError(StreamError::Kind::Truncated, "bit stream exhausted");
    const bool b = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1;
    ++pos_;
    return b;
  }

  uint64_t get_bits(int nbits) {
    uint64_t v = 0;
    for (int i = 0; i < nbits; ++i) v = (v << 1) | (get_bit() ? 1 : 0);
    return v;
  }

  uint64_t bits_read() const { return pos_; }
  uint64_t bits_total() const { return bytes_.size() * 8; }

private:
  std::span<const uint8_t> bytes_;
  uint64_t pos_ = 0;
};

}  // namespace gpcgc

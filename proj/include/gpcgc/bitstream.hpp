#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpcgc/gic.hpp"
#include "gpcgc/octree.hpp"
#include "gpcgc/rdo.hpp"

namespace gpcgc {

// Everything the decoder needs before the structure bits. Multi-byte fields
// are little-endian inside the MSB-first bit packing.
struct StreamHeader {
  uint8_t version = 1;
  int bit_depth = 0;
  int coarsest_side = 0;
  int max_level = 0;
  CoarseDims dims;
  uint64_t model_hash = 0;
  int thickness = 0;
  std::vector<uint32_t> codebook_sizes;  // config echo
  std::vector<double> multipliers;       // config echo, 0.01 steps
  uint64_t payload_bit_count = 0;        // exact sum of leaf payload bits

  int64_t header_bits() const;
};

// One decoded leaf: where it sits and how to rebuild its pixels.
struct LeafRecord {
  VoxelKey key;
  Axis axis = Axis::X;
  OccupancyMode mode = OccupancyMode::Full;
  bool dummy_high = false;
  bool dual = false;
  GicEncoded payload;
};

struct ParsedStream {
  StreamHeader header;
  std::vector<LeafRecord> leaves;  // canonical order
  int64_t total_bits = 0;          // header + structure + payload
};

// Serializes header, structure bits, and the leaf payloads, which must be
// listed in the tree's decision-leaf order. The model supplies each level's
// index widths. total_bits_out (optional) receives the exact pre-padding bit
// count.
std::vector<uint8_t> write_stream(const StreamHeader& header, const Octree& tree,
                                  const std::vector<const LeafEncoding*>& leaves,
                                  const GicModel& model, int64_t* total_bits_out);

// Strict parse. Verifies magic, version, model hash, config echo against the
// model, dimension consistency, payload length, and byte padding; any
// violation raises a typed stream/model error, never undefined behavior.
ParsedStream read_stream(std::span<const uint8_t> bytes, const GicModel& model);

// Exact coded length in bits (header + structure + payload), recovered from
// the frame alone: the header records the payload bit count, so no model is
// required. This is the bpp numerator.
int64_t stream_bit_count(std::span<const uint8_t> bytes);

}  // namespace gpcgc

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gpcgc/bitstream.hpp"
#include "gpcgc/gic.hpp"
#include "gpcgc/point_cloud.hpp"

namespace gpcgc {

struct EncodeStats {
  uint64_t points_in = 0;     // after voxelization to the model's depth
  int64_t total_bits = 0;     // header + structure + payload
  int64_t header_bits = 0;
  int64_t structure_bits = 0;  // coarse bitmap + flags + child masks
  int64_t payload_bits = 0;
  double bpp = 0.0;            // total_bits / points_in
  double leaf_distortion_sum = 0.0;          // sum of chosen leaves' local MSE
  std::vector<int64_t> leaves_per_level;     // indexed by tree level
};

struct EncodeResult {
  std::vector<uint8_t> bytes;
  EncodeStats stats;
};

// Full pipeline: voxelize to the model's configured depth, build the tree,
// optimize split decisions for the given lambda, and serialize. The rate
// predicted by the optimizer must equal the emitted bit count exactly; any
// disagreement is an internal error.
EncodeResult encode_cloud(const PointCloud& input, const GicModel& model, double lambda,
                          int threads = 1);

// Rebuilds the point cloud from a stream. `upto_grid_level` limits how many
// map pyramid levels are used per leaf (-1 = all), trading detail for a
// coarser progressive reconstruction.
PointCloud decode_stream(std::span<const uint8_t> bytes, const GicModel& model,
                         int threads = 1, int upto_grid_level = -1);

}  // namespace gpcgc

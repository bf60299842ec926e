#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpcgc/errors.hpp"

namespace gpcgc {

// All codec-wide knobs. Values are echoed into both the model file and the
// bitstream header so encoder and decoder can verify they agree.
struct CodecConfig {
  int bit_depth = 9;              // voxelization target (2^9 = 512 per axis)
  int coarsest_side = 32;         // voxel side at tree level 0
  int max_level = 3;              // deepest split level (side 4 at level 3)
  int thickness = 1;              // projectability band half-width
  std::vector<double> multipliers = {8.0, 4.6, 2.5, 1.0};  // rate ladder, coarsest first
  std::vector<uint32_t> codebook_sizes = {256, 256, 256, 256};  // per pyramid level
  uint64_t seed = 1;              // training RNG seed
  uint32_t train_samples = 2000;  // per-level patch cap during training
  uint32_t train_maps = 4000;     // per-entry map cap during training

  int min_side() const { return coarsest_side >> max_level; }
  // Pyramid levels needed for the largest leaf maps (4x4 floor).
  int pyramid_levels() const;
  int side_at(int level) const { return coarsest_side >> level; }
};

// Throws DomainError describing the first violated constraint.
void validate_config(const CodecConfig& cfg);

// Parse `key=value` lines ('#' comments, blank lines ignored). Unknown keys
// and malformed values are domain errors. Returns defaults overridden by the
// given text; the result is validated.
CodecConfig parse_config(const std::string& text);

// Reads the file (missing file is a domain error) and parses it.
CodecConfig load_config_file(const std::string& path);

}  // namespace gpcgc

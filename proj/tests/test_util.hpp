#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "gpcgc/config.hpp"
#include "gpcgc/gic.hpp"
#include "gpcgc/point_cloud.hpp"
#include "gpcgc/synthetic.hpp"

namespace gpcgc::testutil {

// Convenience constructor for configs used by the small fixtures. The
// returned config is valid for `validate_config`.
inline CodecConfig small_config(int bit_depth, int coarsest_side, int max_level,
                                uint32_t codebook_size, uint64_t seed = 7) {
  CodecConfig cfg;
  cfg.bit_depth = bit_depth;
  cfg.coarsest_side = coarsest_side;
  cfg.max_level = max_level;
  cfg.multipliers.clear();
  for (int l = 0; l <= max_level; ++l)
    cfg.multipliers.push_back(1.0 + 0.5 * (max_level - l));
  cfg.codebook_sizes.assign(static_cast<size_t>(cfg.pyramid_levels()), codebook_size);
  cfg.seed = seed;
  return cfg;
}

// A varied little corpus covering single- and dual-layout leaves at the
// given depth; enough content to train every entry of a small config.
inline std::vector<PointCloud> mixed_corpus(int bit_depth) {
  std::vector<PointCloud> clouds;
  clouds.push_back(synth_sphere_shell(bit_depth));
  clouds.push_back(synth_blob(bit_depth, 11));
  clouds.push_back(synth_tilted_plane(bit_depth, 0.35, -0.2, (1 << bit_depth) / 2.0));
  clouds.push_back(synth_slab(bit_depth, 0.15, 0.1, (1 << bit_depth) / 3.0, 2));
  clouds.push_back(synth_random(bit_depth, size_t{1} << (2 * bit_depth - 3), 99));
  return clouds;
}

inline GicModel small_model(int bit_depth, int coarsest_side, int max_level,
                            uint32_t codebook_size, uint64_t seed = 7) {
  return train_model(mixed_corpus(bit_depth),
                     small_config(bit_depth, coarsest_side, max_level, codebook_size, seed));
}

// Unique fresh directory under the system temp root; caller owns cleanup
// (tests leave it in place, the OS temp dir is disposable).
inline std::filesystem::path fresh_dir(const std::string& tag) {
  static std::mt19937_64 rng{std::random_device{}()};
  auto p = std::filesystem::temp_directory_path() /
           ("gpcgc_test_" + tag + "_" + std::to_string(rng()));
  std::filesystem::create_directories(p);
  return p;
}

inline double urand(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace gpcgc::testutil

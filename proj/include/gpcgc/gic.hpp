#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gpcgc/config.hpp"
#include "gpcgc/lanczos.hpp"
#include "gpcgc/point_cloud.hpp"
#include "gpcgc/saab.hpp"
#include "gpcgc/vq.hpp"

namespace gpcgc {

constexpr int kPatchSide = 4;
constexpr int kPatchDim = kPatchSide * kPatchSide;

// One pyramid level of a map coder: transform for energy compaction plus the
// codebook that quantizes the transformed patches.
struct GicLevel {
  SaabTransform transform;
  Codebook codebook;
};

// Coder for maps of one fixed shape. `side` is the leaf voxel side; a dual
// map stores near and far side by side, so its raster is side x 2*side.
// levels[0] codes 4x4 (or 4x8) content; finer levels code residuals.
struct GicEntry {
  int side = 0;
  bool dual = false;
  std::vector<GicLevel> levels;

  int rows() const { return side; }
  int cols() const { return dual ? 2 * side : side; }
  int level_count() const { return static_cast<int>(levels.size()); }
  int rows_at(int level) const { return rows() >> (level_count() - 1 - level); }
  int cols_at(int level) const { return cols() >> (level_count() - 1 - level); }
  int patches_at(int level) const {
    return (rows_at(level) / kPatchSide) * (cols_at(level) / kPatchSide);
  }
  // Exact payload bits for one map coded by this entry.
  int64_t payload_bits() const;
};

// The trained model: one entry per (leaf side, layout) shape seen in
// training, plus the configuration it was trained under.
struct GicModel {
  CodecConfig config;
  std::map<int, GicEntry> entries;   // key = entry_key(side, dual)
  uint64_t model_hash = 0;           // digest of the serialized model

  static int entry_key(int side, bool dual) { return side * 2 + (dual ? 1 : 0); }
  bool has_entry(int side, bool dual) const;
  const GicEntry& entry(int side, bool dual) const;  // ModelMismatchError if absent
  int64_t parameter_count() const;                   // kernel + codeword doubles
};

// Per-level VQ index lists, coarsest first.
struct GicEncoded {
  std::vector<std::vector<uint32_t>> level_indices;
};

// Closed-loop pyramid encode: downsample to the 4x4 floor, code coarsest
// content, then per finer level code the residual against the upsampled
// reconstruction so encoder and decoder states match exactly. When
// decoder_view is non-null it receives the encoder's final reconstruction
// after output rounding; drift-freedom means it equals gic_decode's
// full-level output pixel for pixel.
GicEncoded gic_encode(const Image& img, const GicEntry& entry,
                      Image* decoder_view = nullptr);

// Mirrors the encoder loop. `upto_level` < level_count-1 stops adding
// residuals after that pyramid level (remaining levels are plain upsamples);
// -1 means all levels. Output values are rounded half-up and clamped to
// [-1, side].
Image gic_decode(const GicEncoded& enc, const GicEntry& entry, int upto_level = -1);

// Compose a filled leaf into the coder raster (dual = [near | far]) and split
// a decoded raster back into integer near/far grids.
Image compose_map(const std::vector<int>& near, const std::vector<int>& far, int side,
                  bool dual);
void split_map(const Image& img, int side, bool dual, std::vector<int>* near,
               std::vector<int>* far);

// Harvests one codable map per octree node of each training cloud (after
// voxelization to the configured depth), then trains every populated entry
// coarse-to-fine: fit the transform on content/residual patches, train the
// codebook on their coefficients, and advance reconstructions with the
// freshly trained level. Deterministic for a fixed config.
GicModel train_model(const std::vector<PointCloud>& clouds, const CodecConfig& cfg);

// Model file bytes: "GICM", version, config echo, entries, trailing 64-bit
// digest over all prior bytes.
std::vector<uint8_t> serialize_model(const GicModel& model);
GicModel deserialize_model(std::span<const uint8_t> bytes);
void save_model_file(const GicModel& model, const std::string& path);
GicModel load_model_file(const std::string& path);

// FNV-1a 64-bit digest used for model identity.
uint64_t fnv1a64(const uint8_t* data, std::size_t n);

}  // namespace gpcgc

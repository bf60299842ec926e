#pragma once

#include <cstdint>
#include <vector>

#include "gpcgc/errors.hpp"

namespace gpcgc {

// Trained vector-quantization table. Size is a power of two so every index
// packs into exactly log2(size) bits.
struct Codebook {
  int dim = 0;
  std::vector<std::vector<double>> codewords;

  uint32_t size() const { return static_cast<uint32_t>(codewords.size()); }
  int index_bits() const;
};

// Nearest codeword by squared Euclidean distance; ties go to the smallest
// index.
uint32_t vq_encode(const Codebook& cb, const std::vector<double>& v);

// Pure table lookup; an out-of-range index is stream corruption.
const std::vector<double>& vq_decode(const Codebook& cb, uint32_t index);

// Deterministic k-means (k-means++-style seeding from the given seed, at most
// max_iters Lloyd iterations or relative inertia improvement below tol, empty
// clusters reseeded to the farthest point). When the input has at most `size`
// distinct vectors the codebook is those vectors, padded by repetition.
// Fewer vectors than codewords is a training error.
Codebook train_codebook(const std::vector<std::vector<double>>& vectors, uint32_t size,
                        uint64_t seed, int max_iters = 100, double tol = 1e-4);

}  // namespace gpcgc

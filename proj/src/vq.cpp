#include "gpcgc/vq.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>

namespace gpcgc {
namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// Uniform double in [0,1) built from the top 53 bits of the generator so the
// value stream is identical on every platform.
double u01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

int Codebook::index_bits() const {
  int bits = 0;
  while ((1u << bits) < size()) ++bits;
  return bits;
}

uint32_t vq_encode(const Codebook& cb, const std::vector<double>& v) {
  if (cb.codewords.empty()) throw DomainError("vq_encode: empty codebook");
  uint32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (uint32_t i = 0; i < cb.size(); ++i) {
    const double d = sq_dist(cb.codewords[i], v);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

const std::vector<double>& vq_decode(const Codebook& cb, uint32_t index) {
  if (index >= cb.size())
    throw StreamError(StreamError::Kind::Corrupt, "vq_decode: codeword index out of range");
  return cb.codewords[index];
}

Codebook train_codebook(const std::vector<std::vector<double>>& vectors, uint32_t size,
                        uint64_t seed, int max_iters, double tol) {
  if (vectors.empty()) throw TrainingError("train_codebook: no training vectors");
  if (size == 0 || (size & (size - 1)) != 0)
    throw TrainingError("train_codebook: codebook size must be a power of two");
  if (vectors.size() < size)
    throw TrainingError("train_codebook: fewer training vectors than codewords");
  const int dim = static_cast<int>(vectors[0].size());
  for (const auto& v : vectors)
    if (static_cast<int>(v.size()) != dim)
      throw TrainingError("train_codebook: inconsistent vector dimensions");

  const size_t n = vectors.size();

  // If there are no more distinct vectors than codewords, use them directly
  // (first-occurrence order) and pad by repeating the last one.
  {
    std::vector<std::vector<double>> distinct;
    bool few = true;
    for (const auto& v : vectors) {
      if (std::find(distinct.begin(), distinct.end(), v) == distinct.end()) {
        distinct.push_back(v);
        if (distinct.size() > size) {
          few = false;
          break;
        }
      }
    }
    if (few) {
      Codebook cb;
      cb.dim = dim;
      cb.codewords = distinct;
      while (cb.codewords.size() < size) cb.codewords.push_back(cb.codewords.back());
      return cb;
    }
  }

  std::mt19937_64 rng(seed);

  // k-means++ seeding: first center uniform, then each next center sampled
  // with probability proportional to squared distance from the nearest chosen
  // center.
  std::vector<std::vector<double>> centers;
  centers.reserve(size);
  centers.push_back(vectors[static_cast<size_t>(u01(rng) * static_cast<double>(n))]);
  std::vector<double> d2(n);
  for (uint32_t c = 1; c < size; ++c) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& ctr : centers) best = std::min(best, sq_dist(vectors[i], ctr));
      d2[i] = best;
      total += best;
    }
    size_t pick = 0;
    if (total > 0.0) {
      const double target = u01(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<size_t>(u01(rng) * static_cast<double>(n));
    }
    centers.push_back(vectors[pick]);
  }

  std::vector<uint32_t> assign(n, 0);
  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < max_iters; ++iter) {
    // Assignment step; ties go to the smallest center index.
    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
      uint32_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (uint32_t c = 0; c < size; ++c) {
        const double d = sq_dist(vectors[i], centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[i] = best;
      inertia += best_d;
    }

    // Update step.
    std::vector<std::vector<double>> sums(size, std::vector<double>(dim, 0.0));
    std::vector<size_t> counts(size, 0);
    for (size_t i = 0; i < n; ++i) {
      ++counts[assign[i]];
      for (int k = 0; k < dim; ++k) sums[assign[i]][k] += vectors[i][k];
    }
    for (uint32_t c = 0; c < size; ++c) {
      if (counts[c] == 0) {
        // Reseed an empty cluster to the point farthest from its center
        // (smallest index on ties).
        size_t far_i = 0;
        double far_d = -1.0;
        for (size_t i = 0; i < n; ++i) {
          const double d = sq_dist(vectors[i], centers[assign[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        centers[c] = vectors[far_i];
        assign[far_i] = c;
      } else {
        for (int k = 0; k < dim; ++k)
          centers[c][k] = sums[c][k] / static_cast<double>(counts[c]);
      }
    }

    if (prev_inertia != std::numeric_limits<double>::infinity()) {
      const double denom = std::max(prev_inertia, 1e-300);
      if ((prev_inertia - inertia) / denom < tol && inertia <= prev_inertia) break;
    }
    prev_inertia = inertia;
  }

  Codebook cb;
  cb.dim = dim;
  cb.codewords = std::move(centers);
  return cb;
}

}  // namespace gpcgc

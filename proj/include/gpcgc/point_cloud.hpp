#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "gpcgc/errors.hpp"

namespace gpcgc {

struct Point3 {
  int32_t x = 0;
  int32_t y = 0;
  int32_t z = 0;

  friend bool operator==(const Point3&, const Point3&) = default;
  friend auto operator<=>(const Point3& a, const Point3& b) {
    return std::tie(a.x, a.y, a.z) <=> std::tie(b.x, b.y, b.z);
  }
};

// Deduplicated set of non-negative integer voxel coordinates, stored in
// sorted order so equality is set equality. Every coordinate lies in
// [0, 2^bit_depth - 1].
class PointCloud {
public:
  PointCloud() = default;

  // Sorts, deduplicates, and derives the smallest covering bit depth (>= 1).
  static PointCloud from_points(std::vector<Point3> pts);

  // Same, but with a caller-chosen storage depth (validated).
  static PointCloud from_points(std::vector<Point3> pts, int bit_depth);

  const std::vector<Point3>& points() const { return points_; }
  int bit_depth() const { return bit_depth_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }

  friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
  std::vector<Point3> points_;
  int bit_depth_ = 1;
};

// Rescales coordinates to a target bit depth: floor-divide on downscale,
// multiply on upscale, then deduplicate.
PointCloud voxelize(const PointCloud& pc, int target_bits);

// Smallest b >= 1 with max coordinate < 2^b.
int bits_needed(const std::vector<Point3>& pts);

}  // namespace gpcgc

#include "gpcgc/point_cloud.hpp"

#include <algorithm>

namespace gpcgc {

int bits_needed(const std::vector<Point3>& pts) {
  int32_t m = 0;
  for (const auto& p : pts) m = std::max({m, p.x, p.y, p.z});
  int b = 1;
  while ((int64_t{1} << b) <= m) ++b;
  return b;
}

static void normalize(std::vector<Point3>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

PointCloud PointCloud::from_points(std::vector<Point3> pts) {
  normalize(pts);
  PointCloud pc;
  pc.bit_depth_ = bits_needed(pts);
  pc.points_ = std::move(pts);
  return pc;
}

PointCloud PointCloud::from_points(std::vector<Point3> pts, int bit_depth) {
  if (bit_depth < 1 || bit_depth > 30)
    throw DomainError("bit_depth out of range: " + std::to_string(bit_depth));
  normalize(pts);
  const int64_t limit = int64_t{1} << bit_depth;
  for (const auto& p : pts) {
    if (p.x < 0 || p.y < 0 || p.z < 0 || p.x >= limit || p.y >= limit || p.z >= limit)
      throw DomainError("coordinate outside [0, 2^bit_depth)");
  }
  PointCloud pc;
  pc.bit_depth_ = bit_depth;
  pc.points_ = std::move(pts);
  return pc;
}

PointCloud voxelize(const PointCloud& pc, int target_bits) {
  if (target_bits < 1) throw DomainError("voxelize: target_bits must be >= 1");
  const int shift = target_bits - pc.bit_depth();
  if (shift == 0) return pc;
  std::vector<Point3> pts;
  pts.reserve(pc.size());
  if (shift > 0) {
    for (const auto& p : pc.points())
      pts.push_back({p.x << shift, p.y << shift, p.z << shift});
  } else {
    for (const auto& p : pc.points())
      pts.push_back({p.x >> -shift, p.y >> -shift, p.z >> -shift});
  }
  return PointCloud::from_points(std::move(pts), target_bits);
}

}  // namespace gpcgc

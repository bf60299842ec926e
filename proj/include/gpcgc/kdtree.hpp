#pragma once

#include <cstdint>
#include <vector>

#include "gpcgc/point_cloud.hpp"

namespace gpcgc {

// Static 3-d tree over integer points, exact nearest-neighbor queries in
// int64 squared distance. Build and search orders are fixed, so results are
// reproducible across runs and thread counts.
class KdTree {
public:
  explicit KdTree(const std::vector<Point3>& pts);

  std::size_t size() const { return pts_.size(); }

  // Index of the nearest point and its squared distance. Ties resolve to the
  // point reached first by the fixed traversal.
  struct Hit {
    std::size_t index = 0;
    int64_t dist2 = 0;
  };
  Hit nearest(const Point3& q) const;

  // Indices of the k nearest points (k <= size), closest first; ties broken
  // by original index.
  std::vector<std::size_t> k_nearest(const Point3& q, std::size_t k) const;

  const Point3& point(std::size_t i) const { return pts_[i]; }

private:
  struct Node {
    int32_t left = -1;
    int32_t right = -1;
    uint32_t begin = 0;   // leaf range into order_
    uint32_t count = 0;
    int32_t split_val = 0;
    uint8_t axis = 0;
    bool leaf = false;
  };

  int32_t build(uint32_t begin, uint32_t end);
  void search(int32_t node, const Point3& q, Hit& best) const;

  std::vector<Point3> pts_;
  std::vector<uint32_t> order_;  // permutation of point indices
  std::vector<Node> nodes_;
  int32_t root_ = -1;
};

inline int64_t squared_distance(const Point3& a, const Point3& b) {
  const int64_t dx = a.x - b.x;
  const int64_t dy = a.y - b.y;
  const int64_t dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace gpcgc

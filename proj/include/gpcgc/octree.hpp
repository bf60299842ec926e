#pragma once

#include <cstdint>
#include <vector>

#include "gpcgc/bit_io.hpp"
#include "gpcgc/point_cloud.hpp"

namespace gpcgc {

// Identifies one voxel of the hierarchy: side(level) = coarsest_side >> level,
// origin components are multiples of that side.
struct VoxelKey {
  int level = 0;
  Point3 origin;

  friend bool operator==(const VoxelKey&, const VoxelKey&) = default;
};

struct CoarseDims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  int64_t total() const { return int64_t{nx} * ny * nz; }
  friend bool operator==(const CoarseDims&, const CoarseDims&) = default;
};

// Hierarchical voxel decomposition. Nodes are stored in depth-first preorder
// (roots in x-fastest raster order, children in Morton order with x as the
// least significant bit), which fixes the canonical leaf ordering used by the
// bitstream. Each node's points are a contiguous range of a reordered copy of
// the input, so a node's set is exactly the union of its children's sets.
class Octree {
public:
  struct Node {
    VoxelKey key;
    uint32_t begin = 0;
    uint32_t end = 0;
    int32_t children[8] = {-1, -1, -1, -1, -1, -1, -1, -1};
    bool split = false;  // provisional until RDO decides
  };

  const std::vector<Node>& nodes() const { return nodes_; }
  std::vector<Node>& nodes() { return nodes_; }
  const std::vector<uint32_t>& roots() const { return roots_; }
  CoarseDims dims() const { return dims_; }
  int coarsest_side() const { return coarsest_side_; }
  int max_level() const { return max_level_; }
  int bit_depth() const { return bit_depth_; }
  std::size_t point_count() const { return points_.size(); }

  int side_of(int level) const { return coarsest_side_ >> level; }

  // Node points translated into leaf-local coordinates in [0, side)^3.
  std::vector<Point3> local_points(const Node& n) const;

  // Global coordinates of a node's points.
  std::span<const Point3> global_points(const Node& n) const {
    return {points_.data() + n.begin, n.end - n.begin};
  }

  // Leaves of the current split decisions, in canonical order.
  std::vector<uint32_t> decision_leaves() const;

  friend Octree build_octree(const PointCloud& pc, int coarsest_side, int max_level);

private:
  std::vector<Point3> points_;  // reordered copy of the input
  std::vector<Node> nodes_;
  std::vector<uint32_t> roots_;
  CoarseDims dims_;
  int coarsest_side_ = 32;
  int max_level_ = 3;
  int bit_depth_ = 1;
};

// Builds the full tree down to max_level. All split flags start true except
// at max_level. coarsest_side must be a power of two with
// coarsest_side >> max_level >= 1.
Octree build_octree(const PointCloud& pc, int coarsest_side, int max_level);

// Serializes the split topology: a coarse-occupancy bitmap in x-fastest
// raster order, then per occupied node (depth first, Morton child order) a
// split flag for non-max-level nodes and, after each split, an 8-bit child
// occupancy mask.
void append_structure_bits(const Octree& tree, BitWriter& bw);

// Inverse of append_structure_bits: the leaf keys in canonical order.
std::vector<VoxelKey> parse_structure(BitReader& br, const CoarseDims& dims,
                                      int coarsest_side, int max_level);

}  // namespace gpcgc

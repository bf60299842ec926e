#include "gpcgc/octree.hpp"

#include <algorithm>
#include <bit>

namespace gpcgc {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int ilog2(int v) { return std::bit_width(static_cast<unsigned>(v)) - 1; }

// Morton child index at `level` (1-based below the root) of a root-local
// coordinate; x occupies the least significant bit.
int child_index(const Point3& local, int side_at_level) {
  const int bx = (local.x / side_at_level) & 1;
  const int by = (local.y / side_at_level) & 1;
  const int bz = (local.z / side_at_level) & 1;
  return bx | (by << 1) | (bz << 2);
}

}  // namespace

std::vector<Point3> Octree::local_points(const Node& n) const {
  std::vector<Point3> out;
  out.reserve(n.end - n.begin);
  for (uint32_t i = n.begin; i < n.end; ++i) {
    out.push_back({points_[i].x - n.key.origin.x, points_[i].y - n.key.origin.y,
                   points_[i].z - n.key.origin.z});
  }
  return out;
}

std::vector<uint32_t> Octree::decision_leaves() const {
  std::vector<uint32_t> leaves;
  std::vector<uint32_t> stack;
  for (auto it = roots_.rbegin(); it != roots_.rend(); ++it) stack.push_back(*it);
  while (!stack.empty()) {
    const uint32_t ni = stack.back();
    stack.pop_back();
    const Node& n = nodes_[ni];
    if (!n.split) {
      leaves.push_back(ni);
      continue;
    }
    for (int c = 7; c >= 0; --c)
      if (n.children[c] >= 0) stack.push_back(static_cast<uint32_t>(n.children[c]));
  }
  return leaves;
}

Octree build_octree(const PointCloud& pc, int coarsest_side, int max_level) {
  if (!is_pow2(coarsest_side))
    throw DomainError("coarsest_side must be a power of two");
  if (max_level < 0 || (coarsest_side >> max_level) < 1)
    throw DomainError("max_level too deep for coarsest_side");

  Octree tree;
  tree.coarsest_side_ = coarsest_side;
  tree.max_level_ = max_level;
  tree.bit_depth_ = std::max(pc.bit_depth(), ilog2(coarsest_side));
  const int n_per_axis =
      std::max(1, (1 << tree.bit_depth_) / coarsest_side);
  tree.dims_ = {n_per_axis, n_per_axis, n_per_axis};

  if (pc.empty()) return tree;

  // Sort by (root raster index, Morton path); this makes every node's points
  // contiguous.
  struct Keyed {
    uint64_t key;
    Point3 p;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(pc.size());
  const auto& dims = tree.dims_;
  for (const Point3& p : pc.points()) {
    const int rx = p.x / coarsest_side;
    const int ry = p.y / coarsest_side;
    const int rz = p.z / coarsest_side;
    const uint64_t root =
        static_cast<uint64_t>(rx) +
        static_cast<uint64_t>(dims.nx) * (static_cast<uint64_t>(ry) +
                                          static_cast<uint64_t>(dims.ny) * rz);
    uint64_t path = 0;
    const Point3 local{p.x - rx * coarsest_side, p.y - ry * coarsest_side,
                       p.z - rz * coarsest_side};
    for (int lvl = 1; lvl <= max_level; ++lvl)
      path = (path << 3) | static_cast<uint64_t>(child_index(local, coarsest_side >> lvl));
    keyed.push_back({(root << (3 * max_level)) | path, p});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.key != b.key) return a.key < b.key;
    return a.p < b.p;
  });
  tree.points_.reserve(keyed.size());
  for (const Keyed& k : keyed) tree.points_.push_back(k.p);

  // Recursive range split; children of a sorted range are already contiguous.
  struct Builder {
    Octree& t;

    int32_t make(int level, Point3 origin, uint32_t begin, uint32_t end) {
      const int32_t self = static_cast<int32_t>(t.nodes_.size());
      t.nodes_.push_back({});
      t.nodes_[self].key = {level, origin};
      t.nodes_[self].begin = begin;
      t.nodes_[self].end = end;
      if (level == t.max_level_) {
        t.nodes_[self].split = false;
        return self;
      }
      t.nodes_[self].split = true;
      const int child_side = t.coarsest_side_ >> (level + 1);
      uint32_t cursor = begin;
      for (int c = 0; c < 8 && cursor < end; ++c) {
        uint32_t stop = cursor;
        while (stop < end) {
          const Point3 local{t.points_[stop].x - origin.x, t.points_[stop].y - origin.y,
                             t.points_[stop].z - origin.z};
          if (child_index(local, child_side) != c) break;
          ++stop;
        }
        if (stop > cursor) {
          const Point3 corigin{origin.x + (c & 1) * child_side,
                               origin.y + ((c >> 1) & 1) * child_side,
                               origin.z + ((c >> 2) & 1) * child_side};
          const int32_t child = make(level + 1, corigin, cursor, stop);
          t.nodes_[self].children[c] = child;
          cursor = stop;
        }
      }
      return self;
    }
  };

  Builder builder{tree};
  uint32_t begin = 0;
  while (begin < tree.points_.size()) {
    const Point3& p = tree.points_[begin];
    const Point3 origin{(p.x / coarsest_side) * coarsest_side,
                        (p.y / coarsest_side) * coarsest_side,
                        (p.z / coarsest_side) * coarsest_side};
    uint32_t end = begin;
    while (end < tree.points_.size() &&
           tree.points_[end].x / coarsest_side == origin.x / coarsest_side &&
           tree.points_[end].y / coarsest_side == origin.y / coarsest_side &&
           tree.points_[end].z / coarsest_side == origin.z / coarsest_side)
      ++end;
    tree.roots_.push_back(static_cast<uint32_t>(builder.make(0, origin, begin, end)));
    begin = end;
  }
  return tree;
}

void append_structure_bits(const Octree& tree, BitWriter& bw) {
  const CoarseDims dims = tree.dims();
  const int side = tree.coarsest_side();

  std::vector<uint8_t> bitmap(static_cast<std::size_t>(dims.total()), 0);
  for (uint32_t ri : tree.roots()) {
    const Point3 o = tree.nodes()[ri].key.origin;
    const int64_t idx = (o.x / side) +
                        int64_t{dims.nx} * ((o.y / side) + int64_t{dims.ny} * (o.z / side));
    bitmap[static_cast<std::size_t>(idx)] = 1;
  }
  for (uint8_t b : bitmap) bw.put_bit(b != 0);

  struct Walker {
    const Octree& t;
    BitWriter& bw;

    void visit(uint32_t ni) {
      const Octree::Node& n = t.nodes()[ni];
      if (n.key.level == t.max_level()) return;  // leaf implied
      bw.put_bit(n.split);
      if (!n.split) return;
      uint8_t mask = 0;
      for (int c = 0; c < 8; ++c)
        if (n.children[c] >= 0) mask |= static_cast<uint8_t>(1 << c);
      bw.put_bits(mask, 8);
      for (int c = 0; c < 8; ++c)
        if (n.children[c] >= 0) visit(static_cast<uint32_t>(n.children[c]));
    }
  };
  Walker walker{tree, bw};
  for (uint32_t ri : tree.roots()) walker.visit(ri);
}

std::vector<VoxelKey> parse_structure(BitReader& br, const CoarseDims& dims,
                                      int coarsest_side, int max_level) {
  std::vector<VoxelKey> leaves;
  std::vector<Point3> root_origins;
  const int64_t total = dims.total();
  for (int64_t i = 0; i < total; ++i) {
    if (!br.get_bit()) continue;
    const int x = static_cast<int>(i % dims.nx);
    const int y = static_cast<int>((i / dims.nx) % dims.ny);
    const int z = static_cast<int>(i / (int64_t{dims.nx} * dims.ny));
    root_origins.push_back(
        {x * coarsest_side, y * coarsest_side, z * coarsest_side});
  }

  struct Walker {
    BitReader& br;
    std::vector<VoxelKey>& leaves;
    int coarsest_side;
    int max_level;

    void visit(int level, Point3 origin) {
      if (level == max_level || !br.get_bit()) {
        leaves.push_back({level, origin});
        return;
      }
      const uint8_t mask = static_cast<uint8_t>(br.get_bits(8));
      if (mask == 0)
        throw StreamError(StreamError::Kind::Corrupt,
                          "split node with empty child mask");
      const int child_side = coarsest_side >> (level + 1);
      for (int c = 0; c < 8; ++c) {
        if (!(mask & (1 << c))) continue;
        visit(level + 1, {origin.x + (c & 1) * child_side,
                          origin.y + ((c >> 1) & 1) * child_side,
                          origin.z + ((c >> 2) & 1) * child_side});
      }
    }
  };
  Walker walker{br, leaves, coarsest_side, max_level};
  for (const Point3& o : root_origins) walker.visit(0, o);
  return leaves;
}

}  // namespace gpcgc

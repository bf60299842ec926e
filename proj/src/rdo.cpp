#include "gpcgc/rdo.hpp"

#include <cmath>
#include <limits>

#include "gpcgc/metrics.hpp"
#include "gpcgc/parallel.hpp"

namespace gpcgc {

std::optional<LeafEncoding> encode_leaf(const std::vector<Point3>& locals, int side,
                                        const GicModel& model, int thickness,
                                        bool at_max_level) {
  const Axis axis = select_axis(locals, side);
  const DepthMapSet dms = project(locals, axis, side);
  if (!at_max_level && !is_projectable(dms, locals, thickness)) return std::nullopt;
  if (!model.has_entry(side, dms.dual)) {
    if (!at_max_level) return std::nullopt;
    model.entry(side, dms.dual);  // throws ModelMismatchError
  }
  const GicEntry& entry = model.entry(side, dms.dual);

  LeafEncoding enc;
  enc.axis = axis;
  enc.dual = dms.dual;
  enc.mode = select_mode(dms.occupancy, side);
  const FilledMaps filled = fill_depth(dms, enc.mode);
  enc.dummy_high = filled.dummy_high;
  Image decoded;
  enc.payload =
      gic_encode(compose_map(filled.near, filled.far, side, dms.dual), entry, &decoded);
  enc.payload_bits = kLeafSideInfoBits + entry.payload_bits();

  std::vector<int> near, far;
  split_map(decoded, side, dms.dual, &near, &far);
  const DepthMapSet rec = reconstruct_pixels(near, far, enc.mode, dms.dual, axis, side);
  const std::vector<Point3> rec_points = unproject(rec, Point3{0, 0, 0});
  enc.distortion = d1_distortion(PointCloud::from_points(locals),
                                 PointCloud::from_points(rec_points));
  return enc;
}

RdoResult optimize(Octree& tree, const GicModel& model, const RdoConfig& cfg, int threads) {
  auto& nodes = tree.nodes();
  const size_t n = nodes.size();
  RdoResult res;
  res.node_costs.assign(n, NodeCost{});
  res.encodings.assign(n, std::nullopt);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // Leaf evaluations are independent across nodes.
  parallel_for(n, threads, [&](size_t i) {
    const Octree::Node& node = nodes[i];
    const int side = tree.side_of(node.key.level);
    const bool at_max = node.key.level == cfg.max_level;
    const std::vector<Point3> locals = tree.local_points(node);
    res.encodings[i] = encode_leaf(locals, side, model, cfg.thickness, at_max);
    NodeCost& nc = res.node_costs[i];
    if (res.encodings[i]) {
      nc.rate_bits = res.encodings[i]->payload_bits;
      // Scale the per-point distortion by the node's population so that
      // distortion, like rate, adds up across subtrees: a parent's cost is
      // then comparable with the sum of its children's costs.
      nc.distortion = res.encodings[i]->distortion * static_cast<double>(locals.size());
      nc.cost = cfg.node_cost(node.key.level, nc.distortion, nc.rate_bits);
    } else {
      nc.cost = kInf;
    }
  });

  // Bottom-up dynamic program. DFS preorder guarantees children follow their
  // parent, so a reverse scan visits children first.
  std::vector<double> subtree_cost(n, 0.0);
  std::vector<double> subtree_dist(n, 0.0);
  std::vector<int64_t> subtree_bits(n, 0);  // excludes the node's own split flag
  for (size_t r = 0; r < n; ++r) {
    const size_t i = n - 1 - r;
    const Octree::Node& node = nodes[i];
    NodeCost& nc = res.node_costs[i];

    double split_cost = kInf;
    double split_dist = 0.0;
    int64_t split_bits = 0;
    if (node.key.level < cfg.max_level) {
      split_cost = 0.0;
      int64_t overhead_bits = 8;  // child occupancy mask + child split flags
      for (int c = 0; c < 8; ++c) {
        const int32_t child = node.children[c];
        if (child < 0) continue;
        if (nodes[child].key.level < cfg.max_level) ++overhead_bits;
        split_cost += subtree_cost[child];
        split_dist += subtree_dist[child];
        split_bits += subtree_bits[child];
      }
      // Structure bits are priced like payload bits: lambda apiece.
      split_cost += cfg.lambda * static_cast<double>(overhead_bits);
      split_bits += overhead_bits;
    }

    // Ties prefer coding here (fewer leaves).
    if (nc.cost <= split_cost) {
      nc.split = false;
      subtree_cost[i] = nc.cost;
      subtree_dist[i] = nc.distortion;
      subtree_bits[i] = nc.rate_bits;
    } else {
      nc.split = true;
      subtree_cost[i] = split_cost;
      subtree_dist[i] = split_dist;
      subtree_bits[i] = split_bits;
    }
    nodes[i].split = nc.split;
  }

  for (uint32_t root : tree.roots()) {
    res.tree_bits += (nodes[root].key.level < cfg.max_level ? 1 : 0) + subtree_bits[root];
    res.leaf_distortion_sum += subtree_dist[root];
  }
  for (uint32_t leaf : tree.decision_leaves())
    res.leaf_payload_bits += res.node_costs[leaf].rate_bits;
  return res;
}

}  // namespace gpcgc

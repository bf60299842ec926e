#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gpcgc/gic.hpp"
#include "gpcgc/occupancy.hpp"
#include "gpcgc/octree.hpp"
#include "gpcgc/projection.hpp"

namespace gpcgc {

// Side information per coded leaf: axis (2 bits) + mode (4) + dummy (1) +
// dual (1).
constexpr int kLeafSideInfoBits = 8;

struct RdoConfig {
  double lambda = 1.0;
  std::vector<double> multipliers;  // ladder listed coarsest-to-finest, strictly decreasing
  int thickness = 1;
  int max_level = 3;

  // Effective Lagrangian at a level: lambda_n = m_n * lambda, largest at the
  // coarsest level.
  double lambda_at(int level) const {
    return multipliers[static_cast<size_t>(level)] * lambda;
  }

  // A node's cost in the optimizer's common currency. This is the classic
  // per-level objective D_n + lambda_n * R_n divided by the level's
  // multiplier, i.e. D_n / m_n + lambda * R_n. The division matters: it
  // prices one payload bit identically (lambda) at every level, so the tree
  // total being minimized is a fixed distortion weighting plus lambda times
  // the raw bit count. Costs of nodes at different levels therefore add up
  // in the same units, and the optimal pruning's total bits can only shrink
  // as lambda grows, which keeps a rate sweep monotone. The ladder survives
  // as a distortion discount: coarse-level error is forgiven in proportion
  // to m_n, so raising lambda walks the cut smoothly toward coarser leaves.
  double node_cost(int level, double distortion, int64_t rate_bits) const {
    return distortion / multipliers[static_cast<size_t>(level)] +
           lambda * static_cast<double>(rate_bits);
  }
};

// Everything needed to emit and undo one leaf's payload.
struct LeafEncoding {
  Axis axis = Axis::X;
  OccupancyMode mode = OccupancyMode::Full;
  bool dummy_high = false;
  bool dual = false;
  GicEncoded payload;
  int64_t payload_bits = 0;  // side info + VQ index bits
  double distortion = 0.0;   // local point-to-point MSE vs the node's points
};

// Leaf evaluation of one node plus the final split decision.
struct NodeCost {
  int64_t rate_bits = 0;     // payload bits if coded here
  double distortion = 0.0;   // summed squared error (per-point distortion x points)
  double cost = 0.0;         // node_cost(level, distortion, rate_bits); inf if uncodable
  bool split = false;        // the optimizer's decision
};

// Runs the full leaf pipeline (axis, projection, mode, fill, map coding,
// reconstruction, unprojection) and measures exact payload bits and local
// distortion. Returns nullopt when the node cannot be coded at this level:
// self-occluded below max level, or the model lacks a coder for its shape.
std::optional<LeafEncoding> encode_leaf(const std::vector<Point3>& locals, int side,
                                        const GicModel& model, int thickness,
                                        bool at_max_level);

struct RdoResult {
  std::vector<NodeCost> node_costs;                   // by node index
  std::vector<std::optional<LeafEncoding>> encodings; // by node index
  double leaf_distortion_sum = 0.0;   // over the chosen leaves
  int64_t leaf_payload_bits = 0;      // over the chosen leaves
  int64_t tree_bits = 0;              // split flags + child masks + payloads
};

// Bottom-up dynamic program over the full tree: at each node compare coding
// here against splitting (children costs plus structure bits priced at
// lambda); ties prefer coding here. Decisions are written back to the
// tree's split flags; tree_bits predicts the exact post-bitmap stream
// length so the rate model and the bitstream always agree.
RdoResult optimize(Octree& tree, const GicModel& model, const RdoConfig& cfg, int threads);

}  // namespace gpcgc

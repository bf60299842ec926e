#include "gpcgc/codec.hpp"

#include <algorithm>

#include "gpcgc/occupancy.hpp"
#include "gpcgc/parallel.hpp"
#include "gpcgc/rdo.hpp"

namespace gpcgc {

EncodeResult encode_cloud(const PointCloud& input, const GicModel& model, double lambda,
                          int threads) {
  const CodecConfig& cfg = model.config;
  if (!(lambda > 0.0)) throw DomainError("encode: lambda must be positive");
  const PointCloud pc = voxelize(input, cfg.bit_depth);
  Octree tree = build_octree(pc, cfg.coarsest_side, cfg.max_level);

  RdoConfig rcfg;
  rcfg.lambda = lambda;
  rcfg.multipliers = cfg.multipliers;
  rcfg.thickness = cfg.thickness;
  rcfg.max_level = cfg.max_level;
  const RdoResult rdo = optimize(tree, model, rcfg, threads);

  StreamHeader header;
  header.bit_depth = tree.bit_depth();
  header.coarsest_side = cfg.coarsest_side;
  header.max_level = cfg.max_level;
  header.dims = tree.dims();
  header.model_hash = model.model_hash;
  header.thickness = cfg.thickness;
  header.codebook_sizes = cfg.codebook_sizes;
  header.multipliers = cfg.multipliers;
  header.payload_bit_count = static_cast<uint64_t>(rdo.leaf_payload_bits);

  const std::vector<uint32_t> leaf_ids = tree.decision_leaves();
  std::vector<const LeafEncoding*> leaves;
  leaves.reserve(leaf_ids.size());
  for (uint32_t id : leaf_ids) leaves.push_back(&*rdo.encodings[id]);

  EncodeResult result;
  int64_t total_bits = 0;
  result.bytes = write_stream(header, tree, leaves, model, &total_bits);

  EncodeStats& s = result.stats;
  s.points_in = pc.size();
  s.total_bits = total_bits;
  s.header_bits = header.header_bits();
  s.payload_bits = rdo.leaf_payload_bits;
  s.structure_bits = total_bits - s.header_bits - s.payload_bits;
  s.bpp = pc.empty() ? 0.0
                     : static_cast<double>(total_bits) / static_cast<double>(pc.size());
  s.leaf_distortion_sum = rdo.leaf_distortion_sum;
  s.leaves_per_level.assign(cfg.max_level + 1, 0);
  for (uint32_t id : leaf_ids) ++s.leaves_per_level[tree.nodes()[id].key.level];

  // The optimizer's rate model must match the writer bit for bit.
  const int64_t predicted =
      s.header_bits + tree.dims().total() + rdo.tree_bits;
  if (predicted != total_bits)
    throw Error("internal: predicted rate " + std::to_string(predicted) +
                " bits differs from emitted " + std::to_string(total_bits));
  return result;
}

PointCloud decode_stream(std::span<const uint8_t> bytes, const GicModel& model, int threads,
                         int upto_grid_level) {
  const ParsedStream parsed = read_stream(bytes, model);
  const StreamHeader& h = parsed.header;

  // Leaves are independent; writing into per-leaf slots keeps the result
  // identical for any worker count.
  std::vector<std::vector<Point3>> pieces(parsed.leaves.size());
  parallel_for(parsed.leaves.size(), threads, [&](size_t i) {
    const LeafRecord& rec = parsed.leaves[i];
    const int side = h.coarsest_side >> rec.key.level;
    const GicEntry& entry = model.entry(side, rec.dual);
    const Image decoded = gic_decode(rec.payload, entry, upto_grid_level);
    std::vector<int> near, far;
    split_map(decoded, side, rec.dual, &near, &far);
    const DepthMapSet dms =
        reconstruct_pixels(near, far, rec.mode, rec.dual, rec.axis, side);
    pieces[i] = unproject(dms, rec.key.origin);
  });

  std::vector<Point3> all;
  for (const auto& piece : pieces) all.insert(all.end(), piece.begin(), piece.end());
  return PointCloud::from_points(std::move(all), std::max(h.bit_depth, 1));
}

}  // namespace gpcgc

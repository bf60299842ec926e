#include "gpcgc/occupancy.hpp"

#include <algorithm>

namespace gpcgc {

std::vector<uint8_t> mode_mask(OccupancyMode mode, int side) {
  if (side < 2 || side % 2 != 0)
    throw DomainError("mode_mask: side must be even and >= 2");
  std::vector<uint8_t> mask(static_cast<std::size_t>(side) * side, 0);
  const int half = side / 2;
  for (int v = 0; v < side; ++v) {
    for (int u = 0; u < side; ++u) {
      bool in = false;
      switch (mode) {
        case OccupancyMode::Full: in = true; break;
        case OccupancyMode::Left: in = u < half; break;
        case OccupancyMode::Right: in = u >= half; break;
        case OccupancyMode::Top: in = v < half; break;
        case OccupancyMode::Bottom: in = v >= half; break;
        case OccupancyMode::UpperLeft: in = u + v <= side - 1; break;
        case OccupancyMode::LowerRight: in = u + v >= side - 1; break;
        case OccupancyMode::UpperRight: in = u >= v; break;
        case OccupancyMode::LowerLeft: in = u <= v; break;
      }
      mask[static_cast<std::size_t>(v) * side + u] = in ? 1 : 0;
    }
  }
  return mask;
}

OccupancyMode select_mode(const std::vector<uint8_t>& occupancy, int side) {
  int best_agreement = -1;
  OccupancyMode best = OccupancyMode::Full;
  for (int m = 0; m < kNumOccupancyModes; ++m) {
    const auto mask = mode_mask(static_cast<OccupancyMode>(m), side);
    int agreement = 0;
    for (std::size_t c = 0; c < mask.size(); ++c)
      agreement += ((mask[c] != 0) == (occupancy[c] != 0));
    if (agreement > best_agreement) {
      best_agreement = agreement;
      best = static_cast<OccupancyMode>(m);
    }
  }
  return best;
}

namespace {

// Mean of the values of occupied cells at minimal Chebyshev distance from
// (u, v), rounded half up. At least one occupied cell must exist.
int infer_value(const DepthMapSet& dms, const std::vector<int>& values, int u, int v) {
  const int side = dms.side;
  for (int r = 1; r < side; ++r) {
    int64_t sum = 0;
    int count = 0;
    const int v0 = std::max(0, v - r), v1 = std::min(side - 1, v + r);
    const int u0 = std::max(0, u - r), u1 = std::min(side - 1, u + r);
    for (int vv = v0; vv <= v1; ++vv) {
      for (int uu = u0; uu <= u1; ++uu) {
        if (std::max(std::abs(uu - u), std::abs(vv - v)) != r) continue;
        const std::size_t c = dms.cell(uu, vv);
        if (!dms.occupancy[c]) continue;
        sum += values[c];
        ++count;
      }
    }
    if (count > 0) return static_cast<int>((2 * sum + count) / (2 * count));
  }
  throw DomainError("fill_depth: no occupied cell in map");
}

}  // namespace

FilledMaps fill_depth(const DepthMapSet& dms, OccupancyMode mode) {
  const int side = dms.side;
  const auto mask = mode_mask(mode, side);

  int64_t depth_sum = 0;
  int64_t depth_count = 0;
  for (std::size_t c = 0; c < dms.occupancy.size(); ++c) {
    if (!dms.occupancy[c]) continue;
    depth_sum += dms.near[c];
    ++depth_count;
    if (dms.dual) {
      depth_sum += dms.far[c];
      ++depth_count;
    }
  }
  // Dummy sentinel nearest to the mean occupied depth.
  const double mean_depth = static_cast<double>(depth_sum) / static_cast<double>(depth_count);
  FilledMaps out;
  out.dummy_high = mean_depth > (side - 1) / 2.0;
  const int dummy = out.dummy_high ? side : -1;

  out.near = dms.near;
  out.far = dms.far;
  for (int v = 0; v < side; ++v) {
    for (int u = 0; u < side; ++u) {
      const std::size_t c = dms.cell(u, v);
      if (dms.occupancy[c]) continue;
      if (mask[c]) {
        out.near[c] = infer_value(dms, dms.near, u, v);
        out.far[c] = infer_value(dms, dms.far, u, v);
      } else {
        out.near[c] = dummy;
        out.far[c] = dummy;
      }
    }
  }
  return out;
}

DepthMapSet reconstruct_pixels(const std::vector<int>& decoded_near,
                               const std::vector<int>& decoded_far,
                               OccupancyMode mode, bool dual, Axis axis, int side) {
  DepthMapSet dms;
  dms.side = side;
  dms.axis = axis;
  dms.occupancy = mode_mask(mode, side);
  const std::size_t cells = dms.occupancy.size();
  dms.near.assign(cells, DepthMapSet::kEmpty);
  dms.far.assign(cells, DepthMapSet::kEmpty);
  for (std::size_t c = 0; c < cells; ++c) {
    if (!dms.occupancy[c]) continue;
    const int dn = std::clamp(decoded_near[c], 0, side - 1);
    const int df = dual ? std::max(std::clamp(decoded_far[c], 0, side - 1), dn) : dn;
    dms.near[c] = dn;
    dms.far[c] = df;
  }
  dms.dual = false;
  for (std::size_t c = 0; c < cells; ++c) {
    if (dms.occupancy[c] && dms.far[c] != dms.near[c]) {
      dms.dual = true;
      break;
    }
  }
  return dms;
}

}  // namespace gpcgc

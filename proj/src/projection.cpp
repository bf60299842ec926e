#include "gpcgc/projection.hpp"

#include <algorithm>

namespace gpcgc {

int projection_area(std::span<const Point3> points, Axis axis, int side) {
  std::vector<uint8_t> hit(static_cast<std::size_t>(side) * side, 0);
  int area = 0;
  for (const Point3& p : points) {
    int u = 0, v = 0, d = 0;
    split_point(p, axis, &u, &v, &d);
    uint8_t& cell = hit[static_cast<std::size_t>(v) * side + u];
    area += (cell == 0);
    cell = 1;
  }
  return area;
}

Axis select_axis(std::span<const Point3> points, int side) {
  if (points.empty()) throw DomainError("select_axis: empty point set");
  Axis best = Axis::X;
  int best_area = projection_area(points, Axis::X, side);
  for (Axis a : {Axis::Y, Axis::Z}) {
    const int area = projection_area(points, a, side);
    if (area > best_area) {
      best = a;
      best_area = area;
    }
  }
  return best;
}

DepthMapSet project(std::span<const Point3> points, Axis axis, int side) {
  DepthMapSet dms;
  dms.side = side;
  dms.axis = axis;
  const std::size_t cells = static_cast<std::size_t>(side) * side;
  dms.occupancy.assign(cells, 0);
  dms.near.assign(cells, DepthMapSet::kEmpty);
  dms.far.assign(cells, DepthMapSet::kEmpty);
  for (const Point3& p : points) {
    int u = 0, v = 0, d = 0;
    split_point(p, axis, &u, &v, &d);
    const std::size_t c = dms.cell(u, v);
    if (!dms.occupancy[c]) {
      dms.occupancy[c] = 1;
      dms.near[c] = d;
      dms.far[c] = d;
    } else {
      dms.near[c] = std::min(dms.near[c], d);
      dms.far[c] = std::max(dms.far[c], d);
    }
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

bool is_projectable(const DepthMapSet& dms, std::span<const Point3> points,
                    int thickness) {
  for (const Point3& p : points) {
    int u = 0, v = 0, d = 0;
    split_point(p, dms.axis, &u, &v, &d);
    const std::size_t c = dms.cell(u, v);
    if (d - dms.near[c] > thickness && dms.far[c] - d > thickness) return false;
  }
  return true;
}

std::vector<Point3> unproject(const DepthMapSet& dms, const Point3& origin) {
  std::vector<Point3> out;
  const int side = dms.side;
  auto clamp_depth = [side](int d) { return std::clamp(d, 0, side - 1); };
  for (int v = 0; v < side; ++v) {
    for (int u = 0; u < side; ++u) {
      const std::size_t c = dms.cell(u, v);
      if (!dms.occupancy[c]) continue;
      const int dn = clamp_depth(dms.near[c]);
      const int df = clamp_depth(dms.far[c]);
      Point3 pn = merge_point(u, v, dn, dms.axis);
      out.push_back({pn.x + origin.x, pn.y + origin.y, pn.z + origin.z});
      if (df != dn) {
        Point3 pf = merge_point(u, v, df, dms.axis);
        out.push_back({pf.x + origin.x, pf.y + origin.y, pf.z + origin.z});
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace gpcgc

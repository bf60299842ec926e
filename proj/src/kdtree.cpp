#include "gpcgc/kdtree.hpp"

#include <algorithm>
#include <numeric>

namespace gpcgc {

namespace {
constexpr uint32_t kLeafSize = 16;

int32_t component(const Point3& p, int axis) {
  return axis == 0 ? p.x : axis == 1 ? p.y : p.z;
}
}  // namespace

KdTree::KdTree(const std::vector<Point3>& pts) : pts_(pts) {
  order_.resize(pts_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!pts_.empty()) root_ = build(0, static_cast<uint32_t>(pts_.size()));
}

int32_t KdTree::build(uint32_t begin, uint32_t end) {
  Node node;
  if (end - begin <= kLeafSize) {
    node.leaf = true;
    node.begin = begin;
    node.count = end - begin;
    nodes_.push_back(node);
    return static_cast<int32_t>(nodes_.size() - 1);
  }

  // Split along the widest axis at the median.
  int32_t lo[3] = {INT32_MAX, INT32_MAX, INT32_MAX};
  int32_t hi[3] = {INT32_MIN, INT32_MIN, INT32_MIN};
  for (uint32_t i = begin; i < end; ++i) {
    const Point3& p = pts_[order_[i]];
    const int32_t c[3] = {p.x, p.y, p.z};
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], c[a]);
      hi[a] = std::max(hi[a], c[a]);
    }
  }
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (hi[a] - lo[a] > hi[axis] - lo[axis]) axis = a;

  const uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](uint32_t a, uint32_t b) {
                     const int32_t ca = component(pts_[a], axis);
                     const int32_t cb = component(pts_[b], axis);
                     if (ca != cb) return ca < cb;
                     return pts_[a] < pts_[b];
                   });

  node.axis = static_cast<uint8_t>(axis);
  node.split_val = component(pts_[order_[mid]], axis);
  const std::size_t self = nodes_.size();
  nodes_.push_back(node);
  const int32_t left = build(begin, mid);
  const int32_t right = build(mid, end);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return static_cast<int32_t>(self);
}

void KdTree::search(int32_t ni, const Point3& q, Hit& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(ni)];
  if (node.leaf) {
    for (uint32_t i = node.begin; i < node.begin + node.count; ++i) {
      const uint32_t idx = order_[i];
      const int64_t d2 = squared_distance(pts_[idx], q);
      if (d2 < best.dist2) {
        best.dist2 = d2;
        best.index = idx;
      }
    }
    return;
  }
  const int64_t delta = component(q, node.axis) - node.split_val;
  const int32_t first = delta < 0 ? node.left : node.right;
  const int32_t second = delta < 0 ? node.right : node.left;
  search(first, q, best);
  if (delta * delta < best.dist2) search(second, q, best);
}

KdTree::Hit KdTree::nearest(const Point3& q) const {
  if (pts_.empty()) throw DomainError("nearest neighbor query on empty set");
  Hit best;
  best.dist2 = INT64_MAX;
  search(root_, q, best);
  return best;
}

std::vector<std::size_t> KdTree::k_nearest(const Point3& q, std::size_t k) const {
  if (k > pts_.size())
    throw DomainError("k_nearest: k exceeds point count");
  // Bounded insertion keeps ties ordered by index; k stays small (normals).
  std::vector<std::pair<int64_t, std::size_t>> best;
  best.reserve(k + 1);
  auto consider = [&](std::size_t idx) {
    const int64_t d2 = squared_distance(pts_[idx], q);
    if (best.size() == k && d2 >= best.back().first &&
        !(d2 == best.back().first && idx < best.back().second))
      return;
    std::pair<int64_t, std::size_t> entry{d2, idx};
    auto pos = std::lower_bound(best.begin(), best.end(), entry);
    best.insert(pos, entry);
    if (best.size() > k) best.pop_back();
  };

  // Depth-first with pruning against the current kth distance.
  struct Frame {
    int32_t node;
  };
  std::vector<Frame> stack{{root_}};
  while (!stack.empty()) {
    const int32_t ni = stack.back().node;
    stack.pop_back();
    const Node& node = nodes_[static_cast<std::size_t>(ni)];
    if (node.leaf) {
      for (uint32_t i = node.begin; i < node.begin + node.count; ++i) consider(order_[i]);
      continue;
    }
    const int64_t delta = component(q, node.axis) - node.split_val;
    const int32_t first = delta < 0 ? node.left : node.right;
    const int32_t second = delta < 0 ? node.right : node.left;
    if (best.size() < k || delta * delta <= best.back().first)
      stack.push_back({second});
    stack.push_back({first});
  }
  std::vector<std::size_t> out;
  out.reserve(best.size());
  for (const auto& [d2, idx] : best) out.push_back(idx);
  return out;
}

}  // namespace gpcgc

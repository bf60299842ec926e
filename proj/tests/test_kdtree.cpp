#include <algorithm>
#include <random>
#include <vector>

#include <doctest.h>
#include "gpcgc/kdtree.hpp"
#include "gpcgc/synthetic.hpp"

using namespace gpcgc;

namespace {

// Brute-force nearest: smallest squared distance, ties to the lowest index.
std::pair<size_t, int64_t> scan_nearest(const std::vector<Point3>& pts, const Point3& q) {
  size_t best = 0;
  int64_t bd = squared_distance(pts[0], q);
  for (size_t i = 1; i < pts.size(); ++i) {
    const int64_t d = squared_distance(pts[i], q);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return {best, bd};
}

std::vector<size_t> scan_k_nearest(const std::vector<Point3>& pts, const Point3& q, size_t k) {
  std::vector<size_t> idx(pts.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
    return squared_distance(pts[a], q) < squared_distance(pts[b], q);
  });
  idx.resize(k);
  return idx;
}

}  // namespace

TEST_SUITE("kdtree") {

TEST_CASE("single point tree") {
  KdTree t({{3, 4, 5}});
  const auto hit = t.nearest({0, 0, 0});
  CHECK(hit.index == 0);
  CHECK(hit.dist2 == 9 + 16 + 25);
  CHECK(t.k_nearest({9, 9, 9}, 1) == std::vector<size_t>{0});
}

TEST_CASE("nearest distance matches a linear scan on random sets") {
  std::mt19937_64 rng(101);
  for (int inst = 0; inst < 60; ++inst) {
    PointCloud pc = synth_random(6, 40 + rng() % 120, rng());
    const auto& pts = pc.points();
    KdTree t(pts);
    for (int q = 0; q < 25; ++q) {
      const Point3 query{static_cast<int32_t>(rng() % 64), static_cast<int32_t>(rng() % 64),
                         static_cast<int32_t>(rng() % 64)};
      const auto hit = t.nearest(query);
      const auto oracle = scan_nearest(pts, query);
      CHECK(hit.dist2 == oracle.second);
      // Any point at the same distance is acceptable; the distance is what
      // downstream metrics consume.
      CHECK(squared_distance(pts[hit.index], query) == oracle.second);
    }
  }
}

TEST_CASE("k nearest returns ascending distances with index tie-break") {
  std::mt19937_64 rng(55);
  for (int inst = 0; inst < 40; ++inst) {
    PointCloud pc = synth_random(5, 30 + rng() % 40, rng());
    const auto& pts = pc.points();
    KdTree t(pts);
    const size_t k = 1 + rng() % pts.size();
    const Point3 query{static_cast<int32_t>(rng() % 32), static_cast<int32_t>(rng() % 32),
                       static_cast<int32_t>(rng() % 32)};
    const auto got = t.k_nearest(query, k);
    const auto want = scan_k_nearest(pts, query, k);
    REQUIRE(got.size() == k);
    for (size_t i = 0; i < k; ++i) {
      CHECK(squared_distance(pts[got[i]], query) == squared_distance(pts[want[i]], query));
    }
    // Ties break on the original index, making the result fully deterministic.
    CHECK(got == want);
  }
}

TEST_CASE("k equal to size returns every point exactly once") {
  PointCloud pc = synth_random(4, 50, 9);
  KdTree t(pc.points());
  auto got = t.k_nearest({0, 0, 0}, pc.size());
  REQUIRE(got.size() == pc.size());
  std::sort(got.begin(), got.end());
  for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == i);
}

TEST_CASE("exact hits return distance zero") {
  PointCloud pc = synth_sphere_shell(5);
  KdTree t(pc.points());
  for (size_t i = 0; i < pc.size(); i += 7) {
    const auto hit = t.nearest(pc.points()[i]);
    CHECK(hit.dist2 == 0);
  }
}

}  // TEST_SUITE

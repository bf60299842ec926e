#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <doctest.h>
#include "gpcgc/vq.hpp"

using namespace gpcgc;

namespace {

double sqdist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

uint32_t linear_scan(const Codebook& cb, const std::vector<double>& v) {
  uint32_t best = 0;
  double best_d = sqdist(cb.codewords[0], v);
  for (uint32_t i = 1; i < cb.size(); ++i) {
    const double d = sqdist(cb.codewords[i], v);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

std::vector<std::vector<double>> clustered_data(int clusters, int per_cluster, int dim,
                                                uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::uniform_real_distribution<double> center(-50.0, 50.0);
  std::vector<std::vector<double>> out;
  for (int c = 0; c < clusters; ++c) {
    std::vector<double> mu(dim);
    for (auto& x : mu) x = center(rng);
    for (int i = 0; i < per_cluster; ++i) {
      std::vector<double> v(mu);
      for (auto& x : v) x += jitter(rng);
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("vq") {

TEST_CASE("index widths") {
  Codebook cb;
  cb.dim = 1;
  for (auto [size, bits] : {std::pair{1u, 0}, {2u, 1}, {4u, 2}, {8u, 3}, {256u, 8}}) {
    cb.codewords.assign(size, std::vector<double>{0.0});
    CHECK(cb.size() == size);
    CHECK(cb.index_bits() == bits);
  }
}

TEST_CASE("encode matches a linear scan with smallest-index ties") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Codebook cb;
  cb.dim = 6;
  cb.codewords.assign(16, std::vector<double>(6));
  for (auto& cw : cb.codewords)
    for (auto& x : cw) x = u(rng);
  cb.codewords[11] = cb.codewords[3];  // guaranteed tie pair
  for (int inst = 0; inst < 200; ++inst) {
    std::vector<double> v(6);
    for (auto& x : v) x = u(rng);
    CHECK(vq_encode(cb, v) == linear_scan(cb, v));
  }
  // Query exactly on the duplicated codeword: index 3 must win over 11.
  CHECK(vq_encode(cb, cb.codewords[3]) == 3);
}

TEST_CASE("decode is a table lookup and validates the index") {
  Codebook cb;
  cb.dim = 2;
  cb.codewords = {{1.0, 2.0}, {3.0, 4.0}};
  CHECK(vq_decode(cb, 0) == std::vector<double>{1.0, 2.0});
  CHECK(vq_decode(cb, 1) == std::vector<double>{3.0, 4.0});
  CHECK_THROWS_AS(vq_decode(cb, 2), StreamError);
}

TEST_CASE("training recovers well-separated clusters") {
  const auto data = clustered_data(8, 40, 4, 17);
  const Codebook cb = train_codebook(data, 8, 1);
  REQUIRE(cb.size() == 8);
  CHECK(cb.dim == 4);
  // Every point must sit within jitter distance of its codeword.
  for (const auto& v : data) CHECK(sqdist(cb.codewords[vq_encode(cb, v)], v) < 1.0);
  // And the 8 codewords must occupy 8 distinct clusters.
  std::set<uint32_t> used;
  for (const auto& v : data) used.insert(vq_encode(cb, v));
  CHECK(used.size() == 8);
}

TEST_CASE("training is deterministic in the seed") {
  const auto data = clustered_data(4, 30, 3, 23);
  const Codebook a = train_codebook(data, 16, 42);
  const Codebook b = train_codebook(data, 16, 42);
  CHECK(a.codewords == b.codewords);
}

TEST_CASE("at most size distinct vectors become the codebook itself") {
  std::vector<std::vector<double>> data;
  for (int i = 0; i < 20; ++i) data.push_back({static_cast<double>(i % 3), 0.0});
  const Codebook cb = train_codebook(data, 4, 9);
  REQUIRE(cb.size() == 4);
  std::set<std::vector<double>> words(cb.codewords.begin(), cb.codewords.end());
  CHECK(words.count({0.0, 0.0}) == 1);
  CHECK(words.count({1.0, 0.0}) == 1);
  CHECK(words.count({2.0, 0.0}) == 1);
  CHECK(words.size() == 3);  // padding repeats an existing word
  for (const auto& v : data) CHECK(sqdist(cb.codewords[vq_encode(cb, v)], v) == 0.0);
}

TEST_CASE("fewer vectors than codewords fails training") {
  std::vector<std::vector<double>> data = {{0.0}, {1.0}, {2.0}};
  CHECK_THROWS_AS(train_codebook(data, 4, 1), TrainingError);
  CHECK_THROWS_AS(train_codebook({}, 1, 1), TrainingError);
}

TEST_CASE("size one collapses everything to the centroid") {
  std::vector<std::vector<double>> data = {{0.0, 0.0}, {2.0, 4.0}, {4.0, 2.0}};
  const Codebook cb = train_codebook(data, 1, 5);
  REQUIRE(cb.size() == 1);
  CHECK(cb.index_bits() == 0);
  CHECK(cb.codewords[0][0] == doctest::Approx(2.0));
  CHECK(cb.codewords[0][1] == doctest::Approx(2.0));
  for (const auto& v : data) CHECK(vq_encode(cb, v) == 0);
}

TEST_CASE("training never loses a cluster to emptiness") {
  // Two tight far-apart clusters and k=2: any reasonable seeding plus the
  // empty-cluster reseed rule must end with one codeword per cluster.
  for (uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<std::vector<double>> data;
    for (int i = 0; i < 50; ++i) data.push_back({0.001 * i});
    for (int i = 0; i < 2; ++i) data.push_back({1000.0 + 0.001 * i});
    const Codebook cb = train_codebook(data, 2, seed);
    std::set<uint32_t> used;
    for (const auto& v : data) used.insert(vq_encode(cb, v));
    CHECK(used.size() == 2);
  }
}

TEST_CASE("more iterations never hurt inertia") {
  const auto data = clustered_data(6, 25, 3, 31);
  auto inertia = [&](const Codebook& cb) {
    double s = 0;
    for (const auto& v : data) s += sqdist(cb.codewords[vq_encode(cb, v)], v);
    return s;
  };
  const double one = inertia(train_codebook(data, 8, 7, 1));
  const double many = inertia(train_codebook(data, 8, 7, 100));
  CHECK(many <= one + 1e-9);
}

}  // TEST_SUITE

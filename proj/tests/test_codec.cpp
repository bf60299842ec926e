#include <limits>
#include <vector>

#include <doctest.h>
#include "gpcgc/codec.hpp"
#include "gpcgc/metrics.hpp"
#include "gpcgc/synthetic.hpp"
#include "test_util.hpp"

using namespace gpcgc;

namespace {

const GicModel& shared_model() {
  static const GicModel model = testutil::small_model(5, 16, 2, 16);
  return model;
}

// A model trained on flat sheets only: constant maps quantize exactly, so
// coding those same sheets must be lossless end to end.
const GicModel& plane_model() {
  static const GicModel model = [] {
    std::vector<PointCloud> planes;
    for (int z : {5, 9, 13, 21}) planes.push_back(synth_plane(5, 2, z));
    return train_model(planes, testutil::small_config(5, 16, 2, 8));
  }();
  return model;
}

}  // namespace

TEST_SUITE("codec") {

TEST_CASE("flat sheets code losslessly with a matching model") {
  for (int z : {5, 13}) {
    const PointCloud plane = synth_plane(5, 2, z);
    const EncodeResult enc = encode_cloud(plane, plane_model(), 1.0);
    const PointCloud back = decode_stream(enc.bytes, plane_model());
    CHECK(back == plane);
    CHECK(d1_distortion(plane, back) == 0.0);
    CHECK(enc.stats.leaf_distortion_sum == 0.0);
  }
}

TEST_CASE("stats fields are exact and mutually consistent") {
  const GicModel& m = shared_model();
  const PointCloud pc = voxelize(synth_blob(5, 21), 5);
  const EncodeResult enc = encode_cloud(pc, m, 0.5, 2);
  const EncodeStats& s = enc.stats;

  CHECK(s.points_in == pc.size());
  CHECK(s.total_bits == s.header_bits + s.structure_bits + s.payload_bits);
  CHECK(s.bpp == static_cast<double>(s.total_bits) / static_cast<double>(pc.size()));
  CHECK(s.total_bits == stream_bit_count(enc.bytes));
  CHECK(enc.bytes.size() == (static_cast<uint64_t>(s.total_bits) + 7) / 8);

  int64_t leaves = 0;
  for (int64_t n : s.leaves_per_level) leaves += n;
  CHECK(leaves == static_cast<int64_t>(read_stream(enc.bytes, m).leaves.size()));
  CHECK(static_cast<int>(s.leaves_per_level.size()) == m.config.max_level + 1);
}

TEST_CASE("encoding is deterministic and thread-invariant") {
  const GicModel& m = shared_model();
  const PointCloud pc = voxelize(synth_sphere_shell(5), 5);
  const EncodeResult a = encode_cloud(pc, m, 1.0, 1);
  const EncodeResult b = encode_cloud(pc, m, 1.0, 1);
  const EncodeResult c = encode_cloud(pc, m, 1.0, 8);
  CHECK(a.bytes == b.bytes);
  CHECK(a.bytes == c.bytes);
  CHECK(decode_stream(a.bytes, m, 1) == decode_stream(a.bytes, m, 8));
}

TEST_CASE("round trips are stable under re-encoding") {
  const GicModel& m = shared_model();
  const PointCloud pc = voxelize(synth_blob(5, 33), 5);
  const EncodeResult enc = encode_cloud(pc, m, 1.0);
  const PointCloud once = decode_stream(enc.bytes, m);
  CHECK(!once.empty());
  CHECK(once.bit_depth() == m.config.bit_depth);
  // Decoding the same bytes twice gives the same cloud.
  CHECK(decode_stream(enc.bytes, m) == once);
}

TEST_CASE("bits per point fall as lambda grows") {
  const GicModel& m = shared_model();
  const PointCloud pc = voxelize(synth_sphere_shell(5), 5);
  double prev_bpp = std::numeric_limits<double>::infinity();
  double prev_dist = -1.0;
  for (double lambda : {0.05, 0.5, 5.0, 50.0}) {
    const EncodeResult enc = encode_cloud(pc, m, lambda);
    CHECK(enc.stats.bpp <= prev_bpp);
    CHECK(enc.stats.leaf_distortion_sum >= prev_dist - 1e-9);
    prev_bpp = enc.stats.bpp;
    prev_dist = enc.stats.leaf_distortion_sum;
  }
}

TEST_CASE("progressive decodes sharpen as levels are added") {
  const GicModel& m = shared_model();
  const PointCloud pc = voxelize(synth_sphere_shell(5), 5);
  const EncodeResult enc = encode_cloud(pc, m, 0.1);
  double prev = std::numeric_limits<double>::infinity();
  for (int upto : {0, 1, 2, -1}) {
    const PointCloud rec = decode_stream(enc.bytes, m, 1, upto);
    CHECK(!rec.empty());
    const double d = d1_distortion(pc, rec);
    CHECK(d <= prev + 1e-12);
    prev = d;
  }
  // The full progressive pass equals the plain decode.
  CHECK(decode_stream(enc.bytes, m, 1, -1) == decode_stream(enc.bytes, m));
}

TEST_CASE("an empty cloud codes to a header-plus-bitmap frame") {
  const GicModel& m = shared_model();
  const EncodeResult enc = encode_cloud(PointCloud{}, m, 1.0);
  CHECK(enc.stats.points_in == 0);
  CHECK(enc.stats.bpp == 0.0);
  CHECK(enc.stats.payload_bits == 0);
  const PointCloud back = decode_stream(enc.bytes, m);
  CHECK(back.empty());
}

TEST_CASE("lambda must be positive") {
  CHECK_THROWS_AS(encode_cloud(synth_blob(5, 1), shared_model(), 0.0), DomainError);
  CHECK_THROWS_AS(encode_cloud(synth_blob(5, 1), shared_model(), -2.0), DomainError);
}

TEST_CASE("decoding with the wrong model is rejected") {
  const EncodeResult enc = encode_cloud(synth_blob(5, 2), shared_model(), 1.0);
  const GicModel other = testutil::small_model(5, 16, 2, 16, 8);  // different seed
  CHECK_THROWS_AS(decode_stream(enc.bytes, other), ModelMismatchError);
}

TEST_CASE("inputs are voxelized to the model depth before coding") {
  const GicModel& m = shared_model();
  const PointCloud fine = synth_sphere_shell(7);  // depth 7 input, depth 5 model
  const EncodeResult enc = encode_cloud(fine, m, 1.0);
  const PointCloud expect = voxelize(fine, 5);
  CHECK(enc.stats.points_in == expect.size());
  const PointCloud back = decode_stream(enc.bytes, m);
  CHECK(back.bit_depth() == 5);
  // The reconstruction approximates the voxelized input, not the raw one.
  CHECK(d1_distortion(expect, back) < 2.0);
}

}  // TEST_SUITE

#include <cstring>
#include <random>
#include <string>
#include <vector>

#include <doctest.h>
#include "gpcgc/ply_io.hpp"
#include "gpcgc/synthetic.hpp"
#include "test_util.hpp"

using namespace gpcgc;

namespace {

std::vector<uint8_t> bytes_of(const std::string& s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}

std::string ascii_ply(const std::string& body, int count) {
  return "ply\nformat ascii 1.0\nelement vertex " + std::to_string(count) +
         "\nproperty int x\nproperty int y\nproperty int z\nend_header\n" + body;
}

}  // namespace

TEST_SUITE("ply_io") {

TEST_CASE("minimal ascii file with one vertex") {
  PointCloud pc = read_ply(bytes_of(ascii_ply("0 0 0\n", 1)));
  REQUIRE(pc.size() == 1);
  CHECK(pc.points()[0] == Point3{0, 0, 0});
  CHECK(pc.bit_depth() >= 1);
}

TEST_CASE("duplicate vertices collapse to one point") {
  PointCloud pc = read_ply(bytes_of(ascii_ply("1 2 3\n1 2 3\n", 2)));
  REQUIRE(pc.size() == 1);
  CHECK(pc.points()[0] == Point3{1, 2, 3});
}

TEST_CASE("float coordinates round to nearest with ties to even") {
  PointCloud pc = read_ply(bytes_of(
      "ply\nformat ascii 1.0\nelement vertex 2\nproperty float x\nproperty float y\n"
      "property float z\nend_header\n0.5 1.5 2.5\n3.5 4.49 4.51\n"));
  REQUIRE(pc.size() == 2);
  CHECK(pc.points()[0] == Point3{0, 2, 2});  // .5 ties go to the even integer
  CHECK(pc.points()[1] == Point3{4, 4, 5});
}

TEST_CASE("write then read is the identity in both formats") {
  std::mt19937_64 rng(7);
  for (int inst = 0; inst < 8; ++inst) {
    PointCloud pc = synth_random(7, 1000, rng());
    CHECK(read_ply(write_ply(pc, PlyFormat::Ascii)) == pc);
    CHECK(read_ply(write_ply(pc, PlyFormat::Binary)) == pc);
  }
}

TEST_CASE("binary round-trip over many small generated files") {
  std::mt19937_64 rng(19);
  for (int inst = 0; inst < 100; ++inst) {
    PointCloud pc = synth_random(6, 100, rng());
    CHECK(read_ply(write_ply(pc, PlyFormat::Binary)) == pc);
  }
}

TEST_CASE("empty cloud writes a valid zero-vertex file") {
  PointCloud empty;
  const auto ascii = write_ply(empty, PlyFormat::Ascii);
  const std::string text(ascii.begin(), ascii.end());
  CHECK(text.find("element vertex 0") != std::string::npos);
  CHECK(read_ply(ascii).empty());
  CHECK(read_ply(write_ply(empty, PlyFormat::Binary)).empty());
}

TEST_CASE("single point file declares one vertex") {
  PointCloud pc = PointCloud::from_points({{4, 5, 6}});
  const auto ascii = write_ply(pc, PlyFormat::Ascii);
  const std::string text(ascii.begin(), ascii.end());
  CHECK(text.find("element vertex 1") != std::string::npos);
  CHECK(read_ply(ascii) == pc);
}

TEST_CASE("extra vertex properties are skipped") {
  PointCloud pc = read_ply(bytes_of(
      "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\nproperty float y\n"
      "property float z\nproperty uchar red\nend_header\n1 2 3 255\n"));
  REQUIRE(pc.size() == 1);
  CHECK(pc.points()[0] == Point3{1, 2, 3});
}

TEST_CASE("parse failures name the byte offset") {
  CHECK_THROWS_AS(read_ply(bytes_of("not a ply\n")), PlyError);
  CHECK_THROWS_AS(read_ply(bytes_of("ply\nformat ascii 1.0\n")), PlyError);  // no end_header

  // Unsupported format token.
  try {
    read_ply(bytes_of("ply\nformat binary_big_endian 1.0\nelement vertex 0\n"
                      "property int x\nproperty int y\nproperty int z\nend_header\n"));
    FAIL("expected a parse error");
  } catch (const PlyError& e) {
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
    CHECK(e.byte_offset() == 4);  // the format line starts after "ply\n"
  }

  // Truncated ascii payload: 2 declared, 1 present.
  CHECK_THROWS_AS(read_ply(bytes_of(ascii_ply("0 0 0\n", 2))), PlyError);

  // Truncated binary payload.
  PointCloud pc = synth_random(5, 50, 3);
  auto bin = write_ply(pc, PlyFormat::Binary);
  bin.resize(bin.size() - 5);
  CHECK_THROWS_AS(read_ply(bin), PlyError);

  // Vertex element missing a coordinate property.
  CHECK_THROWS_AS(
      read_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 1\nproperty int x\n"
                        "property int y\nend_header\n0 0\n")),
      PlyError);

  // Negative and non-finite coordinates are rejected.
  CHECK_THROWS_AS(read_ply(bytes_of(ascii_ply("-1 0 0\n", 1))), PlyError);
  CHECK_THROWS_AS(read_ply(bytes_of(
                      "ply\nformat ascii 1.0\nelement vertex 1\nproperty float x\n"
                      "property float y\nproperty float z\nend_header\nnan 0 0\n")),
                  PlyError);
}

TEST_CASE("file wrappers round-trip through disk") {
  const auto dir = testutil::fresh_dir("ply");
  PointCloud pc = synth_blob(5, 2);
  write_ply_file((dir / "a.ply").string(), pc, PlyFormat::Binary);
  CHECK(read_ply_file((dir / "a.ply").string()) == pc);
  CHECK_THROWS_AS(read_ply_file((dir / "missing.ply").string()), Error);
}

}  // TEST_SUITE

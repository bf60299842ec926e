// Writes a deterministic synthetic training corpus as binary PLY files.
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpcgc/ply_io.hpp"
#include "gpcgc/synthetic.hpp"

namespace {

struct Named {
  std::string name;
  gpcgc::PointCloud cloud;
};

std::vector<Named> full_preset(int bit_depth, uint64_t seed) {
  using namespace gpcgc;
  const int n = 1 << bit_depth;
  std::vector<Named> out;
  out.push_back({"sphere_a", synth_sphere_shell(bit_depth, 0.62, 0.5)});
  out.push_back({"sphere_b", synth_sphere_shell(bit_depth, 0.40, 1.0)});
  out.push_back({"blob_a", synth_blob(bit_depth, seed + 1)});
  out.push_back({"blob_b", synth_blob(bit_depth, seed + 2)});
  out.push_back({"tilt_a", synth_tilted_plane(bit_depth, 0.22, 0.11, n * 0.25)});
  out.push_back({"tilt_b", synth_tilted_plane(bit_depth, -0.37, 0.53, n * 0.55)});
  out.push_back({"slab_a", synth_slab(bit_depth, 0.15, -0.08, n * 0.5, 3)});
  out.push_back({"plane_z", synth_plane(bit_depth, 2, n / 2)});
  out.push_back({"random_a", synth_random(bit_depth, 4096, seed + 3)});
  return out;
}

std::vector<Named> planes_preset(int bit_depth) {
  using namespace gpcgc;
  const int n = 1 << bit_depth;
  std::vector<Named> out;
  out.push_back({"plane_x", synth_plane(bit_depth, 0, n / 4)});
  out.push_back({"plane_y", synth_plane(bit_depth, 1, n / 3)});
  out.push_back({"plane_z", synth_plane(bit_depth, 2, n / 2)});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic point-cloud corpus generator"};
  std::string out_dir;
  int bit_depth = 9;
  uint64_t seed = 1;
  std::string preset = "full";
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--bit-depth", bit_depth, "grid bit depth")->check(CLI::Range(3, 12));
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--preset", preset, "corpus preset")
      ->check(CLI::IsMember({"full", "planes"}));
  CLI11_PARSE(app, argc, argv);

  try {
    std::filesystem::create_directories(out_dir);
    const auto clouds =
        preset == "planes" ? planes_preset(bit_depth) : full_preset(bit_depth, seed);
    for (const auto& [name, cloud] : clouds) {
      const std::string path = out_dir + "/" + name + ".ply";
      gpcgc::write_ply_file(path, cloud, gpcgc::PlyFormat::Binary);
      std::cout << path << ": " << cloud.size() << " points\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

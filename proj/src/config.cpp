#include "gpcgc/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gpcgc {
namespace {

bool is_pow2(uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

int64_t parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int64_t r = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw DomainError("config: invalid integer for key '" + key + "': " + v);
  }
}

uint64_t parse_uint(const std::string& key, const std::string& v) {
  const int64_t r = parse_int(key, v);
  if (r < 0) throw DomainError("config: key '" + key + "' must be non-negative");
  return static_cast<uint64_t>(r);
}

double parse_real(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double r = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return r;
  } catch (const std::exception&) {
    throw DomainError("config: invalid number for key '" + key + "': " + v);
  }
}

}  // namespace

int CodecConfig::pyramid_levels() const {
  int levels = 1;
  for (int s = coarsest_side; s > 4; s /= 2) ++levels;
  return levels;
}

void validate_config(const CodecConfig& cfg) {
  if (cfg.bit_depth < 1 || cfg.bit_depth > 12)
    throw DomainError("config: bit_depth must be in [1, 12]");
  if (!is_pow2(static_cast<uint64_t>(cfg.coarsest_side)) || cfg.coarsest_side < 4 ||
      cfg.coarsest_side > 128)
    throw DomainError("config: coarsest_side must be a power of two in [4, 128]");
  if (cfg.coarsest_side > (1 << cfg.bit_depth))
    throw DomainError("config: coarsest_side exceeds the voxel grid");
  if (cfg.max_level < 0 || (cfg.coarsest_side >> cfg.max_level) < 4)
    throw DomainError("config: leaf side at max_level must be at least 4");
  if (cfg.thickness < 0 || cfg.thickness > 255)
    throw DomainError("config: thickness must be in [0, 255]");
  if (static_cast<int>(cfg.multipliers.size()) != cfg.max_level + 1)
    throw DomainError("config: need one multiplier per level (max_level+1)");
  for (size_t i = 0; i < cfg.multipliers.size(); ++i) {
    const double m = cfg.multipliers[i];
    if (!(m > 0.0) || m > 655.35)
      throw DomainError("config: multipliers must be in (0, 655.35]");
    const double scaled = m * 100.0;
    if (std::fabs(scaled - std::round(scaled)) > 1e-6)
      throw DomainError("config: multipliers must be multiples of 0.01");
    if (i > 0 && !(cfg.multipliers[i - 1] > m))
      throw DomainError("config: multipliers must be strictly decreasing with level");
  }
  const int plevels = cfg.pyramid_levels();
  if (static_cast<int>(cfg.codebook_sizes.size()) != plevels)
    throw DomainError("config: need one codebook size per pyramid level (" +
                      std::to_string(plevels) + ")");
  for (uint32_t c : cfg.codebook_sizes) {
    if (!is_pow2(c) || c > 65535)
      throw DomainError("config: codebook sizes must be powers of two <= 65535");
    if (cfg.train_samples < c)
      throw DomainError("config: train_samples must be >= every codebook size");
  }
  if (cfg.train_maps == 0) throw DomainError("config: train_maps must be positive");
}

CodecConfig parse_config(const std::string& text) {
  CodecConfig cfg;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config: expected key=value, got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "bit_depth") {
      cfg.bit_depth = static_cast<int>(parse_int(key, val));
    } else if (key == "coarsest_side") {
      cfg.coarsest_side = static_cast<int>(parse_int(key, val));
    } else if (key == "max_level") {
      cfg.max_level = static_cast<int>(parse_int(key, val));
    } else if (key == "thickness") {
      cfg.thickness = static_cast<int>(parse_int(key, val));
    } else if (key == "multipliers") {
      cfg.multipliers.clear();
      for (const auto& item : split_commas(val))
        cfg.multipliers.push_back(parse_real(key, item));
    } else if (key == "codebooks") {
      cfg.codebook_sizes.clear();
      for (const auto& item : split_commas(val))
        cfg.codebook_sizes.push_back(static_cast<uint32_t>(parse_uint(key, item)));
    } else if (key == "seed") {
      cfg.seed = parse_uint(key, val);
    } else if (key == "train_samples") {
      cfg.train_samples = static_cast<uint32_t>(parse_uint(key, val));
    } else if (key == "train_maps") {
      cfg.train_maps = static_cast<uint32_t>(parse_uint(key, val));
    } else {
      throw DomainError("config: unknown key '" + key + "'");
    }
  }
  validate_config(cfg);
  return cfg;
}

CodecConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("config: cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace gpcgc

#include "gpcgc/gic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gpcgc/occupancy.hpp"
#include "gpcgc/octree.hpp"
#include "gpcgc/projection.hpp"

namespace gpcgc {
namespace {

std::vector<std::vector<double>> extract_patches(const Image& img) {
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<size_t>(img.rows / kPatchSide) * (img.cols / kPatchSide));
  for (int pr = 0; pr < img.rows / kPatchSide; ++pr)
    for (int pc = 0; pc < img.cols / kPatchSide; ++pc) {
      std::vector<double> p(kPatchDim);
      for (int r = 0; r < kPatchSide; ++r)
        for (int c = 0; c < kPatchSide; ++c)
          p[static_cast<size_t>(r) * kPatchSide + c] =
              img.at(pr * kPatchSide + r, pc * kPatchSide + c);
      out.push_back(std::move(p));
    }
  return out;
}

void place_patch(Image& img, int pr, int pc, const std::vector<double>& p) {
  for (int r = 0; r < kPatchSide; ++r)
    for (int c = 0; c < kPatchSide; ++c)
      img.at(pr * kPatchSide + r, pc * kPatchSide + c) =
          p[static_cast<size_t>(r) * kPatchSide + c];
}

// Quantize every patch of `target`, returning indices and writing the decoded
// image. The decode arithmetic here must match decode_patches exactly so the
// encoder's closed loop mirrors the decoder.
std::vector<uint32_t> code_patches(const Image& target, const GicLevel& lvl, Image* decoded) {
  *decoded = Image(target.rows, target.cols);
  std::vector<uint32_t> indices;
  indices.reserve(static_cast<size_t>(target.rows / kPatchSide) * (target.cols / kPatchSide));
  for (int pr = 0; pr < target.rows / kPatchSide; ++pr)
    for (int pc = 0; pc < target.cols / kPatchSide; ++pc) {
      std::vector<double> p(kPatchDim);
      for (int r = 0; r < kPatchSide; ++r)
        for (int c = 0; c < kPatchSide; ++c)
          p[static_cast<size_t>(r) * kPatchSide + c] =
              target.at(pr * kPatchSide + r, pc * kPatchSide + c);
      const uint32_t idx = vq_encode(lvl.codebook, saab_forward(lvl.transform, p));
      indices.push_back(idx);
      place_patch(*decoded, pr, pc,
                  saab_inverse(lvl.transform, vq_decode(lvl.codebook, idx)));
    }
  return indices;
}

Image decode_patches(const std::vector<uint32_t>& indices, const GicLevel& lvl, int rows,
                     int cols) {
  Image out(rows, cols);
  size_t k = 0;
  for (int pr = 0; pr < rows / kPatchSide; ++pr)
    for (int pc = 0; pc < cols / kPatchSide; ++pc)
      place_patch(out, pr, pc,
                  saab_inverse(lvl.transform, vq_decode(lvl.codebook, indices[k++])));
  return out;
}

uint64_t mix_seed(uint64_t seed, int side, bool dual, int level) {
  uint64_t x = seed;
  x ^= 0x9E3779B97F4A7C15ull * static_cast<uint64_t>(side * 2 + (dual ? 1 : 0));
  x ^= 0xBF58476D1CE4E5B9ull * static_cast<uint64_t>(level + 1);
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic down-selection that keeps the first and a uniform stride of
// the rest, preserving order.
template <typename T>
void cap_stride(std::vector<T>& v, size_t cap) {
  if (v.size() <= cap) return;
  std::vector<T> out;
  out.reserve(cap);
  const double step = static_cast<double>(v.size()) / static_cast<double>(cap);
  for (size_t i = 0; i < cap; ++i) out.push_back(std::move(v[static_cast<size_t>(i * step)]));
  v = std::move(out);
}

std::string entry_name(int side, bool dual) {
  return "side " + std::to_string(side) + (dual ? " dual" : " single");
}

GicEntry train_entry(int side, bool dual, std::vector<Image> maps, const CodecConfig& cfg) {
  GicEntry entry;
  entry.side = side;
  entry.dual = dual;

  int level_count = 1;
  for (int s = side; s > kPatchSide; s /= 2) ++level_count;

  cap_stride(maps, cfg.train_maps);

  // Per-map pyramids, coarsest first.
  std::vector<std::vector<Image>> pyr(maps.size());
  for (size_t i = 0; i < maps.size(); ++i) {
    pyr[i].resize(level_count);
    pyr[i][level_count - 1] = std::move(maps[i]);
    for (int l = level_count - 1; l > 0; --l) pyr[i][l - 1] = lanczos_downsample(pyr[i][l]);
  }

  std::vector<Image> recon(pyr.size());
  std::vector<Image> up(pyr.size());
  for (int l = 0; l < level_count; ++l) {
    // Target images for this level: content at the floor, residuals against
    // the upsampled reconstruction above it.
    std::vector<Image> targets(pyr.size());
    for (size_t i = 0; i < pyr.size(); ++i) {
      if (l == 0) {
        targets[i] = pyr[i][0];
      } else {
        up[i] = lanczos_upsample(recon[i]);
        targets[i] = Image(up[i].rows, up[i].cols);
        for (size_t k = 0; k < targets[i].px.size(); ++k)
          targets[i].px[k] = pyr[i][l].px[k] - up[i].px[k];
      }
    }

    std::vector<std::vector<double>> patches;
    for (const Image& t : targets) {
      auto ps = extract_patches(t);
      for (auto& p : ps) patches.push_back(std::move(p));
    }
    cap_stride(patches, cfg.train_samples);

    const uint32_t csize = cfg.codebook_sizes[l];
    const std::string where = entry_name(side, dual) + ", pyramid level " + std::to_string(l);
    if (patches.size() < csize)
      throw TrainingError("train_model: " + where + ": " + std::to_string(patches.size()) +
                          " patches for a codebook of " + std::to_string(csize));
    GicLevel lvl;
    try {
      lvl.transform = fit_saab(patches, kPatchDim);
      std::vector<std::vector<double>> coeffs;
      coeffs.reserve(patches.size());
      for (const auto& p : patches) coeffs.push_back(saab_forward(lvl.transform, p));
      lvl.codebook = train_codebook(coeffs, csize, mix_seed(cfg.seed, side, dual, l));
    } catch (const TrainingError& e) {
      throw TrainingError("train_model: " + where + ": " + e.what());
    }
    entry.levels.push_back(std::move(lvl));

    // Advance reconstructions through the freshly trained level.
    for (size_t i = 0; i < pyr.size(); ++i) {
      Image dec;
      code_patches(targets[i], entry.levels[l], &dec);
      if (l == 0) {
        recon[i] = std::move(dec);
      } else {
        recon[i] = std::move(up[i]);
        for (size_t k = 0; k < recon[i].px.size(); ++k) recon[i].px[k] += dec.px[k];
      }
    }
  }
  return entry;
}

// --- model file helpers ---

void put_u8(std::vector<uint8_t>& b, uint8_t v) { b.push_back(v); }
void put_u16(std::vector<uint8_t>& b, uint16_t v) {
  b.push_back(static_cast<uint8_t>(v));
  b.push_back(static_cast<uint8_t>(v >> 8));
}
void put_u32(std::vector<uint8_t>& b, uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void put_u64(std::vector<uint8_t>& b, uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
void put_f64(std::vector<uint8_t>& b, double v) { put_u64(b, std::bit_cast<uint64_t>(v)); }

class ByteCursor {
public:
  explicit ByteCursor(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  uint8_t u8() { return take(1)[0]; }
  uint16_t u16() {
    auto p = take(2);
    return static_cast<uint16_t>(p[0] | (p[1] << 8));
  }
  uint32_t u32() {
    auto p = take(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
    return v;
  }
  uint64_t u64() {
    auto p = take(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  size_t remaining() const { return bytes_.size() - pos_; }
  size_t pos() const { return pos_; }

private:
  std::span<const uint8_t> take(size_t n) {
    if (pos_ + n > bytes_.size())
      throw StreamError(StreamError::Kind::Truncated, "model file truncated");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

std::vector<uint8_t> serialize_model_body(const GicModel& m) {
  std::vector<uint8_t> b;
  b.push_back('G');
  b.push_back('I');
  b.push_back('C');
  b.push_back('M');
  put_u8(b, 1);  // version
  const CodecConfig& c = m.config;
  put_u8(b, static_cast<uint8_t>(c.bit_depth));
  put_u8(b, static_cast<uint8_t>(c.coarsest_side));
  put_u8(b, static_cast<uint8_t>(c.max_level));
  put_u8(b, static_cast<uint8_t>(c.thickness));
  put_u8(b, static_cast<uint8_t>(c.multipliers.size()));
  for (double mul : c.multipliers)
    put_u16(b, static_cast<uint16_t>(std::lround(mul * 100.0)));
  put_u8(b, static_cast<uint8_t>(c.codebook_sizes.size()));
  for (uint32_t s : c.codebook_sizes) put_u16(b, static_cast<uint16_t>(s));
  put_u64(b, c.seed);
  put_u32(b, c.train_samples);
  put_u32(b, c.train_maps);
  put_u8(b, static_cast<uint8_t>(m.entries.size()));
  for (const auto& [key, e] : m.entries) {
    (void)key;
    put_u8(b, static_cast<uint8_t>(e.side));
    put_u8(b, e.dual ? 1 : 0);
    put_u8(b, static_cast<uint8_t>(e.levels.size()));
    for (const GicLevel& lvl : e.levels) {
      put_u16(b, static_cast<uint16_t>(lvl.transform.dim));
      for (double v : lvl.transform.kernels) put_f64(b, v);
      for (double v : lvl.transform.eigenvalues) put_f64(b, v);
      put_u32(b, lvl.codebook.size());
      for (const auto& cw : lvl.codebook.codewords)
        for (double v : cw) put_f64(b, v);
    }
  }
  return b;
}

}  // namespace

int64_t GicEntry::payload_bits() const {
  int64_t bits = 0;
  for (int l = 0; l < level_count(); ++l)
    bits += static_cast<int64_t>(patches_at(l)) * levels[l].codebook.index_bits();
  return bits;
}

bool GicModel::has_entry(int side, bool dual) const {
  return entries.count(entry_key(side, dual)) != 0;
}

const GicEntry& GicModel::entry(int side, bool dual) const {
  auto it = entries.find(entry_key(side, dual));
  if (it == entries.end())
    throw ModelMismatchError("model has no coder for " + entry_name(side, dual) + " maps");
  return it->second;
}

int64_t GicModel::parameter_count() const {
  int64_t n = 0;
  for (const auto& [key, e] : entries) {
    (void)key;
    for (const GicLevel& lvl : e.levels) {
      n += static_cast<int64_t>(lvl.transform.dim) * lvl.transform.dim;
      n += static_cast<int64_t>(lvl.codebook.size()) * lvl.codebook.dim;
    }
  }
  return n;
}

namespace {

// Depth maps are integer-valued: round half up, clamp to the sentinel range.
void round_output(Image& img, int side) {
  for (double& v : img.px)
    v = std::clamp(std::floor(v + 0.5), -1.0, static_cast<double>(side));
}

}  // namespace

GicEncoded gic_encode(const Image& img, const GicEntry& entry, Image* decoder_view) {
  if (img.rows != entry.rows() || img.cols != entry.cols())
    throw DomainError("gic_encode: map shape does not match the model entry");
  const int level_count = entry.level_count();
  std::vector<Image> pyr(level_count);
  pyr[level_count - 1] = img;
  for (int l = level_count - 1; l > 0; --l) pyr[l - 1] = lanczos_downsample(pyr[l]);

  GicEncoded enc;
  enc.level_indices.resize(level_count);
  Image recon;
  enc.level_indices[0] = code_patches(pyr[0], entry.levels[0], &recon);
  for (int l = 1; l < level_count; ++l) {
    Image up = lanczos_upsample(recon);
    Image resid(up.rows, up.cols);
    for (size_t k = 0; k < resid.px.size(); ++k) resid.px[k] = pyr[l].px[k] - up.px[k];
    Image dec;
    enc.level_indices[l] = code_patches(resid, entry.levels[l], &dec);
    recon = std::move(up);
    for (size_t k = 0; k < recon.px.size(); ++k) recon.px[k] += dec.px[k];
  }
  if (decoder_view) {
    *decoder_view = std::move(recon);
    round_output(*decoder_view, entry.side);
  }
  return enc;
}

Image gic_decode(const GicEncoded& enc, const GicEntry& entry, int upto_level) {
  const int level_count = entry.level_count();
  if (static_cast<int>(enc.level_indices.size()) != level_count)
    throw StreamError(StreamError::Kind::Truncated, "gic_decode: pyramid level count mismatch");
  for (int l = 0; l < level_count; ++l)
    if (static_cast<int>(enc.level_indices[l].size()) != entry.patches_at(l))
      throw StreamError(StreamError::Kind::Truncated, "gic_decode: index count mismatch");
  if (upto_level < 0 || upto_level >= level_count) upto_level = level_count - 1;

  Image recon =
      decode_patches(enc.level_indices[0], entry.levels[0], entry.rows_at(0), entry.cols_at(0));
  for (int l = 1; l < level_count; ++l) {
    recon = lanczos_upsample(recon);
    if (l <= upto_level) {
      const Image dec = decode_patches(enc.level_indices[l], entry.levels[l], recon.rows, recon.cols);
      for (size_t k = 0; k < recon.px.size(); ++k) recon.px[k] += dec.px[k];
    }
  }
  round_output(recon, entry.side);
  return recon;
}

Image compose_map(const std::vector<int>& near, const std::vector<int>& far, int side,
                  bool dual) {
  Image img(side, dual ? 2 * side : side);
  for (int v = 0; v < side; ++v)
    for (int u = 0; u < side; ++u) {
      img.at(v, u) = near[static_cast<size_t>(v) * side + u];
      if (dual) img.at(v, side + u) = far[static_cast<size_t>(v) * side + u];
    }
  return img;
}

void split_map(const Image& img, int side, bool dual, std::vector<int>* near,
               std::vector<int>* far) {
  near->assign(static_cast<size_t>(side) * side, 0);
  far->assign(static_cast<size_t>(side) * side, 0);
  for (int v = 0; v < side; ++v)
    for (int u = 0; u < side; ++u) {
      const int n = static_cast<int>(img.at(v, u));
      (*near)[static_cast<size_t>(v) * side + u] = n;
      (*far)[static_cast<size_t>(v) * side + u] = dual ? static_cast<int>(img.at(v, side + u)) : n;
    }
}

GicModel train_model(const std::vector<PointCloud>& clouds, const CodecConfig& cfg) {
  validate_config(cfg);
  if (clouds.empty()) throw TrainingError("train_model: no training data");

  // Harvest one codable map from every tree node of every cloud.
  std::map<int, std::vector<Image>> maps;
  for (const PointCloud& raw : clouds) {
    const PointCloud pc = voxelize(raw, cfg.bit_depth);
    if (pc.empty()) continue;
    const Octree tree = build_octree(pc, cfg.coarsest_side, cfg.max_level);
    for (const Octree::Node& node : tree.nodes()) {
      const int side = tree.side_of(node.key.level);
      const std::vector<Point3> locals = tree.local_points(node);
      const Axis axis = select_axis(locals, side);
      const DepthMapSet dms = project(locals, axis, side);
      if (node.key.level != cfg.max_level && !is_projectable(dms, locals, cfg.thickness))
        continue;  // never coded at this level, so never a training sample
      const OccupancyMode mode = select_mode(dms.occupancy, side);
      const FilledMaps filled = fill_depth(dms, mode);
      maps[GicModel::entry_key(side, dms.dual)].push_back(
          compose_map(filled.near, filled.far, side, dms.dual));
    }
  }
  if (maps.empty()) throw TrainingError("train_model: no training data");

  GicModel model;
  model.config = cfg;
  for (auto& [key, entry_maps] : maps) {
    const int side = key / 2;
    const bool dual = (key % 2) != 0;
    model.entries[key] = train_entry(side, dual, std::move(entry_maps), cfg);
  }

  const std::vector<uint8_t> bytes = serialize_model(model);
  uint64_t hash = 0;
  for (int i = 0; i < 8; ++i)
    hash |= static_cast<uint64_t>(bytes[bytes.size() - 8 + i]) << (8 * i);
  model.model_hash = hash;
  return model;
}

std::vector<uint8_t> serialize_model(const GicModel& model) {
  std::vector<uint8_t> b = serialize_model_body(model);
  put_u64(b, fnv1a64(b.data(), b.size()));
  return b;
}

GicModel deserialize_model(std::span<const uint8_t> bytes) {
  if (bytes.size() < 12 || bytes[0] != 'G' || bytes[1] != 'I' || bytes[2] != 'C' ||
      bytes[3] != 'M')
    throw StreamError(StreamError::Kind::BadMagic, "not a model file");
  const uint64_t stored = [&] {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(bytes[bytes.size() - 8 + i]) << (8 * i);
    return v;
  }();
  if (fnv1a64(bytes.data(), bytes.size() - 8) != stored)
    throw StreamError(StreamError::Kind::Corrupt, "model file digest mismatch");

  ByteCursor cur(bytes.first(bytes.size() - 8));
  cur.u32();  // magic, already checked
  const uint8_t version = cur.u8();
  if (version != 1)
    throw StreamError(StreamError::Kind::UnsupportedVersion,
                      "unsupported model version " + std::to_string(version));
  GicModel m;
  m.model_hash = stored;
  CodecConfig& c = m.config;
  c.bit_depth = cur.u8();
  c.coarsest_side = cur.u8();
  c.max_level = cur.u8();
  c.thickness = cur.u8();
  c.multipliers.assign(cur.u8(), 0.0);
  for (double& mul : c.multipliers) mul = cur.u16() / 100.0;
  c.codebook_sizes.assign(cur.u8(), 0);
  for (uint32_t& s : c.codebook_sizes) s = cur.u16();
  c.seed = cur.u64();
  c.train_samples = cur.u32();
  c.train_maps = cur.u32();
  try {
    validate_config(c);
  } catch (const DomainError& e) {
    throw StreamError(StreamError::Kind::Corrupt, std::string("model config invalid: ") + e.what());
  }
  const int entry_count = cur.u8();
  for (int i = 0; i < entry_count; ++i) {
    GicEntry e;
    e.side = cur.u8();
    e.dual = cur.u8() != 0;
    if (e.side < kPatchSide || (e.side & (e.side - 1)) != 0)
      throw StreamError(StreamError::Kind::Corrupt, "model entry side invalid");
    const int levels = cur.u8();
    int expect = 1;
    for (int s = e.side; s > kPatchSide; s /= 2) ++expect;
    if (levels != expect)
      throw StreamError(StreamError::Kind::Corrupt, "model entry level count invalid");
    for (int l = 0; l < levels; ++l) {
      GicLevel lvl;
      lvl.transform.dim = cur.u16();
      if (lvl.transform.dim != kPatchDim)
        throw StreamError(StreamError::Kind::Corrupt, "model transform dimension invalid");
      lvl.transform.kernels.resize(static_cast<size_t>(kPatchDim) * kPatchDim);
      for (double& v : lvl.transform.kernels) v = cur.f64();
      lvl.transform.eigenvalues.resize(kPatchDim);
      for (double& v : lvl.transform.eigenvalues) v = cur.f64();
      const uint32_t csize = cur.u32();
      if (csize == 0 || (csize & (csize - 1)) != 0 || csize > 65535)
        throw StreamError(StreamError::Kind::Corrupt, "model codebook size invalid");
      lvl.codebook.dim = kPatchDim;
      lvl.codebook.codewords.assign(csize, std::vector<double>(kPatchDim, 0.0));
      for (auto& cw : lvl.codebook.codewords)
        for (double& v : cw) v = cur.f64();
      e.levels.push_back(std::move(lvl));
    }
    m.entries[GicModel::entry_key(e.side, e.dual)] = std::move(e);
  }
  if (cur.remaining() != 0)
    throw StreamError(StreamError::Kind::Corrupt, "model file has trailing bytes");
  return m;
}

void save_model_file(const GicModel& model, const std::string& path) {
  const std::vector<uint8_t> bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DomainError("write failed: " + path);
}

GicModel load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open model file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

uint64_t fnv1a64(const uint8_t* data, std::size_t n) {
  uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a 64-bit offset basis
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 0x100000001b3ull;  // FNV 64-bit prime
  }
  return h;
}

}  // namespace gpcgc

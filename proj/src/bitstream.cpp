#include "gpcgc/bitstream.hpp"

#include <cmath>
#include <string>

namespace gpcgc {
namespace {

constexpr uint8_t kMagic[4] = {'G', 'P', 'C', 'G'};

void put_le(BitWriter& bw, uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) bw.put_bits((value >> (8 * i)) & 0xFF, 8);
}

uint64_t get_le(BitReader& br, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= br.get_bits(8) << (8 * i);
  return v;
}

void write_header(BitWriter& bw, const StreamHeader& h) {
  for (uint8_t m : kMagic) bw.put_bits(m, 8);
  bw.put_bits(h.version, 8);
  bw.put_bits(static_cast<uint64_t>(h.bit_depth), 8);
  bw.put_bits(static_cast<uint64_t>(h.coarsest_side), 8);
  bw.put_bits(static_cast<uint64_t>(h.max_level), 8);
  put_le(bw, static_cast<uint64_t>(h.dims.nx), 2);
  put_le(bw, static_cast<uint64_t>(h.dims.ny), 2);
  put_le(bw, static_cast<uint64_t>(h.dims.nz), 2);
  put_le(bw, h.model_hash, 8);
  bw.put_bits(static_cast<uint64_t>(h.thickness), 8);
  bw.put_bits(h.codebook_sizes.size(), 8);
  for (uint32_t s : h.codebook_sizes) put_le(bw, s, 2);
  bw.put_bits(h.multipliers.size(), 8);
  for (double m : h.multipliers)
    put_le(bw, static_cast<uint64_t>(std::lround(m * 100.0)), 2);
  put_le(bw, h.payload_bit_count, 8);
}

void corrupt_if(bool bad, const std::string& what) {
  if (bad) throw StreamError(StreamError::Kind::Corrupt, "stream " + what);
}

void check_magic(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4 || bytes[0] != kMagic[0] || bytes[1] != kMagic[1] ||
      bytes[2] != kMagic[2] || bytes[3] != kMagic[3])
    throw StreamError(StreamError::Kind::BadMagic, "not a coded stream");
}

// Reads every header field after the (already checked) magic.
StreamHeader read_header_fields(BitReader& br) {
  StreamHeader h;
  h.version = static_cast<uint8_t>(br.get_bits(8));
  if (h.version != 1)
    throw StreamError(StreamError::Kind::UnsupportedVersion,
                      "unsupported stream version " + std::to_string(h.version));
  h.bit_depth = static_cast<int>(br.get_bits(8));
  h.coarsest_side = static_cast<int>(br.get_bits(8));
  h.max_level = static_cast<int>(br.get_bits(8));
  h.dims.nx = static_cast<int>(get_le(br, 2));
  h.dims.ny = static_cast<int>(get_le(br, 2));
  h.dims.nz = static_cast<int>(get_le(br, 2));
  h.model_hash = get_le(br, 8);
  h.thickness = static_cast<int>(br.get_bits(8));
  h.codebook_sizes.assign(br.get_bits(8), 0);
  for (uint32_t& s : h.codebook_sizes) s = static_cast<uint32_t>(get_le(br, 2));
  h.multipliers.assign(br.get_bits(8), 0.0);
  for (double& m : h.multipliers) m = static_cast<double>(get_le(br, 2)) / 100.0;
  h.payload_bit_count = get_le(br, 8);
  return h;
}

// Structure parsing is only safe for sane geometry fields; a stream that
// passed the config echo checks always satisfies these.
void check_geometry(const StreamHeader& h) {
  corrupt_if(h.coarsest_side < 4 || h.coarsest_side > 128 ||
                 (h.coarsest_side & (h.coarsest_side - 1)) != 0,
             "coarsest side invalid");
  corrupt_if(h.max_level < 0 || h.max_level > 7 || (h.coarsest_side >> h.max_level) < 4,
             "max level invalid");
  corrupt_if(h.dims.nx < 1 || h.dims.ny < 1 || h.dims.nz < 1, "grid dimensions invalid");
}

}  // namespace

int64_t StreamHeader::header_bits() const {
  // magic 4 + version/bit_depth/coarsest_side/max_level/thickness 5 + two
  // schedule counts = 11 single bytes; dims 6; hash 8; payload count 8; plus
  // 2 bytes per schedule entry.
  return 8 * (11 + 6 + 8 + 8 + 2 * static_cast<int64_t>(codebook_sizes.size()) +
              2 * static_cast<int64_t>(multipliers.size()));
}

std::vector<uint8_t> write_stream(const StreamHeader& header, const Octree& tree,
                                  const std::vector<const LeafEncoding*>& leaves,
                                  const GicModel& model, int64_t* total_bits_out) {
  const std::vector<uint32_t> leaf_ids = tree.decision_leaves();
  if (leaf_ids.size() != leaves.size())
    throw DomainError("write_stream: leaf count does not match the tree's decisions");

  BitWriter bw;
  write_header(bw, header);
  append_structure_bits(tree, bw);
  for (size_t i = 0; i < leaves.size(); ++i) {
    const LeafEncoding& leaf = *leaves[i];
    const int side = tree.side_of(tree.nodes()[leaf_ids[i]].key.level);
    const GicEntry& entry = model.entry(side, leaf.dual);
    bw.put_bits(static_cast<uint64_t>(leaf.axis), 2);
    bw.put_bits(static_cast<uint64_t>(leaf.mode), 4);
    bw.put_bit(leaf.dummy_high);
    bw.put_bit(leaf.dual);
    for (int l = 0; l < entry.level_count(); ++l) {
      const int width = entry.levels[l].codebook.index_bits();
      for (uint32_t idx : leaf.payload.level_indices[l]) bw.put_bits(idx, width);
    }
  }
  if (total_bits_out) *total_bits_out = static_cast<int64_t>(bw.bit_count());
  return bw.finish();
}

ParsedStream read_stream(std::span<const uint8_t> bytes, const GicModel& model) {
  check_magic(bytes);
  BitReader br(bytes);
  br.get_bits(32);
  ParsedStream out;
  StreamHeader& h = out.header;
  h = read_header_fields(br);

  if (h.model_hash != model.model_hash)
    throw ModelMismatchError("stream was encoded with a different model");
  const CodecConfig& cfg = model.config;
  corrupt_if(h.bit_depth != cfg.bit_depth, "bit depth disagrees with the model");
  corrupt_if(h.coarsest_side != cfg.coarsest_side, "coarsest side disagrees with the model");
  corrupt_if(h.max_level != cfg.max_level, "max level disagrees with the model");
  corrupt_if(h.thickness != cfg.thickness, "thickness disagrees with the model");
  corrupt_if(h.codebook_sizes != cfg.codebook_sizes, "codebook schedule disagrees with the model");
  corrupt_if(h.multipliers.size() != cfg.multipliers.size(),
             "multiplier count disagrees with the model");
  for (size_t i = 0; i < h.multipliers.size(); ++i)
    corrupt_if(std::lround(h.multipliers[i] * 100.0) != std::lround(cfg.multipliers[i] * 100.0),
               "multiplier ladder disagrees with the model");
  const int expect_dim =
      std::max(1, (1 << h.bit_depth) / h.coarsest_side);
  corrupt_if(h.dims.nx != expect_dim || h.dims.ny != expect_dim || h.dims.nz != expect_dim,
             "grid dimensions disagree with the header depth");
  corrupt_if(h.payload_bit_count > bytes.size() * 8ull, "payload longer than the file");

  const std::vector<VoxelKey> keys =
      parse_structure(br, h.dims, h.coarsest_side, h.max_level);

  const uint64_t payload_start = br.bits_read();
  out.leaves.reserve(keys.size());
  for (const VoxelKey& key : keys) {
    LeafRecord rec;
    rec.key = key;
    const uint64_t axis = br.get_bits(2);
    corrupt_if(axis > 2, "projection axis out of range");
    rec.axis = static_cast<Axis>(axis);
    const uint64_t mode = br.get_bits(4);
    corrupt_if(mode >= kNumOccupancyModes, "occupancy mode out of range");
    rec.mode = static_cast<OccupancyMode>(mode);
    rec.dummy_high = br.get_bit();
    rec.dual = br.get_bit();
    const int side = h.coarsest_side >> key.level;
    const GicEntry& entry = model.entry(side, rec.dual);
    rec.payload.level_indices.resize(entry.level_count());
    for (int l = 0; l < entry.level_count(); ++l) {
      const int width = entry.levels[l].codebook.index_bits();
      rec.payload.level_indices[l].resize(entry.patches_at(l));
      for (uint32_t& idx : rec.payload.level_indices[l])
        idx = static_cast<uint32_t>(br.get_bits(width));
    }
    out.leaves.push_back(std::move(rec));
  }
  corrupt_if(br.bits_read() - payload_start != h.payload_bit_count,
             "payload length disagrees with the header");
  out.total_bits = static_cast<int64_t>(br.bits_read());
  corrupt_if(bytes.size() != (static_cast<uint64_t>(out.total_bits) + 7) / 8,
             "length disagrees with the coded size");
  return out;
}

int64_t stream_bit_count(std::span<const uint8_t> bytes) {
  check_magic(bytes);
  BitReader br(bytes);
  br.get_bits(32);
  const StreamHeader h = read_header_fields(br);
  check_geometry(h);
  corrupt_if(h.payload_bit_count > bytes.size() * 8ull, "payload longer than the file");
  parse_structure(br, h.dims, h.coarsest_side, h.max_level);
  const uint64_t total = br.bits_read() + h.payload_bit_count;
  corrupt_if(bytes.size() != (total + 7) / 8, "length disagrees with the coded size");
  return static_cast<int64_t>(total);
}

}  // namespace gpcgc

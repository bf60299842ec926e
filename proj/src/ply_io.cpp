#include "gpcgc/ply_io.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace gpcgc {
namespace {

enum class ScalarType { I8, U8, I16, U16, I32, U32, F32, F64 };

std::size_t scalar_size(ScalarType t) {
  switch (t) {
    case ScalarType::I8:
    case ScalarType::U8: return 1;
    case ScalarType::I16:
    case ScalarType::U16: return 2;
    case ScalarType::I32:
    case ScalarType::U32:
    case ScalarType::F32: return 4;
    case ScalarType::F64: return 8;
  }
  return 0;
}

bool parse_scalar_type(const std::string& token, ScalarType* out) {
  if (token == "char" || token == "int8") *out = ScalarType::I8;
  else if (token == "uchar" || token == "uint8") *out = ScalarType::U8;
  else if (token == "short" || token == "int16") *out = ScalarType::I16;
  else if (token == "ushort" || token == "uint16") *out = ScalarType::U16;
  else if (token == "int" || token == "int32") *out = ScalarType::I32;
  else if (token == "uint" || token == "uint32") *out = ScalarType::U32;
  else if (token == "float" || token == "float32") *out = ScalarType::F32;
  else if (token == "double" || token == "float64") *out = ScalarType::F64;
  else return false;
  return true;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::F32;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
  bool has_list = false;
};

// Round to nearest integer, ties to even.
int64_t round_half_even(double v) {
  const double f = std::floor(v);
  const double frac = v - f;
  if (frac > 0.5) return static_cast<int64_t>(f) + 1;
  if (frac < 0.5) return static_cast<int64_t>(f);
  const int64_t lo = static_cast<int64_t>(f);
  return (lo % 2 == 0) ? lo : lo + 1;
}

class Cursor {
public:
  explicit Cursor(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= bytes_.size(); }

  // Reads one header line (terminated by '\n', optional trailing '\r').
  std::string read_line() {
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
    if (pos_ >= bytes_.size())
      throw PlyError("malformed header: unterminated line", start);
    std::string line(reinterpret_cast<const char*>(bytes_.data() + start), pos_ - start);
    ++pos_;  // consume '\n'
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

  const uint8_t* take(std::size_t n) {
    if (pos_ + n > bytes_.size())
      throw PlyError("truncated payload", pos_);
    const uint8_t* p = bytes_.data() + pos_;
    pos_ += n;
    return p;
  }

  // ASCII token scanning.
  std::string next_token() {
    while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
    if (pos_ >= bytes_.size())
      throw PlyError("truncated payload: expected value", pos_);
    std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) ++pos_;
    return std::string(reinterpret_cast<const char*>(bytes_.data() + start), pos_ - start);
  }

private:
  std::span<const uint8_t> bytes_;
  std::size_t pos_ = 0;
};

double read_binary_scalar(Cursor& cur, ScalarType t) {
  const uint8_t* p = cur.take(scalar_size(t));
  switch (t) {
    case ScalarType::I8: return static_cast<int8_t>(p[0]);
    case ScalarType::U8: return p[0];
    case ScalarType::I16: {
      int16_t v;
      std::memcpy(&v, p, 2);
      return v;
    }
    case ScalarType::U16: {
      uint16_t v;
      std::memcpy(&v, p, 2);
      return v;
    }
    case ScalarType::I32: {
      int32_t v;
      std::memcpy(&v, p, 4);
      return v;
    }
    case ScalarType::U32: {
      uint32_t v;
      std::memcpy(&v, p, 4);
      return v;
    }
    case ScalarType::F32: {
      float v;
      std::memcpy(&v, p, 4);
      return v;
    }
    case ScalarType::F64: {
      double v;
      std::memcpy(&v, p, 8);
      return v;
    }
  }
  return 0.0;
}

double parse_ascii_scalar(const std::string& tok, std::size_t offset) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw PlyError("malformed numeric token '" + tok + "'", offset);
  }
}

int32_t to_coordinate(double v, ScalarType t, std::size_t offset) {
  int64_t c;
  if (t == ScalarType::F32 || t == ScalarType::F64) {
    if (!std::isfinite(v)) throw PlyError("non-finite coordinate", offset);
    c = round_half_even(v);
  } else {
    c = static_cast<int64_t>(v);
  }
  if (c < 0) throw PlyError("negative coordinate unsupported", offset);
  if (c >= (int64_t{1} << 30)) throw PlyError("coordinate exceeds 2^30", offset);
  return static_cast<int32_t>(c);
}

}  // namespace

PointCloud read_ply(std::span<const uint8_t> bytes) {
  Cursor cur(bytes);

  if (cur.read_line() != "ply")
    throw PlyError("malformed header: missing 'ply' magic", 0);

  bool format_seen = false;
  bool binary = false;
  std::vector<Element> elements;

  for (;;) {
    const std::size_t line_off = cur.offset();
    std::string line = cur.read_line();
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw.empty() || kw == "comment" || kw == "obj_info") continue;
    if (kw == "format") {
      std::string fmt, ver;
      ls >> fmt >> ver;
      if (fmt == "ascii") binary = false;
      else if (fmt == "binary_little_endian") binary = true;
      else throw PlyError("unsupported format token '" + fmt + "'", line_off);
      if (ver != "1.0")
        throw PlyError("unsupported PLY version '" + ver + "'", line_off);
      format_seen = true;
    } else if (kw == "element") {
      Element e;
      long long n = -1;
      ls >> e.name >> n;
      if (e.name.empty() || n < 0)
        throw PlyError("malformed element declaration", line_off);
      e.count = static_cast<std::size_t>(n);
      elements.push_back(std::move(e));
    } else if (kw == "property") {
      if (elements.empty())
        throw PlyError("property before any element", line_off);
      std::string t1;
      ls >> t1;
      if (t1 == "list") {
        elements.back().has_list = true;
        continue;
      }
      Property p;
      if (!parse_scalar_type(t1, &p.type))
        throw PlyError("unsupported property type '" + t1 + "'", line_off);
      ls >> p.name;
      if (p.name.empty())
        throw PlyError("malformed property declaration", line_off);
      elements.back().properties.push_back(std::move(p));
    } else if (kw == "end_header") {
      break;
    } else {
      throw PlyError("malformed header: unknown keyword '" + kw + "'", line_off);
    }
  }
  if (!format_seen)
    throw PlyError("malformed header: missing format line", cur.offset());

  std::vector<Point3> pts;
  for (const Element& e : elements) {
    const bool is_vertex = (e.name == "vertex");
    if (is_vertex) {
      if (e.has_list)
        throw PlyError("unsupported list property in vertex element", cur.offset());
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        if (e.properties[i].name == "x") ix = static_cast<int>(i);
        if (e.properties[i].name == "y") iy = static_cast<int>(i);
        if (e.properties[i].name == "z") iz = static_cast<int>(i);
      }
      if (ix < 0 || iy < 0 || iz < 0)
        throw PlyError("vertex element lacks x/y/z properties", cur.offset());
      pts.reserve(e.count);
      for (std::size_t v = 0; v < e.count; ++v) {
        int32_t coord[3] = {0, 0, 0};
        for (std::size_t pi = 0; pi < e.properties.size(); ++pi) {
          const std::size_t off = cur.offset();
          double raw = binary ? read_binary_scalar(cur, e.properties[pi].type)
                              : parse_ascii_scalar(cur.next_token(), off);
          int slot = (static_cast<int>(pi) == ix) ? 0
                   : (static_cast<int>(pi) == iy) ? 1
                   : (static_cast<int>(pi) == iz) ? 2
                                                  : -1;
          if (slot >= 0) coord[slot] = to_coordinate(raw, e.properties[pi].type, off);
        }
        pts.push_back({coord[0], coord[1], coord[2]});
      }
      break;  // remaining elements are irrelevant to the geometry
    }
    // Skip a non-vertex element that precedes the vertex element.
    if (e.has_list)
      throw PlyError("unsupported list property before vertex element", cur.offset());
    std::size_t row = 0;
    for (const Property& p : e.properties) row += scalar_size(p.type);
    for (std::size_t v = 0; v < e.count; ++v) {
      if (binary) {
        cur.take(row);
      } else {
        for (std::size_t pi = 0; pi < e.properties.size(); ++pi) cur.next_token();
      }
    }
  }

  return PointCloud::from_points(std::move(pts));
}

std::vector<uint8_t> write_ply(const PointCloud& pc, PlyFormat format) {
  std::ostringstream out;
  out << "ply\n"
      << (format == PlyFormat::Ascii ? "format ascii 1.0\n"
                                     : "format binary_little_endian 1.0\n")
      << "element vertex " << pc.size() << "\n"
      << "property int x\nproperty int y\nproperty int z\n"
      << "end_header\n";
  if (format == PlyFormat::Ascii) {
    for (const auto& p : pc.points())
      out << p.x << " " << p.y << " " << p.z << "\n";
  } else {
    for (const auto& p : pc.points()) {
      for (int32_t c : {p.x, p.y, p.z}) {
        char buf[4];
        std::memcpy(buf, &c, 4);
        out.write(buf, 4);
      }
    }
  }
  const std::string s = out.str();
  return std::vector<uint8_t>(s.begin(), s.end());
}

PointCloud read_ply_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  return read_ply(bytes);
}

void write_ply_file(const std::string& path, const PointCloud& pc, PlyFormat format) {
  const auto bytes = write_ply(pc, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path);
}

}  // namespace gpcgc

#include "surfkit/geometry/cloud_io.hpp"

#include "surfkit/error.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace surfkit::geom {
namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw Error(Errc::ParseError, path.string() + ":" + std::to_string(line) + ": " + what);
}

bool parse_double(std::string_view tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_int(std::string_view tok, long long& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

LengthUnit parse_unit(std::string_view token) {
  const auto u = lower(std::string(trim(token)));
  if (u == "mm") return LengthUnit::Millimeter;
  if (u == "m") return LengthUnit::Meter;
  throw Error(Errc::UnitError, "unknown unit declaration '" + std::string(token) + "'");
}

double scale_of(LengthUnit u) { return u == LengthUnit::Millimeter ? 1e-3 : 1.0; }

// Recognizes "unit: mm" / "unit mm" after a comment marker.
std::optional<std::string_view> unit_directive(std::string_view body) {
  body = trim(body);
  if (body.size() < 4) return std::nullopt;
  if (lower(std::string(body.substr(0, 4))) != "unit") return std::nullopt;
  body.remove_prefix(4);
  body = trim(body);
  if (!body.empty() && body.front() == ':') body.remove_prefix(1);
  return trim(body);
}

void check_line_contiguity(const std::filesystem::path& path, const std::vector<int>& ids,
                           const std::vector<std::size_t>& source_lines) {
  std::map<int, bool> closed;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    if (ids[i] != ids[i - 1]) {
      closed[ids[i - 1]] = true;
      if (closed.count(ids[i]))
        parse_fail(path, source_lines[i], "scan line " + std::to_string(ids[i]) + " is not contiguous");
    }
  }
}

PointCloud load_xyz(const std::filesystem::path& path, std::optional<LengthUnit> unit_override) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  PointCloud cloud;
  cloud.meta.source_id = path.filename().string();
  LengthUnit unit = LengthUnit::Millimeter;
  std::vector<int> ids;
  std::vector<std::size_t> source_lines;
  int columns = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      if (auto u = unit_directive(body.substr(1))) unit = parse_unit(*u);
      continue;
    }
    const auto tokens = split_ws(body);
    if (tokens.size() != 3 && tokens.size() != 4)
      parse_fail(path, lineno, "expected 3 or 4 columns, found " + std::to_string(tokens.size()));
    if (columns == 0) columns = static_cast<int>(tokens.size());
    if (static_cast<int>(tokens.size()) != columns) parse_fail(path, lineno, "inconsistent column count");
    Point3 p;
    for (int k = 0; k < 3; ++k) {
      if (!parse_double(tokens[k], p[k]))
        parse_fail(path, lineno, "invalid coordinate '" + std::string(tokens[k]) + "'");
    }
    cloud.points.push_back(p);
    if (columns == 4) {
      long long id = 0;
      if (!parse_int(tokens[3], id) || id < 0 || id > INT32_MAX)
        parse_fail(path, lineno, "invalid scan-line id '" + std::string(tokens[3]) + "'");
      ids.push_back(static_cast<int>(id));
      source_lines.push_back(lineno);
    }
  }
  if (unit_override) unit = *unit_override;
  cloud.meta.declared_unit = unit;
  const double s = scale_of(unit);
  if (s != 1.0) {
    for (auto& p : cloud.points) p *= s;
  }
  if (columns == 4) {
    check_line_contiguity(path, ids, source_lines);
    cloud.line_index = std::move(ids);
  }
  return cloud;
}

enum class PlyType { I8, U8, I16, U16, I32, U32, F32, F64 };

std::optional<PlyType> ply_type(std::string_view name) {
  static const std::map<std::string, PlyType, std::less<>> table = {
      {"char", PlyType::I8},     {"int8", PlyType::I8},      {"uchar", PlyType::U8},
      {"uint8", PlyType::U8},    {"short", PlyType::I16},    {"int16", PlyType::I16},
      {"ushort", PlyType::U16},  {"uint16", PlyType::U16},   {"int", PlyType::I32},
      {"int32", PlyType::I32},   {"uint", PlyType::U32},     {"uint32", PlyType::U32},
      {"float", PlyType::F32},   {"float32", PlyType::F32},  {"double", PlyType::F64},
      {"float64", PlyType::F64}};
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::size_t ply_size(PlyType t) {
  switch (t) {
    case PlyType::I8: case PlyType::U8: return 1;
    case PlyType::I16: case PlyType::U16: return 2;
    case PlyType::I32: case PlyType::U32: case PlyType::F32: return 4;
    case PlyType::F64: return 8;
  }
  return 0;
}

double read_binary(const char* p, PlyType t) {
  switch (t) {
    case PlyType::I8: { std::int8_t v; std::memcpy(&v, p, 1); return v; }
    case PlyType::U8: { std::uint8_t v; std::memcpy(&v, p, 1); return v; }
    case PlyType::I16: { std::int16_t v; std::memcpy(&v, p, 2); return v; }
    case PlyType::U16: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
    case PlyType::I32: { std::int32_t v; std::memcpy(&v, p, 4); return v; }
    case PlyType::U32: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
    case PlyType::F32: { float v; std::memcpy(&v, p, 4); return v; }
    case PlyType::F64: { double v; std::memcpy(&v, p, 8); return v; }
  }
  return 0.0;
}

struct PlyProperty {
  std::string name;
  PlyType type;
};

PointCloud load_ply(const std::filesystem::path& path, std::optional<LengthUnit> unit_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::string line;
  std::size_t lineno = 0;
  auto next_header_line = [&]() {
    if (!std::getline(in, line)) parse_fail(path, lineno, "unexpected end of header");
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  next_header_line();
  if (trim(line) != "ply") parse_fail(path, lineno, "missing 'ply' magic");

  bool binary = false;
  LengthUnit unit = LengthUnit::Meter;
  std::size_t vertex_count = 0;
  bool in_vertex = false;
  bool seen_vertex = false;
  bool vertex_first = true;
  std::vector<PlyProperty> props;
  for (;;) {
    next_header_line();
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    const auto kw = tokens[0];
    if (kw == "end_header") break;
    if (kw == "format") {
      if (tokens.size() < 2) parse_fail(path, lineno, "malformed format line");
      if (tokens[1] == "ascii") binary = false;
      else if (tokens[1] == "binary_little_endian") binary = true;
      else parse_fail(path, lineno, "unsupported PLY format '" + std::string(tokens[1]) + "'");
    } else if (kw == "comment" || kw == "obj_info") {
      auto body = trim(std::string_view(line).substr(kw.size()));
      if (auto u = unit_directive(body)) unit = parse_unit(*u);
    } else if (kw == "element") {
      if (tokens.size() != 3) parse_fail(path, lineno, "malformed element line");
      in_vertex = tokens[1] == "vertex";
      if (in_vertex) {
        long long n = 0;
        if (!parse_int(tokens[2], n) || n < 0) parse_fail(path, lineno, "invalid vertex count");
        vertex_count = static_cast<std::size_t>(n);
        seen_vertex = true;
      } else if (!seen_vertex) {
        vertex_first = false;
      }
    } else if (kw == "property") {
      if (!in_vertex) continue;
      if (tokens.size() != 3) parse_fail(path, lineno, "list properties are not supported on vertices");
      auto t = ply_type(tokens[1]);
      if (!t) parse_fail(path, lineno, "unknown property type '" + std::string(tokens[1]) + "'");
      props.push_back({std::string(tokens[2]), *t});
    } else {
      parse_fail(path, lineno, "unexpected header keyword '" + std::string(kw) + "'");
    }
  }
  if (!seen_vertex) parse_fail(path, lineno, "no vertex element");
  if (!vertex_first) parse_fail(path, lineno, "vertex element must be the first element");

  auto find = [&](std::string_view n) -> int {
    for (std::size_t i = 0; i < props.size(); ++i)
      if (props[i].name == n) return static_cast<int>(i);
    return -1;
  };
  const int ix = find("x"), iy = find("y"), iz = find("z");
  if (ix < 0 || iy < 0 || iz < 0) parse_fail(path, lineno, "vertex element lacks x/y/z");
  const int inx = find("nx"), iny = find("ny"), inz = find("nz");
  const bool has_normals = inx >= 0 && iny >= 0 && inz >= 0;
  const int iline = find("line_id");

  PointCloud cloud;
  cloud.meta.source_id = path.filename().string();
  cloud.points.resize(vertex_count);
  std::vector<Vec3> normals;
  std::vector<int> ids;
  std::vector<std::size_t> source_lines;
  if (has_normals) normals.resize(vertex_count);
  if (iline >= 0) ids.resize(vertex_count);
  std::vector<double> values(props.size());

  auto store = [&](std::size_t i, std::size_t where) {
    cloud.points[i] = Point3(values[ix], values[iy], values[iz]);
    if (!cloud.points[i].allFinite()) parse_fail(path, where, "non-finite coordinate");
    if (has_normals) normals[i] = Vec3(values[inx], values[iny], values[inz]);
    if (iline >= 0) {
      const double v = values[iline];
      if (v < 0 || v != std::floor(v)) parse_fail(path, where, "invalid line_id");
      ids[i] = static_cast<int>(v);
    }
  };

  if (binary) {
    std::size_t stride = 0;
    for (const auto& p : props) stride += ply_size(p.type);
    std::vector<char> buf(stride);
    for (std::size_t i = 0; i < vertex_count; ++i) {
      if (!in.read(buf.data(), static_cast<std::streamsize>(stride)))
        parse_fail(path, lineno, "truncated binary vertex data at vertex " + std::to_string(i));
      std::size_t off = 0;
      for (std::size_t k = 0; k < props.size(); ++k) {
        values[k] = read_binary(buf.data() + off, props[k].type);
        off += ply_size(props[k].type);
      }
      store(i, lineno);
    }
    if (iline >= 0) source_lines.assign(vertex_count, lineno);
  } else {
    std::size_t i = 0;
    while (i < vertex_count) {
      if (!std::getline(in, line)) parse_fail(path, lineno, "truncated vertex data");
      ++lineno;
      const auto tokens = split_ws(line);
      if (tokens.empty()) continue;
      if (tokens.size() != props.size())
        parse_fail(path, lineno, "expected " + std::to_string(props.size()) + " values");
      for (std::size_t k = 0; k < props.size(); ++k) {
        if (!parse_double(tokens[k], values[k]))
          parse_fail(path, lineno, "invalid value '" + std::string(tokens[k]) + "'");
      }
      store(i, lineno);
      if (iline >= 0) source_lines.push_back(lineno);
      ++i;
    }
  }

  if (unit_override) unit = *unit_override;
  cloud.meta.declared_unit = unit;
  const double s = scale_of(unit);
  if (s != 1.0) {
    for (auto& p : cloud.points) p *= s;
  }
  if (has_normals) {
    for (auto& n : normals) {
      const double len = n.norm();
      if (len > 0) n /= len;
    }
    cloud.normals = std::move(normals);
  }
  if (iline >= 0) {
    check_line_contiguity(path, ids, source_lines);
    cloud.line_index = std::move(ids);
  }
  return cloud;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace

CloudFormat parse_cloud_format(std::string_view name) {
  const auto n = lower(std::string(name));
  if (n == "xyz" || n == "xyz-ascii") return CloudFormat::XyzAscii;
  if (n == "ply") return CloudFormat::Ply;
  throw Error(Errc::InvalidParameter, "unknown cloud format '" + std::string(name) + "'");
}

CloudFormat format_from_extension(const std::filesystem::path& path) {
  return lower(path.extension().string()) == ".ply" ? CloudFormat::Ply : CloudFormat::XyzAscii;
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format,
                      std::optional<LengthUnit> unit_override) {
  if (!std::filesystem::exists(path)) throw Error(Errc::IoError, "no such file: " + path.string());
  auto cloud = format == CloudFormat::Ply ? load_ply(path, unit_override) : load_xyz(path, unit_override);
  cloud.validate();
  return cloud;
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, CloudFormat format,
                PlyEncoding encoding) {
  std::string data;
  const bool has_ids = cloud.line_index.has_value();
  const bool has_normals = cloud.normals.has_value();
  if (format == CloudFormat::XyzAscii) {
    data = "# unit: m\n";
    char buf[128];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto& p = cloud.points[i];
      int n = std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g", p.x(), p.y(), p.z());
      data.append(buf, static_cast<std::size_t>(n));
      if (has_ids) data += " " + std::to_string((*cloud.line_index)[i]);
      data += '\n';
    }
    write_file(path, data);
    return;
  }

  std::ostringstream header;
  header << "ply\n"
         << "format " << (encoding == PlyEncoding::Ascii ? "ascii" : "binary_little_endian") << " 1.0\n"
         << "comment unit: m\n"
         << "element vertex " << cloud.size() << "\n"
         << "property double x\nproperty double y\nproperty double z\n";
  if (has_normals) header << "property double nx\nproperty double ny\nproperty double nz\n";
  if (has_ids) header << "property int line_id\n";
  header << "end_header\n";
  data = header.str();
  if (encoding == PlyEncoding::Ascii) {
    char buf[160];
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto& p = cloud.points[i];
      int n = std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", p.x(), p.y(), p.z());
      data.append(buf, static_cast<std::size_t>(n));
      if (has_normals) {
        const auto& nn = (*cloud.normals)[i];
        n = std::snprintf(buf, sizeof buf, " %.17g %.17g %.17g", nn.x(), nn.y(), nn.z());
        data.append(buf, static_cast<std::size_t>(n));
      }
      if (has_ids) data += " " + std::to_string((*cloud.line_index)[i]);
      data += '\n';
    }
  } else {
    auto put = [&](const void* p, std::size_t n) { data.append(static_cast<const char*>(p), n); };
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      put(cloud.points[i].data(), 3 * sizeof(double));
      if (has_normals) put((*cloud.normals)[i].data(), 3 * sizeof(double));
      if (has_ids) {
        const std::int32_t id = (*cloud.line_index)[i];
        put(&id, sizeof id);
      }
    }
  }
  write_file(path, data);
}

}  // namespace surfkit::geom

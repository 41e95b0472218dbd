#include "core/voxel_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace topoiga {

namespace {

static_assert(std::endian::native == std::endian::little, "binary voxel payloads assume a little-endian host");

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    return line.substr(first);
  }
  throw FormatError("voxel file: unexpected end of header");
}

template <class T>
std::vector<T> parse_values(const std::string& line, const std::string& key, int count) {
  std::istringstream ss(line);
  std::string k;
  ss >> k;
  if (k != key) throw FormatError("voxel file: expected '" + key + "', found '" + k + "'");
  std::vector<T> out(count);
  for (T& v : out)
    if (!(ss >> v)) throw FormatError("voxel file: too few values for '" + key + "'");
  std::string extra;
  if (ss >> extra) throw FormatError("voxel file: too many values for '" + key + "'");
  return out;
}

std::string parse_word(const std::string& line, const std::string& key) {
  std::istringstream ss(line);
  std::string k, v, extra;
  ss >> k >> v;
  if (k != key || v.empty() || (ss >> extra)) throw FormatError("voxel file: malformed '" + key + "' line");
  return v;
}

}  // namespace

VoxelGrid read_voxels(std::istream& in) {
  std::string line = next_line(in);
  if (line.rfind("TPIVOX", 0) != 0) throw FormatError("voxel file: missing TPIVOX magic");
  if (parse_word(line, "TPIVOX") != "1") throw FormatError("voxel file: unsupported version");
  const int nd = parse_values<int>(next_line(in), "ndim", 1)[0];
  if (nd < 1 || nd > 3) throw FormatError("voxel file: ndim must be 1, 2 or 3");
  const auto d = parse_values<long long>(next_line(in), "dims", nd);
  const auto s = parse_values<double>(next_line(in), "spacing", nd);
  Index3 dims{1, 1, 1};
  Vec3 spacing{1.0, 1.0, 1.0}, origin{0.0, 0.0, 0.0};
  for (int a = 0; a < nd; ++a) {
    if (d[a] < 1 || d[a] > (1 << 20)) throw FormatError("voxel file: dims out of range");
    if (!(s[a] > 0.0) || !std::isfinite(s[a])) throw FormatError("voxel file: spacing must be positive");
    dims[a] = static_cast<int>(d[a]);
    spacing[a] = s[a];
  }
  line = next_line(in);
  if (line.rfind("origin", 0) == 0) {
    const auto o = parse_values<double>(line, "origin", nd);
    for (int a = 0; a < nd; ++a) origin[a] = o[a];
    line = next_line(in);
  }
  const std::string type = parse_word(line, "type");
  if (type != "u8" && type != "f64") throw FormatError("voxel file: type must be u8 or f64");
  const std::string enc = parse_word(next_line(in), "encoding");
  if (enc != "ascii" && enc != "binary") throw FormatError("voxel file: encoding must be ascii or binary");
  if (next_line(in) != "data") throw FormatError("voxel file: expected 'data'");

  const std::size_t n = product(dims);
  std::vector<double> values(n);
  if (enc == "ascii") {
    for (std::size_t i = 0; i < n; ++i) {
      double v;
      if (!(in >> v)) throw FormatError("voxel file: payload has fewer values than dims");
      values[i] = type == "u8" ? v / 255.0 : v;
    }
    std::string extra;
    if (in >> extra) throw FormatError("voxel file: payload has more values than dims");
  } else {
    const std::size_t width = type == "u8" ? 1 : 8;
    std::vector<char> raw(n * width);
    in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
      throw FormatError("voxel file: payload has fewer bytes than dims");
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("voxel file: trailing bytes after payload");
    for (std::size_t i = 0; i < n; ++i) {
      if (width == 1) {
        values[i] = static_cast<unsigned char>(raw[i]) / 255.0;
      } else {
        std::memcpy(&values[i], raw.data() + 8 * i, 8);
      }
    }
  }
  for (double v : values)
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) throw FormatError("voxel file: values must lie in [0, 1]");
  return VoxelGrid(nd, dims, spacing, origin, std::move(values));
}

VoxelGrid read_voxels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open voxel file " + path);
  return read_voxels(in);
}

void write_voxels(std::ostream& out, const VoxelGrid& grid, VoxelType type, VoxelEncoding encoding) {
  const int nd = grid.dim();
  out << "TPIVOX 1\nndim " << nd << "\ndims";
  for (int a = 0; a < nd; ++a) out << ' ' << grid.dims()[a];
  out.precision(17);
  out << "\nspacing";
  for (int a = 0; a < nd; ++a) out << ' ' << grid.spacing()[a];
  out << "\norigin";
  for (int a = 0; a < nd; ++a) out << ' ' << grid.origin()[a];
  out << "\ntype " << (type == VoxelType::u8 ? "u8" : "f64") << "\nencoding "
      << (encoding == VoxelEncoding::ascii ? "ascii" : "binary") << "\ndata\n";
  const auto& v = grid.values();
  if (encoding == VoxelEncoding::ascii) {
    const int row = grid.dims()[0];
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (type == VoxelType::u8)
        out << std::lround(v[i] * 255.0);
      else
        out << v[i];
      out << ((i + 1) % static_cast<std::size_t>(row) == 0 ? '\n' : ' ');
    }
    return;
  }
  for (double x : v) {
    if (type == VoxelType::u8) {
      const auto b = static_cast<unsigned char>(std::lround(x * 255.0));
      out.put(static_cast<char>(b));
    } else {
      char bytes[8];
      std::memcpy(bytes, &x, 8);
      out.write(bytes, 8);
    }
  }
}

void write_voxels(const std::string& path, const VoxelGrid& grid, VoxelType type, VoxelEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write voxel file " + path);
  write_voxels(out, grid, type, encoding);
}

void write_binary_image(const std::string& path, const BinaryImage& img, const Box& box) {
  const int nd = img.dim();
  Vec3 spacing{1.0, 1.0, 1.0};
  for (int a = 0; a < nd; ++a) spacing[a] = box.length(a) / img.dims()[a];
  std::vector<double> values(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) values[i] = img[i] ? 1.0 : 0.0;
  write_voxels(path, VoxelGrid(nd, img.dims(), spacing, box.lo, std::move(values)), VoxelType::u8,
               VoxelEncoding::ascii);
}

}  // namespace topoiga

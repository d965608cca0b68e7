#include "pse/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "pse/error.hpp"

namespace pse {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string pixel_name(std::size_t index, int width) {
  return "(" + std::to_string(index % static_cast<std::size_t>(width)) + ", " +
         std::to_string(index / static_cast<std::size_t>(width)) + ")";
}

// Header tokenizer for the Netpbm family: whitespace separated, '#' comments.
class HeaderReader {
 public:
  HeaderReader(const std::string& bytes, std::string origin)
      : bytes_(bytes), origin_(std::move(origin)) {}

  std::string token() {
    skip_space_and_comments();
    const std::size_t begin = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      ++pos_;
    }
    if (begin == pos_) throw FormatError(origin_ + ": truncated header");
    return bytes_.substr(begin, pos_ - begin);
  }

  long integer(const char* what) {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw FormatError(origin_ + ": bad " + what + " '" + t + "' in header");
    }
    try {
      return std::stol(t);
    } catch (const std::exception&) {
      throw FormatError(origin_ + ": " + what + " out of range");
    }
  }

  double real(const char* what) {
    const std::string t = token();
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw FormatError(origin_ + ": bad " + what + " '" + t + "' in header");
    }
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError(origin_ + ": missing separator before raster");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::string origin_;
  std::size_t pos_ = 0;
};

void check_dims(long w, long h, const std::string& origin) {
  if (w <= 0 || h <= 0 || w > (1L << 20) || h > (1L << 20)) {
    throw FormatError(origin + ": invalid dimensions " + std::to_string(w) + "x" +
                      std::to_string(h));
  }
}

MassMap2D parse_pgm(const std::string& bytes, const std::string& origin) {
  HeaderReader reader(bytes, origin);
  const std::string magic = reader.token();
  const long width = reader.integer("width");
  const long height = reader.integer("height");
  check_dims(width, height, origin);
  const long maxval = reader.integer("maxval");
  if (maxval < 1 || maxval > 65535) {
    throw FormatError(origin + ": maxval " + std::to_string(maxval) + " out of range");
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  const std::size_t bytes_per = maxval > 255 ? 2 : 1;
  if (bytes.size() < offset + n * bytes_per) {
    throw FormatError(origin + ": raster truncated (expected " + std::to_string(n * bytes_per) +
                      " bytes)");
  }
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    unsigned value = static_cast<unsigned char>(bytes[offset + i * bytes_per]);
    if (bytes_per == 2) {
      value = (value << 8) | static_cast<unsigned char>(bytes[offset + i * 2 + 1]);
    }
    weights[i] = value != 0 ? 1.0 : 0.0;
  }
  return MassMap2D(static_cast<int>(width), static_cast<int>(height), std::move(weights));
}

struct RawGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;
};

RawGrid parse_pfm(const std::string& bytes, const std::string& origin) {
  HeaderReader reader(bytes, origin);
  const std::string magic = reader.token();
  const long width = reader.integer("width");
  const long height = reader.integer("height");
  check_dims(width, height, origin);
  const double scale = reader.real("scale");
  if (scale == 0.0 || !std::isfinite(scale)) {
    throw FormatError(origin + ": PFM scale must be nonzero");
  }
  const bool little = scale < 0.0;
  const std::size_t offset = reader.raster_offset();
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() < offset + n * 4) {
    throw FormatError(origin + ": raster truncated (expected " + std::to_string(n * 4) +
                      " bytes)");
  }
  RawGrid grid{static_cast<int>(width), static_cast<int>(height), std::vector<double>(n)};
  for (std::size_t row = 0; row < static_cast<std::size_t>(height); ++row) {
    // PFM stores the bottom row first.
    const std::size_t dest_row = static_cast<std::size_t>(height) - 1 - row;
    for (std::size_t col = 0; col < static_cast<std::size_t>(width); ++col) {
      const std::size_t src = offset + (row * static_cast<std::size_t>(width) + col) * 4;
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        const auto byte = static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[src + b]));
        bits |= little ? (byte << (8 * b)) : (byte << (8 * (3 - b)));
      }
      grid.values[dest_row * static_cast<std::size_t>(width) + col] =
          static_cast<double>(std::bit_cast<float>(bits));
    }
  }
  return grid;
}

bool looks_like_csv(const std::string& bytes) {
  for (char c : bytes) {
    const auto uc = static_cast<unsigned char>(c);
    if (!(std::isdigit(uc) || std::isspace(uc) || c == ',' || c == '.' || c == '-' ||
          c == '+' || c == 'e' || c == 'E' || c == ';')) {
      return false;
    }
  }
  return true;
}

RawGrid parse_csv(const std::string& bytes, const std::string& origin) {
  RawGrid grid;
  std::istringstream in(bytes);
  std::string line;
  std::size_t line_no = 0;
  int width = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    int count = 0;
    std::size_t begin = 0;
    while (true) {
      const std::size_t comma = line.find(',', begin);
      const std::string cell = line.substr(begin, comma == std::string::npos ? std::string::npos
                                                                             : comma - begin);
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos) {
        throw FormatError(origin + ": empty cell on line " + std::to_string(line_no));
      }
      const std::string text = cell.substr(first, last - first + 1);
      try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        grid.values.push_back(v);
      } catch (const std::exception&) {
        throw FormatError(origin + ": bad number '" + text + "' on line " +
                          std::to_string(line_no));
      }
      ++count;
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    if (width >= 0 && count != width) {
      throw FormatError(origin + ": line " + std::to_string(line_no) + " has " +
                        std::to_string(count) + " values, expected " + std::to_string(width));
    }
    width = count;
    ++grid.height;
  }
  if (grid.height == 0) throw FormatError(origin + ": no data rows");
  grid.width = width;
  return grid;
}

enum class Kind { Pgm, Pfm, Csv };

Kind sniff(const std::string& bytes, const std::string& origin) {
  if (bytes.size() >= 2 && bytes[0] == 'P') {
    if (bytes[1] == '5') return Kind::Pgm;
    if (bytes[1] == 'f') return Kind::Pfm;
    throw UnsupportedFormatError(origin + ": unsupported Netpbm variant 'P" +
                                 std::string(1, bytes[1]) + "'");
  }
  if (looks_like_csv(bytes)) return Kind::Csv;
  throw UnsupportedFormatError(origin + ": not a PGM, PFM or CSV file");
}

RawGrid parse_real_grid(const std::string& bytes, const std::string& origin) {
  switch (sniff(bytes, origin)) {
    case Kind::Pfm: return parse_pfm(bytes, origin);
    case Kind::Csv: return parse_csv(bytes, origin);
    case Kind::Pgm: break;
  }
  throw UnsupportedFormatError(origin + ": expected a float map (PFM or CSV), got PGM");
}

}  // namespace

MassMap2D parse_mask(const std::string& bytes, const std::string& origin) {
  switch (sniff(bytes, origin)) {
    case Kind::Pgm: return parse_pgm(bytes, origin);
    case Kind::Csv: {
      RawGrid g = parse_csv(bytes, origin);
      std::vector<double> weights(g.values.size());
      for (std::size_t i = 0; i < g.values.size(); ++i) {
        const double v = g.values[i];
        if (v != std::floor(v) || v < 0.0) {
          throw FormatError(origin + ": mask value " + std::to_string(v) + " at pixel " +
                            pixel_name(i, g.width) + " is not a nonnegative integer");
        }
        weights[i] = v != 0.0 ? 1.0 : 0.0;
      }
      return MassMap2D(g.width, g.height, std::move(weights));
    }
    case Kind::Pfm: break;
  }
  throw UnsupportedFormatError(origin + ": masks must be PGM (P5) or CSV, got PFM");
}

RealGrid parse_float_map(const std::string& bytes, const std::string& origin) {
  RawGrid g = parse_real_grid(bytes, origin);
  RealGrid out(g.width, g.height);
  out.values = std::move(g.values);
  return out;
}

MassMap2D load_mask(const std::filesystem::path& path) {
  return parse_mask(read_file(path), path.string());
}

RealGrid load_float_map(const std::filesystem::path& path) {
  return parse_float_map(read_file(path), path.string());
}

DepthMap load_depth(const std::filesystem::path& path, DepthConvention convention) {
  RealGrid g = load_float_map(path);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    if (!std::isfinite(g.values[i])) {
      throw FormatError(path.string() + ": non-finite depth at pixel " + pixel_name(i, g.width));
    }
  }
  return DepthMap(g.width, g.height, std::move(g.values), convention);
}

MassMap2D load_attention(const std::filesystem::path& path) {
  RealGrid g = load_float_map(path);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double v = g.values[i];
    if (!std::isfinite(v) || v < 0.0) {
      throw FormatError(path.string() + ": invalid attention weight at pixel " +
                        pixel_name(i, g.width));
    }
  }
  return MassMap2D(g.width, g.height, std::move(g.values));
}

void write_mask_pgm(const std::filesystem::path& path, const MassMap2D& mask) {
  std::string bytes = "P5\n" + std::to_string(mask.width()) + " " +
                      std::to_string(mask.height()) + "\n255\n";
  for (double w : mask.weights()) bytes.push_back(w > 0.0 ? static_cast<char>(255) : '\0');
  write_file(path, bytes);
}

std::string encode_pfm(const RealGrid& grid) {
  std::string bytes =
      "Pf\n" + std::to_string(grid.width) + " " + std::to_string(grid.height) + "\n-1.0\n";
  bytes.reserve(bytes.size() + grid.values.size() * 4);
  for (int row = grid.height - 1; row >= 0; --row) {
    for (int col = 0; col < grid.width; ++col) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(grid.at(col, row)));
      for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
    }
  }
  return bytes;
}

void write_pfm(const std::filesystem::path& path, const RealGrid& grid) {
  write_file(path, encode_pfm(grid));
}

}  // namespace pse

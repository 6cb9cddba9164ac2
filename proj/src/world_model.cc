/*
 * Copyright 2026 The qtib Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qtib/world_model.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qtib/error.h"
#include "qtib/numeric.h"

namespace qtib {
namespace {

// Rows are renormalized when they miss 1 by more than this but by no more
// than kRowRenormTolerance; anything further off is bad data.
constexpr double kRowExactTolerance = 1e-12;
constexpr double kRowRenormTolerance = 1e-6;

std::string At(std::size_t offset) {
  return " at byte offset " + std::to_string(offset);
}

class PgmReader {
 public:
  explicit PgmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const { return pos_; }
  bool done() const { return pos_ >= bytes_.size(); }

  void SkipWhitespaceAndComments() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  // Unsigned decimal integer preceded by whitespace/comments.
  unsigned long ReadUnsigned(const char* what) {
    SkipWhitespaceAndComments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 0xFFFFFFFFul) {
        throw ParseError(std::string("PGM: ") + what + " too large" +
                         At(start));
      }
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError(std::string("PGM: expected ") + what +
                       (done() ? " but reached end of data" : "") + At(start));
    }
    return value;
  }

  std::uint8_t Byte() { return bytes_[pos_++]; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits a numeric CSV into rows of doubles, enforcing a rectangular shape.
std::vector<std::vector<double>> ParseNumericCsv(std::string_view text,
                                                 const char* what) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = Trim(text.substr(start, end - start));
    ++line_no;
    const bool last = end >= text.size();
    if (line.empty()) {
      // Only a trailing newline may produce an empty line.
      if (!last) {
        throw ParseError(std::string(what) + ": empty row " +
                         std::to_string(line_no));
      }
      break;
    }
    std::vector<double> row;
    std::size_t col = 0;
    std::size_t cstart = 0;
    while (true) {
      std::size_t cend = line.find(',', cstart);
      if (cend == std::string_view::npos) cend = line.size();
      std::string_view token = Trim(line.substr(cstart, cend - cstart));
      ++col;
      double v = 0.0;
      const auto res =
          std::from_chars(token.data(), token.data() + token.size(), v);
      if (token.empty() || res.ec != std::errc() ||
          res.ptr != token.data() + token.size() || !std::isfinite(v)) {
        throw ParseError(std::string(what) + ": non-numeric value '" +
                         std::string(token) + "' at row " +
                         std::to_string(line_no) + ", column " +
                         std::to_string(col));
      }
      row.push_back(v);
      if (cend >= line.size()) break;
      cstart = cend + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(std::string(what) + ": ragged row " +
                       std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " columns, expected " +
                       std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
    if (last) break;
    start = end + 1;
  }
  if (rows.empty()) throw ParseError(std::string(what) + ": no data");
  return rows;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Validates and, when within tolerance, renormalizes one conditional row.
void NormalizeRow(std::span<double> row, const std::string& where) {
  double sum = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ConfigError("conditional " + where + " has a negative entry");
    }
    sum += v;
  }
  const double dev = std::abs(sum - 1.0);
  if (dev > kRowRenormTolerance) {
    throw ConfigError("conditional " + where + " sums to " +
                      std::to_string(sum));
  }
  if (dev > kRowExactTolerance) {
    for (double& v : row) v /= sum;
  }
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

OutcomeSpace OutcomeSpace::Occupancy() { return {{"free", "occupied"}}; }

void OutcomeSpace::Validate() const {
  if (labels.size() < 2) {
    throw ConfigError("outcome space needs at least two labels");
  }
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw ConfigError("outcome label is empty");
    if (!seen.insert(l).second) {
      throw ConfigError("duplicate outcome label '" + l + "'");
    }
  }
}

OccupancyField OccupancyField::FromOccupiedProbabilities(
    int width, int height, std::span<const double> p) {
  if (width < 1 || height < 1 ||
      p.size() != static_cast<std::size_t>(width) * height) {
    throw ConfigError("occupancy grid size mismatch");
  }
  OccupancyField f;
  f.width = width;
  f.height = height;
  f.cond.resize(p.size() * 2);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0 && p[i] <= 1.0)) {
      throw ConfigError("occupancy probability outside [0,1]");
    }
    f.cond[2 * i] = 1.0 - p[i];
    f.cond[2 * i + 1] = p[i];
  }
  return f;
}

PriorSpec PriorSpec::Uniform() { return {}; }

PriorSpec PriorSpec::Gaussian(std::array<double, 2> mean,
                              std::array<std::array<double, 2>, 2> cov) {
  PriorSpec s;
  s.kind = Kind::kGaussian;
  s.mean = mean;
  s.cov = cov;
  return s;
}

PriorSpec PriorSpec::Explicit(WeightGrid weights) {
  PriorSpec s;
  s.kind = Kind::kExplicit;
  s.weights = std::move(weights);
  return s;
}

PriorSpec ParsePriorJson(std::string_view json,
                         const std::filesystem::path& base_dir) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("prior JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("prior JSON: expected an object with a string \"kind\"");
  }
  const std::string kind = j["kind"];
  try {
    if (kind == "uniform") return PriorSpec::Uniform();
    if (kind == "gaussian") {
      const auto& m = j.at("mean");
      const auto& c = j.at("cov");
      if (m.size() != 2 || c.size() != 2 || c[0].size() != 2 ||
          c[1].size() != 2) {
        throw ConfigError("prior JSON: gaussian needs mean[2] and cov[2][2]");
      }
      return PriorSpec::Gaussian(
          {m[0].get<double>(), m[1].get<double>()},
          {{{c[0][0].get<double>(), c[0][1].get<double>()},
            {c[1][0].get<double>(), c[1][1].get<double>()}}});
    }
    if (kind == "explicit") {
      std::filesystem::path p = j.at("path").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      return PriorSpec::Explicit(LoadWeightCsv(ReadFile(p)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("prior JSON: ") + e.what());
  }
  throw ConfigError("prior JSON: unknown kind '" + kind + "'");
}

OccupancyField LoadOccupancyPgm(std::span<const std::uint8_t> bytes) {
  PgmReader r(bytes);
  if (bytes.size() < 2 || bytes[0] != 'P' ||
      (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("PGM: bad magic, expected P2 or P5" + At(0));
  }
  const bool binary = bytes[1] == '5';
  r.Byte();
  r.Byte();
  const std::size_t width_at = r.offset();
  const auto width = r.ReadUnsigned("width");
  const auto height = r.ReadUnsigned("height");
  const std::size_t maxval_at = r.offset();
  const auto maxval = r.ReadUnsigned("maxval");
  if (width == 0 || height == 0) {
    throw ParseError("PGM: zero dimension" + At(width_at));
  }
  if (maxval == 0 || maxval > 65535) {
    throw ParseError("PGM: maxval must be in [1, 65535]" + At(maxval_at));
  }
  const std::size_t n = width * height;
  std::vector<double> p(n);
  if (binary) {
    // Exactly one whitespace byte separates the header from the raster.
    if (r.done() || !std::isspace(bytes[r.offset()])) {
      throw ParseError("PGM: missing whitespace after maxval" + At(r.offset()));
    }
    r.Byte();
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (r.remaining() < n * bpp) {
      throw ParseError("PGM: truncated pixel data, need " +
                       std::to_string(n * bpp) + " bytes" + At(r.offset()));
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t at = r.offset();
      unsigned v = r.Byte();
      if (bpp == 2) v = (v << 8) | r.Byte();
      if (v > maxval) throw ParseError("PGM: pixel exceeds maxval" + At(at));
      p[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      r.SkipWhitespaceAndComments();
      const std::size_t at = r.offset();
      if (r.done()) {
        throw ParseError("PGM: truncated pixel data after " +
                         std::to_string(i) + " pixels" + At(at));
      }
      const auto v = r.ReadUnsigned("pixel value");
      if (v > maxval) throw ParseError("PGM: pixel exceeds maxval" + At(at));
      p[i] = static_cast<double>(v) / static_cast<double>(maxval);
    }
  }
  return OccupancyField::FromOccupiedProbabilities(static_cast<int>(width),
                                                   static_cast<int>(height), p);
}

OccupancyField LoadOccupancyCsv(std::string_view text) {
  const auto rows = ParseNumericCsv(text, "occupancy CSV");
  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(width) * height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double v = rows[r][c];
      if (v < 0.0 || v > 1.0) {
        throw ParseError("occupancy CSV: value " + std::to_string(v) +
                         " outside [0,1] at row " + std::to_string(r + 1) +
                         ", column " + std::to_string(c + 1));
      }
      p.push_back(v);
    }
  }
  return OccupancyField::FromOccupiedProbabilities(width, height, p);
}

WeightGrid LoadWeightCsv(std::string_view text) {
  const auto rows = ParseNumericCsv(text, "weight CSV");
  WeightGrid g;
  g.height = static_cast<int>(rows.size());
  g.width = static_cast<int>(rows.front().size());
  bool any = false;
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      const double v = rows[r][c];
      if (v < 0.0) {
        throw ParseError("weight CSV: negative weight at row " +
                         std::to_string(r + 1) + ", column " +
                         std::to_string(c + 1));
      }
      any = any || v > 0.0;
      g.values.push_back(v);
    }
  }
  if (!any) throw ConfigError("weight CSV: all weights are zero");
  return g;
}

OccupancyField LoadOccupancyFile(const std::filesystem::path& path,
                                 std::optional<MapFormat> format) {
  if (!format) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".pgm") {
      format = MapFormat::kPgm;
    } else if (ext == ".csv") {
      format = MapFormat::kCsv;
    } else {
      throw ParseError("cannot infer map format from '" + path.string() +
                       "'; pass --map-format");
    }
  }
  const std::string data = ReadFile(path);
  if (*format == MapFormat::kPgm) {
    return LoadOccupancyPgm(
        {reinterpret_cast<const std::uint8_t*>(data.data()), data.size()});
  }
  return LoadOccupancyCsv(data);
}

std::string EncodePgm(const OccupancyField& field) {
  std::ostringstream out;
  out << "P5\n" << field.width << ' ' << field.height << "\n255\n";
  std::string s = out.str();
  for (int r = 0; r < field.height; ++r) {
    for (int c = 0; c < field.width; ++c) {
      const double v = std::clamp(field.occupied(r, c), 0.0, 1.0);
      s.push_back(static_cast<char>(std::lround(v * 255.0)));
    }
  }
  return s;
}

WeightGrid BuildPrior(const PriorSpec& spec, int width, int height) {
  if (width < 1 || height < 1) throw ConfigError("prior grid must be >= 1x1");
  WeightGrid g;
  g.width = width;
  g.height = height;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  switch (spec.kind) {
    case PriorSpec::Kind::kUniform:
      g.values.assign(n, 1.0 / static_cast<double>(n));
      return g;
    case PriorSpec::Kind::kGaussian: {
      const double a = spec.cov[0][0];
      const double b = spec.cov[0][1];
      const double c = spec.cov[1][1];
      const double det = a * c - b * b;
      if (std::abs(spec.cov[0][1] - spec.cov[1][0]) >
              1e-12 * (1 + std::abs(b)) ||
          !(a > 0.0) || !(det > 0.0)) {
        throw ConfigError(
            "gaussian prior: covariance is not symmetric "
            "positive definite");
      }
      // Inverse of [[a b][b c]] is [[c -b][-b a]] / det.
      g.values.resize(n);
      for (int r = 0; r < height; ++r) {
        for (int col = 0; col < width; ++col) {
          const double dx = col + 0.5 - spec.mean[0];
          const double dy = r + 0.5 - spec.mean[1];
          const double m =
              (c * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / det;
          g.values[static_cast<std::size_t>(r) * width + col] =
              std::exp(-0.5 * m);
        }
      }
      break;
    }
    case PriorSpec::Kind::kExplicit:
      if (spec.weights.width != width || spec.weights.height != height) {
        throw ConfigError("explicit prior is " +
                          std::to_string(spec.weights.width) + "x" +
                          std::to_string(spec.weights.height) + ", map is " +
                          std::to_string(width) + "x" + std::to_string(height));
      }
      g.values = spec.weights.values;
      break;
  }
  const double total = CompensatedTotal(g.values);
  if (!(total > 0.0)) throw ConfigError("prior has no mass on the grid");
  for (double& v : g.values) v /= total;
  return g;
}

WorldModel AssembleWorld(const OccupancyField& occ, const WeightGrid& prior) {
  occ.outcomes.Validate();
  if (occ.width < 1 || occ.height < 1) {
    throw ConfigError("occupancy grid is empty");
  }
  if (prior.width != occ.width || prior.height != occ.height) {
    throw ConfigError("prior and occupancy dimensions differ");
  }
  const std::size_t ny = occ.outcomes.size();
  if (occ.cond.size() !=
          static_cast<std::size_t>(occ.width) * occ.height * ny ||
      prior.values.size() != static_cast<std::size_t>(occ.width) * occ.height) {
    throw ConfigError("grid storage does not match its dimensions");
  }

  int depth = 0;
  while ((1 << depth) < std::max(occ.width, occ.height)) ++depth;
  const int side = 1 << depth;

  WorldModel w;
  w.depth_ = depth;
  w.original_width_ = occ.width;
  w.original_height_ = occ.height;
  w.outcomes_ = occ.outcomes;
  const std::size_t cells = static_cast<std::size_t>(side) * side;
  w.prior_.assign(cells, 0.0);
  w.cond_.assign(cells * ny, 1.0 / static_cast<double>(ny));

  for (int r = 0; r < occ.height; ++r) {
    for (int c = 0; c < occ.width; ++c) {
      const double px = prior.at(r, c);
      if (!(px >= 0.0) || !std::isfinite(px)) {
        throw ConfigError("prior weight is negative at row " +
                          std::to_string(r) + ", column " + std::to_string(c));
      }
      const std::size_t cell = static_cast<std::size_t>(r) * side + c;
      w.prior_[cell] = px;
      auto src = occ.at(r, c);
      std::span<double> dst(w.cond_.data() + cell * ny, ny);
      std::copy(src.begin(), src.end(), dst.begin());
      NormalizeRow(
          dst, "at row " + std::to_string(r) + ", column " + std::to_string(c));
    }
  }

  const double total = CompensatedTotal(w.prior_);
  if (!(total > 0.0)) throw ConfigError("prior is zero everywhere");
  // Already-normalized priors are kept bit-for-bit.
  if (std::abs(total - 1.0) > kRowExactTolerance) {
    for (double& v : w.prior_) v /= total;
  }
  return w;
}

OccupancyField DemoOccupancyMap() {
  constexpr int kSide = 128;
  std::vector<double> p(kSide * kSide, 0.0);
  auto set_max = [&](int r, int c, double v) {
    if (r < 0 || c < 0 || r >= kSide || c >= kSide) return;
    double& cell = p[r * kSide + c];
    cell = std::max(cell, v);
  };
  auto wall = [&](int r0, int c0, int r1, int c1, double v) {
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) set_max(r, c, v);
    }
  };

  // Outer boundary.
  wall(0, 0, 1, kSide - 1, 0.95);
  wall(kSide - 2, 0, kSide - 1, kSide - 1, 0.95);
  wall(0, 0, kSide - 1, 1, 0.95);
  wall(0, kSide - 2, kSide - 1, kSide - 1, 0.95);

  // Interior walls with door gaps; offsets avoid quadtree block boundaries.
  wall(2, 45, 29, 46, 0.9);
  wall(38, 45, 69, 46, 0.9);
  wall(69, 2, 70, 20, 0.9);
  wall(69, 31, 70, 74, 0.9);
  wall(69, 85, 70, 125, 0.85);
  wall(88, 97, 125, 98, 0.9);
  wall(20, 90, 21, 125, 0.8);

  // Soft-edged obstacles: (row, col, radius, peak).
  struct Blob {
    double r, c, radius, peak;
  };
  const Blob blobs[] = {{17, 20, 6.5, 1.0},   {52, 22, 9.0, 0.9},
                        {60, 84, 5.0, 1.0},   {45, 70, 4.0, 0.7},
                        {98, 40, 11.0, 0.95}, {104, 112, 7.0, 0.8},
                        {38, 108, 5.5, 1.0},  {85, 62, 3.0, 0.6}};
  for (const auto& b : blobs) {
    for (int r = 0; r < kSide; ++r) {
      for (int c = 0; c < kSide; ++c) {
        const double d = std::hypot(r + 0.5 - b.r, c + 0.5 - b.c);
        const double v = b.peak / (1.0 + std::exp((d - b.radius) / 1.2));
        if (v > 0.02) set_max(r, c, v);
      }
    }
  }

  // Unexplored band: constant 0.5.
  for (int r = 76; r < 86; ++r) {
    for (int c = 4; c < 30; ++c) p[r * kSide + c] = 0.5;
  }

  // Texture on obstacles only; free space stays exactly free.
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) {
      double& v = p[r * kSide + c];
      if (v <= 0.0 || v == 0.5) continue;
      const std::uint64_t h =
          SplitMix64(static_cast<std::uint64_t>(r) * 131 + c);
      const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
      v = std::clamp(v + 0.06 * (u - 0.5), 0.0, 1.0);
    }
  }
  // 8-bit quantization so the map survives a PGM round trip exactly.
  for (double& v : p) v = std::lround(v * 255.0) / 255.0;
  return OccupancyField::FromOccupiedProbabilities(kSide, kSide, p);
}

}  // namespace qtib

// Copyright 2026 The DynaHull Authors.
// SPDX-License-Identifier: Apache-2.0

#include "dynahull/cloud_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dynahull/error.hpp"
#include "dynahull/log.hpp"

namespace dynahull {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PCD I/O assumes a little-endian host");

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoFailure, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t b = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

// Pulls lines off a buffer while tracking the byte offset, which binary PCD
// needs to locate the payload.
class LineReader {
 public:
  explicit LineReader(std::string_view data) : data_(data) {}

  std::optional<std::string_view> next() {
    if (pos_ >= data_.size()) return std::nullopt;
    const auto nl = data_.find('\n', pos_);
    const auto end = nl == std::string_view::npos ? data_.size() : nl;
    const auto line = data_.substr(pos_, end - pos_);
    pos_ = nl == std::string_view::npos ? data_.size() : nl + 1;
    return line;
  }

  std::size_t offset() const { return pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

double parse_double(std::string_view tok, std::size_t point) {
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    // from_chars rejects a leading '+', which some writers emit.
    std::string copy(tok);
    char* end = nullptr;
    v = std::strtod(copy.c_str(), &end);
    if (end != copy.c_str() + copy.size()) {
      throw Error(ErrorCode::kMalformedHeader,
                  "bad numeric token '" + copy + "' at point " +
                      std::to_string(point));
    }
  }
  return v;
}

long long parse_int(std::string_view tok, std::string_view what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw Error(ErrorCode::kMalformedHeader,
                "bad integer '" + std::string(tok) + "' in " +
                    std::string(what));
  }
  return v;
}

MotionLabel to_label(long long v, std::size_t point) {
  if (v == 0) return MotionLabel::kStatic;
  if (v == 1) return MotionLabel::kDynamic;
  throw Error(ErrorCode::kMalformedHeader,
              "label value " + std::to_string(v) + " at point " +
                  std::to_string(point) + " is not 0 or 1");
}

void check_finite(const Point3& p, std::size_t i) {
  if (!p.is_finite()) {
    throw Error(ErrorCode::kNonFiniteCoordinate,
                "non-finite coordinate at point " + std::to_string(i));
  }
}

struct PcdField {
  std::string name;
  int size = 4;
  char type = 'F';
  int count = 1;
  std::size_t offset = 0;  // byte offset in a binary record
  std::size_t column = 0;  // first token column in an ascii record
};

enum class Role { kX, kY, kZ, kLabel, kSkip };

Role role_of(const PcdField& f) {
  if (f.name == "x") return Role::kX;
  if (f.name == "y") return Role::kY;
  if (f.name == "z") return Role::kZ;
  if (f.name == "label") return Role::kLabel;
  return Role::kSkip;
}

double read_float(const char* p, int size) {
  if (size == 4) {
    float f;
    std::memcpy(&f, p, 4);
    return static_cast<double>(f);
  }
  double d;
  std::memcpy(&d, p, 8);
  return d;
}

long long read_integer(const char* p, int size, char type) {
  if (type == 'U') {
    switch (size) {
      case 1: { std::uint8_t v; std::memcpy(&v, p, 1); return v; }
      case 2: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
      case 4: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
      default: { std::uint64_t v; std::memcpy(&v, p, 8); return static_cast<long long>(v); }
    }
  }
  switch (size) {
    case 1: { std::int8_t v; std::memcpy(&v, p, 1); return v; }
    case 2: { std::int16_t v; std::memcpy(&v, p, 2); return v; }
    case 4: { std::int32_t v; std::memcpy(&v, p, 4); return v; }
    default: { std::int64_t v; std::memcpy(&v, p, 8); return v; }
  }
}

PointCloud load_pcd(std::string_view data, CloudFormat format) {
  LineReader reader(data);
  std::vector<std::string_view> names, sizes, types, counts;
  std::optional<long long> points_decl;
  std::optional<std::string> data_kind;

  while (auto raw = reader.next()) {
    const auto line = trim(*raw);
    if (line.empty() || line.front() == '#') continue;
    auto tokens = split_ws(line);
    const auto key = tokens.front();
    std::vector<std::string_view> rest(tokens.begin() + 1, tokens.end());
    if (key == "FIELDS") {
      names = rest;
    } else if (key == "SIZE") {
      sizes = rest;
    } else if (key == "TYPE") {
      types = rest;
    } else if (key == "COUNT") {
      counts = rest;
    } else if (key == "POINTS") {
      if (rest.size() != 1) {
        throw Error(ErrorCode::kMalformedHeader, "POINTS takes one value");
      }
      points_decl = parse_int(rest[0], "POINTS");
    } else if (key == "DATA") {
      if (rest.size() != 1) {
        throw Error(ErrorCode::kMalformedHeader, "DATA takes one value");
      }
      data_kind = std::string(rest[0]);
      break;
    } else if (key == "VERSION" || key == "WIDTH" || key == "HEIGHT" ||
               key == "VIEWPOINT") {
      // informational
    } else {
      throw Error(ErrorCode::kMalformedHeader,
                  "unknown PCD header line '" + std::string(line) + "'");
    }
  }

  if (names.empty()) throw Error(ErrorCode::kMalformedHeader, "missing FIELDS");
  if (!points_decl) throw Error(ErrorCode::kMalformedHeader, "missing POINTS");
  if (!data_kind) throw Error(ErrorCode::kMalformedHeader, "missing DATA");
  if (*points_decl < 0) {
    throw Error(ErrorCode::kMalformedHeader, "negative POINTS");
  }
  const bool binary = *data_kind == "binary";
  if (!binary && *data_kind != "ascii") {
    throw Error(ErrorCode::kMalformedHeader,
                "unsupported DATA kind '" + *data_kind + "'");
  }
  if ((format == CloudFormat::kPcdAscii && binary) ||
      (format == CloudFormat::kPcdBinary && !binary)) {
    throw Error(ErrorCode::kMalformedHeader,
                "DATA " + *data_kind + " does not match requested format");
  }
  if (binary && (sizes.size() != names.size() || types.size() != names.size())) {
    throw Error(ErrorCode::kMalformedHeader,
                "binary PCD needs SIZE and TYPE for every field");
  }
  if ((!sizes.empty() && sizes.size() != names.size()) ||
      (!types.empty() && types.size() != names.size()) ||
      (!counts.empty() && counts.size() != names.size())) {
    throw Error(ErrorCode::kMalformedHeader,
                "SIZE/TYPE/COUNT length differs from FIELDS");
  }

  std::vector<PcdField> fields(names.size());
  std::size_t offset = 0, column = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto& f = fields[i];
    f.name = std::string(names[i]);
    if (!sizes.empty()) f.size = static_cast<int>(parse_int(sizes[i], "SIZE"));
    if (!types.empty()) {
      if (types[i].size() != 1) {
        throw Error(ErrorCode::kMalformedHeader, "bad TYPE entry");
      }
      f.type = types[i][0];
    }
    if (!counts.empty()) f.count = static_cast<int>(parse_int(counts[i], "COUNT"));
    if (f.count < 1 || (f.size != 1 && f.size != 2 && f.size != 4 && f.size != 8) ||
        (f.type != 'F' && f.type != 'U' && f.type != 'I')) {
      throw Error(ErrorCode::kMalformedHeader,
                  "bad SIZE/TYPE/COUNT for field " + f.name);
    }
    f.offset = offset;
    f.column = column;
    offset += static_cast<std::size_t>(f.size) * f.count;
    column += static_cast<std::size_t>(f.count);
  }
  const std::size_t record_size = offset;
  const std::size_t columns = column;

  std::optional<std::size_t> fx, fy, fz, flabel;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& f = fields[i];
    const Role role = role_of(f);
    if (role == Role::kSkip) {
      warn("skipping unsupported PCD field '" + f.name + "'");
      continue;
    }
    if (role == Role::kLabel) {
      if (f.type == 'F' || f.count != 1) {
        warn("skipping non-integer 'label' field");
        continue;
      }
      flabel = i;
      continue;
    }
    if (f.type != 'F' || (f.size != 4 && f.size != 8) || f.count != 1) {
      throw Error(ErrorCode::kMalformedHeader,
                  "coordinate field " + f.name + " must be FLOAT32 or FLOAT64");
    }
    (role == Role::kX ? fx : role == Role::kY ? fy : fz) = i;
  }
  if (!fx || !fy || !fz) {
    throw Error(ErrorCode::kMalformedHeader, "FIELDS must include x y z");
  }

  const auto n = static_cast<std::size_t>(*points_decl);
  std::vector<Point3> pts;
  pts.reserve(n);
  std::optional<std::vector<MotionLabel>> labels;
  if (flabel) {
    labels.emplace();
    labels->reserve(n);
  }

  if (binary) {
    const std::size_t start = reader.offset();
    if (data.size() < start + n * record_size) {
      throw Error(ErrorCode::kMalformedHeader, "binary payload is truncated");
    }
    const char* base = data.data() + start;
    for (std::size_t i = 0; i < n; ++i) {
      const char* rec = base + i * record_size;
      const Point3 p{read_float(rec + fields[*fx].offset, fields[*fx].size),
                     read_float(rec + fields[*fy].offset, fields[*fy].size),
                     read_float(rec + fields[*fz].offset, fields[*fz].size)};
      check_finite(p, i);
      pts.push_back(p);
      if (flabel) {
        const auto& lf = fields[*flabel];
        labels->push_back(to_label(read_integer(rec + lf.offset, lf.size, lf.type), i));
      }
    }
  } else {
    std::size_t i = 0;
    while (i < n) {
      auto raw = reader.next();
      if (!raw) {
        throw Error(ErrorCode::kMalformedHeader,
                    "ascii payload has " + std::to_string(i) + " of " +
                        std::to_string(n) + " points");
      }
      const auto line = trim(*raw);
      if (line.empty()) continue;
      const auto tok = split_ws(line);
      if (tok.size() != columns) {
        throw Error(ErrorCode::kMalformedHeader,
                    "point " + std::to_string(i) + " has " +
                        std::to_string(tok.size()) + " values, expected " +
                        std::to_string(columns));
      }
      const Point3 p{parse_double(tok[fields[*fx].column], i),
                     parse_double(tok[fields[*fy].column], i),
                     parse_double(tok[fields[*fz].column], i)};
      check_finite(p, i);
      pts.push_back(p);
      if (flabel) {
        labels->push_back(
            to_label(parse_int(tok[fields[*flabel].column], "label"), i));
      }
      ++i;
    }
  }
  return PointCloud(std::move(pts), std::move(labels));
}

PointCloud load_ply(std::string_view data) {
  LineReader reader(data);
  auto first = reader.next();
  if (!first || trim(*first) != "ply") {
    throw Error(ErrorCode::kMalformedHeader, "missing 'ply' magic");
  }
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<std::string> properties;
  };
  std::vector<Element> elements;
  bool ended = false;
  while (auto raw = reader.next()) {
    const auto line = trim(*raw);
    if (line.empty()) continue;
    const auto tok = split_ws(line);
    if (tok[0] == "format") {
      if (tok.size() < 2 || tok[1] != "ascii") {
        throw Error(ErrorCode::kMalformedHeader, "only ascii PLY is supported");
      }
    } else if (tok[0] == "comment" || tok[0] == "obj_info") {
      continue;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw Error(ErrorCode::kMalformedHeader, "bad element line");
      elements.push_back(
          {std::string(tok[1]), static_cast<std::size_t>(parse_int(tok[2], "element")), {}});
    } else if (tok[0] == "property") {
      if (elements.empty() || tok.size() < 3) {
        throw Error(ErrorCode::kMalformedHeader, "property outside element");
      }
      elements.back().properties.emplace_back(tok.back());
    } else if (tok[0] == "end_header") {
      ended = true;
      break;
    } else {
      throw Error(ErrorCode::kMalformedHeader,
                  "unknown PLY header line '" + std::string(line) + "'");
    }
  }
  if (!ended) throw Error(ErrorCode::kMalformedHeader, "missing end_header");

  std::vector<Point3> pts;
  bool found = false;
  for (const auto& el : elements) {
    if (el.name != "vertex") {
      for (std::size_t i = 0; i < el.count; ++i) {
        if (!reader.next()) {
          throw Error(ErrorCode::kMalformedHeader, "truncated PLY element " + el.name);
        }
      }
      continue;
    }
    found = true;
    auto column = [&](const char* name) {
      const auto it = std::find(el.properties.begin(), el.properties.end(), name);
      if (it == el.properties.end()) {
        throw Error(ErrorCode::kMalformedHeader,
                    std::string("vertex element lacks property ") + name);
      }
      return static_cast<std::size_t>(it - el.properties.begin());
    };
    const auto cx = column("x"), cy = column("y"), cz = column("z");
    pts.reserve(el.count);
    for (std::size_t i = 0; i < el.count;) {
      auto raw = reader.next();
      if (!raw) throw Error(ErrorCode::kMalformedHeader, "truncated PLY vertex list");
      const auto line = trim(*raw);
      if (line.empty()) continue;
      const auto tok = split_ws(line);
      if (tok.size() < el.properties.size()) {
        throw Error(ErrorCode::kMalformedHeader, "short PLY vertex row");
      }
      const Point3 p{parse_double(tok[cx], i), parse_double(tok[cy], i),
                     parse_double(tok[cz], i)};
      check_finite(p, i);
      pts.push_back(p);
      ++i;
    }
    break;
  }
  if (!found) throw Error(ErrorCode::kMalformedHeader, "PLY has no vertex element");
  return PointCloud(std::move(pts));
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

CloudFormat parse_cloud_format(std::string_view name) {
  if (name == "auto") return CloudFormat::kAuto;
  if (name == "pcd-ascii" || name == "ascii") return CloudFormat::kPcdAscii;
  if (name == "pcd-binary" || name == "binary") return CloudFormat::kPcdBinary;
  if (name == "ply-ascii" || name == "ply") return CloudFormat::kPlyAscii;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown cloud format '" + std::string(name) + "'");
}

PointCloud load_cloud(const std::filesystem::path& path, CloudFormat format) {
  const std::string data = read_file(path);
  const bool looks_ply = trim(std::string_view(data).substr(0, 4)) == "ply";
  if (format == CloudFormat::kPlyAscii ||
      (format == CloudFormat::kAuto && looks_ply)) {
    return load_ply(data);
  }
  return load_pcd(data, format);
}

void save_cloud(const PointCloud& cloud, const std::filesystem::path& path,
                CloudFormat format) {
  if (format == CloudFormat::kPlyAscii) {
    throw Error(ErrorCode::kInvalidArgument, "PLY output is not supported");
  }
  const bool binary = format != CloudFormat::kPcdAscii;
  const bool labeled = cloud.has_labels();
  const auto n = cloud.size();

  std::ostringstream header;
  header << "# .PCD v0.7 - Point Cloud Data file format\n"
         << "VERSION 0.7\n"
         << (labeled ? "FIELDS x y z label\n" : "FIELDS x y z\n")
         << (labeled ? "SIZE 8 8 8 1\n" : "SIZE 8 8 8\n")
         << (labeled ? "TYPE F F F U\n" : "TYPE F F F\n")
         << (labeled ? "COUNT 1 1 1 1\n" : "COUNT 1 1 1\n")
         << "WIDTH " << n << "\n"
         << "HEIGHT 1\n"
         << "VIEWPOINT 0 0 0 1 0 0 0\n"
         << "POINTS " << n << "\n"
         << "DATA " << (binary ? "binary" : "ascii") << "\n";

  std::string out = header.str();
  if (binary) {
    const std::size_t rec = labeled ? 25 : 24;
    const std::size_t start = out.size();
    out.resize(start + n * rec);
    char* p = out.data() + start;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& q = cloud[i];
      std::memcpy(p, &q.x, 8);
      std::memcpy(p + 8, &q.y, 8);
      std::memcpy(p + 16, &q.z, 8);
      if (labeled) p[24] = static_cast<char>((*cloud.labels())[i]);
      p += rec;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& q = cloud[i];
      out += format_coord(q.x);
      out += ' ';
      out += format_coord(q.y);
      out += ' ';
      out += format_coord(q.z);
      if (labeled) {
        out += ' ';
        out += std::to_string(static_cast<int>((*cloud.labels())[i]));
      }
      out += '\n';
    }
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIoFailure, "cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw Error(ErrorCode::kIoFailure, "write failed for " + path.string());
}

std::vector<MotionLabel> load_label_sidecar(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedHeader,
                "labels sidecar " + path.string() + ": " + e.what());
  }
  if (!j.is_array()) {
    throw Error(ErrorCode::kMalformedHeader,
                "labels sidecar must be a JSON array of 0/1");
  }
  std::vector<MotionLabel> labels;
  labels.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) {
      throw Error(ErrorCode::kMalformedHeader,
                  "labels sidecar entry " + std::to_string(i) + " is not an integer");
    }
    labels.push_back(to_label(j[i].get<long long>(), i));
  }
  return labels;
}

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n,
                                        std::uint64_t seed) {
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  if (n >= size) return idx;
  // Partial Fisher-Yates: the first n slots become a uniform sample.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, size - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

PointCloud downsample_uniform(const PointCloud& cloud, std::size_t n,
                              std::uint64_t seed) {
  if (n >= cloud.size()) return cloud;
  return cloud.subset(sample_indices(cloud.size(), n, seed));
}

}  // namespace dynahull

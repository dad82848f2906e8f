#include "motorpose/dataset_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "motorpose/error.hpp"

namespace motorpose::io {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMotorHeader = "frame_id,alpha,b12,b13,b14,b23,b24,b34,gamma,lambda";
constexpr std::string_view kPredictionHeader = "frame_id,alpha,b12,b13,b14,b23,b24,b34,gamma";

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char ch) { return std::isspace(static_cast<unsigned char>(ch)); });
}

std::optional<double> to_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

double require_real(std::string_view token, const std::string& source, std::size_t line) {
  const auto v = to_real(token);
  if (!v) throw ParseError(source, line, "not a finite number: '" + std::string(token) + "'");
  return *v;
}

}  // namespace

PoseParseResult parse_cambridge(std::string_view text, QuatOrder order, const std::string& source) {
  PoseParseResult out;
  std::set<std::string, std::less<>> seen;
  const auto lines = split_lines(text);
  for (std::size_t i = kCambridgeHeaderLines; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (is_blank(lines[i])) continue;
    const auto fields = split_whitespace(lines[i]);
    if (fields.size() != 8) {
      throw ParseError(source, lineno,
                       "expected 8 fields (frame X Y Z qW qX qY qZ), got " +
                           std::to_string(fields.size()));
    }
    std::array<double, 7> v{};
    for (std::size_t k = 0; k < 7; ++k) v[k] = require_real(fields[k + 1], source, lineno);

    std::string frame(fields[0]);
    if (!seen.insert(frame).second) throw ParseError(source, lineno, "duplicate frame id " + frame);

    Quaternion q = order == QuatOrder::wxyz ? Quaternion{v[3], v[4], v[5], v[6]}
                                            : Quaternion{v[6], v[3], v[4], v[5]};
    const double n = q.norm();
    if (std::abs(n - 1.0) > kLabelQuatTolerance) {
      out.rejected.push_back({frame, lineno, "quaternion norm " + std::to_string(n) + " is not unit"});
      continue;
    }
    q = {q.w / n, q.x / n, q.y / n, q.z / n};
    out.records.push_back({std::move(frame), Pose{{v[0], v[1], v[2]}, q}});
  }
  return out;
}

PoseParseResult parse_sevenscenes(const std::vector<PoseFile>& files, bool world_to_camera) {
  PoseParseResult out;
  std::set<std::string, std::less<>> seen;
  for (const auto& f : files) {
    const auto tokens = split_whitespace(f.content);
    if (tokens.size() != 16) {
      throw ParseError(f.frame_id, 0, "expected 16 numbers, got " + std::to_string(tokens.size()));
    }
    if (!seen.insert(f.frame_id).second) throw ParseError(f.frame_id, 0, "duplicate frame id");
    std::array<double, 16> h{};
    for (std::size_t k = 0; k < 16; ++k) h[k] = require_real(tokens[k], f.frame_id, 0);

    if (std::abs(h[12]) > kBottomRowTolerance || std::abs(h[13]) > kBottomRowTolerance ||
        std::abs(h[14]) > kBottomRowTolerance || std::abs(h[15] - 1.0) > kBottomRowTolerance) {
      out.rejected.push_back({f.frame_id, 0, "bottom row is not (0, 0, 0, 1)"});
      continue;
    }
    RotMatrix3 rot{{h[0], h[1], h[2], h[4], h[5], h[6], h[8], h[9], h[10]}};
    EuclidPoint3 t{h[3], h[7], h[11]};
    if (world_to_camera) {
      // [R t]^-1 = [R^T  -R^T t]
      RotMatrix3 rt;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) rt.m[static_cast<std::size_t>(r * 3 + c)] = rot(c, r);
      t = {-(rt(0, 0) * t.x + rt(0, 1) * t.y + rt(0, 2) * t.z),
           -(rt(1, 0) * t.x + rt(1, 1) * t.y + rt(1, 2) * t.z),
           -(rt(2, 0) * t.x + rt(2, 1) * t.y + rt(2, 2) * t.z)};
      rot = rt;
    }
    try {
      out.records.push_back({f.frame_id, Pose{t, rotmat_to_quat(rot)}});
    } catch (const ValidationError& e) {
      out.rejected.push_back({f.frame_id, 0, e.what()});
    }
  }
  return out;
}

std::vector<PoseFile> load_sevenscenes_files(const fs::path& path) {
  std::vector<PoseFile> files;
  if (fs::is_regular_file(path)) {
    files.push_back({path.filename().string(), read_text_file(path)});
    return files;
  }
  if (!fs::is_directory(path)) throw ParseError(path.string(), 0, "no such file or directory");
  std::vector<fs::path> found;
  for (const auto& entry : fs::recursive_directory_iterator(path)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.size() > 9 && name.ends_with(".pose.txt")) {
      found.push_back(entry.path());
    }
  }
  std::sort(found.begin(), found.end());
  for (const auto& p : found) {
    files.push_back({fs::relative(p, path).generic_string(), read_text_file(p)});
  }
  return files;
}

std::string format_real(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_motor_csv(const std::vector<MotorRecord>& records) {
  const bool labels = std::all_of(records.begin(), records.end(),
                                  [](const MotorRecord& r) { return r.lambda.has_value(); });
  const bool preds = std::none_of(records.begin(), records.end(),
                                  [](const MotorRecord& r) { return r.lambda.has_value(); });
  if (!labels && !preds) {
    throw ValidationError("motor file mixes label rows (with lambda) and prediction rows");
  }
  std::string out(labels ? kMotorHeader : kPredictionHeader);
  out += '\n';
  for (const auto& r : records) {
    if (r.frame_id.empty() || r.frame_id.find_first_of(",\n\r") != std::string::npos) {
      throw ValidationError("frame id '" + r.frame_id + "' is empty or contains a separator");
    }
    if (labels) {
      const double defect = unit_defect(r.motor);
      if (!(defect <= kLabelUnitTolerance)) {
        throw ValidationError("label motor for " + r.frame_id + " is not unit (defect " +
                              std::to_string(defect) + ")");
      }
    }
    out += r.frame_id;
    for (double c : r.motor.coeffs()) {
      out += ',';
      out += format_real(c);
    }
    if (labels) {
      out += ',';
      out += format_real(*r.lambda);
    }
    out += '\n';
  }
  return out;
}

std::vector<MotorRecord> parse_motor_csv(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "missing header");
  bool with_lambda = false;
  if (lines[0] == kMotorHeader) {
    with_lambda = true;
  } else if (lines[0] != kPredictionHeader) {
    throw ParseError(source, 1, "unexpected header '" + std::string(lines[0]) + "'");
  }
  const std::size_t expected = with_lambda ? 10 : 9;

  std::vector<MotorRecord> out;
  std::set<std::string, std::less<>> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    if (lines[i].empty()) continue;
    const auto fields = split_commas(lines[i]);
    if (fields.size() != expected) {
      throw ParseError(source, lineno,
                       "expected " + std::to_string(expected) + " columns (8 motor coefficients" +
                           (with_lambda ? " and lambda" : "") + "), got " +
                           std::to_string(fields.size()));
    }
    MotorRecord rec;
    rec.frame_id = std::string(fields[0]);
    if (rec.frame_id.empty()) throw ParseError(source, lineno, "empty frame id");
    if (!seen.insert(rec.frame_id).second) {
      throw ParseError(source, lineno, "duplicate frame id " + rec.frame_id);
    }
    std::array<double, Motor::kSize> c{};
    for (std::size_t k = 0; k < Motor::kSize; ++k) c[k] = require_real(fields[k + 1], source, lineno);
    rec.motor = Motor::from_coeffs(c);
    if (with_lambda) rec.lambda = require_real(fields[9], source, lineno);
    out.push_back(std::move(rec));
  }
  return out;
}

void write_file_atomic(const fs::path& dest, std::string_view content) {
  fs::path tmp = dest;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, dest, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at " + dest.string());
  }
}

std::string read_text_file(const fs::path& source) {
  std::ifstream f(source, std::ios::binary);
  if (!f) throw ParseError(source.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_motor_file(const std::vector<MotorRecord>& records, const fs::path& dest) {
  write_file_atomic(dest, format_motor_csv(records));
}

std::vector<MotorRecord> read_motor_file(const fs::path& source) {
  return parse_motor_csv(read_text_file(source), source.string());
}

std::string format_cambridge(const std::vector<PoseRecord>& records) {
  std::string out =
      "Camera poses decoded from motors\n"
      "ImageFile, Camera Position [X Y Z W P Q R]\n"
      "\n";
  for (const auto& r : records) {
    out += r.frame_id;
    for (double v : {r.pose.t.x, r.pose.t.y, r.pose.t.z, r.pose.q.w, r.pose.q.x, r.pose.q.y,
                     r.pose.q.z}) {
      out += ' ';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<EuclidPoint3> parse_point_cloud(std::string_view text, const std::string& source) {
  const auto lines = split_lines(text);
  std::vector<EuclidPoint3> cloud;
  std::size_t first = 0;
  std::size_t vertex_count = 0;
  std::array<std::size_t, 3> xyz_col{0, 1, 2};
  bool ply = !lines.empty() && split_whitespace(lines[0]) == std::vector<std::string_view>{"ply"};

  if (ply) {
    bool ascii = false, in_vertex = false, seen_vertex = false, ended = false;
    std::size_t prop = 0;
    std::array<bool, 3> have{};
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_whitespace(lines[i]);
      if (f.empty()) continue;
      if (f[0] == "format") {
        ascii = f.size() >= 2 && f[1] == "ascii";
      } else if (f[0] == "element") {
        in_vertex = f.size() == 3 && f[1] == "vertex";
        if (in_vertex) {
          seen_vertex = true;
          const auto n = to_real(f[2]);
          if (!n || *n < 0) throw ParseError(source, i + 1, "bad vertex count");
          vertex_count = static_cast<std::size_t>(*n);
        } else if (!seen_vertex) {
          throw ParseError(source, i + 1, "vertex element must come first");
        }
      } else if (f[0] == "property" && in_vertex) {
        const std::string_view name = f.back();
        for (std::size_t a = 0; a < 3; ++a) {
          if (name == std::array<std::string_view, 3>{"x", "y", "z"}[a]) {
            xyz_col[a] = prop;
            have[a] = true;
          }
        }
        ++prop;
      } else if (f[0] == "end_header") {
        first = i + 1;
        ended = true;
        break;
      }
    }
    if (!ended) throw ParseError(source, 0, "PLY header has no end_header");
    if (!ascii) throw ParseError(source, 0, "only ASCII PLY is supported");
    if (!have[0] || !have[1] || !have[2]) throw ParseError(source, 0, "PLY vertices lack x/y/z");
  }

  for (std::size_t i = first; i < lines.size(); ++i) {
    if (ply && cloud.size() == vertex_count) break;
    const std::string_view line = lines[i];
    if (is_blank(line) || (!ply && split_whitespace(line)[0].starts_with('#'))) continue;
    const auto f = split_whitespace(line);
    const std::size_t need = std::max({xyz_col[0], xyz_col[1], xyz_col[2]}) + 1;
    if (f.size() < need) throw ParseError(source, i + 1, "expected x y z");
    cloud.push_back({require_real(f[xyz_col[0]], source, i + 1),
                     require_real(f[xyz_col[1]], source, i + 1),
                     require_real(f[xyz_col[2]], source, i + 1)});
  }
  if (ply && cloud.size() != vertex_count) {
    throw ParseError(source, 0,
                     "PLY declares " + std::to_string(vertex_count) + " vertices, found " +
                         std::to_string(cloud.size()));
  }
  return cloud;
}

std::vector<EuclidPoint3> read_point_cloud(const fs::path& source) {
  return parse_point_cloud(read_text_file(source), source.string());
}

Curvature lambda_for_area(const DatasetArea& area, std::optional<double> override_lambda) {
  if (override_lambda) return Curvature(*override_lambda);
  const double a = area.area_or_volume;
  if (!std::isfinite(a) || !(a > 0.0)) {
    throw ValidationError("dataset area/volume must be positive, got " + std::to_string(a));
  }
  if (area.kind == AreaKind::indoor) return Curvature(10.0);
  if (a <= 1000.0) return Curvature(10.0);
  if (a <= 10000.0) return Curvature(200.0);
  return Curvature(1000.0);
}

}  // namespace motorpose::io

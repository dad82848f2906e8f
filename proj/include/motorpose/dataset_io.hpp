#pragma once

// Pose label ingestion (Cambridge Landmarks, 7-Scenes), motor CSV
// interchange, point-cloud ingestion and the curvature lookup table.
//
// Motor CSV:       frame_id,alpha,b12,b13,b14,b23,b24,b34,gamma,lambda
// Prediction CSV:  frame_id,alpha,b12,b13,b14,b23,b24,b34,gamma
// Reals are written with 17 significant digits, so write/read is bit-exact.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "motorpose/motor.hpp"
#include "motorpose/pose_codec.hpp"
#include "motorpose/spherical.hpp"

namespace motorpose::io {

struct PoseRecord {
  std::string frame_id;
  Pose pose;
};

struct Rejection {
  std::string frame_id;
  /// 1-based line for line-oriented files, 0 otherwise.
  std::size_t line = 0;
  std::string reason;
};

struct PoseParseResult {
  std::vector<PoseRecord> records;
  std::vector<Rejection> rejected;
};

enum class QuatOrder { wxyz, xyzw };

inline constexpr std::size_t kCambridgeHeaderLines = 3;
/// Quaternions within this of unit norm are renormalized; the rest are rejected.
inline constexpr double kLabelQuatTolerance = 1e-3;
inline constexpr double kBottomRowTolerance = 1e-6;

/// Parses "frame_path X Y Z qW qX qY qZ" rows after a 3-line header.
/// Throws ParseError (with line number) on malformed rows or repeated frame ids.
PoseParseResult parse_cambridge(std::string_view text, QuatOrder order = QuatOrder::wxyz,
                                const std::string& source = "<cambridge>");

struct PoseFile {
  std::string frame_id;
  std::string content;
};

/// Each file holds a 4x4 homogeneous camera-to-world matrix. With
/// `world_to_camera` set the matrices are inverted first. Files without 16
/// numbers throw ParseError; bad bottom rows or non-rotations are rejected.
PoseParseResult parse_sevenscenes(const std::vector<PoseFile>& files, bool world_to_camera = false);

/// Collects `*.pose.txt` under a directory (sorted by relative path), or a single file.
std::vector<PoseFile> load_sevenscenes_files(const std::filesystem::path& path);

struct MotorRecord {
  std::string frame_id;
  Motor motor;
  /// Present in label files, absent in prediction files.
  std::optional<double> lambda;
};

inline constexpr double kLabelUnitTolerance = 1e-6;

std::string format_real(double v);

/// Renders a motor CSV. Label files (every record has lambda) must hold unit
/// motors within kLabelUnitTolerance; prediction files (no record has lambda)
/// are unrestricted. Mixing the two throws ValidationError.
std::string format_motor_csv(const std::vector<MotorRecord>& records);

/// Accepts either header. Throws ParseError on malformed rows and
/// duplicate frame ids.
std::vector<MotorRecord> parse_motor_csv(std::string_view text,
                                         const std::string& source = "<motor csv>");

void write_motor_file(const std::vector<MotorRecord>& records, const std::filesystem::path& dest);
std::vector<MotorRecord> read_motor_file(const std::filesystem::path& source);

/// Writes to a sibling temporary and renames over `dest`.
void write_file_atomic(const std::filesystem::path& dest, std::string_view content);
std::string read_text_file(const std::filesystem::path& source);

/// Cambridge-style pose file (3 header lines, 17-digit reals).
std::string format_cambridge(const std::vector<PoseRecord>& records);

/// ASCII "x y z" rows or an ASCII PLY vertex list.
std::vector<EuclidPoint3> parse_point_cloud(std::string_view text,
                                            const std::string& source = "<cloud>");
std::vector<EuclidPoint3> read_point_cloud(const std::filesystem::path& source);

enum class AreaKind { outdoor, indoor };

struct DatasetArea {
  /// m^2 outdoors, m^3 indoors.
  double area_or_volume = 0.0;
  AreaKind kind = AreaKind::outdoor;
};

/// Curvature chosen from the scene extent:
///   indoor               -> 10
///   outdoor <= 1000 m^2  -> 10
///   outdoor <= 10000 m^2 -> 200
///   outdoor  > 10000 m^2 -> 1000
/// An explicit override always wins.
Curvature lambda_for_area(const DatasetArea& area, std::optional<double> override_lambda = {});

}  // namespace motorpose::io

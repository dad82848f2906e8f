#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "motorpose/dataset_io.hpp"
#include "motorpose/metrics.hpp"

namespace motorpose::cli {

enum class Command { encode, decode, eval, check, trace, cloudcheck };
enum class DatasetFormat { cambridge, sevenscenes };

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInputError = 2;

struct RunConfig {
  Command command = Command::encode;
  DatasetFormat format = DatasetFormat::cambridge;
  std::optional<double> lambda;
  std::optional<double> area;
  io::AreaKind kind = io::AreaKind::outdoor;
  io::QuatOrder quat_order = io::QuatOrder::wxyz;
  bool world_to_camera = false;

  std::filesystem::path input;
  std::filesystem::path gt;
  std::filesystem::path pred;
  std::filesystem::path cloud;
  std::filesystem::path out;
  std::filesystem::path hist_csv;
  std::filesystem::path cdf_csv;

  metrics::Thresholds thresholds;
  std::uint64_t seed = 0;
  bool strict = false;
};

/// "<meters>,<degrees>", both positive.
std::optional<metrics::Thresholds> parse_thresholds(std::string_view text);

/// Log verbosity from MOTORPOSE_LOG (error|warn|info|debug); warn by default.
enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };
LogLevel log_level_from_env();

/// Each command writes its summary to `out` and diagnostics to `err`, and
/// returns the process exit code. Library errors are reported on `err` and
/// mapped to kExitInputError.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int run_encode(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_decode(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_check(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int run_cloudcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace motorpose::cli

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "motorpose/motor.hpp"
#include "motorpose/pose_codec.hpp"
#include "motorpose/spherical.hpp"

namespace motorpose::metrics {

/// L1 distance ||d_hat - d||_1, meters.
double positional_error(const EuclidPoint3& d_hat, const EuclidPoint3& d);

/// acos(<R ~R_hat>_0) in degrees, evaluated as the angle between the two
/// coefficient 4-vectors so it is exact for identical rotors and never leaves
/// [0, 180]. For a relative rotation by theta this is theta / 2. Throws
/// ValidationError unless both rotors are unit within 1e-6.
double rotational_error(const Rotor3& r, const Rotor3& r_hat);

inline constexpr double kRotorUnitTolerance = 1e-6;

/// Mean of the 8 squared coefficient differences.
double motor_mse(const Motor& m_hat, const Motor& m);

struct Thresholds {
  double meters = 10.0;
  double degrees = 10.0;
};

struct FrameErrors {
  std::string frame_id;
  double err_pos = 0.0;
  double err_rot = 0.0;
  double motor_mse = 0.0;
  /// |<M_hat ~M_hat>_0 - 1| of the prediction.
  double unit_defect = 0.0;
};

struct FrameFailure {
  std::string frame_id;
  std::string reason;
};

struct Histogram {
  /// bins + 1 edges, uniform from 0 to the 99th percentile.
  std::vector<double> edges;
  /// Normalized to sum to 1; values beyond the last edge land in the last bin.
  std::vector<double> density;
};

inline constexpr std::size_t kHistogramBins = 50;
inline constexpr double kHistogramPercentile = 99.0;

struct EvalReport {
  double lambda = 0.0;
  Thresholds thresholds;
  std::size_t frame_count = 0;
  std::size_t excluded_count = 0;
  double median_pos = 0.0;
  double median_rot = 0.0;
  /// Percentage of frames with err_pos < meters and err_rot < degrees.
  double pct_within = 0.0;
  Histogram histogram_pos;
  Histogram histogram_rot;
  std::vector<double> cdf_pos;
  std::vector<double> cdf_rot;
  /// Absent when either error array has zero variance.
  std::optional<double> pearson_pos_rot;
  /// Sorted by frame_id.
  std::vector<FrameErrors> per_frame;
  std::vector<FrameFailure> failures;
};

struct LabeledMotor {
  std::string frame_id;
  Motor motor;
};

/// Median; even counts average the middle two. Requires a non-empty input.
double median(std::vector<double> values);
/// Linear-interpolation percentile (p in [0, 100]) of a non-empty input.
double percentile(std::vector<double> values, double p);
/// Pearson correlation; nullopt for fewer than two values or zero variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);
Histogram normalized_histogram(std::span<const double> values,
                               std::size_t bins = kHistogramBins,
                               double upper_percentile = kHistogramPercentile);
/// Percentage of `errors` with both components under the thresholds.
double pct_within(std::span<const FrameErrors> errors, const Thresholds& thresholds);

/// Decodes every prediction against its ground truth and aggregates.
/// Throws InputError if the frame-id sets differ or contain duplicates.
/// Frames whose motors fail to decode are listed in `failures` and excluded.
EvalReport evaluate_run(std::span<const LabeledMotor> pred, std::span<const LabeledMotor> gt,
                        const Curvature& c, const Thresholds& thresholds = {});

nlohmann::json to_json(const EvalReport& report);

struct CloudMse {
  double mse = 0.0;
  std::size_t used = 0;
  std::size_t excluded = 0;
};

/// Mean squared distance between the cloud carried by M and by M_hat through
/// the sphere (up-project, sandwich, down-project). Points that land on the
/// antipode under either motor are excluded and counted. Throws
/// ValidationError on an empty cloud or when every point is excluded.
CloudMse pointcloud_mse(std::span<const EuclidPoint3> cloud, const Motor& m, const Motor& m_hat,
                        const Curvature& c);

}  // namespace motorpose::metrics

#include "motorpose/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "motorpose/error.hpp"

namespace motorpose::metrics {

double positional_error(const EuclidPoint3& d_hat, const EuclidPoint3& d) {
  return std::abs(d_hat.x - d.x) + std::abs(d_hat.y - d.y) + std::abs(d_hat.z - d.z);
}

double rotational_error(const Rotor3& r, const Rotor3& r_hat) {
  for (const Rotor3* x : {&r, &r_hat}) {
    const double n = x->norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > kRotorUnitTolerance) {
      throw ValidationError("rotor norm " + std::to_string(n) + " is not unit");
    }
  }
  // <R ~R_hat>_0 is the 4D dot product of the coefficient vectors, so the
  // error is the angle between them. atan2 of the wedge magnitude against the
  // dot product equals acos of the dot for unit rotors, but stays exact near
  // 0 and 180 degrees where acos loses half its digits.
  const std::array<double, 4> a{r.scalar, r.b12, r.b13, r.b23};
  const std::array<double, 4> b{r_hat.scalar, r_hat.b12, r_hat.b13, r_hat.b23};
  double dot = 0.0, wedge2 = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    dot += a[i] * b[i];
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double minor = a[i] * b[j] - a[j] * b[i];
      wedge2 += minor * minor;
    }
  }
  return std::atan2(std::sqrt(wedge2), dot) * 180.0 / std::numbers::pi;
}

double motor_mse(const Motor& m_hat, const Motor& m) {
  const auto a = m_hat.coeffs();
  const auto b = m.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < Motor::kSize; ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return sum / static_cast<double>(Motor::kSize);
}

double median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty set");
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  const double upper = *mid;
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double rank = std::clamp(p, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) return std::nullopt;
  return std::clamp(sab / (std::sqrt(saa) * std::sqrt(sbb)), -1.0, 1.0);
}

Histogram normalized_histogram(std::span<const double> values, std::size_t bins,
                               double upper_percentile) {
  Histogram h;
  if (bins == 0) throw ValidationError("histogram needs at least one bin");
  double upper = values.empty() ? 0.0
                                : percentile({values.begin(), values.end()}, upper_percentile);
  if (!(upper > 0.0)) {
    // every error is zero (or the set is empty): keep a unit-width range
    upper = 1.0;
  }
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) {
    h.edges[i] = upper * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.density.assign(bins, 0.0);
  if (values.empty()) return h;
  const double width = upper / static_cast<double>(bins);
  for (double v : values) {
    auto idx = static_cast<std::size_t>(std::max(0.0, std::floor(v / width)));
    h.density[std::min(idx, bins - 1)] += 1.0;
  }
  for (double& d : h.density) d /= static_cast<double>(values.size());
  return h;
}

double pct_within(std::span<const FrameErrors> errors, const Thresholds& thresholds) {
  if (errors.empty()) return 0.0;
  const auto hits = std::count_if(errors.begin(), errors.end(), [&](const FrameErrors& e) {
    return e.err_pos < thresholds.meters && e.err_rot < thresholds.degrees;
  });
  return 100.0 * static_cast<double>(hits) / static_cast<double>(errors.size());
}

namespace {

std::map<std::string, const Motor*> index_by_frame(std::span<const LabeledMotor> rows,
                                                   std::vector<std::string>& duplicates) {
  std::map<std::string, const Motor*> out;
  for (const auto& r : rows) {
    if (!out.emplace(r.frame_id, &r.motor).second) duplicates.push_back(r.frame_id);
  }
  return out;
}

}  // namespace

EvalReport evaluate_run(std::span<const LabeledMotor> pred, std::span<const LabeledMotor> gt,
                        const Curvature& c, const Thresholds& thresholds) {
  std::vector<std::string> dup_pred, dup_gt;
  const auto pred_by_id = index_by_frame(pred, dup_pred);
  const auto gt_by_id = index_by_frame(gt, dup_gt);

  std::vector<std::string> offenders;
  for (const auto& id : dup_pred) offenders.push_back("duplicate in predictions: " + id);
  for (const auto& id : dup_gt) offenders.push_back("duplicate in ground truth: " + id);
  for (const auto& [id, _] : pred_by_id) {
    if (!gt_by_id.contains(id)) offenders.push_back("missing from ground truth: " + id);
  }
  for (const auto& [id, _] : gt_by_id) {
    if (!pred_by_id.contains(id)) offenders.push_back("missing from predictions: " + id);
  }
  if (!offenders.empty()) {
    throw InputError("prediction and ground-truth frame ids do not match (" +
                         std::to_string(offenders.size()) + " offenders)",
                     std::move(offenders));
  }

  EvalReport report;
  report.lambda = c.lambda();
  report.thresholds = thresholds;
  report.frame_count = gt_by_id.size();

  // map iteration yields frames sorted by id
  for (const auto& [id, gt_motor] : gt_by_id) {
    const Motor& pred_motor = *pred_by_id.at(id);
    try {
      const DecodedPose truth = decode_motor(*gt_motor, c);
      const DecodedPose guess = decode_motor(pred_motor, c);
      FrameErrors fe;
      fe.frame_id = id;
      fe.err_pos = positional_error(guess.pose.t, truth.pose.t);
      fe.err_rot = rotational_error(truth.rotor, guess.rotor);
      fe.motor_mse = motor_mse(pred_motor, *gt_motor);
      fe.unit_defect = guess.unit_defect;
      report.per_frame.push_back(std::move(fe));
    } catch (const Error& e) {
      report.failures.push_back({id, e.what()});
    }
  }
  report.excluded_count = report.failures.size();

  std::vector<double> pos, rot;
  pos.reserve(report.per_frame.size());
  rot.reserve(report.per_frame.size());
  for (const auto& fe : report.per_frame) {
    pos.push_back(fe.err_pos);
    rot.push_back(fe.err_rot);
  }
  if (!pos.empty()) {
    report.median_pos = median(pos);
    report.median_rot = median(rot);
  }
  report.pct_within = pct_within(report.per_frame, thresholds);
  report.histogram_pos = normalized_histogram(pos);
  report.histogram_rot = normalized_histogram(rot);
  report.pearson_pos_rot = pearson(pos, rot);
  report.cdf_pos = pos;
  report.cdf_rot = rot;
  std::sort(report.cdf_pos.begin(), report.cdf_pos.end());
  std::sort(report.cdf_rot.begin(), report.cdf_rot.end());
  return report;
}

nlohmann::json to_json(const EvalReport& r) {
  using nlohmann::json;
  json frames = json::array();
  for (const auto& f : r.per_frame) {
    frames.push_back({{"frame_id", f.frame_id},
                      {"err_pos", f.err_pos},
                      {"err_rot", f.err_rot},
                      {"motor_mse", f.motor_mse},
                      {"unit_defect", f.unit_defect}});
  }
  json failures = json::array();
  for (const auto& f : r.failures) failures.push_back({{"frame_id", f.frame_id}, {"reason", f.reason}});
  auto hist = [](const Histogram& h) { return json{{"edges", h.edges}, {"density", h.density}}; };
  json out;
  out["lambda"] = r.lambda;
  out["thresholds"] = {{"meters", r.thresholds.meters}, {"degrees", r.thresholds.degrees}};
  out["frame_count"] = r.frame_count;
  out["excluded_count"] = r.excluded_count;
  out["median_pos"] = r.median_pos;
  out["median_rot"] = r.median_rot;
  out["pct_within"] = r.pct_within;
  out["histogram_pos"] = hist(r.histogram_pos);
  out["histogram_rot"] = hist(r.histogram_rot);
  out["cdf_pos"] = r.cdf_pos;
  out["cdf_rot"] = r.cdf_rot;
  out["pearson_pos_rot"] = r.pearson_pos_rot ? json(*r.pearson_pos_rot) : json(nullptr);
  out["per_frame"] = std::move(frames);
  out["failures"] = std::move(failures);
  return out;
}

CloudMse pointcloud_mse(std::span<const EuclidPoint3> cloud, const Motor& m, const Motor& m_hat,
                        const Curvature& c) {
  if (cloud.empty()) throw ValidationError("point cloud is empty");
  CloudMse out;
  double sum = 0.0;
  for (const auto& p : cloud) {
    const SpherePoint4 X = up_project(p, c);
    try {
      const EuclidPoint3 a = down_project(apply_motor(m, X), c);
      const EuclidPoint3 b = down_project(apply_motor(m_hat, X), c);
      sum += distance_squared(a, b);
      ++out.used;
    } catch (const DegeneratePointError&) {
      ++out.excluded;
    }
  }
  if (out.used == 0) throw ValidationError("every cloud point mapped to the point at infinity");
  out.mse = sum / static_cast<double>(out.used);
  return out;
}

}  // namespace motorpose::metrics

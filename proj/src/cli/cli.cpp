#include "motorpose/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "motorpose/error.hpp"
#include "motorpose/sampling.hpp"

namespace motorpose::cli {

namespace fs = std::filesystem;

LogLevel log_level_from_env() {
  const char* env = std::getenv("MOTORPOSE_LOG");
  if (env == nullptr) return LogLevel::warn;
  const std::string v(env);
  if (v == "error") return LogLevel::error;
  if (v == "info") return LogLevel::info;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::warn;
}

std::optional<metrics::Thresholds> parse_thresholds(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  auto number = [](std::string_view t) -> std::optional<double> {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v) || !(v > 0.0)) {
      return std::nullopt;
    }
    return v;
  };
  const auto m = number(text.substr(0, comma));
  const auto deg = number(text.substr(comma + 1));
  if (!m || !deg) return std::nullopt;
  return metrics::Thresholds{*m, *deg};
}

namespace {

class Log {
 public:
  explicit Log(std::ostream& err) : err_(err), level_(log_level_from_env()) {}

  template <typename... Args>
  void error(fmt::format_string<Args...> f, Args&&... args) {
    emit(LogLevel::error, "error", fmt::format(f, std::forward<Args>(args)...));
  }
  template <typename... Args>
  void warn(fmt::format_string<Args...> f, Args&&... args) {
    emit(LogLevel::warn, "warning", fmt::format(f, std::forward<Args>(args)...));
  }
  template <typename... Args>
  void info(fmt::format_string<Args...> f, Args&&... args) {
    emit(LogLevel::info, "info", fmt::format(f, std::forward<Args>(args)...));
  }

 private:
  void emit(LogLevel at, const char* tag, const std::string& msg) {
    if (static_cast<int>(at) <= static_cast<int>(level_)) err_ << tag << ": " << msg << '\n';
  }

  std::ostream& err_;
  LogLevel level_;
};

void require_path(const fs::path& p, const char* flag) {
  if (p.empty()) throw ValidationError(std::string("missing required ") + flag);
}

Curvature resolve_lambda(const RunConfig& cfg) {
  if (cfg.lambda) return Curvature(*cfg.lambda);
  if (cfg.area) return io::lambda_for_area({*cfg.area, cfg.kind});
  throw ValidationError("lambda is unresolved: pass --lambda or --area with --kind");
}

io::PoseParseResult load_poses(const RunConfig& cfg) {
  require_path(cfg.input, "--input");
  if (cfg.format == DatasetFormat::cambridge) {
    return io::parse_cambridge(io::read_text_file(cfg.input), cfg.quat_order, cfg.input.string());
  }
  return io::parse_sevenscenes(io::load_sevenscenes_files(cfg.input), cfg.world_to_camera);
}

void report_rejections(const io::PoseParseResult& parsed, Log& log) {
  for (const auto& r : parsed.rejected) {
    if (r.line > 0) {
      log.warn("rejected {} (line {}): {}", r.frame_id, r.line, r.reason);
    } else {
      log.warn("rejected {}: {}", r.frame_id, r.reason);
    }
  }
}

/// Single lambda shared by a label file, unless overridden.
Curvature lambda_from_labels(const RunConfig& cfg, const std::vector<io::MotorRecord>& rows) {
  if (cfg.lambda) return Curvature(*cfg.lambda);
  std::optional<double> found;
  for (const auto& r : rows) {
    if (!r.lambda) continue;
    if (found && *found != *r.lambda) {
      throw ValidationError("ground truth mixes lambda values; pass --lambda");
    }
    found = r.lambda;
  }
  if (!found) throw ValidationError("no lambda column in ground truth; pass --lambda");
  return Curvature(*found);
}

std::vector<metrics::LabeledMotor> labeled(const std::vector<io::MotorRecord>& rows) {
  std::vector<metrics::LabeledMotor> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back({r.frame_id, r.motor});
  return out;
}

/// Angle in degrees between the rotations of two quaternions.
double rotation_angle_deg(const Quaternion& a, const Quaternion& b) {
  // conj(a) * b
  const double w = a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
  const double x = a.w * b.x - a.x * b.w - a.y * b.z + a.z * b.y;
  const double y = a.w * b.y + a.x * b.z - a.y * b.w - a.z * b.x;
  const double z = a.w * b.z - a.x * b.y + a.y * b.x - a.z * b.w;
  return 2.0 * std::atan2(std::sqrt(x * x + y * y + z * z), std::abs(w)) * 180.0 /
         std::numbers::pi;
}

double distance(const EuclidPoint3& a, const EuclidPoint3& b) {
  return std::sqrt(distance_squared(a, b));
}

std::string format_offenders(const std::vector<std::string>& offenders) {
  std::string s;
  const std::size_t shown = std::min<std::size_t>(offenders.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) s += "\n  " + offenders[i];
  if (offenders.size() > shown) s += fmt::format("\n  ... and {} more", offenders.size() - shown);
  return s;
}

// ---------------------------------------------------------------- check

struct Family {
  Family(std::string n, double lim) : name(std::move(n)), limit(lim) {}

  std::string name;
  double limit = 0.0;
  double worst = 0.0;
  std::size_t count = 0;
  std::string where;

  void observe(double value, const std::string& at = {}) {
    ++count;
    if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
    if (count == 1 || value > worst) {
      worst = value;
      where = at;
    }
  }
  bool passed() const { return worst <= limit; }
};

constexpr std::size_t kCheckSamples = 1000;
constexpr std::array<double, 4> kCheckLambdas = {1.0, 10.0, 200.0, 1000.0};
constexpr std::array<double, 3> kCodecLambdas = {10.0, 200.0, 1000.0};

std::vector<Family> random_families(std::uint64_t seed) {
  using namespace ga;
  sampling::Rng rng(seed);
  std::vector<Family> fam;

  Family assoc{"algebra.associativity", kAlgebraTolerance};
  Family antiauto{"algebra.reverse_antiautomorphism", kAlgebraTolerance};
  Family cyclic{"algebra.scalar_cyclicity", kAlgebraTolerance};
  Family complete{"algebra.grade_completeness", 0.0};
  for (std::size_t i = 0; i < kCheckSamples; ++i) {
    const auto a = sampling::random_multivector(rng);
    const auto b = sampling::random_multivector(rng);
    const auto c = sampling::random_multivector(rng);
    const double na = norm(a), nb = norm(b), nc = norm(c);
    assoc.observe(norm((a * b) * c - a * (b * c)) / (na * nb * nc));
    antiauto.observe(norm(reverse(a * b) - reverse(b) * reverse(a)) / (na * nb));
    cyclic.observe(std::abs(scalar_part(a * b) - scalar_part(b * a)) / (na * nb));
    Multivector sum;
    for (int k = 0; k <= kMaxGrade; ++k) sum = sum + grade_project(a, k);
    complete.observe(norm(sum - a));
  }
  fam.push_back(assoc);
  fam.push_back(antiauto);
  fam.push_back(cyclic);
  fam.push_back(complete);

  Family unit{"embedding.unit_sphere", 1e-12};
  Family round{"embedding.round_trip", 1e-12};
  Family transport{"embedding.origin_transport", 1e-12};
  for (std::size_t i = 0; i < kCheckSamples; ++i) {
    const Curvature c(kCheckLambdas[i % kCheckLambdas.size()]);
    const EuclidPoint3 x = sampling::random_point(rng, 10.0 * c.lambda());
    const SpherePoint4 X = up_project(x, c);
    unit.observe(std::abs(X.norm() - 1.0));
    round.observe(distance(down_project(X, c), x) / (1.0 + std::sqrt(x.norm_squared())));
    const SpherePoint4 moved = apply_motor(translation_rotor(x, c).to_motor(), SpherePoint4{});
    transport.observe(std::sqrt((moved.v1 - X.v1) * (moved.v1 - X.v1) +
                                (moved.v2 - X.v2) * (moved.v2 - X.v2) +
                                (moved.v3 - X.v3) * (moved.v3 - X.v3) +
                                (moved.v4 - X.v4) * (moved.v4 - X.v4)));
  }
  fam.push_back(unit);
  fam.push_back(round);
  fam.push_back(transport);

  Family pos{"codec.round_trip_position", 1e-9};
  Family rot{"codec.round_trip_rotation_deg", 1e-9};
  Family constraint{"codec.unit_constraint", 1e-12};
  Family action{"codec.action_equivalence", 1e-12};
  for (std::size_t i = 0; i < kCheckSamples; ++i) {
    const Curvature c(kCodecLambdas[i % kCodecLambdas.size()]);
    const Pose p = sampling::random_pose(rng, c.lambda() / 2.0);
    const Motor m = encode_pose(p, c);
    constraint.observe(std::max(unit_defect(m), non_scalar_defect(m)));
    const DecodedPose d = decode_motor(m, c);
    pos.observe(distance(d.pose.t, p.t));
    rot.observe(rotation_angle_deg(d.pose.q, p.q));
    const EuclidPoint3 v = sampling::random_point(rng, 1.0);
    const RotMatrix3 rm = quat_to_rotmat(p.q);
    const EuclidPoint3 by_matrix{rm(0, 0) * v.x + rm(0, 1) * v.y + rm(0, 2) * v.z,
                                 rm(1, 0) * v.x + rm(1, 1) * v.y + rm(1, 2) * v.z,
                                 rm(2, 0) * v.x + rm(2, 1) * v.y + rm(2, 2) * v.z};
    action.observe(distance(rotate(quat_to_rotor(p.q), v), by_matrix));
  }
  fam.push_back(pos);
  fam.push_back(rot);
  fam.push_back(constraint);
  fam.push_back(action);

  Family range{"metrics.rot_error_range", 0.0};
  std::normal_distribution<double> noise(0.0, 3e-7);
  for (std::size_t i = 0; i < kCheckSamples; ++i) {
    const Rotor3 a = quat_to_rotor(sampling::random_quaternion(rng));
    // half the pairs coincide, exercising the clamp at <R ~R>_0 ~ 1
    Rotor3 b = (i % 2 == 0) ? a : quat_to_rotor(sampling::random_quaternion(rng));
    b = {b.scalar + noise(rng), b.b12 + noise(rng), b.b13 + noise(rng), b.b23 + noise(rng)};
    const double e = metrics::rotational_error(a, b);
    range.observe((e >= 0.0 && e <= 180.0) ? 0.0 : std::numeric_limits<double>::infinity());
  }
  fam.push_back(range);
  return fam;
}

std::vector<Family> motor_file_families(const RunConfig& cfg,
                                        const std::vector<io::MotorRecord>& rows) {
  Family constraint{"file.unit_constraint", 1e-9};
  Family residual{"file.decode_residual", 1e-10};
  Family sign{"file.canonical_sign", 0.0};
  for (const auto& r : rows) {
    constraint.observe(std::max(unit_defect(r.motor), non_scalar_defect(r.motor)), r.frame_id);
    sign.observe(canonicalize_motor(r.motor) == r.motor ? 0.0 : 1.0, r.frame_id);
    const std::optional<double> lambda = cfg.lambda ? cfg.lambda : r.lambda;
    if (!lambda) throw ValidationError("no lambda for " + r.frame_id + "; pass --lambda");
    try {
      residual.observe(decode_motor(r.motor, Curvature(*lambda)).residual, r.frame_id);
    } catch (const Error&) {
      residual.observe(std::numeric_limits<double>::infinity(), r.frame_id);
    }
  }
  return {constraint, residual, sign};
}

std::vector<Family> pose_file_families(const RunConfig& cfg, Log& log) {
  const auto parsed = load_poses(cfg);
  report_rejections(parsed, log);
  const Curvature c = resolve_lambda(cfg);
  Family pos{"file.codec_round_trip_position", 1e-9};
  Family rot{"file.codec_round_trip_rotation_deg", 1e-9};
  for (const auto& r : parsed.records) {
    try {
      const DecodedPose d = decode_motor(encode_pose(r.pose, c), c);
      pos.observe(distance(d.pose.t, r.pose.t), r.frame_id);
      rot.observe(rotation_angle_deg(d.pose.q, r.pose.q), r.frame_id);
    } catch (const Error&) {
      pos.observe(std::numeric_limits<double>::infinity(), r.frame_id);
    }
  }
  return {pos, rot};
}

bool looks_like_motor_csv(const fs::path& p) {
  if (!fs::is_regular_file(p)) return false;
  return io::read_text_file(p).starts_with("frame_id,alpha,");
}

}  // namespace

int run_encode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Log log(err);
  require_path(cfg.out, "--out");
  const auto parsed = load_poses(cfg);
  report_rejections(parsed, log);
  if (cfg.strict && !parsed.rejected.empty()) {
    log.error("{} records rejected (--strict)", parsed.rejected.size());
    return kExitInputError;
  }
  const Curvature c = resolve_lambda(cfg);

  std::vector<io::MotorRecord> rows;
  rows.reserve(parsed.records.size());
  double max_defect = 0.0;
  double max_dev = 0.0;
  for (const auto& r : parsed.records) {
    const Motor m = encode_pose(r.pose, c);
    max_defect = std::max({max_defect, unit_defect(m), non_scalar_defect(m)});
    max_dev = std::max(max_dev, trace_deviation(r.pose.t, c));
    rows.push_back({r.frame_id, m, c.lambda()});
  }
  io::write_motor_file(rows, cfg.out);

  fmt::print(out, "encoded {} frames ({} rejected)\n", rows.size(), parsed.rejected.size());
  fmt::print(out, "lambda={}\n", c.lambda());
  fmt::print(out, "max_unit_defect={:.3e}\n", max_defect);
  fmt::print(out, "max_trace_deviation={:.6e}\n", max_dev);
  return kExitOk;
}

int run_decode(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Log log(err);
  require_path(cfg.input, "--input");
  require_path(cfg.out, "--out");
  const auto rows = io::read_motor_file(cfg.input);
  std::vector<io::PoseRecord> poses;
  poses.reserve(rows.size());
  double max_residual = 0.0;
  for (const auto& r : rows) {
    const std::optional<double> lambda = cfg.lambda ? cfg.lambda : r.lambda;
    if (!lambda) throw ValidationError("no lambda for " + r.frame_id + "; pass --lambda");
    const DecodedPose d = decode_motor(r.motor, Curvature(*lambda));
    max_residual = std::max(max_residual, d.residual);
    poses.push_back({r.frame_id, d.pose});
  }
  io::write_file_atomic(cfg.out, io::format_cambridge(poses));
  fmt::print(out, "decoded {} frames\n", poses.size());
  fmt::print(out, "max_decode_residual={:.3e}\n", max_residual);
  return kExitOk;
}

int run_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Log log(err);
  require_path(cfg.gt, "--gt");
  require_path(cfg.pred, "--pred");
  const auto gt = io::read_motor_file(cfg.gt);
  const auto pred = io::read_motor_file(cfg.pred);
  const Curvature c = lambda_from_labels(cfg, gt);

  const auto gt_l = labeled(gt);
  const auto pred_l = labeled(pred);
  metrics::EvalReport report;
  try {
    report = metrics::evaluate_run(pred_l, gt_l, c, cfg.thresholds);
  } catch (const InputError& e) {
    log.error("{}{}", e.what(), format_offenders(e.offenders()));
    return kExitInputError;
  }
  for (const auto& f : report.failures) log.warn("excluded {}: {}", f.frame_id, f.reason);
  if (report.excluded_count > 0) log.warn("{} frames excluded from aggregates", report.excluded_count);

  if (!cfg.out.empty()) io::write_file_atomic(cfg.out, metrics::to_json(report).dump(2) + "\n");
  if (!cfg.hist_csv.empty()) {
    std::string csv = "metric,lower,upper,density\n";
    for (const auto& [name, h] : {std::pair{"pos", &report.histogram_pos},
                                  std::pair{"rot", &report.histogram_rot}}) {
      for (std::size_t i = 0; i < h->density.size(); ++i) {
        csv += fmt::format("{},{},{},{}\n", name, io::format_real(h->edges[i]),
                           io::format_real(h->edges[i + 1]), io::format_real(h->density[i]));
      }
    }
    io::write_file_atomic(cfg.hist_csv, csv);
  }
  if (!cfg.cdf_csv.empty()) {
    std::string csv = "metric,error,fraction\n";
    for (const auto& [name, v] : {std::pair{"pos", &report.cdf_pos},
                                  std::pair{"rot", &report.cdf_rot}}) {
      for (std::size_t i = 0; i < v->size(); ++i) {
        csv += fmt::format("{},{},{}\n", name, io::format_real((*v)[i]),
                           io::format_real(static_cast<double>(i + 1) /
                                           static_cast<double>(v->size())));
      }
    }
    io::write_file_atomic(cfg.cdf_csv, csv);
  }
  fmt::print(out, "{:.3f}m {:.3f}° {:.1f}%\n", report.median_pos, report.median_rot,
             report.pct_within);
  return kExitOk;
}

int run_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Log log(err);
  std::vector<Family> families = random_families(cfg.seed);
  if (!cfg.input.empty()) {
    std::vector<Family> more;
    if (looks_like_motor_csv(cfg.input)) {
      more = motor_file_families(cfg, io::read_motor_file(cfg.input));
    } else {
      more = pose_file_families(cfg, log);
    }
    families.insert(families.end(), more.begin(), more.end());
  }

  std::string report = fmt::format("seed={}\n", cfg.seed);
  std::size_t failed = 0;
  for (const auto& f : families) {
    if (!f.passed()) ++failed;
    report += fmt::format("{} {} worst={:.3e} limit={:.0e} n={}", f.passed() ? "PASS" : "FAIL",
                          f.name, f.worst, f.limit, f.count);
    if (!f.where.empty() && f.worst > 0.0) report += " frame=" + f.where;
    report += '\n';
  }
  report += failed == 0 ? fmt::format("all {} families passed\n", families.size())
                        : fmt::format("{} of {} families failed\n", failed, families.size());
  out << report;
  if (!cfg.out.empty()) io::write_file_atomic(cfg.out, report);
  return failed == 0 ? kExitOk : kExitCheckFailed;
}

int run_trace(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Log log(err);
  require_path(cfg.out, "--out");
  const auto parsed = load_poses(cfg);
  report_rejections(parsed, log);
  if (cfg.strict && !parsed.rejected.empty()) return kExitInputError;
  const Curvature c = resolve_lambda(cfg);

  std::string csv = "frame_id,tx,ty,tz,sx,sy,sz,deviation\n";
  double max_dev = 0.0;
  for (const auto& r : parsed.records) {
    const EuclidPoint3& t = r.pose.t;
    const EuclidPoint3 s = spherical_trace(t, c);
    const double dev = trace_deviation(t, c);
    max_dev = std::max(max_dev, dev);
    csv += r.frame_id;
    for (double v : {t.x, t.y, t.z, s.x, s.y, s.z, dev}) csv += "," + io::format_real(v);
    csv += '\n';
  }
  io::write_file_atomic(cfg.out, csv);
  fmt::print(out, "frames={} lambda={} max_deviation={:.6e}\n", parsed.records.size(), c.lambda(),
             max_dev);
  return kExitOk;
}

int run_cloudcheck(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Log log(err);
  require_path(cfg.cloud, "--cloud");
  require_path(cfg.gt, "--gt");
  require_path(cfg.pred, "--pred");
  const auto cloud = io::read_point_cloud(cfg.cloud);
  if (cloud.empty()) {
    log.error("point cloud {} is empty", cfg.cloud.string());
    return kExitInputError;
  }
  const auto gt = io::read_motor_file(cfg.gt);
  const auto pred = io::read_motor_file(cfg.pred);
  const Curvature c = lambda_from_labels(cfg, gt);

  std::map<std::string, Motor> pred_by_id;
  for (const auto& r : pred) pred_by_id.emplace(r.frame_id, r.motor);
  std::vector<std::string> offenders;
  for (const auto& r : gt) {
    if (!pred_by_id.contains(r.frame_id)) offenders.push_back("missing from predictions: " + r.frame_id);
  }
  if (pred.size() != gt.size() || !offenders.empty()) {
    std::map<std::string, bool> gt_ids;
    for (const auto& r : gt) gt_ids.emplace(r.frame_id, true);
    for (const auto& r : pred) {
      if (!gt_ids.contains(r.frame_id)) offenders.push_back("missing from ground truth: " + r.frame_id);
    }
    log.error("prediction and ground-truth frame ids do not match{}", format_offenders(offenders));
    return kExitInputError;
  }

  std::map<std::string, metrics::CloudMse> per_frame;
  for (const auto& r : gt) {
    try {
      per_frame.emplace(r.frame_id, metrics::pointcloud_mse(cloud, r.motor, pred_by_id.at(r.frame_id), c));
    } catch (const Error& e) {
      log.warn("excluded {}: {}", r.frame_id, e.what());
    }
  }
  std::string csv = "frame_id,mse,used,excluded\n";
  std::vector<double> values;
  for (const auto& [id, m] : per_frame) {
    csv += fmt::format("{},{},{},{}\n", id, io::format_real(m.mse), m.used, m.excluded);
    values.push_back(m.mse);
    if (m.excluded > 0) log.warn("{}: {} cloud points excluded at the antipode", id, m.excluded);
  }
  if (!cfg.out.empty()) io::write_file_atomic(cfg.out, csv);
  if (values.empty()) {
    log.error("no frame produced a cloud MSE");
    return kExitInputError;
  }
  fmt::print(out, "frames={} median_mse={:.6e}\n", values.size(), metrics::median(values));
  return kExitOk;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Log log(err);
  try {
    switch (cfg.command) {
      case Command::encode: return run_encode(cfg, out, err);
      case Command::decode: return run_decode(cfg, out, err);
      case Command::eval: return run_eval(cfg, out, err);
      case Command::check: return run_check(cfg, out, err);
      case Command::trace: return run_trace(cfg, out, err);
      case Command::cloudcheck: return run_cloudcheck(cfg, out, err);
    }
  } catch (const InputError& e) {
    log.error("{}{}", e.what(), format_offenders(e.offenders()));
  } catch (const Error& e) {
    log.error("{}", e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    log.error("{}", e.what());
  }
  return kExitInputError;
}

}  // namespace motorpose::cli

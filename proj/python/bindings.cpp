#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "motorpose/dataset_io.hpp"
#include "motorpose/error.hpp"
#include "motorpose/metrics.hpp"
#include "motorpose/pose_codec.hpp"
#include "motorpose/spherical.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace motorpose;

namespace {

using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;

EuclidPoint3 point(const Vec3& v) { return {v[0], v[1], v[2]}; }
Vec3 vec(const EuclidPoint3& p) { return {p.x, p.y, p.z}; }
Quaternion quat(const Vec4& q) { return {q[0], q[1], q[2], q[3]}; }
Vec4 vec(const Quaternion& q) { return {q.w, q.x, q.y, q.z}; }
Vec4 vec(const Rotor3& r) { return {r.scalar, r.b12, r.b13, r.b23}; }
Rotor3 rotor(const Vec4& r) { return {r[0], r[1], r[2], r[3]}; }

Motor motor(const std::array<double, Motor::kSize>& c) { return Motor::from_coeffs(c); }

std::vector<metrics::LabeledMotor> labeled(
    const std::vector<std::pair<std::string, std::array<double, Motor::kSize>>>& rows) {
  std::vector<metrics::LabeledMotor> out;
  out.reserve(rows.size());
  for (const auto& [id, c] : rows) out.push_back({id, motor(c)});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "1D-Up CGA motors for camera poses: encoding, decoding and error metrics";

  auto base = py::register_exception<Error>(m, "MotorposeError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<DegeneratePointError>(m, "DegeneratePointError", base.ptr());
  py::register_exception<InvalidMotorError>(m, "InvalidMotorError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());

  m.attr("MOTOR_FIELDS") = std::vector<std::string>(Motor::kFieldNames.begin(), Motor::kFieldNames.end());

  m.def(
      "up_project", [](const Vec3& x, double lambda) {
        const auto X = up_project(point(x), Curvature(lambda));
        return Vec4{X.v1, X.v2, X.v3, X.v4};
      },
      py::arg("x"), py::arg("lam"), "Embed a 3D point on the unit 4-sphere.");
  m.def(
      "down_project", [](const Vec4& X, double lambda) {
        return vec(down_project({X[0], X[1], X[2], X[3]}, Curvature(lambda)));
      },
      py::arg("X"), py::arg("lam"));
  m.def(
      "translation_rotor", [](const Vec3& a, double lambda) {
        const auto t = translation_rotor(point(a), Curvature(lambda));
        return Vec4{t.scalar, t.b14, t.b24, t.b34};
      },
      py::arg("a"), py::arg("lam"), "Coefficients on (1, e14, e24, e34).");
  m.def(
      "apply_motor", [](const std::array<double, 8>& mc, const Vec4& X) {
        const auto Y = apply_motor(motor(mc), {X[0], X[1], X[2], X[3]});
        return Vec4{Y.v1, Y.v2, Y.v3, Y.v4};
      },
      py::arg("motor"), py::arg("X"));
  m.def(
      "trace_deviation", [](const Vec3& t, double lambda) {
        return trace_deviation(point(t), Curvature(lambda));
      },
      py::arg("t"), py::arg("lam"));

  m.def(
      "quat_to_rotor", [](const Vec4& q) { return vec(quat_to_rotor(quat(q))); }, py::arg("q"),
      "Rotor coefficients on (1, e12, e13, e23).");
  m.def(
      "rotmat_to_quat", [](const std::array<double, 9>& r) { return vec(rotmat_to_quat({r})); },
      py::arg("matrix"), "Row-major 3x3 rotation to a sign-canonical (w, x, y, z).");
  m.def(
      "encode_pose", [](const Vec3& t, const Vec4& q, double lambda) {
        return encode_pose({point(t), quat(q)}, Curvature(lambda)).coeffs();
      },
      py::arg("t"), py::arg("q"), py::arg("lam"),
      "Motor [alpha, b12, b13, b14, b23, b24, b34, gamma] for position t and quaternion (w, x, y, z).");
  m.def(
      "decode_motor", [](const std::array<double, 8>& mc, double lambda) {
        const DecodedPose d = decode_motor(motor(mc), Curvature(lambda));
        py::dict out;
        out["t"] = vec(d.pose.t);
        out["q"] = vec(d.pose.q);
        out["rotor"] = vec(d.rotor);
        out["residual"] = d.residual;
        out["unit_defect"] = d.unit_defect;
        return out;
      },
      py::arg("motor"), py::arg("lam"));
  m.def(
      "canonicalize_motor", [](const std::array<double, 8>& mc) {
        return canonicalize_motor(motor(mc)).coeffs();
      },
      py::arg("motor"));

  m.def(
      "positional_error", [](const Vec3& a, const Vec3& b) {
        return metrics::positional_error(point(a), point(b));
      },
      py::arg("d_hat"), py::arg("d"));
  m.def(
      "rotational_error", [](const Vec4& r, const Vec4& r_hat) {
        return metrics::rotational_error(rotor(r), rotor(r_hat));
      },
      py::arg("rotor"), py::arg("rotor_hat"), "Degrees; half the relative rotation angle.");
  m.def(
      "motor_mse", [](const std::array<double, 8>& a, const std::array<double, 8>& b) {
        return metrics::motor_mse(motor(a), motor(b));
      },
      py::arg("motor_hat"), py::arg("motor"));
  m.def(
      "pointcloud_mse",
      [](const std::vector<Vec3>& cloud, const std::array<double, 8>& mc,
         const std::array<double, 8>& mhc, double lambda) {
        std::vector<EuclidPoint3> pts;
        pts.reserve(cloud.size());
        for (const auto& p : cloud) pts.push_back(point(p));
        const auto r = metrics::pointcloud_mse(pts, motor(mc), motor(mhc), Curvature(lambda));
        return py::make_tuple(r.mse, r.used, r.excluded);
      },
      py::arg("cloud"), py::arg("motor"), py::arg("motor_hat"), py::arg("lam"),
      "(mse, used, excluded)");
  m.def(
      "evaluate_run_json",
      [](const std::vector<std::pair<std::string, std::array<double, 8>>>& pred,
         const std::vector<std::pair<std::string, std::array<double, 8>>>& gt, double lambda,
         double meters, double degrees) {
        const auto p = labeled(pred);
        const auto g = labeled(gt);
        return metrics::to_json(
                   metrics::evaluate_run(p, g, Curvature(lambda), {meters, degrees}))
            .dump();
      },
      py::arg("pred"), py::arg("gt"), py::arg("lam"), py::arg("meters") = 10.0,
      py::arg("degrees") = 10.0);

  m.def(
      "lambda_for_area", [](double area, const std::string& kind) {
        if (kind != "indoor" && kind != "outdoor") {
          throw ValidationError("kind must be 'indoor' or 'outdoor'");
        }
        return io::lambda_for_area(
                   {area, kind == "indoor" ? io::AreaKind::indoor : io::AreaKind::outdoor})
            .lambda();
      },
      py::arg("area"), py::arg("kind") = "outdoor");
  m.def(
      "parse_cambridge", [](const std::string& text) {
        const auto parsed = io::parse_cambridge(text);
        std::vector<py::tuple> rows;
        for (const auto& r : parsed.records) {
          rows.push_back(py::make_tuple(r.frame_id, vec(r.pose.t), vec(r.pose.q)));
        }
        return py::make_tuple(rows, parsed.rejected.size());
      },
      py::arg("text"), "([(frame_id, t, q)], rejected_count)");
  m.def(
      "read_motor_file", [](const std::string& path) {
        std::vector<py::tuple> rows;
        for (const auto& r : io::read_motor_file(path)) {
          rows.push_back(py::make_tuple(r.frame_id, r.motor.coeffs(),
                                        r.lambda ? py::cast(*r.lambda) : py::none()));
        }
        return rows;
      },
      py::arg("path"));
  m.def(
      "write_motor_file",
      [](const std::vector<std::tuple<std::string, std::array<double, 8>, std::optional<double>>>& rows,
         const std::string& path) {
        std::vector<io::MotorRecord> recs;
        for (const auto& [id, c, lambda] : rows) recs.push_back({id, motor(c), lambda});
        io::write_motor_file(recs, path);
      },
      py::arg("rows"), py::arg("path"));

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}

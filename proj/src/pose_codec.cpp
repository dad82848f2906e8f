#include "motorpose/pose_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "motorpose/error.hpp"

namespace motorpose {

using ga::Blade;

double Quaternion::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Quaternion canonical_sign(const Quaternion& q) {
  for (double c : {q.w, q.x, q.y, q.z}) {
    if (c > 0.0) return q;
    if (c < 0.0) return {-q.w, -q.x, -q.y, -q.z};
  }
  return q;
}

double Rotor3::norm() const {
  return std::sqrt(scalar * scalar + b12 * b12 + b13 * b13 + b23 * b23);
}

ga::Multivector Rotor3::to_multivector() const { return to_motor().to_multivector(); }

double RotMatrix3::orthonormality_defect() const {
  const auto& a = *this;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += a(k, i) * a(k, j);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  const double det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                     a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                     a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  return std::max(worst, std::abs(det - 1.0));
}

Rotor3 quat_to_rotor(const Quaternion& q) {
  const double n = q.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > Quaternion::kUnitTolerance) {
    throw ValidationError("quaternion norm " + std::to_string(n) + " is not unit");
  }
  return {q.w / n, -q.z / n, q.y / n, -q.x / n};
}

Quaternion rotor_to_quat(const Rotor3& r) {
  const double n = r.norm();
  if (!(n > 0.0)) throw ValidationError("zero rotor has no rotation");
  return {r.scalar / n, -r.b23 / n, r.b13 / n, -r.b12 / n};
}

Quaternion rotmat_to_quat(const RotMatrix3& rm) {
  for (double v : rm.m) {
    if (!std::isfinite(v)) throw ValidationError("rotation matrix has non-finite entries");
  }
  const double defect = rm.orthonormality_defect();
  if (defect > RotMatrix3::kOrthoTolerance) {
    throw ValidationError("matrix is not a proper rotation (defect " + std::to_string(defect) +
                          ")");
  }
  const auto& m = rm;
  const double trace = m(0, 0) + m(1, 1) + m(2, 2);
  Quaternion q;
  // Pick the largest of 4w^2, 4x^2, 4y^2, 4z^2 to divide by.
  if (trace >= m(0, 0) && trace >= m(1, 1) && trace >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + trace);
    q = {0.25 * s, (m(2, 1) - m(1, 2)) / s, (m(0, 2) - m(2, 0)) / s, (m(1, 0) - m(0, 1)) / s};
  } else if (m(0, 0) >= m(1, 1) && m(0, 0) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(0, 0) - m(1, 1) - m(2, 2));
    q = {(m(2, 1) - m(1, 2)) / s, 0.25 * s, (m(0, 1) + m(1, 0)) / s, (m(0, 2) + m(2, 0)) / s};
  } else if (m(1, 1) >= m(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + m(1, 1) - m(0, 0) - m(2, 2));
    q = {(m(0, 2) - m(2, 0)) / s, (m(0, 1) + m(1, 0)) / s, 0.25 * s, (m(1, 2) + m(2, 1)) / s};
  } else {
    const double s = 2.0 * std::sqrt(1.0 + m(2, 2) - m(0, 0) - m(1, 1));
    q = {(m(1, 0) - m(0, 1)) / s, (m(0, 2) + m(2, 0)) / s, (m(1, 2) + m(2, 1)) / s, 0.25 * s};
  }
  const double n = q.norm();
  return canonical_sign({q.w / n, q.x / n, q.y / n, q.z / n});
}

RotMatrix3 quat_to_rotmat(const Quaternion& q) {
  const double n = q.norm();
  const double w = q.w / n, x = q.x / n, y = q.y / n, z = q.z / n;
  return {{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
           2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
           2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
}

Motor canonicalize_motor(const Motor& m) {
  for (double c : m.coeffs()) {
    if (!std::isfinite(c)) throw ValidationError("motor has non-finite coefficients");
  }
  for (double c : m.coeffs()) {
    if (c > 0.0) return m;
    if (c < 0.0) return -m;
  }
  throw ValidationError("the zero motor has no canonical sign");
}

Motor compose_pose_motor(const Pose& p, const Curvature& c) {
  const auto t = translation_rotor(p.t, c).to_multivector();
  const auto r = quat_to_rotor(p.q).to_multivector();
  return Motor::from_multivector(t * r);
}

Motor encode_pose(const Pose& p, const Curvature& c) {
  return canonicalize_motor(compose_pose_motor(p, c));
}

DecodedPose decode_motor(const Motor& m, const Curvature& c) {
  DecodedPose out;
  out.unit_defect = unit_defect(m);
  if (!(out.unit_defect < kDecodeRenormLimit)) {
    throw ValidationError("motor is too far from unit to decode (|<M~M>_0 - 1| = " +
                          std::to_string(out.unit_defect) + ")");
  }
  const bool was_unit = out.unit_defect <= kSandwichRenormTolerance &&
                        non_scalar_defect(m) <= kSandwichRenormTolerance;
  const Motor unit = out.unit_defect == 0.0 ? m : normalized(m);

  // 1. displacement of the origin
  const SandwichResult moved = sandwich(unit, SpherePoint4{});
  out.displacement_off_grade = moved.off_grade;
  SpherePoint4 D = moved.point;
  const double dn = D.norm();
  if (!(dn > 0.0)) throw DegeneratePointError("motor sends the origin to zero");
  if (std::abs(dn - 1.0) > SpherePoint4::kUnitTolerance) D = {D.v1 / dn, D.v2 / dn, D.v3 / dn, D.v4 / dn};

  // 2. back to Euclidean space
  const EuclidPoint3 d = down_project(D, c);

  // 3-4. strip the translation
  const auto td = translation_rotor(d, c).to_multivector();
  const auto rotor = ga::reverse(td) * unit.to_multivector();

  Rotor3 r{rotor[Blade::scalar], rotor[Blade::e12], rotor[Blade::e13], rotor[Blade::e23]};
  out.residual = ga::norm(rotor - r.to_multivector());
  if (was_unit && out.residual > kDecodeResidualLimit) {
    throw ConsistencyError("decoded rotor has residual " + std::to_string(out.residual) +
                           " outside the rotation subalgebra");
  }
  const double rn = r.norm();
  if (!(rn > 0.0)) throw ConsistencyError("decoded rotor vanished");
  r = {r.scalar / rn, r.b12 / rn, r.b13 / rn, r.b23 / rn};

  out.rotor = r;
  out.pose = Pose{d, canonical_sign(rotor_to_quat(r))};
  return out;
}

EuclidPoint3 rotate(const Rotor3& r, const EuclidPoint3& v) {
  const auto rm = r.to_multivector();
  const auto out = rm * v.to_multivector() * ga::reverse(rm);
  return {out[Blade::e1], out[Blade::e2], out[Blade::e3]};
}

}  // namespace motorpose

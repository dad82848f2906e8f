#pragma once

// Conversion between conventional pose labels and 1D-Up motors.
//
// Encoding builds M = T_t R. Decoding recovers the pose from M in four steps:
//   1. D = M e4 ~M      (the origin carried by the motor)
//   2. d = h^-1(D)      (down-projection to Euclidean space)
//   3. T_d = g(d)       (translation rotor of the recovered position)
//   4. R = ~T_d M       (what remains is the rotation)
//
// Quaternions map to rotors through i -> -e23, j -> +e13, k -> -e12, so
// R = w - x e23 + y e13 - z e12 and R v ~R equals q v q*.

#include <array>

#include "motorpose/motor.hpp"
#include "motorpose/spherical.hpp"

namespace motorpose {

struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr double kUnitTolerance = 1e-6;

  double norm() const;
  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

/// Sign-canonical copy: w > 0, or for w == 0 the first nonzero of x, y, z positive.
Quaternion canonical_sign(const Quaternion& q);

/// Rotation part of a motor: a rotor on {1, e12, e13, e23}.
struct Rotor3 {
  double scalar = 1.0;
  double b12 = 0.0;
  double b13 = 0.0;
  double b23 = 0.0;

  static constexpr double kUnitTolerance = 1e-9;

  double norm() const;
  ga::Multivector to_multivector() const;
  Motor to_motor() const { return Motor{scalar, b12, b13, 0.0, b23, 0.0, 0.0, 0.0}; }
};

/// Row-major 3x3 rotation matrix.
struct RotMatrix3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static constexpr double kOrthoTolerance = 1e-5;

  double operator()(int row, int col) const { return m[static_cast<std::size_t>(row * 3 + col)]; }
  /// Largest entry of |M^T M - I| and |det M - 1|, whichever is bigger.
  double orthonormality_defect() const;
};

struct Pose {
  EuclidPoint3 t;
  Quaternion q;
};

/// Throws ValidationError if |q| is off unit by more than Quaternion::kUnitTolerance.
Rotor3 quat_to_rotor(const Quaternion& q);
/// Renormalizes; the sign follows the rotor (no canonicalization).
Quaternion rotor_to_quat(const Rotor3& r);

/// Max-trace (Shepperd) extraction; returns a sign-canonical quaternion.
/// Throws ValidationError if the matrix is not a rotation within kOrthoTolerance.
Quaternion rotmat_to_quat(const RotMatrix3& m);
RotMatrix3 quat_to_rotmat(const Quaternion& q);

/// Returns M or -M: the one with alpha > 0, or for alpha == 0 the one whose
/// first nonzero coefficient is positive. Throws ValidationError on zero.
Motor canonicalize_motor(const Motor& m);

/// Motor product T_t R before sign canonicalization.
Motor compose_pose_motor(const Pose& p, const Curvature& c);

/// Canonicalized T_t R.
Motor encode_pose(const Pose& p, const Curvature& c);

struct DecodedPose {
  Pose pose;
  /// Unit rotor recovered in step 4 (sign follows the motor).
  Rotor3 rotor;
  /// Norm of ~T_d M outside {1, e12, e13, e23}.
  double residual = 0.0;
  /// |<M ~M>_0 - 1| before renormalization.
  double unit_defect = 0.0;
  /// Norm of the non-vector part of M e4 ~M.
  double displacement_off_grade = 0.0;
};

/// Motors with unit_defect below this are renormalized and decoded; others are rejected.
inline constexpr double kDecodeRenormLimit = 0.5;
/// Residual limit for motors that satisfy M ~M = 1.
inline constexpr double kDecodeResidualLimit = 1e-6;

/// Throws ValidationError for motors outside kDecodeRenormLimit,
/// DegeneratePointError when D lands on -e4, and ConsistencyError when a
/// unit motor leaves a residual above kDecodeResidualLimit.
DecodedPose decode_motor(const Motor& m, const Curvature& c);

/// Rotates v by the rotor: R v ~R.
EuclidPoint3 rotate(const Rotor3& r, const EuclidPoint3& v);

}  // namespace motorpose

#pragma once

// 1D-Up model of Euclidean 3-space on the unit sphere of G(4,0).
//
// A point x maps to X = h(x) = (2 lambda x + (lambda^2 - |x|^2) e4) / (lambda^2 + |x|^2),
// a translation by a is the rotor T_a = (lambda + a e4) / sqrt(lambda^2 + |a|^2),
// and a motor M acts on points by the sandwich X' = M X ~M.

#include "motorpose/ga.hpp"
#include "motorpose/motor.hpp"

namespace motorpose {

/// Radius-of-curvature parameter lambda (same length unit as positions).
class Curvature {
 public:
  /// Throws ValidationError unless lambda is finite and > 0.
  explicit Curvature(double lambda);
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

struct EuclidPoint3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm_squared() const { return x * x + y * y + z * z; }
  bool is_finite() const;
  ga::Multivector to_multivector() const;

  friend bool operator==(const EuclidPoint3&, const EuclidPoint3&) = default;
};

EuclidPoint3 operator-(const EuclidPoint3& a, const EuclidPoint3& b);
double distance_squared(const EuclidPoint3& a, const EuclidPoint3& b);

/// Coefficients of e1..e4 of a point on the unit 4-sphere.
struct SpherePoint4 {
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  double v4 = 1.0;

  static constexpr double kUnitTolerance = 1e-9;

  double norm() const;
  ga::Multivector to_multivector() const;
  /// Grade-1 part of `m`.
  static SpherePoint4 from_vector_part(const ga::Multivector& m);

  friend bool operator==(const SpherePoint4&, const SpherePoint4&) = default;
};

/// Rotor on {1, e14, e24, e34}.
struct TranslationRotor {
  double scalar = 1.0;
  double b14 = 0.0;
  double b24 = 0.0;
  double b34 = 0.0;

  ga::Multivector to_multivector() const;
  Motor to_motor() const { return Motor{scalar, 0.0, 0.0, b14, 0.0, b24, b34, 0.0}; }
};

/// 1 + v4 below this is treated as the point at infinity.
inline constexpr double kAntipodeThreshold = 1e-12;
/// Motors within this of <M ~M>_0 = 1 are renormalized before sandwiching.
inline constexpr double kSandwichRenormTolerance = 1e-6;
/// Largest non-vector part a sandwich may produce before the motor is rejected.
inline constexpr double kSandwichGradeTolerance = 1e-6;

SpherePoint4 up_project(const EuclidPoint3& x, const Curvature& c);

/// Inverse of up_project: x = lambda (v1, v2, v3) / (1 + v4).
/// Throws DegeneratePointError when X is at the antipode -e4.
EuclidPoint3 down_project(const SpherePoint4& X, const Curvature& c);

TranslationRotor translation_rotor(const EuclidPoint3& a, const Curvature& c);

struct SandwichResult {
  /// Vector part of M X ~M.
  SpherePoint4 point;
  /// Norm of the non-vector part of the raw sandwich.
  double off_grade = 0.0;
  /// |<M ~M>_0 - 1| of the motor as supplied.
  double unit_defect = 0.0;
  bool renormalized = false;
};

/// M X ~M with diagnostics; never throws on a non-vector residual.
SandwichResult sandwich(const Motor& m, const SpherePoint4& X);

/// M X ~M. Throws InvalidMotorError if the residual off the vector grade
/// exceeds kSandwichGradeTolerance.
SpherePoint4 apply_motor(const Motor& m, const SpherePoint4& X);

/// |t|^2 / (lambda^2 + |t|^2): relative shrinkage of the spherical trace
/// against the Euclidean position.
double trace_deviation(const EuclidPoint3& t, const Curvature& c);

/// (lambda / 2) times the vector part of h(t), i.e. t lambda^2 / (lambda^2 + |t|^2).
EuclidPoint3 spherical_trace(const EuclidPoint3& t, const Curvature& c);

}  // namespace motorpose

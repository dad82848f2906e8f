#include "motorpose/spherical.hpp"

#include <cmath>
#include <string>

#include "motorpose/error.hpp"

namespace motorpose {

Curvature::Curvature(double lambda) : lambda_(lambda) {
  if (!std::isfinite(lambda) || !(lambda > 0.0)) {
    throw ValidationError("curvature lambda must be finite and positive, got " +
                          std::to_string(lambda));
  }
}

bool EuclidPoint3::is_finite() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

ga::Multivector EuclidPoint3::to_multivector() const {
  return ga::Multivector({0.0, x, y, z, 0.0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
}

EuclidPoint3 operator-(const EuclidPoint3& a, const EuclidPoint3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

double distance_squared(const EuclidPoint3& a, const EuclidPoint3& b) {
  return (a - b).norm_squared();
}

double SpherePoint4::norm() const { return std::sqrt(v1 * v1 + v2 * v2 + v3 * v3 + v4 * v4); }

ga::Multivector SpherePoint4::to_multivector() const {
  return ga::Multivector({0.0, v1, v2, v3, v4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
}

SpherePoint4 SpherePoint4::from_vector_part(const ga::Multivector& m) {
  using ga::Blade;
  return {m[Blade::e1], m[Blade::e2], m[Blade::e3], m[Blade::e4]};
}

ga::Multivector TranslationRotor::to_multivector() const { return to_motor().to_multivector(); }

namespace {

void require_finite(const EuclidPoint3& p, const char* what) {
  if (!p.is_finite()) throw ValidationError(std::string(what) + " has non-finite components");
}

}  // namespace

SpherePoint4 up_project(const EuclidPoint3& x, const Curvature& c) {
  require_finite(x, "point");
  const double lambda = c.lambda();
  const double r2 = x.norm_squared();
  const double denom = lambda * lambda + r2;
  const double k = 2.0 * lambda / denom;
  return {k * x.x, k * x.y, k * x.z, (lambda * lambda - r2) / denom};
}

EuclidPoint3 down_project(const SpherePoint4& X, const Curvature& c) {
  const double one_plus = 1.0 + X.v4;
  if (!(one_plus >= kAntipodeThreshold)) {
    throw DegeneratePointError("sphere point at the antipode of the origin has no finite preimage");
  }
  const double k = c.lambda() / one_plus;
  return {k * X.v1, k * X.v2, k * X.v3};
}

TranslationRotor translation_rotor(const EuclidPoint3& a, const Curvature& c) {
  require_finite(a, "translation");
  const double lambda = c.lambda();
  const double inv = 1.0 / std::sqrt(lambda * lambda + a.norm_squared());
  return {lambda * inv, a.x * inv, a.y * inv, a.z * inv};
}

SandwichResult sandwich(const Motor& m, const SpherePoint4& X) {
  SandwichResult out;
  out.unit_defect = unit_defect(m);
  Motor used = m;
  if (out.unit_defect != 0.0 && out.unit_defect < kSandwichRenormTolerance) {
    used = normalized(m);
    out.renormalized = true;
  }
  const auto mv = used.to_multivector();
  const auto image = mv * X.to_multivector() * ga::reverse(mv);
  const auto vec = ga::grade_project(image, 1);
  out.point = SpherePoint4::from_vector_part(vec);
  out.off_grade = ga::norm(image - vec);
  return out;
}

SpherePoint4 apply_motor(const Motor& m, const SpherePoint4& X) {
  const SandwichResult r = sandwich(m, X);
  if (r.off_grade > kSandwichGradeTolerance) {
    throw InvalidMotorError("motor sandwich leaves the vector grade (residual " +
                            std::to_string(r.off_grade) + ")");
  }
  return r.point;
}

double trace_deviation(const EuclidPoint3& t, const Curvature& c) {
  require_finite(t, "position");
  const double r2 = t.norm_squared();
  return r2 / (c.lambda() * c.lambda() + r2);
}

EuclidPoint3 spherical_trace(const EuclidPoint3& t, const Curvature& c) {
  require_finite(t, "position");
  const double l2 = c.lambda() * c.lambda();
  const double k = l2 / (l2 + t.norm_squared());
  return {k * t.x, k * t.y, k * t.z};
}

}  // namespace motorpose

#include "motorpose/motor.hpp"

#include <cmath>

#include "motorpose/error.hpp"

namespace motorpose {

Motor Motor::from_coeffs(std::span<const double, kSize> c) {
  for (std::size_t i = 0; i < kSize; ++i) {
    if (!std::isfinite(c[i])) {
      throw ValidationError(std::string("non-finite motor coefficient ") + kFieldNames[i]);
    }
  }
  return Motor{c[0], c[1], c[2], c[3], c[4], c[5], c[6], c[7]};
}

Motor Motor::from_multivector(const ga::Multivector& m) {
  std::array<double, kSize> c{};
  for (std::size_t i = 0; i < kSize; ++i) c[i] = m[kBlades[i]];
  return from_coeffs(c);
}

ga::Multivector Motor::to_multivector() const {
  ga::Multivector::Coeffs c{};
  const auto mine = coeffs();
  for (std::size_t i = 0; i < kSize; ++i) c[ga::blade_index(kBlades[i])] = mine[i];
  return ga::Multivector(c);
}

Motor operator-(const Motor& m) { return -1.0 * m; }

Motor operator*(double s, const Motor& m) {
  return Motor{s * m.alpha, s * m.b12, s * m.b13, s * m.b14,
               s * m.b23,   s * m.b24, s * m.b34, s * m.gamma};
}

ga::Multivector motor_norm_product(const Motor& m) {
  const auto mv = m.to_multivector();
  return mv * ga::reverse(mv);
}

double unit_defect(const Motor& m) {
  return std::abs(ga::scalar_part(motor_norm_product(m)) - 1.0);
}

double non_scalar_defect(const Motor& m) {
  const auto p = motor_norm_product(m);
  return ga::norm(p - ga::grade_project(p, 0));
}

Motor normalized(const Motor& m) {
  const double s = ga::scalar_part(motor_norm_product(m));
  if (!(s > 0.0)) throw ValidationError("motor has non-positive <M ~M>_0");
  return (1.0 / std::sqrt(s)) * m;
}

}  // namespace motorpose

#pragma once

#include <array>
#include <span>

#include "motorpose/ga.hpp"

namespace motorpose {

/// Roto-translation of the 1D-Up model: an even element of G(4,0) with
/// eight coefficients on {1, e12, e13, e14, e23, e24, e34, e1234}.
///
/// Odd grades cannot be represented. A default-constructed motor is the
/// identity.
struct Motor {
  double alpha = 1.0;
  double b12 = 0.0;
  double b13 = 0.0;
  double b14 = 0.0;
  double b23 = 0.0;
  double b24 = 0.0;
  double b34 = 0.0;
  double gamma = 0.0;

  static constexpr std::size_t kSize = 8;
  static constexpr std::array<const char*, kSize> kFieldNames = {
      "alpha", "b12", "b13", "b14", "b23", "b24", "b34", "gamma"};
  static constexpr std::array<ga::Blade, kSize> kBlades = {
      ga::Blade::scalar, ga::Blade::e12, ga::Blade::e13, ga::Blade::e14,
      ga::Blade::e23,    ga::Blade::e24, ga::Blade::e34, ga::Blade::e1234};

  /// Throws ValidationError on non-finite input.
  static Motor from_coeffs(std::span<const double, kSize> c);
  std::array<double, kSize> coeffs() const {
    return {alpha, b12, b13, b14, b23, b24, b34, gamma};
  }

  /// Keeps grades {0, 2, 4}; the odd part of `m` is discarded.
  static Motor from_multivector(const ga::Multivector& m);
  ga::Multivector to_multivector() const;

  friend bool operator==(const Motor&, const Motor&) = default;
};

Motor operator-(const Motor& m);
Motor operator*(double s, const Motor& m);

/// M * reverse(M), the full product (scalar plus possibly e1234 parts).
ga::Multivector motor_norm_product(const Motor& m);

/// |<M ~M>_0 - 1|
double unit_defect(const Motor& m);

/// Magnitude of the non-scalar part of M ~M.
double non_scalar_defect(const Motor& m);

/// M / sqrt(<M ~M>_0). Throws ValidationError if <M ~M>_0 <= 0.
Motor normalized(const Motor& m);

}  // namespace motorpose

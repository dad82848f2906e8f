#pragma once

// Dense multivectors of the Euclidean-signature algebra G(4,0).
//
// Basis vectors e1..e4 all square to +1. e4 plays the role of the origin
// vector of the 1D-Up conformal model. Coefficients are stored in the
// canonical blade order
//
//   index : 0  1  2  3  4  5   6   7   8   9   10  11   12   13   14   15
//   blade : 1  e1 e2 e3 e4 e12 e13 e14 e23 e24 e34 e123 e124 e134 e234 e1234
//
// and each index maps to the bitset of its constituent basis vectors
// (bit 0 = e1, ..., bit 3 = e4) through kBladeMask. Motor serialization
// relies on this order, so it is part of the public contract.

#include <array>
#include <cstddef>
#include <cstdint>

namespace motorpose::ga {

inline constexpr int kBladeCount = 16;
inline constexpr int kMaxGrade = 4;

/// Relative tolerance used for every structural algebra identity.
inline constexpr double kAlgebraTolerance = 1e-12;

enum class Blade : std::uint8_t {
  scalar,
  e1, e2, e3, e4,
  e12, e13, e14, e23, e24, e34,
  e123, e124, e134, e234,
  e1234,
};

inline constexpr std::array<std::uint8_t, kBladeCount> kBladeMask = {
    0b0000,
    0b0001, 0b0010, 0b0100, 0b1000,
    0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100,
    0b0111, 0b1011, 0b1101, 0b1110,
    0b1111,
};

inline constexpr std::array<const char*, kBladeCount> kBladeNames = {
    "1",    "e1",   "e2",   "e3",   "e4",   "e12",  "e13",  "e14",
    "e23",  "e24",  "e34",  "e123", "e124", "e134", "e234", "e1234",
};

constexpr int blade_index(Blade b) { return static_cast<int>(b); }

constexpr int grade_of_index(int index) {
  return __builtin_popcount(kBladeMask[static_cast<std::size_t>(index)]);
}

class Multivector {
 public:
  using Coeffs = std::array<double, kBladeCount>;

  /// The zero multivector.
  constexpr Multivector() = default;

  /// Throws ValidationError if any coefficient is NaN or infinite.
  explicit Multivector(const Coeffs& coeffs);

  static Multivector scalar(double value);
  static Multivector blade(Blade b, double coeff = 1.0);

  double operator[](Blade b) const { return coeffs_[static_cast<std::size_t>(b)]; }
  double coeff(int index) const { return coeffs_.at(static_cast<std::size_t>(index)); }
  const Coeffs& coeffs() const { return coeffs_; }

  friend Multivector operator*(const Multivector& a, const Multivector& b);
  friend Multivector operator+(const Multivector& a, const Multivector& b);
  friend Multivector operator-(const Multivector& a, const Multivector& b);
  friend Multivector operator-(const Multivector& a);
  friend Multivector operator*(double s, const Multivector& a);
  friend Multivector operator*(const Multivector& a, double s) { return s * a; }

  friend bool operator==(const Multivector&, const Multivector&) = default;

 private:
  struct Unchecked {};
  Multivector(const Coeffs& coeffs, Unchecked) : coeffs_(coeffs) {}

  friend Multivector reverse(const Multivector& a);
  friend Multivector grade_project(const Multivector& a, int k);

  Coeffs coeffs_{};
};

/// Full geometric product; for two vectors this is a.b + a^b.
Multivector geometric_product(const Multivector& a, const Multivector& b);

/// Reversion: the grade-k part picks up (-1)^(k(k-1)/2).
Multivector reverse(const Multivector& a);

/// Grade-k part. Throws std::invalid_argument for k outside 0..4.
Multivector grade_project(const Multivector& a, int k);

/// <a>_0
inline double scalar_part(const Multivector& a) { return a[Blade::scalar]; }

/// Euclidean norm of the coefficient vector.
double norm(const Multivector& a);

/// Sign (+1 / -1) of the product of two basis blades given as bitsets.
int blade_product_sign(unsigned mask_a, unsigned mask_b);

namespace basis {
inline const Multivector ONE = Multivector::scalar(1.0);
inline const Multivector E1 = Multivector::blade(Blade::e1);
inline const Multivector E2 = Multivector::blade(Blade::e2);
inline const Multivector E3 = Multivector::blade(Blade::e3);
/// The origin vector e.
inline const Multivector E4 = Multivector::blade(Blade::e4);
}  // namespace basis

}  // namespace motorpose::ga

#include "motorpose/ga.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "motorpose/error.hpp"

namespace motorpose::ga {

namespace {

constexpr std::array<std::uint8_t, kBladeCount> make_index_of_mask() {
  std::array<std::uint8_t, kBladeCount> out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) out[kBladeMask[i]] = static_cast<std::uint8_t>(i);
  return out;
}

constexpr auto kIndexOfMask = make_index_of_mask();

constexpr int sign_of(unsigned a, unsigned b) {
  // Count transpositions needed to merge the sorted factor lists of a and b:
  // every basis vector of b must pass each higher-numbered vector of a.
  int swaps = 0;
  a >>= 1;
  while (a != 0) {
    swaps += __builtin_popcount(a & b);
    a >>= 1;
  }
  return (swaps & 1) ? -1 : 1;
}

struct ProductEntry {
  std::uint8_t index;
  std::int8_t sign;
};

constexpr std::array<std::array<ProductEntry, kBladeCount>, kBladeCount> make_table() {
  std::array<std::array<ProductEntry, kBladeCount>, kBladeCount> t{};
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    for (std::size_t j = 0; j < kBladeCount; ++j) {
      const unsigned a = kBladeMask[i];
      const unsigned b = kBladeMask[j];
      t[i][j] = {kIndexOfMask[a ^ b], static_cast<std::int8_t>(sign_of(a, b))};
    }
  }
  return t;
}

constexpr auto kProductTable = make_table();

constexpr std::array<double, kBladeCount> make_reverse_signs() {
  std::array<double, kBladeCount> s{};
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    const int k = grade_of_index(static_cast<int>(i));
    s[i] = ((k * (k - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  }
  return s;
}

constexpr auto kReverseSigns = make_reverse_signs();

}  // namespace

int blade_product_sign(unsigned mask_a, unsigned mask_b) { return sign_of(mask_a, mask_b); }

Multivector::Multivector(const Coeffs& coeffs) : coeffs_(coeffs) {
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    if (!std::isfinite(coeffs_[i])) {
      throw ValidationError(std::string("non-finite coefficient on blade ") + kBladeNames[i]);
    }
  }
}

Multivector Multivector::scalar(double value) { return blade(Blade::scalar, value); }

Multivector Multivector::blade(Blade b, double coeff) {
  Coeffs c{};
  c[static_cast<std::size_t>(b)] = coeff;
  return Multivector(c);
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  Multivector::Coeffs out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    const double ai = a.coeffs_[i];
    if (ai == 0.0) continue;
    for (std::size_t j = 0; j < kBladeCount; ++j) {
      const ProductEntry e = kProductTable[i][j];
      out[e.index] += e.sign * ai * b.coeffs_[j];
    }
  }
  return Multivector(out, Multivector::Unchecked{});
}

Multivector operator+(const Multivector& a, const Multivector& b) {
  Multivector::Coeffs out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) out[i] = a.coeffs_[i] + b.coeffs_[i];
  return Multivector(out, Multivector::Unchecked{});
}

Multivector operator-(const Multivector& a, const Multivector& b) {
  Multivector::Coeffs out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) out[i] = a.coeffs_[i] - b.coeffs_[i];
  return Multivector(out, Multivector::Unchecked{});
}

Multivector operator-(const Multivector& a) { return -1.0 * a; }

Multivector operator*(double s, const Multivector& a) {
  Multivector::Coeffs out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) out[i] = s * a.coeffs_[i];
  return Multivector(out, Multivector::Unchecked{});
}

Multivector geometric_product(const Multivector& a, const Multivector& b) { return a * b; }

Multivector reverse(const Multivector& a) {
  Multivector::Coeffs out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) out[i] = kReverseSigns[i] * a.coeffs_[i];
  return Multivector(out, Multivector::Unchecked{});
}

Multivector grade_project(const Multivector& a, int k) {
  if (k < 0 || k > kMaxGrade) {
    throw std::invalid_argument("grade " + std::to_string(k) + " outside 0..4");
  }
  Multivector::Coeffs out{};
  for (std::size_t i = 0; i < kBladeCount; ++i) {
    if (grade_of_index(static_cast<int>(i)) == k) out[i] = a.coeffs_[i];
  }
  return Multivector(out, Multivector::Unchecked{});
}

double norm(const Multivector& a) {
  // hypot-style scaling keeps tiny and huge coefficients exact enough
  double scale = 0.0;
  for (double c : a.coeffs()) scale = std::max(scale, std::abs(c));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (double c : a.coeffs()) {
    const double r = c / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

}  // namespace motorpose::ga

#include "motorpose/sampling.hpp"

#include <cmath>

namespace motorpose::sampling {

ga::Multivector random_multivector(Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ga::Multivector::Coeffs c{};
  for (double& v : c) v = u(rng);
  return ga::Multivector(c);
}

EuclidPoint3 random_point(Rng& rng, double max_radius) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = 0.0, y = 0.0, z = 0.0, n = 0.0;
  do {
    x = g(rng);
    y = g(rng);
    z = g(rng);
    n = std::sqrt(x * x + y * y + z * z);
  } while (n < 1e-12);
  const double r = max_radius * u(rng);
  return {r * x / n, r * y / n, r * z / n};
}

Quaternion random_quaternion(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Quaternion q;
  double n = 0.0;
  do {
    q = {g(rng), g(rng), g(rng), g(rng)};
    n = q.norm();
  } while (n < 1e-12);
  return canonical_sign({q.w / n, q.x / n, q.y / n, q.z / n});
}

Pose random_pose(Rng& rng, double max_radius) {
  const EuclidPoint3 t = random_point(rng, max_radius);
  return {t, random_quaternion(rng)};
}

}  // namespace motorpose::sampling

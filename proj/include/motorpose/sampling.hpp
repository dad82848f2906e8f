#pragma once

// Seeded generators for randomized invariant checks.

#include <cstdint>
#include <random>

#include "motorpose/ga.hpp"
#include "motorpose/pose_codec.hpp"
#include "motorpose/spherical.hpp"

namespace motorpose::sampling {

using Rng = std::mt19937_64;

/// Every coefficient uniform in [-1, 1].
ga::Multivector random_multivector(Rng& rng);

/// Uniform direction, radius uniform in [0, max_radius].
EuclidPoint3 random_point(Rng& rng, double max_radius);

/// Uniform on SO(3) (normalized 4D Gaussian), sign-canonical.
Quaternion random_quaternion(Rng& rng);

Pose random_pose(Rng& rng, double max_radius);

}  // namespace motorpose::sampling

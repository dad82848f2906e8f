#include "motorpose/pose_codec.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "motorpose/error.hpp"
#include "motorpose/metrics.hpp"
#include "motorpose/sampling.hpp"

namespace motorpose {
namespace {

const double kC45 = std::cos(std::numbers::pi / 4);

// Hamilton product, written out independently of the algebra code.
Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

EuclidPoint3 quat_rotate(const Quaternion& q, const EuclidPoint3& v) {
  const Quaternion conj{q.w, -q.x, -q.y, -q.z};
  const auto r = hamilton(hamilton(q, {0, v.x, v.y, v.z}), conj);
  return {r.x, r.y, r.z};
}

double dist3(const EuclidPoint3& a, const EuclidPoint3& b) {
  return std::sqrt(distance_squared(a, b));
}

double motor_dist(const Motor& a, const Motor& b) {
  double s = 0.0;
  const auto ca = a.coeffs();
  const auto cb = b.coeffs();
  for (std::size_t i = 0; i < Motor::kSize; ++i) s += (ca[i] - cb[i]) * (ca[i] - cb[i]);
  return std::sqrt(s);
}

// Relative rotation angle between two quaternions, degrees.
double quat_angle_deg(const Quaternion& a, const Quaternion& b) {
  const double d = std::abs(a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z);
  // 2 * atan2 form stays accurate near zero
  const Quaternion rel = hamilton({a.w, -a.x, -a.y, -a.z}, b);
  const double v = std::sqrt(rel.x * rel.x + rel.y * rel.y + rel.z * rel.z);
  return 2.0 * std::atan2(v, std::min(1.0, d)) * 180.0 / std::numbers::pi;
}

TEST(QuatToRotor, Examples) {
  const auto id = quat_to_rotor({1, 0, 0, 0});
  EXPECT_EQ(id.scalar, 1.0);
  EXPECT_EQ(id.b12, 0.0);
  EXPECT_EQ(id.b13, 0.0);
  EXPECT_EQ(id.b23, 0.0);

  const auto z90 = quat_to_rotor({kC45, 0, 0, kC45});
  EXPECT_NEAR(z90.scalar, kC45, 1e-15);
  EXPECT_NEAR(z90.b12, -kC45, 1e-15);
  EXPECT_EQ(z90.b13, 0.0);
  EXPECT_EQ(z90.b23, 0.0);
  const auto e2 = rotate(z90, {1, 0, 0});
  EXPECT_LT(dist3(e2, {0, 1, 0}), 1e-15);

  const auto z180 = quat_to_rotor({0, 0, 0, 1});
  EXPECT_EQ(z180.scalar, 0.0);
  EXPECT_EQ(z180.b12, -1.0);
  EXPECT_EQ(rotate(z180, {1, 0, 0}), (EuclidPoint3{-1, 0, 0}));
}

TEST(QuatToRotor, BasisMapping) {
  const auto i = quat_to_rotor({0, 1, 0, 0});
  const auto j = quat_to_rotor({0, 0, 1, 0});
  EXPECT_EQ(i.b23, -1.0);
  EXPECT_EQ(j.b13, 1.0);
}

TEST(QuatToRotor, RejectsNonUnit) {
  EXPECT_THROW(quat_to_rotor({1.01, 0, 0, 0}), ValidationError);
  EXPECT_THROW(quat_to_rotor({0, 0, 0, 0}), ValidationError);
  EXPECT_NO_THROW(quat_to_rotor({1 + 5e-7, 0, 0, 0}));
}

TEST(QuatToRotor, ActionMatchesQuaternionRotation) {
  sampling::Rng rng(41);
  for (int n = 0; n < 1000; ++n) {
    const auto q = sampling::random_quaternion(rng);
    const auto v = sampling::random_point(rng, 1.0);
    EXPECT_LT(dist3(rotate(quat_to_rotor(q), v), quat_rotate(q, v)), 1e-12);
  }
}

TEST(QuatToRotor, PreservesComposition) {
  // R(q1 q2) = R(q1) R(q2)
  sampling::Rng rng(42);
  for (int n = 0; n < 200; ++n) {
    const auto a = sampling::random_quaternion(rng);
    const auto b = sampling::random_quaternion(rng);
    const auto lhs = quat_to_rotor(hamilton(a, b)).to_multivector();
    const auto rhs = quat_to_rotor(a).to_multivector() * quat_to_rotor(b).to_multivector();
    EXPECT_LT(ga::norm(lhs - rhs), 1e-14);
  }
}

TEST(RotorToQuat, InvertsQuatToRotor) {
  sampling::Rng rng(43);
  for (int n = 0; n < 200; ++n) {
    const auto q = sampling::random_quaternion(rng);
    const auto back = rotor_to_quat(quat_to_rotor(q));
    EXPECT_NEAR(back.w, q.w, 1e-15);
    EXPECT_NEAR(back.x, q.x, 1e-15);
    EXPECT_NEAR(back.y, q.y, 1e-15);
    EXPECT_NEAR(back.z, q.z, 1e-15);
  }
}

TEST(RotmatToQuat, Examples) {
  EXPECT_EQ(rotmat_to_quat({}), (Quaternion{1, 0, 0, 0}));
  EXPECT_EQ(rotmat_to_quat({{-1, 0, 0, 0, -1, 0, 0, 0, 1}}), (Quaternion{0, 0, 0, 1}));
  // half turns about x and y also come out sign-canonical
  EXPECT_EQ(rotmat_to_quat({{1, 0, 0, 0, -1, 0, 0, 0, -1}}), (Quaternion{0, 1, 0, 0}));
  EXPECT_EQ(rotmat_to_quat({{-1, 0, 0, 0, 1, 0, 0, 0, -1}}), (Quaternion{0, 0, 1, 0}));
}

TEST(RotmatToQuat, RejectsNonRotations) {
  EXPECT_THROW(rotmat_to_quat({{1, 0, 0, 0, 1, 0, 0, 0, -1}}), ValidationError);
  EXPECT_THROW(rotmat_to_quat({{2, 0, 0, 0, 1, 0, 0, 0, 1}}), ValidationError);
  EXPECT_THROW(rotmat_to_quat({{1, 0.01, 0, 0, 1, 0, 0, 0, 1}}), ValidationError);
}

TEST(RotmatToQuat, RoundTripReconstructsMatrix) {
  sampling::Rng rng(44);
  for (int n = 0; n < 1000; ++n) {
    const auto m = quat_to_rotmat(sampling::random_quaternion(rng));
    const auto back = quat_to_rotmat(rotmat_to_quat(m));
    double worst = 0.0;
    for (std::size_t i = 0; i < 9; ++i) worst = std::max(worst, std::abs(back.m[i] - m.m[i]));
    EXPECT_LT(worst, 1e-10);
  }
}

TEST(RotmatToQuat, MatrixColumnsAreRotatedAxes) {
  sampling::Rng rng(45);
  for (int n = 0; n < 100; ++n) {
    const auto q = sampling::random_quaternion(rng);
    const auto m = quat_to_rotmat(q);
    const auto ex = quat_rotate(q, {1, 0, 0});
    EXPECT_NEAR(m(0, 0), ex.x, 1e-14);
    EXPECT_NEAR(m(1, 0), ex.y, 1e-14);
    EXPECT_NEAR(m(2, 0), ex.z, 1e-14);
  }
}

TEST(CanonicalizeMotor, Examples) {
  EXPECT_EQ(canonicalize_motor(Motor{}), Motor{});
  EXPECT_EQ(canonicalize_motor(Motor{-1, 0, 0, 0, 0, 0, 0, 0}), Motor{});
  EXPECT_EQ(canonicalize_motor(Motor{0, -1, 0, 0, 0, 0, 0, 0}),
            (Motor{0, 1, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(canonicalize_motor(Motor{0, 0, 0, 0, 0, 0, -0.6, 0.8}),
            (Motor{0, 0, 0, 0, 0, 0, 0.6, -0.8}));
  EXPECT_THROW(canonicalize_motor(Motor{0, 0, 0, 0, 0, 0, 0, 0}), ValidationError);
}

TEST(CanonicalizeMotor, Idempotent) {
  sampling::Rng rng(46);
  for (int n = 0; n < 500; ++n) {
    const auto m = compose_pose_motor(sampling::random_pose(rng, 10.0), Curvature(10.0));
    const auto c = canonicalize_motor(m);
    EXPECT_EQ(canonicalize_motor(c), c);
    EXPECT_EQ(canonicalize_motor(-m), c);
    EXPECT_TRUE(c == m || c == -m);
  }
}

TEST(EncodePose, Examples) {
  EXPECT_EQ(encode_pose({}, Curvature(10.0)), Motor{});

  const double s = std::sqrt(114.0);
  const auto m = encode_pose({{1, 2, 3}, {}}, Curvature(10.0));
  const Motor expected{10 / s, 0, 0, 1 / s, 0, 2 / s, 3 / s, 0};
  EXPECT_LT(motor_dist(m, expected), 1e-15);

  const Pose half_turn{{0, 0, 0}, {0, 0, 0, 1}};
  EXPECT_EQ(compose_pose_motor(half_turn, Curvature(10.0)), (Motor{0, -1, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(encode_pose(half_turn, Curvature(10.0)), (Motor{0, 1, 0, 0, 0, 0, 0, 0}));
}

TEST(EncodePose, MatchesProductOfRotors) {
  sampling::Rng rng(47);
  for (int n = 0; n < 200; ++n) {
    const auto p = sampling::random_pose(rng, 20.0);
    const Curvature c(10.0);
    const auto product = translation_rotor(p.t, c).to_multivector() *
                         quat_to_rotor(p.q).to_multivector();
    EXPECT_LT(ga::norm(compose_pose_motor(p, c).to_multivector() - product), 1e-15);
    // no odd grades to lose
    EXPECT_EQ(ga::norm(ga::grade_project(product, 1)) + ga::norm(ga::grade_project(product, 3)),
              0.0);
  }
}

TEST(EncodePose, UnitConstraint) {
  sampling::Rng rng(48);
  for (double lambda : {10.0, 200.0, 1000.0}) {
    for (int n = 0; n < 1000; ++n) {
      const auto m = encode_pose(sampling::random_pose(rng, lambda / 2), Curvature(lambda));
      EXPECT_LT(unit_defect(m), 1e-12);
      EXPECT_LT(non_scalar_defect(m), 1e-12);
    }
  }
}

TEST(EncodePose, DoubleCover) {
  sampling::Rng rng(49);
  for (int n = 0; n < 500; ++n) {
    auto p = sampling::random_pose(rng, 5.0);
    Pose flipped = p;
    flipped.q = {-p.q.w, -p.q.x, -p.q.y, -p.q.z};
    const Curvature c(10.0);
    EXPECT_EQ(compose_pose_motor(flipped, c), -compose_pose_motor(p, c));
    EXPECT_EQ(encode_pose(flipped, c), encode_pose(p, c));
  }
}

TEST(DecodeMotor, Identity) {
  const auto d = decode_motor(Motor{}, Curvature(10.0));
  EXPECT_EQ(d.pose.t, (EuclidPoint3{0, 0, 0}));
  EXPECT_EQ(d.pose.q, (Quaternion{1, 0, 0, 0}));
  EXPECT_EQ(d.residual, 0.0);
  EXPECT_EQ(d.unit_defect, 0.0);
}

TEST(DecodeMotor, PureTranslation) {
  const auto m = translation_rotor({5, 0, 0}, Curvature(10.0)).to_motor();
  const auto d = decode_motor(m, Curvature(10.0));
  EXPECT_LT(dist3(d.pose.t, {5, 0, 0}), 1e-14);
  EXPECT_LT(quat_angle_deg(d.pose.q, {1, 0, 0, 0}), 1e-9);
  EXPECT_LT(d.residual, 1e-15);
}

TEST(DecodeMotor, RecoversEncodedPose) {
  const Pose p{{1, 2, 3}, {kC45, 0, 0, kC45}};
  const auto d = decode_motor(encode_pose(p, Curvature(200.0)), Curvature(200.0));
  EXPECT_LT(dist3(d.pose.t, p.t), 1e-9);
  EXPECT_LT(quat_angle_deg(d.pose.q, p.q), 1e-9);
  EXPECT_LT(d.residual, 1e-10);
}

TEST(DecodeMotor, RoundTripRandomPoses) {
  sampling::Rng rng(50);
  for (double lambda : {10.0, 200.0, 1000.0}) {
    const Curvature c(lambda);
    for (int n = 0; n < 1000; ++n) {
      const auto p = sampling::random_pose(rng, lambda / 2);
      const auto d = decode_motor(encode_pose(p, c), c);
      ASSERT_LT(dist3(d.pose.t, p.t), 1e-9);
      ASSERT_LT(quat_angle_deg(d.pose.q, p.q), 1e-9);
      ASSERT_LT(d.residual, 1e-10);
    }
  }
}

TEST(DecodeMotor, SignOfMotorDoesNotChangePose) {
  sampling::Rng rng(51);
  for (int n = 0; n < 100; ++n) {
    const auto p = sampling::random_pose(rng, 5.0);
    const auto m = compose_pose_motor(p, Curvature(10.0));
    const auto a = decode_motor(m, Curvature(10.0));
    const auto b = decode_motor(-m, Curvature(10.0));
    EXPECT_LT(dist3(a.pose.t, b.pose.t), 1e-14);
    EXPECT_EQ(a.pose.q, b.pose.q);
  }
}

TEST(DecodeMotor, RenormalizesAndReportsDefect) {
  const auto m = encode_pose({{1, 2, 3}, {kC45, 0, 0, kC45}}, Curvature(10.0));
  const auto d = decode_motor(1.1 * m, Curvature(10.0));
  EXPECT_NEAR(d.unit_defect, 0.21, 1e-12);
  EXPECT_LT(dist3(d.pose.t, {1, 2, 3}), 1e-12);
}

TEST(DecodeMotor, RejectsFarFromUnit) {
  EXPECT_THROW(decode_motor(2.0 * Motor{}, Curvature(10.0)), ValidationError);
  EXPECT_THROW(decode_motor(Motor{0, 0, 0, 0, 0, 0, 0, 0}, Curvature(10.0)), ValidationError);
}

TEST(DecodeMotor, AntipodeIsDegenerate) {
  // a translation rotor with scalar 0 carries the origin to -e4
  const Motor m{0, 0, 0, 1, 0, 0, 0, 0};
  EXPECT_THROW(decode_motor(m, Curvature(10.0)), DegeneratePointError);
}

TEST(DecodeMotor, NoisyPredictionDecodesWithResidual) {
  // a non-motor component leaves a residual but a non-unit input is tolerated
  auto m = encode_pose({{1, 0, 0}, {}}, Curvature(10.0));
  m.gamma = 0.05;
  const auto d = decode_motor(m, Curvature(10.0));
  EXPECT_GT(d.residual, 1e-6);
  EXPECT_GT(d.unit_defect, 0.0);
}

TEST(DecodeMotor, EveryUnitEvenVersorDecodesCleanly) {
  // products of an even number of unit vectors span all unit motors, so the
  // rotor left after stripping the translation never leaves {1, e12, e13, e23}
  sampling::Rng rng(52);
  std::normal_distribution<double> g;
  auto unit_vector = [&] {
    ga::Multivector::Coeffs c{};
    double n = 0.0;
    for (int i = 1; i <= 4; ++i) {
      c[static_cast<std::size_t>(i)] = g(rng);
      n += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
    }
    for (int i = 1; i <= 4; ++i) c[static_cast<std::size_t>(i)] /= std::sqrt(n);
    return ga::Multivector(c);
  };
  int decoded = 0;
  for (int n = 0; n < 1000; ++n) {
    const auto v = unit_vector() * unit_vector() * unit_vector() * unit_vector();
    const auto m = Motor::from_multivector(v);
    ASSERT_LT(non_scalar_defect(m), 1e-12);
    try {
      const auto d = decode_motor(m, Curvature(10.0));
      EXPECT_LT(d.residual, 1e-10);
      ++decoded;
    } catch (const DegeneratePointError&) {
      // only when the origin lands next to its antipode
    }
  }
  EXPECT_GT(decoded, 990);
}

}  // namespace
}  // namespace motorpose

#include "motorpose/metrics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "motorpose/error.hpp"
#include "motorpose/sampling.hpp"

namespace motorpose::metrics {
namespace {

const double kC45 = std::cos(std::numbers::pi / 4);

Rotor3 random_rotor(sampling::Rng& rng) { return quat_to_rotor(sampling::random_quaternion(rng)); }

Rotor3 compose(const Rotor3& a, const Rotor3& b) {
  const auto p = a.to_multivector() * b.to_multivector();
  return {p[ga::Blade::scalar], p[ga::Blade::e12], p[ga::Blade::e13], p[ga::Blade::e23]};
}

std::vector<LabeledMotor> synthetic_gt(std::size_t n, double lambda, std::uint64_t seed) {
  sampling::Rng rng(seed);
  std::vector<LabeledMotor> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"f" + std::to_string(i),
                   encode_pose(sampling::random_pose(rng, lambda / 2), Curvature(lambda))});
  }
  return out;
}

TEST(PositionalError, Examples) {
  EXPECT_EQ(positional_error({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_EQ(positional_error({1, 2, 3}, {0, 0, 0}), 6.0);
  EXPECT_EQ(positional_error({1, 0, 0}, {0, 1, 0}), 2.0);
}

TEST(PositionalError, MetricAxioms) {
  sampling::Rng rng(61);
  for (int n = 0; n < 1000; ++n) {
    const auto a = sampling::random_point(rng, 10);
    const auto b = sampling::random_point(rng, 10);
    const auto c = sampling::random_point(rng, 10);
    EXPECT_EQ(positional_error(a, b), positional_error(b, a));
    EXPECT_LE(positional_error(a, c), positional_error(a, b) + positional_error(b, c) + 1e-12);
    EXPECT_GE(positional_error(a, b), 0.0);
  }
}

TEST(RotationalError, Examples) {
  const Rotor3 id{};
  EXPECT_EQ(rotational_error(id, id), 0.0);
  const Rotor3 z90{kC45, -kC45, 0, 0};
  EXPECT_NEAR(rotational_error(id, z90), 45.0, 1e-9);
  EXPECT_NEAR(rotational_error(z90, id), 45.0, 1e-9);
  // a half turn reads as 90 degrees, its opposite sign as 180
  EXPECT_NEAR(rotational_error(id, {0, -1, 0, 0}), 90.0, 1e-12);
  EXPECT_NEAR(rotational_error(id, {-1, 0, 0, 0}), 180.0, 1e-12);
}

TEST(RotationalError, ClampsOvershoot) {
  // the dot product of this rotor with itself rounds above 1
  const Rotor3 r{1.0 + 1e-16 * 4, 0, 0, 0};
  const double s = r.scalar * r.scalar;
  ASSERT_GT(s, 1.0);
  const double e = rotational_error(r, r);
  EXPECT_FALSE(std::isnan(e));
  EXPECT_EQ(e, 0.0);
  const Rotor3 neg{-r.scalar, 0, 0, 0};
  EXPECT_DOUBLE_EQ(rotational_error(r, neg), 180.0);
}

TEST(RotationalError, RejectsNonUnit) {
  EXPECT_THROW(rotational_error({}, {1.1, 0, 0, 0}), ValidationError);
  EXPECT_THROW(rotational_error({0.5, 0, 0, 0}, {}), ValidationError);
}

TEST(RotationalError, BoundedForNoisyRotors) {
  sampling::Rng rng(62);
  std::uniform_real_distribution<double> jitter(-4e-7, 4e-7);
  for (int n = 0; n < 10000; ++n) {
    auto a = random_rotor(rng);
    auto b = (n % 3 == 0) ? a : random_rotor(rng);
    if (n % 5 == 0) b = {-a.scalar, -a.b12, -a.b13, -a.b23};
    b.scalar += jitter(rng);
    b.b12 += jitter(rng);
    a.b23 += jitter(rng);
    const double e = rotational_error(a, b);
    EXPECT_GE(e, 0.0);
    EXPECT_LE(e, 180.0);
  }
}

TEST(RotationalError, LeftInvariant) {
  sampling::Rng rng(63);
  for (int n = 0; n < 1000; ++n) {
    const auto g = random_rotor(rng);
    const auto r = random_rotor(rng);
    const auto h = random_rotor(rng);
    EXPECT_NEAR(rotational_error(compose(g, r), compose(g, h)), rotational_error(r, h), 1e-10);
  }
}

TEST(RotationalError, HalfOfRelativeAngle) {
  sampling::Rng rng(64);
  std::uniform_real_distribution<double> angle(0.0, 180.0);
  for (int n = 0; n < 100; ++n) {
    const double deg = angle(rng);
    const double half = deg / 2 * std::numbers::pi / 180;
    const auto r = quat_to_rotor({std::cos(half), 0, std::sin(half), 0});
    EXPECT_NEAR(rotational_error({}, r), deg / 2, 1e-9);
  }
}

TEST(MotorMse, Examples) {
  const Motor one{};
  EXPECT_EQ(motor_mse(one, one), 0.0);
  EXPECT_EQ(motor_mse(-one, one), 0.5);
  EXPECT_EQ(motor_mse(Motor{0, 1, 0, 0, 0, 0, 0, 0}, one), 0.25);
}

TEST(MotorMse, SignFlipInvariant) {
  sampling::Rng rng(65);
  for (int n = 0; n < 200; ++n) {
    const auto a = encode_pose(sampling::random_pose(rng, 5), Curvature(10));
    const auto b = encode_pose(sampling::random_pose(rng, 5), Curvature(10));
    EXPECT_EQ(motor_mse(-a, -b), motor_mse(a, b));
    EXPECT_GT(motor_mse(a, b), 0.0);
  }
}

TEST(Statistics, Median) {
  EXPECT_EQ(median({1, 2, 3}), 2.0);
  EXPECT_EQ(median({3, 1, 2}), 2.0);
  EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
  EXPECT_EQ(median({7}), 7.0);
  EXPECT_THROW(median({}), ValidationError);
}

TEST(Statistics, Percentile) {
  EXPECT_EQ(percentile({0, 10}, 50), 5.0);
  EXPECT_EQ(percentile({5, 1, 3}, 0), 1.0);
  EXPECT_EQ(percentile({5, 1, 3}, 100), 5.0);
  std::vector<double> v(101);
  std::iota(v.begin(), v.end(), 0.0);
  EXPECT_DOUBLE_EQ(percentile(v, 99), 99.0);
}

TEST(Statistics, Pearson) {
  const std::vector<double> a{1, 2, 3, 4};
  const std::vector<double> b{2, 4, 6, 8};
  const std::vector<double> c{4, 3, 2, 1};
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_NEAR(*pearson(a, a), 1.0, 1e-15);
  EXPECT_NEAR(*pearson(a, b), 1.0, 1e-15);
  EXPECT_NEAR(*pearson(a, c), -1.0, 1e-15);
  EXPECT_FALSE(pearson(a, flat).has_value());
  EXPECT_FALSE(pearson(std::vector<double>{1}, std::vector<double>{1}).has_value());
}

TEST(Statistics, HistogramSumsToOne) {
  sampling::Rng rng(66);
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(1000);
  for (auto& x : v) x = e(rng);
  const auto h = normalized_histogram(v);
  ASSERT_EQ(h.edges.size(), kHistogramBins + 1);
  ASSERT_EQ(h.density.size(), kHistogramBins);
  EXPECT_EQ(h.edges.front(), 0.0);
  EXPECT_DOUBLE_EQ(h.edges.back(), percentile(v, 99));
  EXPECT_NEAR(std::accumulate(h.density.begin(), h.density.end(), 0.0), 1.0, 1e-12);
  // outliers above the 99th percentile are pooled in the last bin
  EXPECT_GE(h.density.back(), 0.01 - 1e-12);
}

TEST(Statistics, HistogramOfZeros) {
  const std::vector<double> v(10, 0.0);
  const auto h = normalized_histogram(v);
  EXPECT_EQ(h.density.front(), 1.0);
  EXPECT_GT(h.edges.back(), 0.0);
}

TEST(EvaluateRun, PerfectPredictions) {
  const auto gt = synthetic_gt(20, 10.0, 1);
  const auto r = evaluate_run(gt, gt, Curvature(10.0));
  EXPECT_EQ(r.frame_count, 20u);
  EXPECT_EQ(r.excluded_count, 0u);
  EXPECT_EQ(r.median_pos, 0.0);
  EXPECT_EQ(r.median_rot, 0.0);
  EXPECT_EQ(r.pct_within, 100.0);
  EXPECT_FALSE(r.pearson_pos_rot.has_value());
  for (const auto& f : r.per_frame) {
    EXPECT_EQ(f.err_pos, 0.0);
    EXPECT_EQ(f.err_rot, 0.0);
    EXPECT_EQ(f.motor_mse, 0.0);
  }
}

TEST(EvaluateRun, MedianOfThreeOffsets) {
  const Curvature c(1e6);
  std::vector<LabeledMotor> gt, pred;
  for (int i = 0; i < 3; ++i) {
    const Pose p{{static_cast<double>(10 * i), 0, 0}, {}};
    gt.push_back({"f" + std::to_string(i), encode_pose(p, c)});
    const Pose q{{10.0 * i + (i + 1), 0, 0}, {}};
    pred.push_back({"f" + std::to_string(i), encode_pose(q, c)});
  }
  const auto r = evaluate_run(pred, gt, c);
  EXPECT_NEAR(r.median_pos, 2.0, 1e-6);
  ASSERT_EQ(r.cdf_pos.size(), 3u);
  EXPECT_NEAR(r.cdf_pos[0], 1.0, 1e-6);
  EXPECT_NEAR(r.cdf_pos[2], 3.0, 1e-6);
}

TEST(EvaluateRun, IdenticalErrorArraysCorrelatePerfectly) {
  // position error 2k meters and rotation error k degrees per frame
  const Curvature c(1e6);
  std::vector<LabeledMotor> gt, pred;
  for (int i = 1; i <= 5; ++i) {
    gt.push_back({"f" + std::to_string(i), encode_pose({}, c)});
    const double half = i * std::numbers::pi / 180;
    const Pose p{{2.0 * i, 0, 0}, {std::cos(half), 0, 0, std::sin(half)}};
    pred.push_back({"f" + std::to_string(i), encode_pose(p, c)});
  }
  const auto r = evaluate_run(pred, gt, c);
  ASSERT_TRUE(r.pearson_pos_rot.has_value());
  EXPECT_NEAR(*r.pearson_pos_rot, 1.0, 1e-9);
}

TEST(EvaluateRun, ThresholdMonotonicity) {
  const auto gt = synthetic_gt(200, 10.0, 2);
  const auto pred = synthetic_gt(200, 10.0, 3);
  const auto loose = evaluate_run(pred, gt, Curvature(10.0), {10, 10});
  const auto tight = evaluate_run(pred, gt, Curvature(10.0), {0.5, 5});
  EXPECT_LE(tight.pct_within, loose.pct_within);
  EXPECT_GE(tight.pct_within, 0.0);
  EXPECT_LE(loose.pct_within, 100.0);
}

TEST(EvaluateRun, StrictThresholds) {
  const Curvature c(1e6);
  const std::vector<LabeledMotor> gt{{"a", encode_pose({}, c)}};
  const std::vector<LabeledMotor> pred{{"a", encode_pose({{0.5, 0, 0}, {}}, c)}};
  EXPECT_EQ(evaluate_run(pred, gt, c, {0.6, 1}).pct_within, 100.0);
  EXPECT_EQ(evaluate_run(pred, gt, c, {0.4, 1}).pct_within, 0.0);
}

TEST(EvaluateRun, FrameIdMismatchListsOffenders) {
  const auto gt = synthetic_gt(3, 10.0, 4);
  auto pred = gt;
  pred[1].frame_id = "stranger";
  try {
    evaluate_run(pred, gt, Curvature(10.0));
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    ASSERT_EQ(e.offenders().size(), 2u);
    EXPECT_NE(e.offenders()[0].find("stranger"), std::string::npos);
    EXPECT_NE(e.offenders()[1].find("f1"), std::string::npos);
  }
}

TEST(EvaluateRun, DuplicateIdsRejected) {
  auto gt = synthetic_gt(3, 10.0, 5);
  auto pred = gt;
  pred.push_back(pred[0]);
  EXPECT_THROW(evaluate_run(pred, gt, Curvature(10.0)), InputError);
}

TEST(EvaluateRun, DecodeFailuresAreExcluded) {
  auto gt = synthetic_gt(4, 10.0, 6);
  auto pred = gt;
  pred[2].motor = 3.0 * pred[2].motor;
  const auto r = evaluate_run(pred, gt, Curvature(10.0));
  EXPECT_EQ(r.excluded_count, 1u);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].frame_id, "f2");
  EXPECT_EQ(r.per_frame.size(), 3u);
  EXPECT_EQ(r.pct_within, 100.0);
}

TEST(EvaluateRun, OrderIndependentOutput) {
  auto gt = synthetic_gt(30, 10.0, 7);
  const auto pred = synthetic_gt(30, 10.0, 8);
  auto shuffled = pred;
  std::reverse(shuffled.begin(), shuffled.end());
  const auto a = to_json(evaluate_run(pred, gt, Curvature(10.0))).dump();
  const auto b = to_json(evaluate_run(shuffled, gt, Curvature(10.0))).dump();
  EXPECT_EQ(a, b);
}

TEST(EvaluateRun, JsonFields) {
  const auto gt = synthetic_gt(3, 10.0, 9);
  const auto j = to_json(evaluate_run(gt, gt, Curvature(10.0)));
  for (const char* key : {"median_pos", "median_rot", "pct_within", "histogram_pos",
                          "histogram_rot", "cdf_pos", "cdf_rot", "pearson_pos_rot", "per_frame"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_TRUE(j["pearson_pos_rot"].is_null());
  EXPECT_EQ(j["per_frame"].size(), 3u);
  EXPECT_EQ(j["histogram_pos"]["edges"].size(), kHistogramBins + 1);
}

TEST(PointcloudMse, IdenticalMotors) {
  sampling::Rng rng(67);
  std::vector<EuclidPoint3> cloud;
  for (int i = 0; i < 50; ++i) cloud.push_back(sampling::random_point(rng, 20));
  const auto m = encode_pose(sampling::random_pose(rng, 5), Curvature(10));
  const auto r = pointcloud_mse(cloud, m, m, Curvature(10));
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_EQ(r.used, 50u);
}

TEST(PointcloudMse, SinglePointTranslation) {
  const double eps = 1e-3;
  const Curvature c(1000.0);
  const std::vector<EuclidPoint3> cloud{{0, 0, 0}};
  const auto r =
      pointcloud_mse(cloud, Motor{}, translation_rotor({eps, 0, 0}, c).to_motor(), c);
  EXPECT_NEAR(r.mse, eps * eps, 1e-12 * eps * eps);
}

TEST(PointcloudMse, HalfTurnAtFlatLimit) {
  sampling::Rng rng(68);
  std::vector<EuclidPoint3> cloud;
  double expected = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto p = sampling::random_point(rng, 10);
    cloud.push_back(p);
    expected += 4 * (p.x * p.x + p.y * p.y);
  }
  expected /= 100;
  const Curvature c(1e6);
  const auto m = encode_pose({{1, 2, 3}, {}}, c);
  const auto half_turn = quat_to_rotor({0, 0, 0, 1}).to_motor();
  const auto m_hat = Motor::from_multivector(m.to_multivector() * half_turn.to_multivector());
  const auto r = pointcloud_mse(cloud, m, m_hat, c);
  EXPECT_NEAR(r.mse, expected, 1e-6 * expected);
}

TEST(PointcloudMse, EmptyCloudRejected) {
  EXPECT_THROW(pointcloud_mse({}, Motor{}, Motor{}, Curvature(10)), ValidationError);
}

TEST(PointcloudMse, AntipodePointsExcluded) {
  // translating by (lambda, 0, 0) twice is a half turn in the e1-e4 plane,
  // which sends the origin to the point at infinity
  const Curvature c(10.0);
  const auto t = translation_rotor({10, 0, 0}, c).to_multivector();
  const auto m = Motor::from_multivector(t * t);
  const std::vector<EuclidPoint3> cloud{{0, 0, 0}, {1, 0, 0}};
  const auto r = pointcloud_mse(cloud, Motor{}, m, c);
  EXPECT_EQ(r.excluded, 1u);
  EXPECT_EQ(r.used, 1u);
}

}  // namespace
}  // namespace motorpose::metrics

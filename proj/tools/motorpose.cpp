// motorpose: pose labels <-> 1D-Up motors, prediction evaluation and checks.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "motorpose/cli.hpp"

using motorpose::cli::Command;
using motorpose::cli::DatasetFormat;
using motorpose::cli::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"1D-Up CGA motor encoding and evaluation of camera poses"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string thresholds;

  const std::map<std::string, DatasetFormat> formats{{"cambridge", DatasetFormat::cambridge},
                                                     {"sevenscenes", DatasetFormat::sevenscenes}};
  const std::map<std::string, motorpose::io::AreaKind> kinds{
      {"outdoor", motorpose::io::AreaKind::outdoor}, {"indoor", motorpose::io::AreaKind::indoor}};
  const std::map<std::string, motorpose::io::QuatOrder> orders{
      {"wxyz", motorpose::io::QuatOrder::wxyz}, {"xyzw", motorpose::io::QuatOrder::xyzw}};

  auto add_lambda = [&](CLI::App* sub) {
    sub->add_option("--lambda", cfg.lambda, "Curvature override (length units of the labels)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--area", cfg.area, "Scene area (m^2) or volume (m^3) for the lambda lookup")
        ->check(CLI::PositiveNumber);
    sub->add_option("--kind", cfg.kind, "Scene kind for --area")
        ->transform(CLI::CheckedTransformer(kinds, CLI::ignore_case));
  };
  auto add_poses = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Pose label format")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
    sub->add_option("--input", cfg.input, "Pose file (cambridge) or pose directory (sevenscenes)");
    sub->add_option("--quat-order", cfg.quat_order, "Quaternion column order in cambridge files")
        ->transform(CLI::CheckedTransformer(orders, CLI::ignore_case));
    sub->add_flag("--world-to-camera", cfg.world_to_camera,
                  "Invert sevenscenes matrices before use");
  };

  auto* encode = app.add_subcommand("encode", "Convert pose labels to a motor CSV");
  add_poses(encode);
  add_lambda(encode);
  encode->add_option("--out", cfg.out, "Motor CSV to write")->required();
  encode->add_flag("--strict", cfg.strict, "Fail if any record is rejected");

  auto* decode = app.add_subcommand("decode", "Convert a motor CSV back to a pose file");
  decode->add_option("--input", cfg.input, "Motor or prediction CSV")->required();
  decode->add_option("--lambda", cfg.lambda, "Curvature (required for prediction CSVs)")
      ->check(CLI::PositiveNumber);
  decode->add_option("--out", cfg.out, "Pose file to write")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate predicted motors against ground truth");
  eval->add_option("--gt", cfg.gt, "Ground-truth motor CSV")->required();
  eval->add_option("--pred", cfg.pred, "Prediction CSV")->required();
  eval->add_option("--lambda", cfg.lambda, "Curvature override")->check(CLI::PositiveNumber);
  eval->add_option("--thresholds", thresholds, "Accuracy thresholds as <meters,degrees>");
  eval->add_option("--out", cfg.out, "JSON report to write");
  eval->add_option("--hist-csv", cfg.hist_csv, "Histogram CSV to write");
  eval->add_option("--cdf-csv", cfg.cdf_csv, "CDF CSV to write");

  auto* check = app.add_subcommand("check", "Run invariant checks on random and file data");
  add_poses(check);
  add_lambda(check);
  check->add_option("--seed", cfg.seed, "Seed for randomized checks");
  check->add_option("--out", cfg.out, "Report to write");

  auto* trace = app.add_subcommand("trace", "Euclidean vs spherical camera trace");
  add_poses(trace);
  add_lambda(trace);
  trace->add_option("--out", cfg.out, "Trace CSV to write")->required();
  trace->add_flag("--strict", cfg.strict, "Fail if any record is rejected");

  auto* cloud = app.add_subcommand("cloudcheck", "Point-cloud MSE between gt and predicted poses");
  cloud->add_option("--cloud", cfg.cloud, "ASCII XYZ or PLY point cloud")->required();
  cloud->add_option("--gt", cfg.gt, "Ground-truth motor CSV")->required();
  cloud->add_option("--pred", cfg.pred, "Prediction CSV")->required();
  cloud->add_option("--lambda", cfg.lambda, "Curvature override")->check(CLI::PositiveNumber);
  cloud->add_option("--out", cfg.out, "Per-frame MSE CSV to write");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : motorpose::cli::kExitInputError;
  }

  if (!thresholds.empty()) {
    const auto t = motorpose::cli::parse_thresholds(thresholds);
    if (!t) {
      std::cerr << "error: --thresholds expects <meters,degrees>, got '" << thresholds << "'\n";
      return motorpose::cli::kExitInputError;
    }
    cfg.thresholds = *t;
  }

  if (encode->parsed()) cfg.command = Command::encode;
  else if (decode->parsed()) cfg.command = Command::decode;
  else if (eval->parsed()) cfg.command = Command::eval;
  else if (check->parsed()) cfg.command = Command::check;
  else if (trace->parsed()) cfg.command = Command::trace;
  else cfg.command = Command::cloudcheck;

  return motorpose::cli::run(cfg, std::cout, std::cerr);
}

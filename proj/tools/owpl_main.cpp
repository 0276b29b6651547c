/* Copyright 2026 The OWPL Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
// owpl command line: batch stages over point-cloud probability fields.
// Subcommands: synth, score, hua, gbd, pseudo, distill, eval, pipeline.
// Set OWPL_LOG=debug|info|warn|error to control stderr verbosity.

#include <CLI11.hpp>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "owpl/common.h"
#include "owpl/config.h"
#include "owpl/stages.h"
#include "owpl/version.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string output_dir = ".";
  std::string preset;
  std::vector<std::string> overrides;
  int threads = 1;
  bool no_timings = false;
};

void add_common_flags(CLI::App* cmd, CommonArgs* args) {
  cmd->add_option("--config", args->config_path,
                  "Config file (key = value with [section] headers)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--output-dir", args->output_dir,
                  "Directory for stage outputs (created if missing)");
  cmd->add_option("--preset", args->preset,
                  "Hyperparameter preset: s3dis or scannet");
  cmd->add_option("--set", args->overrides,
                  "Override a config key, e.g. --set hua.lambda=2.0")
      ->take_all();
  cmd->add_option("--threads", args->threads, "Worker thread count")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-timings", args->no_timings,
                "Omit timing lines from reports");
}

owpl::Settings build_settings(const CommonArgs& args) {
  owpl::Settings settings;
  if (!args.preset.empty()) settings.apply_preset(args.preset);
  if (!args.config_path.empty()) settings.load_file(args.config_path);
  for (const std::string& assignment : args.overrides) {
    settings.set_override(assignment);
  }
  return settings;
}

owpl::StageOptions build_options(const CommonArgs& args) {
  owpl::StageOptions options;
  options.output_dir = args.output_dir;
  options.threads = args.threads;
  options.with_timings = !args.no_timings;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      std::string("owpl ") + owpl::kVersion +
      " - open-world point cloud segmentation stages"};
  app.require_subcommand(1);

  CommonArgs synth_args;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic scene with ground-truth unknown mask");
  add_common_flags(synth, &synth_args);

  CommonArgs score_args;
  std::string score_input;
  std::string score_method;
  CLI::App* score =
      app.add_subcommand("score", "Per-point uncertainty scores from logits");
  add_common_flags(score, &score_args);
  score->add_option("--input", score_input, "Input cloud (.owpc or .csv)")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--method", score_method,
                    "Scoring method: msp or maxlogit");

  CommonArgs hua_args;
  std::string hua_input;
  std::string hua_scores;
  CLI::App* hua = app.add_subcommand(
      "hua", "Grow a low-confidence region from seeded points");
  add_common_flags(hua, &hua_args);
  hua->add_option("--input", hua_input, "Input cloud")
      ->required()
      ->check(CLI::ExistingFile);
  hua->add_option("--scores", hua_scores, "Score file from the score stage")
      ->required()
      ->check(CLI::ExistingFile);

  CommonArgs gbd_args;
  std::string gbd_input;
  std::string gbd_scores;
  std::string gbd_region;
  CLI::App* gbd = app.add_subcommand(
      "gbd", "Split a region into unknown objects via graph boundaries");
  add_common_flags(gbd, &gbd_args);
  gbd->add_option("--input", gbd_input, "Input cloud")
      ->required()
      ->check(CLI::ExistingFile);
  gbd->add_option("--scores", gbd_scores, "Score file")
      ->required()
      ->check(CLI::ExistingFile);
  gbd->add_option("--region", gbd_region, "Region index file from hua")
      ->required()
      ->check(CLI::ExistingFile);

  CommonArgs pseudo_args;
  std::string pseudo_input;
  std::string pseudo_objects;
  CLI::App* pseudo = app.add_subcommand(
      "pseudo", "Assemble pseudo ground truth from detected objects");
  add_common_flags(pseudo, &pseudo_args);
  pseudo->add_option("--input", pseudo_input, "Input cloud")
      ->required()
      ->check(CLI::ExistingFile);
  pseudo->add_option("--gbd-labels", pseudo_objects,
                     "Object label file from gbd")
      ->required()
      ->check(CLI::ExistingFile);

  CommonArgs distill_args;
  std::string distill_teacher;
  std::string distill_novel;
  std::string distill_temperature;
  CLI::App* distill = app.add_subcommand(
      "distill", "Soft targets for incremental training");
  add_common_flags(distill, &distill_args);
  distill->add_option("--teacher", distill_teacher,
                      "Teacher cloud whose logits cover old + novel classes")
      ->required()
      ->check(CLI::ExistingFile);
  distill->add_option("--novel-labels", distill_novel,
                      "Per-point novel labels (-1 = not novel)")
      ->required()
      ->check(CLI::ExistingFile);
  distill->add_option("--temperature", distill_temperature,
                      "Distillation temperature (overrides config)");

  CommonArgs eval_args;
  owpl::EvalInputs eval_inputs;
  std::string eval_scores;
  std::string eval_gt_mask;
  std::string eval_pred;
  std::string eval_gt;
  CLI::App* eval = app.add_subcommand(
      "eval", "Unknown-identification and segmentation metrics");
  add_common_flags(eval, &eval_args);
  eval->add_option("--scores", eval_scores, "Score file to rank by")
      ->check(CLI::ExistingFile);
  eval->add_option("--gt-mask", eval_gt_mask, "Ground-truth 0/1 unknown mask")
      ->check(CLI::ExistingFile);
  eval->add_option("--pred", eval_pred, "Predicted label file")
      ->check(CLI::ExistingFile);
  eval->add_option("--gt", eval_gt, "Ground-truth label file")
      ->check(CLI::ExistingFile);
  eval->add_option("--old-classes", eval_inputs.old_classes,
                   "Old class ids for the split means")
      ->delimiter(',');
  eval->add_option("--novel-classes", eval_inputs.novel_classes,
                   "Novel class ids for the split means")
      ->delimiter(',');
  eval->add_flag("--curves", eval_inputs.curves,
                 "Also write pr_curve.csv / per_class_iou.csv");

  CommonArgs pipeline_args;
  std::string pipeline_input;
  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "score -> hua -> gbd -> pseudo (+ eval) in one run");
  add_common_flags(pipeline, &pipeline_args);
  pipeline->add_option("--input", pipeline_input,
                       "Input cloud; omit to run on the synthetic scene")
      ->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      owpl::Settings settings = build_settings(synth_args);
      owpl::run_synth_stage(settings, build_options(synth_args));
    } else if (score->parsed()) {
      owpl::Settings settings = build_settings(score_args);
      if (!score_method.empty()) settings.set("score.method", score_method);
      owpl::run_score_stage(settings, score_input, build_options(score_args));
    } else if (hua->parsed()) {
      owpl::Settings settings = build_settings(hua_args);
      owpl::run_hua_stage(settings, hua_input, hua_scores,
                          build_options(hua_args));
    } else if (gbd->parsed()) {
      owpl::Settings settings = build_settings(gbd_args);
      owpl::run_gbd_stage(settings, gbd_input, gbd_scores, gbd_region,
                          build_options(gbd_args));
    } else if (pseudo->parsed()) {
      owpl::Settings settings = build_settings(pseudo_args);
      owpl::run_pseudo_stage(settings, pseudo_input, pseudo_objects,
                             build_options(pseudo_args));
    } else if (distill->parsed()) {
      owpl::Settings settings = build_settings(distill_args);
      if (!distill_temperature.empty()) {
        settings.set("distill.temperature", distill_temperature);
      }
      owpl::run_distill_stage(settings, distill_teacher, distill_novel,
                              build_options(distill_args));
    } else if (eval->parsed()) {
      owpl::Settings settings = build_settings(eval_args);
      eval_inputs.scores = eval_scores;
      eval_inputs.gt_mask = eval_gt_mask;
      eval_inputs.pred = eval_pred;
      eval_inputs.gt = eval_gt;
      owpl::run_eval_stage(settings, eval_inputs, build_options(eval_args));
    } else if (pipeline->parsed()) {
      owpl::Settings settings = build_settings(pipeline_args);
      owpl::run_pipeline_stage(settings, pipeline_input,
                               build_options(pipeline_args));
    }
  } catch (const owpl::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 1;
  }
  return 0;
}

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
#include "owpl/stages.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "owpl/common.h"
#include "owpl/io.h"
#include "owpl/losses.h"
#include "owpl/metrics.h"
#include "owpl/pseudo_labeling.h"
#include "owpl/report.h"
#include "owpl/version.h"

namespace owpl {
namespace {

void prepare_output_dir(const StageOptions& options, const char* scope) {
  std::error_code ec;
  std::filesystem::create_directories(options.output_dir, ec);
  require(!ec, ErrorKind::kIoFailure, scope,
          "cannot create output directory " + options.output_dir.string() +
              ": " + ec.message());
}

// Stage reports never mention the thread count: outputs are contractually
// identical for any --threads value, and the report is part of the output.
void add_preamble(Report& report, const char* stage,
                  const Settings& settings) {
  report.add("stage", stage);
  report.add("version", kVersion);
  for (const auto& [key, value] : settings.echo()) {
    report.add("config." + key, value);
  }
}

const char* stop_reason_name(StopReason reason) {
  switch (reason) {
    case StopReason::kStopCondition: return "stop_condition";
    case StopReason::kExhausted: return "exhausted";
    case StopReason::kMaxIterations: return "max_iterations";
  }
  return "stop_condition";
}

const char* score_file_name(ScoreMethod method) {
  switch (method) {
    case ScoreMethod::kMsp: return "scores_msp.txt";
    case ScoreMethod::kMaxLogit: return "scores_maxlogit.txt";
    case ScoreMethod::kExternal: return "scores_external.txt";
  }
  return "scores_external.txt";
}

std::size_t argmax_row(std::span<const double> row) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;
  }
  return best;
}

// Closed-set labels for loss and pseudo-GT assembly: cloud labels where
// present and in range, argmax of the logits for unlabeled (-1) points or
// when the cloud carries no labels at all.
std::vector<std::int32_t> closed_labels_from(
    const PointProbabilityCloud& cloud) {
  const char* scope = "stages.closed_labels";
  std::vector<std::int32_t> out(cloud.n_points);
  const auto c = static_cast<std::int32_t>(cloud.n_classes);
  for (std::size_t i = 0; i < cloud.n_points; ++i) {
    const std::int32_t label =
        cloud.has_labels() ? cloud.labels[i] : kUnknownLabel;
    if (label == kUnknownLabel) {
      out[i] = static_cast<std::int32_t>(argmax_row(cloud.logits.row(i)));
    } else {
      require(label < c, ErrorKind::kLabelOutOfRange, scope,
              "label " + std::to_string(label) + " at point " +
                  std::to_string(i) + " is outside the closed set [0, " +
                  std::to_string(c) + ")");
      out[i] = label;
    }
  }
  return out;
}

ScoreField compute_scores(const PointProbabilityCloud& cloud,
                          ScoreMethod method, int threads) {
  if (method == ScoreMethod::kMaxLogit) {
    return maxlogit_scores(cloud.logits, threads);
  }
  return msp_scores(cloud.logits, threads);
}

ObjectLabels object_labels_from_mask(const UnknownMask& mask) {
  std::map<std::uint32_t, std::int32_t> assign;
  for (std::size_t i = 0; i < mask.objects.size(); ++i) {
    for (std::uint32_t p : mask.objects[i]) {
      assign[p] = static_cast<std::int32_t>(i);
    }
  }
  for (std::uint32_t p : mask.rejected) assign[p] = -1;
  ObjectLabels out;
  out.point_indices.reserve(assign.size());
  out.object_ids.reserve(assign.size());
  for (const auto& [point, id] : assign) {
    out.point_indices.push_back(point);
    out.object_ids.push_back(id);
  }
  return out;
}

UnknownMask mask_from_object_labels(const ObjectLabels& labels) {
  const char* scope = "stages.object_labels";
  std::map<std::int32_t, std::vector<std::uint32_t>> groups;
  for (std::size_t i = 0; i < labels.point_indices.size(); ++i) {
    const std::int32_t id = labels.object_ids[i];
    require(id >= -1, ErrorKind::kInvalidArgument, scope,
            "object id " + std::to_string(id) + " at row " +
                std::to_string(i) + " must be >= -1");
    groups[id].push_back(labels.point_indices[i]);
  }
  UnknownMask mask;
  for (auto& [id, points] : groups) {
    std::sort(points.begin(), points.end());
    if (id == -1) {
      mask.rejected = std::move(points);
    } else {
      mask.objects.push_back(std::move(points));
    }
  }
  return mask;
}

void add_gbd_summary(Report& report, const GbdResult& result) {
  report.add("gbd.tree_edges", result.tree_edge_count);
  report.add("gbd.gmm.degenerate", result.gmm_degenerate ? "true" : "false");
  if (!result.gmm_degenerate) {
    report.add("gbd.gmm.mixing1", result.fit.mixing1);
    report.add("gbd.gmm.mean1", result.fit.mean1);
    report.add("gbd.gmm.stddev1", result.fit.stddev1);
    report.add("gbd.gmm.mixing2", result.fit.mixing2);
    report.add("gbd.gmm.mean2", result.fit.mean2);
    report.add("gbd.gmm.stddev2", result.fit.stddev2);
    report.add("gbd.gmm.log_likelihood", result.fit.log_likelihood);
    report.add("gbd.gmm.iterations", result.fit.iterations);
    report.add("gbd.gmm.converged", result.fit.converged ? "true" : "false");
  }
  report.add("gbd.cut_threshold", result.cut_threshold);
  report.add("gbd.components", result.component_sizes.size());
  // Cap the per-component listing; large scenes shed many singletons.
  constexpr std::size_t kMaxListed = 8;
  std::size_t listed = std::min(result.component_sizes.size(), kMaxListed);
  for (std::size_t i = 0; i < listed; ++i) {
    report.add("gbd.component_size." + std::to_string(i),
               result.component_sizes[i]);
  }
  report.add("gbd.objects", result.mask.objects.size());
  for (std::size_t i = 0; i < result.mask.objects.size(); ++i) {
    report.add("gbd.object_size." + std::to_string(i),
               result.mask.objects[i].size());
  }
  report.add("gbd.rejected", result.mask.rejected.size());
}

}  // namespace

PipelineOutputs run_pipeline(const PointProbabilityCloud& cloud,
                             const std::vector<std::uint8_t>* gt_unknown,
                             const Settings& settings, int threads) {
  const char* scope = "stages.pipeline";
  cloud.validate();
  if (gt_unknown != nullptr) {
    require(gt_unknown->size() == cloud.n_points,
            ErrorKind::kDimensionMismatch, scope,
            "ground-truth mask size " + std::to_string(gt_unknown->size()) +
                " does not match cloud size " +
                std::to_string(cloud.n_points));
  }

  PipelineOutputs out;
  out.scores = compute_scores(cloud, settings.score_method(), threads);

  HuaConfig hua = settings.hua_config();
  hua.threads = threads;
  out.region = grow_region(cloud, out.scores, hua);

  GbdConfig gbd = settings.gbd_config();
  gbd.threads = threads;
  out.gbd = detect_unknown_objects(cloud, out.region, out.scores, gbd);

  out.final_mask.assign(cloud.n_points, 0);
  for (const auto& object : out.gbd.mask.objects) {
    for (std::uint32_t p : object) out.final_mask[p] = 1;
  }

  out.closed_labels = closed_labels_from(cloud);
  out.pseudo_gt =
      make_pseudo_gt(out.closed_labels, out.gbd.mask,
                     static_cast<std::int32_t>(cloud.n_classes));

  const LossGrad closed =
      closed_set_loss(cloud.logits, out.closed_labels, threads);
  const std::vector<double> u_scores = as_unknown_scores(out.scores);
  const PseudoLossGrad pseudo =
      pseudo_loss(cloud.logits, u_scores, out.pseudo_gt.hard, threads);
  out.closed_loss = closed.loss;
  out.pseudo_loss_value = pseudo.loss;
  out.total_loss =
      total_oss_loss(closed.loss, pseudo.loss, settings.loss_config());

  if (gt_unknown != nullptr) {
    const std::size_t positives = static_cast<std::size_t>(
        std::count(gt_unknown->begin(), gt_unknown->end(), std::uint8_t{1}));
    if (positives > 0 && positives < gt_unknown->size()) {
      std::vector<double> mask_scores(out.final_mask.begin(),
                                      out.final_mask.end());
      out.mask_auroc = auroc(mask_scores, *gt_unknown);
      out.score_auroc = auroc(u_scores, *gt_unknown);
      out.score_aupr = aupr(u_scores, *gt_unknown);
      std::vector<std::uint8_t> pseudo_unknown(cloud.n_points, 0);
      const auto c = static_cast<std::int32_t>(cloud.n_classes);
      for (std::size_t i = 0; i < cloud.n_points; ++i) {
        if (out.pseudo_gt.hard[i] == c) pseudo_unknown[i] = 1;
      }
      out.pseudo_unknown_iou = binary_iou(pseudo_unknown, *gt_unknown);
      out.evaluated = true;
    }
  }
  return out;
}

void run_synth_stage(const Settings& settings, const StageOptions& options) {
  const char* scope = "stages.synth";
  StageTimer timer;
  prepare_output_dir(options, scope);
  const SceneSpec spec = settings.scene_spec();
  const Scene scene = generate_scene(spec);
  save_cloud(scene.cloud, options.output_dir / "scene.owpc",
             CloudFormat::kOwpc);
  save_mask(options.output_dir / "unknown_mask.txt", scene.unknown_mask);

  Report report;
  add_preamble(report, "synth", settings);
  report.add("n_points", scene.cloud.n_points);
  report.add("n_classes", scene.cloud.n_classes);
  std::size_t unknown = 0;
  for (std::uint8_t v : scene.unknown_mask) unknown += v;
  report.add("n_unknown", unknown);
  report.add("known_clusters", spec.known_clusters.size());
  report.add("unknown_clusters", spec.unknown_clusters.size());
  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "synth_report.txt", options.with_timings);
}

void run_score_stage(const Settings& settings,
                     const std::filesystem::path& input,
                     const StageOptions& options) {
  const char* scope = "stages.score";
  StageTimer timer;
  prepare_output_dir(options, scope);
  const PointProbabilityCloud cloud = load_cloud(input, guess_format(input));
  const ScoreMethod method = settings.score_method();
  const ScoreField scores = compute_scores(cloud, method, options.threads);
  save_score_field(options.output_dir / score_file_name(method), scores);

  Report report;
  add_preamble(report, "score", settings);
  report.add("input", input.string());
  report.add("n_points", cloud.n_points);
  report.add("n_classes", cloud.n_classes);
  double lo = scores.values[0];
  double hi = scores.values[0];
  double sum = 0.0;
  for (double v : scores.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  report.add("score.min", lo);
  report.add("score.max", hi);
  report.add("score.mean", sum / static_cast<double>(scores.values.size()));
  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "score_report.txt", options.with_timings);
}

void run_hua_stage(const Settings& settings,
                   const std::filesystem::path& input,
                   const std::filesystem::path& scores_path,
                   const StageOptions& options) {
  const char* scope = "stages.hua";
  StageTimer timer;
  prepare_output_dir(options, scope);
  const PointProbabilityCloud cloud = load_cloud(input, guess_format(input));
  const ScoreField scores = load_score_field(scores_path);
  HuaConfig config = settings.hua_config();
  config.threads = options.threads;
  const RegionState region = grow_region(cloud, scores, config);
  save_indices(options.output_dir / "region.txt", region.members);

  Report report;
  add_preamble(report, "hua", settings);
  report.add("input", input.string());
  report.add("n_points", cloud.n_points);
  report.add("region.members", region.members.size());
  report.add("region.seeds", region.seeds.size());
  report.add("region.iterations", region.iterations);
  report.add("region.stopped_reason", stop_reason_name(region.stopped_reason));
  for (std::size_t i = 0; i < region.mean_score_history.size(); ++i) {
    report.add("region.mean_score_history." + std::to_string(i),
               region.mean_score_history[i]);
  }
  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "hua_report.txt", options.with_timings);
}

void run_gbd_stage(const Settings& settings,
                   const std::filesystem::path& input,
                   const std::filesystem::path& scores_path,
                   const std::filesystem::path& region_path,
                   const StageOptions& options) {
  const char* scope = "stages.gbd";
  StageTimer timer;
  prepare_output_dir(options, scope);
  const PointProbabilityCloud cloud = load_cloud(input, guess_format(input));
  const ScoreField scores = load_score_field(scores_path);
  RegionState region;
  region.members = load_indices(region_path);
  std::sort(region.members.begin(), region.members.end());
  region.members.erase(
      std::unique(region.members.begin(), region.members.end()),
      region.members.end());
  GbdConfig config = settings.gbd_config();
  config.threads = options.threads;
  const GbdResult result =
      detect_unknown_objects(cloud, region, scores, config);
  save_object_labels(options.output_dir / "gbd_labels.txt",
                     object_labels_from_mask(result.mask));

  Report report;
  add_preamble(report, "gbd", settings);
  report.add("input", input.string());
  report.add("region.members", region.members.size());
  add_gbd_summary(report, result);
  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "gbd_report.txt", options.with_timings);
}

void run_pseudo_stage(const Settings& settings,
                      const std::filesystem::path& input,
                      const std::filesystem::path& object_labels_path,
                      const StageOptions& options) {
  const char* scope = "stages.pseudo";
  StageTimer timer;
  prepare_output_dir(options, scope);
  const PointProbabilityCloud cloud = load_cloud(input, guess_format(input));
  const ObjectLabels object_labels = load_object_labels(object_labels_path);
  const UnknownMask mask = mask_from_object_labels(object_labels);
  const std::vector<std::int32_t> closed = closed_labels_from(cloud);
  const LabelSet pseudo = make_pseudo_gt(
      closed, mask, static_cast<std::int32_t>(cloud.n_classes));
  save_labels(options.output_dir / "pseudo_labels.txt", pseudo.hard);

  Report report;
  add_preamble(report, "pseudo", settings);
  report.add("input", input.string());
  report.add("n_points", cloud.n_points);
  report.add("n_objects", mask.objects.size());
  std::size_t unknown = 0;
  const auto c = static_cast<std::int32_t>(cloud.n_classes);
  for (std::int32_t v : pseudo.hard) {
    if (v == c) ++unknown;
  }
  report.add("n_unknown_labeled", unknown);
  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "pseudo_report.txt",
               options.with_timings);
}

void run_distill_stage(const Settings& settings,
                       const std::filesystem::path& teacher_path,
                       const std::filesystem::path& novel_labels_path,
                       const StageOptions& options) {
  const char* scope = "stages.distill";
  StageTimer timer;
  prepare_output_dir(options, scope);
  const PointProbabilityCloud teacher =
      load_cloud(teacher_path, guess_format(teacher_path));
  const std::vector<std::int32_t> novel = load_labels(novel_labels_path);
  require(novel.size() == teacher.n_points, ErrorKind::kDimensionMismatch,
          scope,
          "novel label count " + std::to_string(novel.size()) +
              " does not match teacher point count " +
              std::to_string(teacher.n_points));
  const DistillConfig config =
      settings.distill_config(teacher.logits.cols());
  const LabelSet distilled =
      make_distilled_gt(teacher.logits, novel, config);
  save_soft_labels(options.output_dir / "distilled_gt.csv", distilled.soft);

  Report report;
  add_preamble(report, "distill", settings);
  report.add("input", teacher_path.string());
  report.add("n_points", teacher.n_points);
  report.add("width", teacher.logits.cols());
  report.add("temperature", config.temperature);
  report.add("novel_count",
             static_cast<std::int64_t>(config.novel_count));
  report.add("novel_label_offset",
             static_cast<std::int64_t>(config.novel_label_offset));
  std::size_t novel_points = 0;
  for (std::int32_t v : novel) {
    if (v != kUnknownLabel) ++novel_points;
  }
  report.add("n_novel_points", novel_points);
  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "distill_report.txt",
               options.with_timings);
}

void run_eval_stage(const Settings& settings, const EvalInputs& inputs,
                    const StageOptions& options) {
  const char* scope = "stages.eval";
  StageTimer timer;
  prepare_output_dir(options, scope);
  const bool ranking = !inputs.scores.empty();
  const bool segmentation = !inputs.pred.empty();
  require(ranking || segmentation, ErrorKind::kInvalidArgument, scope,
          "nothing to evaluate: pass --scores/--gt-mask or --pred/--gt");

  Report report;
  add_preamble(report, "eval", settings);

  if (ranking) {
    require(!inputs.gt_mask.empty(), ErrorKind::kInvalidArgument, scope,
            "--scores needs --gt-mask");
    const ScoreField scores = load_score_field(inputs.scores);
    const std::vector<std::uint8_t> gt = load_mask(inputs.gt_mask);
    const std::vector<double> u = as_unknown_scores(scores);
    report.add("eval.auroc", auroc(u, gt));
    report.add("eval.aupr", aupr(u, gt));
    if (inputs.curves) {
      const std::vector<PrPoint> points = pr_curve(u, gt);
      std::string csv = "recall,precision\n";
      for (const PrPoint& pt : points) {
        csv += format_double(pt.recall);
        csv += ',';
        csv += format_double(pt.precision);
        csv += '\n';
      }
      std::ofstream out(options.output_dir / "pr_curve.csv",
                        std::ios::binary);
      require(out.good(), ErrorKind::kIoFailure, scope,
              "cannot open pr_curve.csv");
      out << csv;
      require(out.good(), ErrorKind::kIoFailure, scope,
              "write failed for pr_curve.csv");
    }
  }

  if (segmentation) {
    require(!inputs.gt.empty(), ErrorKind::kInvalidArgument, scope,
            "--pred needs --gt");
    const std::vector<std::int32_t> pred = load_labels(inputs.pred);
    const std::vector<std::int32_t> gt = load_labels(inputs.gt);
    IouResult overall;
    if (!inputs.old_classes.empty() || !inputs.novel_classes.empty()) {
      const MiouSplit split =
          miou_split(pred, gt, inputs.old_classes, inputs.novel_classes);
      overall = split.all;
      report.add("eval.miou", split.all.mean);
      report.add("eval.miou_old", split.old_set.mean);
      report.add("eval.miou_novel", split.novel_set.mean);
    } else {
      std::set<std::int32_t> present(pred.begin(), pred.end());
      present.insert(gt.begin(), gt.end());
      const std::vector<std::int32_t> classes(present.begin(), present.end());
      overall = miou(pred, gt, classes);
      report.add("eval.miou", overall.mean);
    }
    for (const auto& [c, iou] : overall.per_class) {
      report.add("eval.iou." + std::to_string(c), iou);
    }
    if (inputs.curves) {
      std::string csv = "class,iou\n";
      for (const auto& [c, iou] : overall.per_class) {
        csv += std::to_string(c);
        csv += ',';
        csv += format_double(iou);
        csv += '\n';
      }
      std::ofstream out(options.output_dir / "per_class_iou.csv",
                        std::ios::binary);
      require(out.good(), ErrorKind::kIoFailure, scope,
              "cannot open per_class_iou.csv");
      out << csv;
      require(out.good(), ErrorKind::kIoFailure, scope,
              "write failed for per_class_iou.csv");
    }
  }

  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "eval_report.txt", options.with_timings);
}

void run_pipeline_stage(const Settings& settings,
                        const std::filesystem::path& input,
                        const StageOptions& options) {
  const char* scope = "stages.pipeline";
  StageTimer timer;
  prepare_output_dir(options, scope);

  PointProbabilityCloud cloud;
  std::vector<std::uint8_t> gt;
  bool have_gt = false;
  if (input.empty()) {
    const Scene scene = generate_scene(settings.scene_spec());
    save_cloud(scene.cloud, options.output_dir / "scene.owpc",
               CloudFormat::kOwpc);
    save_mask(options.output_dir / "unknown_mask.txt", scene.unknown_mask);
    cloud = scene.cloud;
    gt = scene.unknown_mask;
    have_gt = true;
  } else {
    cloud = load_cloud(input, guess_format(input));
    if (cloud.has_labels()) {
      gt.assign(cloud.n_points, 0);
      for (std::size_t i = 0; i < cloud.n_points; ++i) {
        if (cloud.labels[i] == kUnknownLabel) gt[i] = 1;
      }
      have_gt = true;
    }
  }

  const PipelineOutputs outputs =
      run_pipeline(cloud, have_gt ? &gt : nullptr, settings, options.threads);

  save_score_field(
      options.output_dir / score_file_name(settings.score_method()),
      outputs.scores);
  save_indices(options.output_dir / "region.txt", outputs.region.members);
  save_object_labels(options.output_dir / "gbd_labels.txt",
                     object_labels_from_mask(outputs.gbd.mask));
  save_labels(options.output_dir / "pseudo_labels.txt",
              outputs.pseudo_gt.hard);
  save_mask(options.output_dir / "final_mask.txt", outputs.final_mask);

  Report report;
  add_preamble(report, "pipeline", settings);
  if (!input.empty()) report.add("input", input.string());
  report.add("n_points", cloud.n_points);
  report.add("n_classes", cloud.n_classes);
  report.add("region.members", outputs.region.members.size());
  report.add("region.iterations", outputs.region.iterations);
  report.add("region.stopped_reason",
             stop_reason_name(outputs.region.stopped_reason));
  add_gbd_summary(report, outputs.gbd);
  std::size_t unknown_labeled = 0;
  const auto c = static_cast<std::int32_t>(cloud.n_classes);
  for (std::int32_t v : outputs.pseudo_gt.hard) {
    if (v == c) ++unknown_labeled;
  }
  report.add("pseudo.n_unknown_labeled", unknown_labeled);
  report.add("loss.closed", outputs.closed_loss);
  report.add("loss.pseudo", outputs.pseudo_loss_value);
  report.add("loss.total", outputs.total_loss);
  if (outputs.evaluated) {
    report.add("eval.mask_auroc", outputs.mask_auroc);
    report.add("eval.score_auroc", outputs.score_auroc);
    report.add("eval.score_aupr", outputs.score_aupr);
    report.add("eval.pseudo_unknown_iou", outputs.pseudo_unknown_iou);
  }
  report.add_timing("total_s", timer.seconds());
  report.write(options.output_dir / "pipeline_report.txt",
               options.with_timings);
}

}  // namespace owpl

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
#ifndef OWPL_STAGES_H_
#define OWPL_STAGES_H_

#include <cstdint>
#include <filesystem>
#include <vector>

#include "owpl/config.h"
#include "owpl/gbd.h"
#include "owpl/hua.h"
#include "owpl/pointset.h"
#include "owpl/synth.h"
#include "owpl/uncertainty.h"

namespace owpl {

struct StageOptions {
  std::filesystem::path output_dir;
  int threads = 1;
  // When false, reports omit all timing.* lines so their bytes are a pure
  // function of config and inputs.
  bool with_timings = true;
};

// Full in-memory chain: score, region growing, boundary detection, pseudo
// ground truth, loss evaluation, and (when ground truth is supplied and has
// both classes) unknown-identification metrics.
struct PipelineOutputs {
  ScoreField scores;
  RegionState region;
  GbdResult gbd;
  std::vector<std::uint8_t> final_mask;       // 1 = in a detected object
  std::vector<std::int32_t> closed_labels;    // -1 labels filled with argmax
  LabelSet pseudo_gt;
  double closed_loss = 0.0;
  double pseudo_loss_value = 0.0;
  double total_loss = 0.0;
  bool evaluated = false;
  double mask_auroc = 0.0;
  double score_auroc = 0.0;
  double score_aupr = 0.0;
  double pseudo_unknown_iou = 0.0;
};

PipelineOutputs run_pipeline(const PointProbabilityCloud& cloud,
                             const std::vector<std::uint8_t>* gt_unknown,
                             const Settings& settings, int threads);

// CLI stage runners. Each writes its artifacts plus <stage>_report.txt into
// options.output_dir (created if missing).
void run_synth_stage(const Settings& settings, const StageOptions& options);
void run_score_stage(const Settings& settings,
                     const std::filesystem::path& input,
                     const StageOptions& options);
void run_hua_stage(const Settings& settings,
                   const std::filesystem::path& input,
                   const std::filesystem::path& scores_path,
                   const StageOptions& options);
void run_gbd_stage(const Settings& settings,
                   const std::filesystem::path& input,
                   const std::filesystem::path& scores_path,
                   const std::filesystem::path& region_path,
                   const StageOptions& options);
void run_pseudo_stage(const Settings& settings,
                      const std::filesystem::path& input,
                      const std::filesystem::path& object_labels_path,
                      const StageOptions& options);
void run_distill_stage(const Settings& settings,
                       const std::filesystem::path& teacher_path,
                       const std::filesystem::path& novel_labels_path,
                       const StageOptions& options);

struct EvalInputs {
  std::filesystem::path scores;   // with gt_mask: ranking metrics
  std::filesystem::path gt_mask;
  std::filesystem::path pred;     // with gt: segmentation metrics
  std::filesystem::path gt;
  std::vector<std::int32_t> old_classes;    // optional split sets
  std::vector<std::int32_t> novel_classes;
  bool curves = false;  // also write pr_curve.csv / per_class_iou.csv
};

void run_eval_stage(const Settings& settings, const EvalInputs& inputs,
                    const StageOptions& options);

// Empty input path: generates the configured synthetic scene first and
// evaluates against its planted mask. Otherwise the cloud's own labels
// (-1 = unknown) provide ground truth when present.
void run_pipeline_stage(const Settings& settings,
                        const std::filesystem::path& input,
                        const StageOptions& options);

}  // namespace owpl

#endif  // OWPL_STAGES_H_

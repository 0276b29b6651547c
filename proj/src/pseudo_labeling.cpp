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
#include "owpl/pseudo_labeling.h"

#include <string>
#include <vector>

#include "owpl/common.h"

namespace owpl {

LabelSet make_pseudo_gt(std::span<const std::int32_t> closed_labels,
                        const UnknownMask& mask, std::int32_t n_classes) {
  const std::string scope = "pseudo_labeling.make_pseudo_gt";
  require(!closed_labels.empty(), ErrorKind::kEmptyInput, scope, "no labels");
  require(n_classes >= 2, ErrorKind::kInvalidArgument, scope,
          "n_classes must be >= 2");
  for (std::int32_t label : closed_labels) {
    require(label >= 0 && label < n_classes, ErrorKind::kLabelOutOfRange,
            scope, "closed label " + std::to_string(label) +
                " outside [0, " + std::to_string(n_classes) + ")");
  }

  std::vector<std::int32_t> out(closed_labels.begin(), closed_labels.end());
  for (const auto& object : mask.objects) {
    for (std::uint32_t idx : object) {
      require(idx < out.size(), ErrorKind::kIndexOutOfRange, scope,
              "mask index " + std::to_string(idx) + " out of range");
      out[idx] = n_classes;
    }
  }
  return LabelSet::pseudo(std::move(out));
}

}  // namespace owpl

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
#ifndef OWPL_PSEUDO_LABELING_H_
#define OWPL_PSEUDO_LABELING_H_

#include <cstdint>
#include <span>

#include "owpl/gbd.h"
#include "owpl/pointset.h"

namespace owpl {

// Stamps the open-set label n_classes onto every masked object point and
// keeps the closed-set label elsewhere. closed_labels must lie in
// [0, n_classes); mask indices must address the label array. Applying the
// result to the same mask again is a no-op.
LabelSet make_pseudo_gt(std::span<const std::int32_t> closed_labels,
                        const UnknownMask& mask, std::int32_t n_classes);

}  // namespace owpl

#endif  // OWPL_PSEUDO_LABELING_H_

/* Copyright 2026 The TimeGate Authors. All Rights Reserved.

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

#ifndef TIMEGATE_GRADSUITE_H_
#define TIMEGATE_GRADSUITE_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "timegate/tape.h"

namespace timegate::harness {

struct GradSuiteEntry {
  std::string name;
  double max_relative_error = 0.0;
};

// Central-difference check of d loss / d param, perturbing the parameter in
// place and restoring it. Gradients of every tensor in `zero` are cleared
// before and after.
double ParamGradCheck(const std::function<ad::Tensor(ad::Tape&)>& loss,
                      const ad::Tensor& param, const std::vector<ad::Tensor>& zero,
                      double h = 1e-5);

// Finite-difference checks of every differentiable operation, the gating,
// selector and classifier building blocks, and every parameter of a small
// end-to-end model under both task losses. Inputs are drawn in [-2, 2] and
// kept away from relu kinks and the gate threshold.
std::vector<GradSuiteEntry> RunGradientSuite(std::uint64_t seed = 0);

}  // namespace timegate::harness

#endif  // TIMEGATE_GRADSUITE_H_

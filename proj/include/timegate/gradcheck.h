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

#ifndef TIMEGATE_GRADCHECK_H_
#define TIMEGATE_GRADCHECK_H_

#include <functional>

#include "timegate/tape.h"
#include "timegate/tensor.h"

namespace timegate::ad {

// Scalar-valued function of one tensor, evaluated on the given tape.
using ScalarFn = std::function<Tensor(Tape&, const Tensor&)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares the tape gradient of f at x against central differences
// (f(x+h) - f(x-h)) / 2h, coordinate by coordinate. Relative error uses the
// denominator max(|analytic|, |numeric|, 1e-8). x itself is not modified.
GradCheckResult FiniteDiffCheck(const ScalarFn& f, const Tensor& x,
                                double h = 1e-5);

}  // namespace timegate::ad

#endif  // TIMEGATE_GRADCHECK_H_

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

#include "timegate/gradcheck.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "timegate/errors.h"

namespace timegate::ad {

GradCheckResult FiniteDiffCheck(const ScalarFn& f, const Tensor& x, double h) {
  Tensor probe = x.Detach();
  probe.set_requires_grad(true);
  std::vector<double> analytic;
  {
    Tape tape;
    Tensor y = f(tape, probe);
    if (y.size() != 1) throw ContractError("gradcheck: f must be scalar");
    tape.Backward(y);
    analytic.assign(probe.grad().begin(), probe.grad().end());
  }
  auto eval = [&f](const Tensor& at) {
    Tape tape;
    return f(tape, at).item();
  };
  GradCheckResult result;
  Tensor shifted = x.Detach();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double original = shifted.data()[i];
    shifted.mutable_data()[i] = original + h;
    const double plus = eval(shifted);
    shifted.mutable_data()[i] = original - h;
    const double minus = eval(shifted);
    shifted.mutable_data()[i] = original;
    const double numeric = (plus - minus) / (2.0 * h);
    const double denom =
        std::max({std::abs(analytic[i]), std::abs(numeric), 1e-8});
    const double err = std::abs(analytic[i] - numeric) / denom;
    if (err > result.max_relative_error || i == 0) {
      result = {err, i, analytic[i], numeric};
    }
  }
  return result;
}

}  // namespace timegate::ad

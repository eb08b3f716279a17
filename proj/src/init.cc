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

#include "timegate/init.h"

#include <cmath>
#include <vector>

namespace timegate {

double OpenUniform(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

ad::Tensor GlorotUniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double limit =
      std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> values(fan_in * fan_out);
  for (double& v : values) v = limit * (2.0 * OpenUniform(rng) - 1.0);
  return ad::Tensor({fan_in, fan_out}, std::move(values), true);
}

ad::Tensor Constant(std::size_t n, double value) {
  return ad::Tensor({n}, std::vector<double>(n, value), true);
}

}  // namespace timegate

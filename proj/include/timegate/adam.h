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

#ifndef TIMEGATE_ADAM_H_
#define TIMEGATE_ADAM_H_

#include <cstdint>
#include <vector>

#include "timegate/tensor.h"

namespace timegate::ad {

struct AdamOptions {
  double learning_rate = 1e-3;
  double epsilon = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
};

// Adam with bias correction. Owns first and second moment buffers, one per
// parameter, and zeroes parameter gradients after each step.
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions options = {});

  void Step();
  void ZeroGrad();

  const AdamOptions& options() const { return options_; }
  std::int64_t step_count() const { return step_; }
  const std::vector<Tensor>& params() const { return params_; }
  std::vector<std::vector<double>>& first_moments() { return m_; }
  std::vector<std::vector<double>>& second_moments() { return v_; }
  const std::vector<std::vector<double>>& first_moments() const { return m_; }
  const std::vector<std::vector<double>>& second_moments() const { return v_; }
  // Restores optimizer state, e.g. from a checkpoint.
  void Restore(std::int64_t step, std::vector<std::vector<double>> m,
               std::vector<std::vector<double>> v);

 private:
  std::vector<Tensor> params_;
  AdamOptions options_;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
  std::int64_t step_ = 0;
};

}  // namespace timegate::ad

#endif  // TIMEGATE_ADAM_H_

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

#ifndef TIMEGATE_INIT_H_
#define TIMEGATE_INIT_H_

#include <cstddef>
#include <random>

#include "timegate/tensor.h"

namespace timegate {

using Rng = std::mt19937_64;

// Uniform double in the open interval (0, 1), independent of the standard
// library's distribution implementations.
double OpenUniform(Rng& rng);

// Glorot-uniform [fan_in x fan_out] weight with gradients enabled.
ad::Tensor GlorotUniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);
// Constant-filled trainable vector.
ad::Tensor Constant(std::size_t n, double value);

}  // namespace timegate

#endif  // TIMEGATE_INIT_H_

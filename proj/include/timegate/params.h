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

#ifndef TIMEGATE_PARAMS_H_
#define TIMEGATE_PARAMS_H_

#include <string>
#include <vector>

#include "timegate/tensor.h"

namespace timegate {

struct NamedTensor {
  std::string name;
  ad::Tensor tensor;
};

using ParamList = std::vector<NamedTensor>;

inline std::vector<ad::Tensor> Tensors(const ParamList& params) {
  std::vector<ad::Tensor> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.tensor);
  return out;
}

// Prefixes every name with `prefix` + "/" and appends to `out`.
inline void AppendParams(ParamList& out, const std::string& prefix,
                         const ParamList& params) {
  for (const auto& p : params) out.push_back({prefix + "/" + p.name, p.tensor});
}

}  // namespace timegate

#endif  // TIMEGATE_PARAMS_H_

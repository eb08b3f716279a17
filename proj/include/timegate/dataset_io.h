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

#ifndef TIMEGATE_DATASET_IO_H_
#define TIMEGATE_DATASET_IO_H_

#include <cstdint>
#include <string>

#include "json.hpp"
#include "timegate/synthdata.h"

namespace timegate::synth {

inline constexpr std::uint32_t kDatasetFormatVersion = 1;

// Dataset split file layout (all integers little-endian):
//
//   "TGDS"                      4-byte magic
//   u32  format_version
//   u64  n, then n bytes        JSON header: format_version, split,
//                               num_videos, spec (echo of ActivitySpec)
//   u64  num_prototypes, u64 raw_dim, f64[num_prototypes * raw_dim]
//   per video:
//     u32 num_labels, i32[num_labels] labels
//     u32 num_timesteps, u8[num_timesteps] relevance,
//     i32[num_timesteps] planted prototypes
//     u64 num_frames, u64 raw_dim, f64[num_frames * raw_dim] frames
void WriteDataset(const Dataset& data, const std::string& path);
Dataset ReadDataset(const std::string& path);

nlohmann::json SpecToJson(const ActivitySpec& spec);
// Rejects unknown keys. Recipes are rebuilt when absent.
ActivitySpec SpecFromJson(const nlohmann::json& j);

}  // namespace timegate::synth

#endif  // TIMEGATE_DATASET_IO_H_

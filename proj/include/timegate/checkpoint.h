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

#ifndef TIMEGATE_CHECKPOINT_H_
#define TIMEGATE_CHECKPOINT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "timegate/tensor.h"

namespace timegate::harness {

// File layout (little-endian as written by the host):
//   "TGCK" | u32 format_version | u64-prefixed config JSON | i64 step |
//   u64 count | count x tensor record
// tensor record:
//   u64-prefixed name | u32 rank | rank x u64 extent | f64 values |
//   u8 has_moments | [f64 first moment | f64 second moment]
inline constexpr std::uint32_t kCheckpointFormatVersion = 1;

struct CheckpointTensor {
  std::string name;
  ad::Shape shape;
  std::vector<double> values;
  // Optimizer moments; empty when the tensor was never optimized.
  std::vector<double> first_moment;
  std::vector<double> second_moment;

  bool operator==(const CheckpointTensor&) const = default;
};

struct Checkpoint {
  std::uint32_t format_version = kCheckpointFormatVersion;
  std::string config_json;
  std::int64_t step = 0;
  std::vector<CheckpointTensor> tensors;

  const CheckpointTensor& Find(const std::string& name) const;  // LoadError
  bool operator==(const Checkpoint&) const = default;
};

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path);
// Reads the whole file before building the result; throws LoadError on
// corruption or truncation and VersionError on a format mismatch.
Checkpoint LoadCheckpoint(const std::string& path);

}  // namespace timegate::harness

#endif  // TIMEGATE_CHECKPOINT_H_

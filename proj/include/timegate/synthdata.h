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

#ifndef TIMEGATE_SYNTHDATA_H_
#define TIMEGATE_SYNTHDATA_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "timegate/init.h"

namespace timegate::synth {

enum class Task { kSingleLabel, kMultiLabel };
enum class Placement { kRandom, kMiddle };

// Structure of a synthetic long-range activity dataset.
//
// Classes come in families of two. Each family owns discriminative
// prototypes; each class adds shared prototypes that tell it apart from its
// sibling. A shared prototype belongs to recipes in several families, and it
// also appears as filler in videos of families that do not use it, where it
// is irrelevant. Whether a shared timestep matters is decided by the rest of
// the video, never by the timestep alone.
struct ActivitySpec {
  int num_classes = 10;
  int num_prototypes = 24;
  int num_shared = 6;
  int raw_dim = 32;
  int timesteps = 32;
  int frames_per_timestep = 16;
  double noise_sigma = 0.3;
  double relevant_fraction = 0.3;
  // Per-class relative spread of the relevant duration: class c plants
  // relevant_fraction * (1 + relevant_spread * u_c) * timesteps relevant
  // slots, u_c evenly spaced over [-1, 1] by class index.
  double relevant_spread = 0.0;
  // Fraction of the irrelevant slots of an average-length video that hold a
  // foreign shared prototype rather than a background one. Videos with more
  // relevant slots get correspondingly fewer foreign ones.
  double shared_filler_fraction = 0.25;
  // Irrelevant copies of sibling-class shared prototypes, as a fraction of the
  // video's relevant shared slots. Below 1, so the true ones stay the majority.
  double confounder_fraction = 0.0;
  Task task = Task::kSingleLabel;

  // Filled by BuildRecipes(); may also be given explicitly.
  std::vector<std::vector<int>> class_recipes;
  std::vector<int> shared_prototypes;
  std::vector<int> background_prototypes;
  std::vector<Placement> placement;

  // Default recipe layout for the counts above. Throws GenerationError when
  // the counts cannot support it.
  void BuildRecipes();
  // Checks recipe invariants; throws GenerationError.
  void Validate() const;

  int RelevantCount() const;
  int RelevantCount(int cls) const;
  // Largest RelevantCount(c) over the given classes.
  int RelevantCount(const std::vector<int>& classes) const;
  bool IsShared(int prototype) const;
  // Recipe members that are not shared.
  std::vector<int> AnchorPrototypes(int cls) const;
};

ActivitySpec DefaultSpec();

struct VideoSample {
  int num_timesteps = 0;
  int frames_per_timestep = 0;
  int raw_dim = 0;
  std::vector<double> frames;  // [num_timesteps * frames_per_timestep x raw_dim]
  std::vector<int> labels;     // one class, or the active classes (multi-label)
  std::vector<std::uint8_t> relevance;  // [num_timesteps]
  std::vector<int> prototypes;          // planted prototype per timestep

  int num_frames() const { return num_timesteps * frames_per_timestep; }
  std::span<const double> Frame(int index) const;
  int label() const { return labels.front(); }
  bool HasLabel(int cls) const;
  // Multi-hot target vector of length num_classes.
  std::vector<double> Targets(int num_classes) const;
  int RelevantCount() const;
};

struct Dataset {
  std::string split;
  ActivitySpec spec;
  std::vector<double> prototype_vectors;  // [num_prototypes x raw_dim]
  std::vector<VideoSample> videos;

  std::span<const double> Prototype(int index) const;
  std::size_t size() const { return videos.size(); }
};

struct Splits {
  Dataset train;
  Dataset test;
};

// Deterministic in `seed`. Video i (counting train then test) draws from a
// generator seeded with seed XOR i, so videos can be produced in any order.
Splits GenerateDataset(const ActivitySpec& spec, int n_train, int n_test,
                       std::uint64_t seed);

// Ground-truth relevance of every timestep of `video` for class `cls`.
std::vector<std::uint8_t> RelevanceOracle(const VideoSample& video,
                                          const ActivitySpec& spec, int cls);

// Index of the prototype nearest (Euclidean) to `x`.
int NearestPrototype(const Dataset& data, std::span<const double> x);

std::string ToString(Task task);
Task TaskFromString(const std::string& name);

}  // namespace timegate::synth

#endif  // TIMEGATE_SYNTHDATA_H_

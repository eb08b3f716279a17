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

#include "timegate/synthdata.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

#include "timegate/errors.h"

namespace timegate::synth {
namespace {

constexpr std::uint64_t kPrototypeSalt = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kLabelSalt = 0xc2b2ae3d27d4eb4fULL;

bool Contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

int UniformInt(Rng& rng, int n) {
  return static_cast<int>(OpenUniform(rng) * n) % n;
}

template <typename T>
void Shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[static_cast<std::size_t>(UniformInt(rng, static_cast<int>(i)))]);
  }
}

// Distinct positions in [0, timesteps) for the relevant slots.
std::vector<int> RelevantPositions(int timesteps, int count, Placement placement,
                                   Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(timesteps));
  std::iota(all.begin(), all.end(), 0);
  if (placement == Placement::kRandom) {
    Shuffle(all, rng);
    all.resize(static_cast<std::size_t>(count));
    return all;
  }
  const int lo = timesteps / 3;
  const int hi = timesteps - timesteps / 3;
  std::vector<int> middle, outer;
  for (int t : all) (t >= lo && t < hi ? middle : outer).push_back(t);
  Shuffle(middle, rng);
  Shuffle(outer, rng);
  std::vector<int> chosen;
  for (int t : middle) {
    if (static_cast<int>(chosen.size()) == count) break;
    chosen.push_back(t);
  }
  for (int t : outer) {
    if (static_cast<int>(chosen.size()) == count) break;
    chosen.push_back(t);
  }
  return chosen;
}

VideoSample GenerateVideo(const ActivitySpec& spec,
                          const std::vector<double>& prototypes,
                          std::vector<int> labels, Rng& rng) {
  const int timesteps = spec.timesteps;
  const int relevant = spec.RelevantCount(labels);
  std::vector<int> recipe;
  for (int cls : labels) {
    for (int p : spec.class_recipes[static_cast<std::size_t>(cls)]) {
      if (!Contains(recipe, p)) recipe.push_back(p);
    }
  }
  if (static_cast<int>(recipe.size()) > relevant) {
    throw GenerationError("relevant_fraction " +
                          std::to_string(spec.relevant_fraction) + " leaves " +
                          std::to_string(relevant) +
                          " relevant timesteps, fewer than the recipe size " +
                          std::to_string(recipe.size()));
  }
  // Every recipe prototype appears at least once.
  std::vector<int> planted = recipe;
  Shuffle(planted, rng);
  // Further relevant slots repeat the shared members, so anchors stay rare
  // and most evidence needs context to interpret.
  std::vector<int> repeats;
  for (int p : recipe) {
    if (spec.IsShared(p)) repeats.push_back(p);
  }
  if (repeats.empty()) repeats = recipe;
  while (static_cast<int>(planted.size()) < relevant) {
    planted.push_back(repeats[static_cast<std::size_t>(
        UniformInt(rng, static_cast<int>(repeats.size())))]);
  }
  Shuffle(planted, rng);

  // Shared prototypes that no class reachable from the present anchors uses.
  std::vector<int> anchors;
  for (int cls : labels) {
    for (int a : spec.AnchorPrototypes(cls)) anchors.push_back(a);
  }
  std::vector<int> foreign_shared;
  for (int s : spec.shared_prototypes) {
    bool eligible = true;
    for (int c = 0; c < spec.num_classes && eligible; ++c) {
      const auto& r = spec.class_recipes[static_cast<std::size_t>(c)];
      bool reachable = false;
      for (int a : anchors) reachable = reachable || Contains(r, a);
      if (reachable && Contains(r, s)) eligible = false;
    }
    if (eligible) foreign_shared.push_back(s);
  }
  // Shared prototypes of sibling classes: same anchors, different recipe.
  std::vector<int> confounders;
  for (int s : spec.shared_prototypes) {
    if (!Contains(recipe, s) && !Contains(foreign_shared, s)) confounders.push_back(s);
  }

  VideoSample video;
  video.num_timesteps = timesteps;
  video.frames_per_timestep = spec.frames_per_timestep;
  video.raw_dim = spec.raw_dim;
  video.labels = labels;
  video.relevance.assign(static_cast<std::size_t>(timesteps), 0);
  video.prototypes.assign(static_cast<std::size_t>(timesteps), -1);
  const Placement placement =
      spec.placement[static_cast<std::size_t>(labels.front())];
  std::vector<int> positions = RelevantPositions(timesteps, relevant, placement, rng);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    video.prototypes[static_cast<std::size_t>(positions[i])] = planted[i];
    video.relevance[static_cast<std::size_t>(positions[i])] = 1;
  }
  // Foreign shared fillers top the video up to a class-independent count of
  // recipe-like timesteps; the rest is background.
  std::vector<int> fillers;
  for (int t = 0; t < timesteps; ++t) {
    if (video.prototypes[static_cast<std::size_t>(t)] < 0) fillers.push_back(t);
  }
  Shuffle(fillers, rng);
  const int num_fillers = static_cast<int>(fillers.size());
  const int relevant_shared = static_cast<int>(std::count_if(
      planted.begin(), planted.end(), [&](int p) { return spec.IsShared(p); }));
  const int anchor_slots = relevant - relevant_shared;
  const int n_confound =
      confounders.empty()
          ? 0
          : std::min(num_fillers, static_cast<int>(spec.confounder_fraction *
                                                   relevant_shared));
  const int mean_relevant = spec.RelevantCount();
  const int mean_confound = static_cast<int>(
      spec.confounder_fraction * std::max(0, mean_relevant - anchor_slots));
  const int n_foreign =
      foreign_shared.empty()
          ? 0
          : std::clamp(static_cast<int>(std::lround(
                           spec.shared_filler_fraction * (timesteps - mean_relevant))) +
                           mean_relevant + mean_confound - relevant - n_confound,
                       0, num_fillers - n_confound);
  const auto& background = spec.background_prototypes;
  for (int i = 0; i < num_fillers; ++i) {
    int& p = video.prototypes[static_cast<std::size_t>(fillers[static_cast<std::size_t>(i)])];
    if (i < n_confound) {
      p = confounders[static_cast<std::size_t>(
          UniformInt(rng, static_cast<int>(confounders.size())))];
    } else if (i < n_confound + n_foreign) {
      p = foreign_shared[static_cast<std::size_t>(
          UniformInt(rng, static_cast<int>(foreign_shared.size())))];
    } else {
      p = background[static_cast<std::size_t>(
          UniformInt(rng, static_cast<int>(background.size())))];
    }
  }

  std::normal_distribution<double> noise(0.0, 1.0);
  const auto dim = static_cast<std::size_t>(spec.raw_dim);
  video.frames.resize(static_cast<std::size_t>(video.num_frames()) * dim);
  for (int f = 0; f < video.num_frames(); ++f) {
    const int p = video.prototypes[static_cast<std::size_t>(f / spec.frames_per_timestep)];
    for (std::size_t d = 0; d < dim; ++d) {
      video.frames[static_cast<std::size_t>(f) * dim + d] =
          prototypes[static_cast<std::size_t>(p) * dim + d] +
          spec.noise_sigma * noise(rng);
    }
  }
  return video;
}

std::vector<int> SampleLabels(const ActivitySpec& spec, int balanced_label,
                              Rng& rng) {
  if (spec.task == Task::kSingleLabel) return {balanced_label};
  const int wanted = 1 + UniformInt(rng, 3);
  std::vector<int> labels{balanced_label};
  std::vector<int> recipe = spec.class_recipes[static_cast<std::size_t>(balanced_label)];
  for (int attempt = 0; attempt < 16 && static_cast<int>(labels.size()) < wanted;
       ++attempt) {
    const int cls = UniformInt(rng, spec.num_classes);
    if (Contains(labels, cls)) continue;
    std::vector<int> merged = recipe;
    for (int p : spec.class_recipes[static_cast<std::size_t>(cls)]) {
      if (!Contains(merged, p)) merged.push_back(p);
    }
    std::vector<int> candidate = labels;
    candidate.push_back(cls);
    if (static_cast<int>(merged.size()) > spec.RelevantCount(candidate)) continue;
    labels.push_back(cls);
    recipe = std::move(merged);
  }
  std::sort(labels.begin(), labels.end());
  return labels;
}

Dataset GenerateSplit(const ActivitySpec& spec, const std::string& split,
                      const std::vector<double>& prototypes, int count,
                      int first_index, std::uint64_t seed) {
  Dataset data{split, spec, prototypes, {}};
  std::vector<int> balanced(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) balanced[static_cast<std::size_t>(i)] = i % spec.num_classes;
  Rng label_rng(seed ^ kLabelSalt ^ static_cast<std::uint64_t>(first_index));
  Shuffle(balanced, label_rng);
  data.videos.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(seed ^ static_cast<std::uint64_t>(first_index + i));
    std::vector<int> labels = SampleLabels(spec, balanced[static_cast<std::size_t>(i)], rng);
    data.videos.push_back(GenerateVideo(spec, prototypes, std::move(labels), rng));
  }
  return data;
}

}  // namespace

void ActivitySpec::BuildRecipes() {
  const int families = (num_classes + 1) / 2;
  int anchors_per_family = 0;
  if (num_prototypes >= 2 * families + num_shared + 1) {
    anchors_per_family = 2;
  } else if (num_prototypes >= families + num_shared + 1) {
    anchors_per_family = 1;
  } else {
    throw GenerationError("num_prototypes " + std::to_string(num_prototypes) +
                          " too small for " + std::to_string(num_classes) +
                          " classes and " + std::to_string(num_shared) +
                          " shared prototypes");
  }
  if (num_shared < 4) {
    throw GenerationError("default recipes need at least 4 shared prototypes");
  }
  const int first_shared = families * anchors_per_family;
  shared_prototypes.clear();
  background_prototypes.clear();
  class_recipes.assign(static_cast<std::size_t>(num_classes), {});
  placement.assign(static_cast<std::size_t>(num_classes), Placement::kRandom);
  for (int s = 0; s < num_shared; ++s) shared_prototypes.push_back(first_shared + s);
  for (int p = first_shared + num_shared; p < num_prototypes; ++p) {
    background_prototypes.push_back(p);
  }
  for (int c = 0; c < num_classes; ++c) {
    const int family = c / 2;
    const int sibling = c % 2;
    auto& recipe = class_recipes[static_cast<std::size_t>(c)];
    for (int a = 0; a < anchors_per_family; ++a) {
      recipe.push_back(family * anchors_per_family + a);
    }
    for (int k = 0; k < 2; ++k) {
      recipe.push_back(shared_prototypes[static_cast<std::size_t>(
          (2 * family + 2 * sibling + k) % num_shared)]);
    }
    if (c % 3 == 0) placement[static_cast<std::size_t>(c)] = Placement::kMiddle;
  }
}

void ActivitySpec::Validate() const {
  auto fail = [](const std::string& what) { throw GenerationError(what); };
  if (num_classes < 2) fail("num_classes must be >= 2");
  if (raw_dim < 1 || timesteps < 1 || frames_per_timestep < 1) {
    fail("raw_dim, timesteps and frames_per_timestep must be >= 1");
  }
  if (!(relevant_fraction > 0.0 && relevant_fraction <= 1.0)) {
    fail("relevant_fraction must be in (0, 1]");
  }
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be >= 0");
  if (!(shared_filler_fraction >= 0.0 && shared_filler_fraction <= 1.0)) {
    fail("shared_filler_fraction must be in [0, 1]");
  }
  if (class_recipes.size() != static_cast<std::size_t>(num_classes) ||
      placement.size() != static_cast<std::size_t>(num_classes)) {
    fail("class_recipes and placement need one entry per class");
  }
  if (background_prototypes.empty()) fail("at least one background prototype");
  auto in_range = [this](int p) { return p >= 0 && p < num_prototypes; };
  std::set<std::set<int>> distinct;
  for (int c = 0; c < num_classes; ++c) {
    const auto& recipe = class_recipes[static_cast<std::size_t>(c)];
    for (int p : recipe) {
      if (!in_range(p)) fail("recipe prototype out of range");
      if (Contains(background_prototypes, p)) {
        fail("background prototype " + std::to_string(p) + " used in a recipe");
      }
    }
    if (AnchorPrototypes(c).empty()) {
      fail("class " + std::to_string(c) + " has no non-shared prototype");
    }
    distinct.insert(std::set<int>(recipe.begin(), recipe.end()));
  }
  if (distinct.size() != class_recipes.size()) fail("class recipes are not distinct");
  for (int s : shared_prototypes) {
    if (!in_range(s)) fail("shared prototype out of range");
    int uses = 0;
    for (const auto& recipe : class_recipes) uses += Contains(recipe, s);
    if (uses < 2) {
      fail("shared prototype " + std::to_string(s) + " belongs to fewer than 2 recipes");
    }
  }
  for (int b : background_prototypes) {
    if (!in_range(b)) fail("background prototype out of range");
  }
  if (!(confounder_fraction >= 0.0 && confounder_fraction < 1.0)) {
    fail("confounder_fraction must be in [0, 1)");
  }
  if (!(relevant_spread >= 0.0 && relevant_spread < 1.0)) {
    fail("relevant_spread must be in [0, 1)");
  }
  for (int c = 0; c < num_classes; ++c) {
    if (RelevantCount(c) < 1) fail("relevant_fraction leaves no relevant timestep");
    if (RelevantCount(c) > timesteps) fail("relevant slots exceed timesteps");
  }
}

int ActivitySpec::RelevantCount() const {
  return static_cast<int>(std::lround(relevant_fraction * timesteps));
}

int ActivitySpec::RelevantCount(int cls) const {
  const double u =
      num_classes > 1 ? -1.0 + 2.0 * cls / static_cast<double>(num_classes - 1) : 0.0;
  return static_cast<int>(
      std::lround(relevant_fraction * (1.0 + relevant_spread * u) * timesteps));
}

int ActivitySpec::RelevantCount(const std::vector<int>& classes) const {
  int most = 0;
  for (int c : classes) most = std::max(most, RelevantCount(c));
  return most;
}

bool ActivitySpec::IsShared(int prototype) const {
  return Contains(shared_prototypes, prototype);
}

std::vector<int> ActivitySpec::AnchorPrototypes(int cls) const {
  std::vector<int> anchors;
  for (int p : class_recipes.at(static_cast<std::size_t>(cls))) {
    if (!IsShared(p)) anchors.push_back(p);
  }
  return anchors;
}

ActivitySpec DefaultSpec() {
  ActivitySpec spec;
  spec.BuildRecipes();
  return spec;
}

std::span<const double> VideoSample::Frame(int index) const {
  const auto dim = static_cast<std::size_t>(raw_dim);
  return std::span<const double>(frames).subspan(static_cast<std::size_t>(index) * dim, dim);
}

bool VideoSample::HasLabel(int cls) const { return Contains(labels, cls); }

std::vector<double> VideoSample::Targets(int num_classes) const {
  std::vector<double> targets(static_cast<std::size_t>(num_classes), 0.0);
  for (int cls : labels) targets[static_cast<std::size_t>(cls)] = 1.0;
  return targets;
}

int VideoSample::RelevantCount() const {
  return static_cast<int>(std::count(relevance.begin(), relevance.end(), 1));
}

std::span<const double> Dataset::Prototype(int index) const {
  const auto dim = static_cast<std::size_t>(spec.raw_dim);
  return std::span<const double>(prototype_vectors)
      .subspan(static_cast<std::size_t>(index) * dim, dim);
}

Splits GenerateDataset(const ActivitySpec& spec, int n_train, int n_test,
                       std::uint64_t seed) {
  spec.Validate();
  if (n_train < 0 || n_test < 0) throw GenerationError("negative split size");
  Rng proto_rng(seed ^ kPrototypeSalt);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> prototypes(static_cast<std::size_t>(spec.num_prototypes * spec.raw_dim));
  for (double& v : prototypes) v = normal(proto_rng);
  Splits splits;
  splits.train = GenerateSplit(spec, "train", prototypes, n_train, 0, seed);
  splits.test = GenerateSplit(spec, "test", prototypes, n_test, n_train, seed);
  return splits;
}

std::vector<std::uint8_t> RelevanceOracle(const VideoSample& video,
                                          const ActivitySpec& spec, int cls) {
  if (cls < 0 || cls >= spec.num_classes) {
    throw DomainError("relevance_oracle: unknown class " + std::to_string(cls));
  }
  if (video.labels.size() == 1 && video.label() == cls) return video.relevance;
  const auto& recipe = spec.class_recipes[static_cast<std::size_t>(cls)];
  bool anchor_present = false;
  for (int p : video.prototypes) {
    anchor_present = anchor_present || (Contains(recipe, p) && !spec.IsShared(p));
  }
  std::vector<std::uint8_t> mask(video.prototypes.size(), 0);
  for (std::size_t t = 0; t < mask.size(); ++t) {
    const int p = video.prototypes[t];
    mask[t] = Contains(recipe, p) && (!spec.IsShared(p) || anchor_present);
  }
  return mask;
}

int NearestPrototype(const Dataset& data, std::span<const double> x) {
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int p = 0; p < data.spec.num_prototypes; ++p) {
    auto proto = data.Prototype(p);
    double dist = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      dist += (x[d] - proto[d]) * (x[d] - proto[d]);
    }
    if (dist < best_dist) {
      best_dist = dist;
      best = p;
    }
  }
  return best;
}

std::string ToString(Task task) {
  return task == Task::kSingleLabel ? "single_label" : "multi_label";
}

Task TaskFromString(const std::string& name) {
  if (name == "single_label") return Task::kSingleLabel;
  if (name == "multi_label") return Task::kMultiLabel;
  throw DomainError("unknown task '" + name + "'");
}

}  // namespace timegate::synth

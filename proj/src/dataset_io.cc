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

#include "timegate/dataset_io.h"

#include <cstring>
#include <fstream>
#include <set>

#include "timegate/binary_io.h"
#include "timegate/errors.h"

namespace timegate::synth {
namespace {

constexpr char kMagic[4] = {'T', 'G', 'D', 'S'};

std::string ToString(Placement p) {
  return p == Placement::kMiddle ? "middle" : "random";
}

Placement PlacementFromString(const std::string& s) {
  if (s == "middle") return Placement::kMiddle;
  if (s == "random") return Placement::kRandom;
  throw DomainError("unknown placement '" + s + "'");
}

}  // namespace

nlohmann::json SpecToJson(const ActivitySpec& spec) {
  nlohmann::json placement = nlohmann::json::array();
  for (Placement p : spec.placement) placement.push_back(ToString(p));
  return {
      {"num_classes", spec.num_classes},
      {"num_prototypes", spec.num_prototypes},
      {"num_shared", spec.num_shared},
      {"raw_dim", spec.raw_dim},
      {"timesteps", spec.timesteps},
      {"frames_per_timestep", spec.frames_per_timestep},
      {"noise_sigma", spec.noise_sigma},
      {"relevant_fraction", spec.relevant_fraction},
      {"relevant_spread", spec.relevant_spread},
      {"shared_filler_fraction", spec.shared_filler_fraction},
      {"confounder_fraction", spec.confounder_fraction},
      {"task", ToString(spec.task)},
      {"class_recipes", spec.class_recipes},
      {"shared_prototypes", spec.shared_prototypes},
      {"background_prototypes", spec.background_prototypes},
      {"placement", placement},
  };
}

ActivitySpec SpecFromJson(const nlohmann::json& j) {
  static const std::set<std::string> kKeys = {
      "num_classes", "num_prototypes", "num_shared", "raw_dim", "timesteps",
      "frames_per_timestep", "noise_sigma", "relevant_fraction", "relevant_spread",
      "shared_filler_fraction", "confounder_fraction", "task", "class_recipes", "shared_prototypes",
      "background_prototypes", "placement"};
  if (!j.is_object()) throw DomainError("dataset spec must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw DomainError("unknown dataset spec key '" + key + "'");
  }
  ActivitySpec spec;
  try {
    spec.num_classes = j.value("num_classes", spec.num_classes);
    spec.num_prototypes = j.value("num_prototypes", spec.num_prototypes);
    spec.num_shared = j.value("num_shared", spec.num_shared);
    spec.raw_dim = j.value("raw_dim", spec.raw_dim);
    spec.timesteps = j.value("timesteps", spec.timesteps);
    spec.frames_per_timestep = j.value("frames_per_timestep", spec.frames_per_timestep);
    spec.noise_sigma = j.value("noise_sigma", spec.noise_sigma);
    spec.relevant_fraction = j.value("relevant_fraction", spec.relevant_fraction);
    spec.relevant_spread = j.value("relevant_spread", spec.relevant_spread);
    spec.shared_filler_fraction =
        j.value("shared_filler_fraction", spec.shared_filler_fraction);
    spec.confounder_fraction = j.value("confounder_fraction", spec.confounder_fraction);
    if (j.contains("task")) spec.task = TaskFromString(j.at("task").get<std::string>());
    if (j.contains("class_recipes")) {
      spec.class_recipes = j.at("class_recipes").get<std::vector<std::vector<int>>>();
      spec.shared_prototypes = j.at("shared_prototypes").get<std::vector<int>>();
      spec.background_prototypes = j.at("background_prototypes").get<std::vector<int>>();
      for (const auto& p : j.at("placement")) {
        spec.placement.push_back(PlacementFromString(p.get<std::string>()));
      }
    } else {
      spec.BuildRecipes();
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("dataset spec: ") + e.what());
  }
  spec.Validate();
  return spec;
}

void WriteDataset(const Dataset& data, const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  io::Writer out(file);
  out.Bytes(kMagic, sizeof kMagic);
  out.U32(kDatasetFormatVersion);
  nlohmann::json header = {{"format_version", kDatasetFormatVersion},
                           {"split", data.split},
                           {"num_videos", data.videos.size()},
                           {"spec", SpecToJson(data.spec)}};
  out.String(header.dump());
  out.U64(static_cast<std::uint64_t>(data.spec.num_prototypes));
  out.U64(static_cast<std::uint64_t>(data.spec.raw_dim));
  out.F64s(data.prototype_vectors);
  for (const VideoSample& v : data.videos) {
    out.U32(static_cast<std::uint32_t>(v.labels.size()));
    for (int label : v.labels) out.I32(label);
    out.U32(static_cast<std::uint32_t>(v.num_timesteps));
    out.Bytes(v.relevance.data(), v.relevance.size());
    for (int p : v.prototypes) out.I32(p);
    out.U64(static_cast<std::uint64_t>(v.num_frames()));
    out.U64(static_cast<std::uint64_t>(v.raw_dim));
    out.F64s(v.frames);
  }
}

Dataset ReadDataset(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw LoadError("cannot open " + path);
  io::Reader in(file);
  char magic[4];
  in.Bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw LoadError(path + " is not a dataset file");
  }
  const std::uint32_t version = in.U32();
  if (version != kDatasetFormatVersion) {
    throw VersionError("dataset format version " + std::to_string(version) +
                       ", expected " + std::to_string(kDatasetFormatVersion));
  }
  Dataset data;
  std::uint64_t count = 0;
  try {
    const auto header = nlohmann::json::parse(in.String());
    data.split = header.at("split").get<std::string>();
    count = header.at("num_videos").get<std::uint64_t>();
    data.spec = SpecFromJson(header.at("spec"));
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("bad dataset header: ") + e.what());
  }
  const auto& spec = data.spec;
  if (in.U64() != static_cast<std::uint64_t>(spec.num_prototypes) ||
      in.U64() != static_cast<std::uint64_t>(spec.raw_dim)) {
    throw LoadError("prototype block does not match header");
  }
  data.prototype_vectors =
      in.F64s(static_cast<std::size_t>(spec.num_prototypes * spec.raw_dim));
  for (std::uint64_t i = 0; i < count; ++i) {
    VideoSample v;
    const std::uint32_t num_labels = in.U32();
    if (num_labels == 0 || num_labels > static_cast<std::uint32_t>(spec.num_classes)) {
      throw LoadError("bad label count");
    }
    for (std::uint32_t k = 0; k < num_labels; ++k) {
      const int label = in.I32();
      if (label < 0 || label >= spec.num_classes) throw LoadError("label out of range");
      v.labels.push_back(label);
    }
    v.num_timesteps = static_cast<int>(in.U32());
    if (v.num_timesteps != spec.timesteps) throw LoadError("timestep count mismatch");
    v.frames_per_timestep = spec.frames_per_timestep;
    v.raw_dim = spec.raw_dim;
    v.relevance.resize(static_cast<std::size_t>(v.num_timesteps));
    in.Bytes(v.relevance.data(), v.relevance.size());
    for (int t = 0; t < v.num_timesteps; ++t) v.prototypes.push_back(in.I32());
    const std::uint64_t frames = in.U64();
    const std::uint64_t dim = in.U64();
    if (frames != static_cast<std::uint64_t>(v.num_frames()) ||
        dim != static_cast<std::uint64_t>(spec.raw_dim)) {
      throw LoadError("frame block does not match header");
    }
    v.frames = in.F64s(static_cast<std::size_t>(frames * dim));
    data.videos.push_back(std::move(v));
  }
  if (!in.AtEnd()) throw LoadError("trailing bytes after last video");
  return data;
}

}  // namespace timegate::synth

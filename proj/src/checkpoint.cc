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

#include "timegate/checkpoint.h"

#include <cstring>
#include <fstream>
#include <sstream>

#include "timegate/binary_io.h"
#include "timegate/errors.h"

namespace timegate::harness {
namespace {

constexpr char kMagic[4] = {'T', 'G', 'C', 'K'};
constexpr std::uint32_t kMaxRank = 8;

}  // namespace

const CheckpointTensor& Checkpoint::Find(const std::string& name) const {
  for (const auto& t : tensors) {
    if (t.name == name) return t;
  }
  throw LoadError("checkpoint has no tensor '" + name + "'");
}

void SaveCheckpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ostringstream buffer;
  io::Writer out(buffer);
  out.Bytes(kMagic, sizeof kMagic);
  out.U32(ckpt.format_version);
  out.String(ckpt.config_json);
  out.I64(ckpt.step);
  out.U64(ckpt.tensors.size());
  for (const auto& t : ckpt.tensors) {
    if (t.values.size() != ad::NumElements(t.shape)) {
      throw ContractError("checkpoint tensor '" + t.name + "' size does not match its shape");
    }
    const bool moments = !t.first_moment.empty();
    if (moments && (t.first_moment.size() != t.values.size() ||
                    t.second_moment.size() != t.values.size())) {
      throw ContractError("checkpoint tensor '" + t.name + "' has mismatched moments");
    }
    out.String(t.name);
    out.U32(static_cast<std::uint32_t>(t.shape.size()));
    for (std::size_t d : t.shape) out.U64(d);
    out.F64s(t.values);
    out.U8(moments ? 1 : 0);
    if (moments) {
      out.F64s(t.first_moment);
      out.F64s(t.second_moment);
    }
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + path + " for writing");
  const std::string bytes = buffer.str();
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!file) throw std::runtime_error("write to " + path + " failed");
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw LoadError("cannot open checkpoint " + path);
  std::stringstream buffer;
  buffer << file.rdbuf();
  io::Reader in(buffer);
  char magic[4];
  in.Bytes(magic, sizeof magic);
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw LoadError(path + " is not a checkpoint file");
  }
  Checkpoint ckpt;
  ckpt.format_version = in.U32();
  if (ckpt.format_version != kCheckpointFormatVersion) {
    throw VersionError("checkpoint format version " + std::to_string(ckpt.format_version) +
                       ", expected " + std::to_string(kCheckpointFormatVersion));
  }
  ckpt.config_json = in.String();
  ckpt.step = in.I64();
  const std::uint64_t count = in.U64();
  for (std::uint64_t i = 0; i < count; ++i) {
    CheckpointTensor t;
    t.name = in.String(4096);
    const std::uint32_t rank = in.U32();
    if (rank > kMaxRank) throw LoadError("checkpoint tensor '" + t.name + "' has rank " + std::to_string(rank));
    for (std::uint32_t r = 0; r < rank; ++r) t.shape.push_back(static_cast<std::size_t>(in.U64()));
    const std::size_t n = ad::NumElements(t.shape);
    t.values = in.F64s(n);
    const std::uint8_t moments = in.U8();
    if (moments > 1) throw LoadError("checkpoint tensor '" + t.name + "' has a bad moment flag");
    if (moments) {
      t.first_moment = in.F64s(n);
      t.second_moment = in.F64s(n);
    }
    ckpt.tensors.push_back(std::move(t));
  }
  if (!in.AtEnd()) throw LoadError("trailing bytes in checkpoint " + path);
  return ckpt;
}

}  // namespace timegate::harness

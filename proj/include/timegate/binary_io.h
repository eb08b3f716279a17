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

#ifndef TIMEGATE_BINARY_IO_H_
#define TIMEGATE_BINARY_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace timegate::io {

// Little-endian host byte order is assumed for all fixed-width fields.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}
  void Bytes(const void* data, std::size_t n);
  void U8(std::uint8_t v) { Bytes(&v, 1); }
  void U32(std::uint32_t v) { Bytes(&v, sizeof v); }
  void I32(std::int32_t v) { Bytes(&v, sizeof v); }
  void U64(std::uint64_t v) { Bytes(&v, sizeof v); }
  void I64(std::int64_t v) { Bytes(&v, sizeof v); }
  void F64s(const std::vector<double>& v);
  // u64 length prefix followed by the bytes.
  void String(const std::string& s);

 private:
  std::ostream& out_;
};

// Every read throws LoadError when the stream ends early.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  void Bytes(void* data, std::size_t n);
  std::uint8_t U8();
  std::uint32_t U32();
  std::int32_t I32();
  std::uint64_t U64();
  std::int64_t I64();
  std::vector<double> F64s(std::size_t n);
  std::string String(std::size_t max_length = 1u << 28);
  bool AtEnd();

 private:
  std::istream& in_;
};

}  // namespace timegate::io

#endif  // TIMEGATE_BINARY_IO_H_

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

#include "timegate/binary_io.h"

#include "timegate/errors.h"

namespace timegate::io {

void Writer::Bytes(const void* data, std::size_t n) {
  out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out_) throw std::runtime_error("write failed");
}

void Writer::F64s(const std::vector<double>& v) {
  Bytes(v.data(), v.size() * sizeof(double));
}

void Writer::String(const std::string& s) {
  U64(s.size());
  Bytes(s.data(), s.size());
}

void Reader::Bytes(void* data, std::size_t n) {
  in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw LoadError("unexpected end of file");
  }
}

std::uint8_t Reader::U8() {
  std::uint8_t v;
  Bytes(&v, sizeof v);
  return v;
}

std::uint32_t Reader::U32() {
  std::uint32_t v;
  Bytes(&v, sizeof v);
  return v;
}

std::int32_t Reader::I32() {
  std::int32_t v;
  Bytes(&v, sizeof v);
  return v;
}

std::uint64_t Reader::U64() {
  std::uint64_t v;
  Bytes(&v, sizeof v);
  return v;
}

std::int64_t Reader::I64() {
  std::int64_t v;
  Bytes(&v, sizeof v);
  return v;
}

std::vector<double> Reader::F64s(std::size_t n) {
  if (n > (std::size_t{1} << 34) / sizeof(double)) {
    throw LoadError("implausible array length " + std::to_string(n));
  }
  std::vector<double> v(n);
  Bytes(v.data(), n * sizeof(double));
  return v;
}

std::string Reader::String(std::size_t max_length) {
  const std::uint64_t n = U64();
  if (n > max_length) throw LoadError("implausible string length " + std::to_string(n));
  std::string s(n, '\0');
  Bytes(s.data(), n);
  return s;
}

bool Reader::AtEnd() { return in_.peek() == std::char_traits<char>::eof(); }

}  // namespace timegate::io

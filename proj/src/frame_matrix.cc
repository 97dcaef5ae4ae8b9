// src/frame_matrix.cc

// Copyright 2026  speechmeter authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "speechmeter/frame_matrix.h"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "speechmeter/error.h"

namespace speechmeter {

namespace {

constexpr unsigned char kMagic[8] = {0x46, 0x4D, 0x41, 0x54, 0x31, 0x00, 0x00, 0x00};
constexpr size_t kHeaderBytes = 8 + 4 + 4 + 8;

static_assert(std::endian::native == std::endian::little,
              "FMAT I/O assumes a little-endian host");

}  // namespace

FrameMatrix::FrameMatrix(size_t rows, size_t cols, double hop_s)
    : rows_(rows), cols_(cols), hop_s_(hop_s), data_(rows * cols, 0.0) {}

FrameMatrix::FrameMatrix(size_t rows, size_t cols, double hop_s,
                         std::vector<double> data)
    : rows_(rows), cols_(cols), hop_s_(hop_s), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorCode::kDimensionMismatch,
                "data size " + std::to_string(data_.size()) + " != " +
                    std::to_string(rows) + "x" + std::to_string(cols));
}

FrameMatrix FrameMatrix::RowRange(size_t begin, size_t end) const {
  if (begin > end || end > rows_)
    throw Error(ErrorCode::kInvalidArgument, "row range out of bounds");
  std::vector<double> d(data_.begin() + static_cast<ptrdiff_t>(begin * cols_),
                        data_.begin() + static_cast<ptrdiff_t>(end * cols_));
  return FrameMatrix(end - begin, cols_, hop_s_, std::move(d));
}

void FrameMatrix::Validate() const {
  if (rows_ < 1 || cols_ < 1)
    throw Error(ErrorCode::kInvalidArgument, "frame matrix must be at least 1x1");
  if (!(hop_s_ > 0.0) || !std::isfinite(hop_s_))
    throw Error(ErrorCode::kInvalidArgument, "frame hop must be positive");
  for (double x : data_)
    if (!std::isfinite(x))
      throw Error(ErrorCode::kInvalidArgument, "non-finite feature value");
}

FrameMatrix ReadFmat(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw Error(ErrorCode::kParseError, path + ": bad FMAT magic");
  uint32_t rows, cols;
  double hop;
  std::memcpy(&rows, bytes.data() + 8, 4);
  std::memcpy(&cols, bytes.data() + 12, 4);
  std::memcpy(&hop, bytes.data() + 16, 8);
  const size_t count = static_cast<size_t>(rows) * cols;
  if (bytes.size() != kHeaderBytes + count * 4)
    throw Error(ErrorCode::kParseError,
                path + ": expected " + std::to_string(kHeaderBytes + count * 4) +
                    " bytes, found " + std::to_string(bytes.size()));
  std::vector<double> data(count);
  for (size_t i = 0; i < count; ++i) {
    float f;
    std::memcpy(&f, bytes.data() + kHeaderBytes + 4 * i, 4);
    data[i] = f;
  }
  FrameMatrix m(rows, cols, hop, std::move(data));
  try {
    m.Validate();
  } catch (const Error &e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
  return m;
}

void WriteFmat(const FrameMatrix &m, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot create " + path);
  uint32_t rows = static_cast<uint32_t>(m.NumRows());
  uint32_t cols = static_cast<uint32_t>(m.NumCols());
  double hop = m.HopSeconds();
  os.write(reinterpret_cast<const char *>(kMagic), 8);
  os.write(reinterpret_cast<const char *>(&rows), 4);
  os.write(reinterpret_cast<const char *>(&cols), 4);
  os.write(reinterpret_cast<const char *>(&hop), 8);
  for (double x : m.Data()) {
    float f = static_cast<float>(x);
    os.write(reinterpret_cast<const char *>(&f), 4);
  }
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace speechmeter

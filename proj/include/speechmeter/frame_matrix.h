// include/speechmeter/frame_matrix.h

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

#ifndef SPEECHMETER_FRAME_MATRIX_H_
#define SPEECHMETER_FRAME_MATRIX_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace speechmeter {

/// T x D matrix of per-frame feature vectors, row-major.
class FrameMatrix {
 public:
  FrameMatrix() = default;
  FrameMatrix(size_t rows, size_t cols, double hop_s);
  FrameMatrix(size_t rows, size_t cols, double hop_s, std::vector<double> data);

  size_t NumRows() const { return rows_; }
  size_t NumCols() const { return cols_; }
  double HopSeconds() const { return hop_s_; }
  bool Empty() const { return rows_ == 0; }

  std::span<const double> Row(size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> Row(size_t r) { return {data_.data() + r * cols_, cols_}; }
  double operator()(size_t r, size_t c) const { return data_[r * cols_ + c]; }
  double &operator()(size_t r, size_t c) { return data_[r * cols_ + c]; }
  const std::vector<double> &Data() const { return data_; }

  // Rows [begin, end).
  FrameMatrix RowRange(size_t begin, size_t end) const;

  // Checks T >= 1, D >= 1, hop > 0 and finite entries; throws kInvalidArgument.
  void Validate() const;

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  double hop_s_ = 0.0;
  std::vector<double> data_;
};

// FMAT layout, all little-endian:
//   magic "FMAT1\0\0\0" | u32 rows | u32 cols | f64 hop seconds |
//   rows*cols f32 row-major
// Throws kIo, kParseError.
FrameMatrix ReadFmat(const std::string &path);
void WriteFmat(const FrameMatrix &m, const std::string &path);

}  // namespace speechmeter

#endif  // SPEECHMETER_FRAME_MATRIX_H_

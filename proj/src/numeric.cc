// src/numeric.cc

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

#include "speechmeter/numeric.h"

#include <algorithm>
#include <cmath>

#include "speechmeter/error.h"

namespace speechmeter {

double Mean(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::kEmpty, "mean of empty sequence");
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double QuantileSorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::kEmpty, "quantile of empty sequence");
  double pos = (static_cast<double>(sorted.size()) - 1.0) * p;
  size_t lo = static_cast<size_t>(std::floor(pos));
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double Quantile(std::span<const double> values, double p) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end());
  return QuantileSorted(s, p);
}

}  // namespace speechmeter

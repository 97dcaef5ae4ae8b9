// include/speechmeter/numeric.h

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

#ifndef SPEECHMETER_NUMERIC_H_
#define SPEECHMETER_NUMERIC_H_

#include <span>
#include <vector>

namespace speechmeter {

double Mean(std::span<const double> v);

// Quantile by linear interpolation between order statistics at position
// (n-1)p (Hyndman-Fan type 7). `sorted` must be ascending and nonempty.
double QuantileSorted(std::span<const double> sorted, double p);

// Convenience wrapper that sorts a copy.
double Quantile(std::span<const double> values, double p);

}  // namespace speechmeter

#endif  // SPEECHMETER_NUMERIC_H_

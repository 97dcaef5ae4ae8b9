// tests/oracles.h

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

// Slow, direct reference implementations used to cross-check the library.
// Nothing here calls into the code it checks.

#ifndef SPEECHMETER_TESTS_ORACLES_H_
#define SPEECHMETER_TESTS_ORACLES_H_

#include <cstddef>
#include <string>
#include <vector>

namespace speechmeter {
namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// DTW over every monotone alignment path from (0,0) to (n-1,m-1) with
// steps (1,0), (0,1), (1,1). The path with the lowest summed cost wins;
// the result is that sum divided by the path length. `euclidean` selects
// the local metric (otherwise cosine distance).
double DtwByEnumeration(const Matrix &a, const Matrix &b, bool euclidean);

// Number of monotone paths visited by the last DtwByEnumeration call.
size_t LastPathCount();

// Plain recursive edit distance, no memoization.
size_t EditDistanceRecursive(const std::vector<std::string> &a,
                             const std::vector<std::string> &b);

// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
// Returns eigenvalues in `values` (descending) and matching eigenvectors as
// the columns of the returned matrix.
Matrix JacobiEigen(Matrix a, std::vector<double> *values);

// Population covariance of the z-scored columns of `data` (rows are
// observations). Columns with zero spread are left unscaled.
Matrix StandardizedCovariance(const Matrix &data);

// ICC(2,k) from sums of squares written out by definition.
double IccBySumsOfSquares(const Matrix &ratings);

// Pearson r through the sample covariance formula.
double PearsonByCovariance(const std::vector<double> &x, const std::vector<double> &y);

// Type-7 quantile by sorting a copy and interpolating.
double QuantileBySort(std::vector<double> v, double p);

}  // namespace oracle
}  // namespace speechmeter

#endif  // SPEECHMETER_TESTS_ORACLES_H_

// include/speechmeter/xppg_pca.h

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

#ifndef SPEECHMETER_XPPG_PCA_H_
#define SPEECHMETER_XPPG_PCA_H_

#include <span>
#include <string>
#include <vector>

#include "speechmeter/frame_matrix.h"

namespace speechmeter {

/// Utterance-level features: an x-vector and the time-averaged phonetic
/// posteriorgram.
struct UtteranceEmbedding {
  std::vector<double> xvec;
  std::vector<double> ppg_mean;

  std::vector<double> Concatenated() const;
};

/// First principal component of the z-scored concatenated embeddings.
/// pc1 has unit norm and its largest-magnitude entry is positive.
struct PcaModel {
  std::vector<double> mean;
  std::vector<double> scale;  // per-dimension std, floored at kStdFloor
  std::vector<double> pc1;
  double explained_var_ratio = 0.0;
  size_t xvec_dim = 0;
  size_t num_train = 0;

  size_t Dim() const { return mean.size(); }
};

inline constexpr double kStdFloor = 1e-8;

// Per-dimension mean over frames.
std::vector<double> TimeAveragePpg(const FrameMatrix &ppg);

// x-vector from a one-row FMAT plus time-averaged PPG. Throws
// kDimensionMismatch when the x-vector file has more than one row.
UtteranceEmbedding LoadEmbedding(const std::string &xvec_path,
                                 const std::string &ppg_path);

// Population mean/std per dimension, then the top right-singular vector of
// the standardized data. Rows are put in a canonical order first so the
// result does not depend on the order of `train`.
// Throws kInsufficientData (< 2 utterances), kDimensionMismatch,
// kAllConstant.
PcaModel PcaFit(std::span<const UtteranceEmbedding> train);

// Projection of the standardized embedding onto pc1. Throws
// kDimensionMismatch.
double PcxScore(const PcaModel &model, const UtteranceEmbedding &emb);

void SavePcaModel(const PcaModel &model, const std::string &path);
PcaModel LoadPcaModel(const std::string &path);

}  // namespace speechmeter

#endif  // SPEECHMETER_XPPG_PCA_H_

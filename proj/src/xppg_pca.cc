// src/xppg_pca.cc

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

#include "speechmeter/xppg_pca.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/Dense>

#include "speechmeter/error.h"
#include "speechmeter/text.h"

namespace speechmeter {

std::vector<double> UtteranceEmbedding::Concatenated() const {
  std::vector<double> v(xvec);
  v.insert(v.end(), ppg_mean.begin(), ppg_mean.end());
  return v;
}

std::vector<double> TimeAveragePpg(const FrameMatrix &ppg) {
  if (ppg.Empty()) throw Error(ErrorCode::kInvalidArgument, "PPG has no frames");
  std::vector<double> mean(ppg.NumCols(), 0.0);
  for (size_t t = 0; t < ppg.NumRows(); ++t) {
    auto row = ppg.Row(t);
    for (size_t d = 0; d < mean.size(); ++d) mean[d] += row[d];
  }
  for (double &m : mean) m /= static_cast<double>(ppg.NumRows());
  return mean;
}

UtteranceEmbedding LoadEmbedding(const std::string &xvec_path,
                                 const std::string &ppg_path) {
  FrameMatrix x = ReadFmat(xvec_path);
  if (x.NumRows() != 1)
    throw Error(ErrorCode::kDimensionMismatch,
                xvec_path + ": x-vector file has " + std::to_string(x.NumRows()) +
                    " rows, expected 1");
  UtteranceEmbedding emb;
  emb.xvec.assign(x.Row(0).begin(), x.Row(0).end());
  emb.ppg_mean = TimeAveragePpg(ReadFmat(ppg_path));
  return emb;
}

PcaModel PcaFit(std::span<const UtteranceEmbedding> train) {
  if (train.size() < 2)
    throw Error(ErrorCode::kInsufficientData,
                std::to_string(train.size()) + " training utterances, need 2");
  const size_t xdim = train[0].xvec.size();
  const size_t pdim = train[0].ppg_mean.size();
  const size_t dim = xdim + pdim;
  if (dim == 0) throw Error(ErrorCode::kDimensionMismatch, "empty embeddings");

  std::vector<std::vector<double>> rows;
  rows.reserve(train.size());
  for (const auto &e : train) {
    if (e.xvec.size() != xdim || e.ppg_mean.size() != pdim)
      throw Error(ErrorCode::kDimensionMismatch, "embedding dimensions differ");
    rows.push_back(e.Concatenated());
    for (double v : rows.back())
      if (!std::isfinite(v))
        throw Error(ErrorCode::kInvalidArgument, "non-finite embedding value");
  }
  std::sort(rows.begin(), rows.end());

  const size_t n = rows.size();
  PcaModel model;
  model.xvec_dim = xdim;
  model.num_train = n;
  model.mean.assign(dim, 0.0);
  model.scale.assign(dim, 0.0);
  for (const auto &r : rows)
    for (size_t d = 0; d < dim; ++d) model.mean[d] += r[d];
  for (double &m : model.mean) m /= static_cast<double>(n);
  bool any_variance = false;
  for (size_t d = 0; d < dim; ++d) {
    double ss = 0.0;
    for (const auto &r : rows) ss += (r[d] - model.mean[d]) * (r[d] - model.mean[d]);
    double sd = std::sqrt(ss / static_cast<double>(n));
    if (sd > 0.0) any_variance = true;
    model.scale[d] = std::max(sd, kStdFloor);
  }
  if (!any_variance)
    throw Error(ErrorCode::kAllConstant, "no training dimension varies");

  Eigen::MatrixXd z(n, dim);
  for (size_t i = 0; i < n; ++i)
    for (size_t d = 0; d < dim; ++d)
      z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d)) =
          (rows[i][d] - model.mean[d]) / model.scale[d];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinV);
  const Eigen::VectorXd &sv = svd.singularValues();
  double total = sv.squaredNorm();
  if (!(total > 0.0)) throw Error(ErrorCode::kAllConstant, "standardized data is zero");
  Eigen::VectorXd pc = svd.matrixV().col(0).normalized();

  Eigen::Index arg = 0;
  pc.cwiseAbs().maxCoeff(&arg);
  if (pc(arg) < 0.0) pc = -pc;
  model.pc1.assign(pc.data(), pc.data() + pc.size());
  model.explained_var_ratio = sv(0) * sv(0) / total;
  return model;
}

double PcxScore(const PcaModel &model, const UtteranceEmbedding &emb) {
  if (emb.xvec.size() != model.xvec_dim ||
      emb.xvec.size() + emb.ppg_mean.size() != model.Dim())
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding is " + std::to_string(emb.xvec.size()) + "+" +
                    std::to_string(emb.ppg_mean.size()) + ", model expects " +
                    std::to_string(model.xvec_dim) + "+" +
                    std::to_string(model.Dim() - model.xvec_dim));
  std::vector<double> v = emb.Concatenated();
  double score = 0.0;
  for (size_t d = 0; d < v.size(); ++d)
    score += model.pc1[d] * (v[d] - model.mean[d]) / model.scale[d];
  return score;
}

namespace {

void WriteRow(std::ostream &os, const char *name, const std::vector<double> &v) {
  os << name;
  for (double x : v) os << "," << FormatFull(x);
  os << "\n";
}

}  // namespace

void SavePcaModel(const PcaModel &model, const std::string &path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "cannot create " + path);
  os << "# xppg-pca model: z = (x - mean) / scale; score = pc1 . z\n";
  WriteRow(os, "mean", model.mean);
  WriteRow(os, "scale", model.scale);
  WriteRow(os, "pc1", model.pc1);
  os << "meta,xvec_dim," << model.xvec_dim << "\n";
  os << "meta,num_train," << model.num_train << "\n";
  os << "meta,explained_var_ratio," << FormatFull(model.explained_var_ratio) << "\n";
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + path);
}

PcaModel LoadPcaModel(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  PcaModel model;
  std::string line;
  auto parse_vec = [&](const std::vector<std::string> &f) {
    std::vector<double> v;
    for (size_t i = 1; i < f.size(); ++i) v.push_back(ParseDouble(f[i], f[0]));
    return v;
  };
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = SplitCsvLine(line);
    if (f[0] == "mean") model.mean = parse_vec(f);
    else if (f[0] == "scale") model.scale = parse_vec(f);
    else if (f[0] == "pc1") model.pc1 = parse_vec(f);
    else if (f[0] == "meta" && f.size() == 3) {
      if (f[1] == "xvec_dim") model.xvec_dim = std::stoul(f[2]);
      else if (f[1] == "num_train") model.num_train = std::stoul(f[2]);
      else if (f[1] == "explained_var_ratio")
        model.explained_var_ratio = ParseDouble(f[2], f[1]);
    } else {
      throw Error(ErrorCode::kParseError, path + ": unknown block " + f[0]);
    }
  }
  if (model.mean.empty() || model.scale.size() != model.mean.size() ||
      model.pc1.size() != model.mean.size() || model.xvec_dim > model.mean.size())
    throw Error(ErrorCode::kParseError, path + ": inconsistent model blocks");
  return model;
}

}  // namespace speechmeter

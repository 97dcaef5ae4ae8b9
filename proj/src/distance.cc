// src/distance.cc

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

#include "speechmeter/distance.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "speechmeter/error.h"
#include "speechmeter/text.h"

namespace speechmeter {

std::vector<WordInterval> ReadWordIntervals(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || Trim(line) != "word,start_s,end_s")
    throw Error(ErrorCode::kParseError, path + ": expected header word,start_s,end_s");
  std::vector<WordInterval> out;
  size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    auto f = SplitCsvLine(line);
    if (f.size() != 3)
      throw Error(ErrorCode::kParseError,
                  path + ":" + std::to_string(line_no) + ": need 3 fields");
    WordInterval w{f[0], ParseDouble(f[1], "start_s"), ParseDouble(f[2], "end_s")};
    if (!(w.start_s >= 0.0 && w.start_s < w.end_s))
      throw Error(ErrorCode::kParseError,
                  path + ":" + std::to_string(line_no) + ": need 0 <= start < end");
    out.push_back(std::move(w));
  }
  return out;
}

std::vector<WordSegment> SegmentWords(const FrameMatrix &utt,
                                      std::span<const WordInterval> intervals,
                                      std::vector<std::string> *warnings) {
  const double hop = utt.HopSeconds();
  if (!(hop > 0.0)) throw Error(ErrorCode::kInvalidArgument, "frame hop must be positive");
  const double duration = static_cast<double>(utt.NumRows()) * hop;
  // Tolerance on frame-index arithmetic, e.g. 0.2 / 0.02 = 9.999999999999998.
  constexpr double kEps = 1e-9;

  std::vector<WordSegment> out;
  for (const WordInterval &w : intervals) {
    if (w.start_s < -hop - kEps || w.end_s > duration + hop + kEps || w.start_s >= w.end_s)
      throw Error(ErrorCode::kIntervalOutOfRange,
                  "'" + w.word + "' [" + FormatFull(w.start_s) + ", " +
                      FormatFull(w.end_s) + ") outside utterance of " +
                      FormatFull(duration) + " s");
    double first = std::floor(w.start_s / hop + kEps);
    double last = std::ceil(w.end_s / hop - kEps);
    size_t begin = static_cast<size_t>(std::max(0.0, first));
    size_t end = static_cast<size_t>(
        std::clamp(last, 0.0, static_cast<double>(utt.NumRows())));
    if (begin >= end) {
      if (warnings != nullptr)
        warnings->push_back("word '" + w.word + "' at " + FormatFull(w.start_s) +
                            " s has no frames; dropped");
      continue;
    }
    out.push_back({w.word, utt.RowRange(begin, end)});
  }
  return out;
}

double CosineDistance(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return (na == 0.0 && nb == 0.0) ? 0.0 : 1.0;
  // sqrt(na * na) == na exactly, so identical frames give exactly 0.
  double d = 1.0 - dot / std::sqrt(na * nb);
  return std::max(d, 0.0);
}

double EuclideanDistance(std::span<const double> a, std::span<const double> b) {
  double ss = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss);
}

double DtwDistance(const FrameMatrix &a, const FrameMatrix &b, FrameMetric metric) {
  if (a.NumCols() != b.NumCols())
    throw Error(ErrorCode::kDimensionMismatch,
                std::to_string(a.NumCols()) + " vs " + std::to_string(b.NumCols()) +
                    " feature dims");
  if (a.Empty() || b.Empty())
    throw Error(ErrorCode::kInvalidArgument, "DTW on an empty sequence");
  const size_t n = a.NumRows(), m = b.NumRows();
  auto local = [&](size_t i, size_t j) {
    return metric == FrameMetric::kCosine ? CosineDistance(a.Row(i), b.Row(j))
                                          : EuclideanDistance(a.Row(i), b.Row(j));
  };

  // Accumulated cost and path length, row by row.
  std::vector<double> cost(n * m);
  std::vector<size_t> length(n * m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < m; ++j) {
      const size_t idx = i * m + j;
      const double c = local(i, j);
      if (i == 0 && j == 0) {
        cost[idx] = c;
        length[idx] = 1;
        continue;
      }
      size_t best = 0;
      double best_cost = std::numeric_limits<double>::infinity();
      if (i > 0 && j > 0) {
        best = idx - m - 1;
        best_cost = cost[best];
      }
      if (i > 0 && cost[idx - m] < best_cost) {
        best = idx - m;
        best_cost = cost[best];
      }
      if (j > 0 && cost[idx - 1] < best_cost) {
        best = idx - 1;
        best_cost = cost[best];
      }
      cost[idx] = best_cost + c;
      length[idx] = length[best] + 1;
    }
  }
  return cost.back() / static_cast<double>(length.back());
}

void ReferencePool::Add(const std::string &word, const std::string &speaker,
                        FrameMatrix frames) {
  std::string key = NormalizeWord(word);
  if (key.empty()) return;
  frames.Validate();
  words_[key].push_back({speaker, std::move(frames)});
}

const std::vector<ReferencePool::Occurrence> *ReferencePool::Find(
    const std::string &word) const {
  auto it = words_.find(NormalizeWord(word));
  return it == words_.end() ? nullptr : &it->second;
}

double NadWord(const FrameMatrix &target, const std::string &word,
               const ReferencePool &pool, const std::string &exclude_speaker,
               FrameMetric metric) {
  const auto *occurrences = pool.Find(word);
  double sum = 0.0;
  size_t count = 0;
  if (occurrences != nullptr) {
    for (const auto &occ : *occurrences) {
      if (occ.speaker == exclude_speaker) continue;
      sum += DtwDistance(target, occ.frames, metric);
      ++count;
    }
  }
  if (count == 0)
    throw Error(ErrorCode::kNoReference,
                "no reference for '" + word + "' outside speaker " + exclude_speaker);
  return sum / static_cast<double>(count);
}

double NadUtterance(std::span<const double> word_scores) {
  if (word_scores.empty())
    throw Error(ErrorCode::kEmptyUtterance, "no word scores");
  double sum = 0.0;
  for (double s : word_scores) sum += s;
  return sum / static_cast<double>(word_scores.size());
}

NadResult ScoreUtteranceNad(std::span<const WordSegment> segments,
                            const ReferencePool &pool, const std::string &speaker,
                            FrameMetric metric) {
  std::vector<double> scores;
  NadResult result;
  for (const WordSegment &seg : segments) {
    if (NormalizeWord(seg.word).empty()) continue;  // silence / punctuation labels
    try {
      scores.push_back(NadWord(seg.frames, seg.word, pool, speaker, metric));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kNoReference) throw;
      ++result.words_omitted;
    }
  }
  result.score = NadUtterance(scores);
  result.words_scored = scores.size();
  return result;
}

}  // namespace speechmeter

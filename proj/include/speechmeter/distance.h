// include/speechmeter/distance.h

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

#ifndef SPEECHMETER_DISTANCE_H_
#define SPEECHMETER_DISTANCE_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "speechmeter/frame_matrix.h"

namespace speechmeter {

struct WordInterval {
  std::string word;
  double start_s = 0.0;
  double end_s = 0.0;
};

// CSV with header `word,start_s,end_s`. Requires 0 <= start < end.
std::vector<WordInterval> ReadWordIntervals(const std::string &path);

struct WordSegment {
  std::string word;  // as given in the interval list
  FrameMatrix frames;
};

// Slices frames [floor(start/hop), ceil(end/hop)) for every interval.
// Intervals may overhang the utterance by at most one frame; beyond that
// kIntervalOutOfRange is thrown. Slices that end up empty are dropped and
// described in `warnings`.
std::vector<WordSegment> SegmentWords(const FrameMatrix &utt,
                                      std::span<const WordInterval> intervals,
                                      std::vector<std::string> *warnings = nullptr);

enum class FrameMetric { kCosine, kEuclidean };

// 1 - cosine similarity. Two zero vectors are at distance 0; a zero vector
// and a nonzero one at distance 1.
double CosineDistance(std::span<const double> a, std::span<const double> b);
double EuclideanDistance(std::span<const double> a, std::span<const double> b);

// DTW with steps (1,0), (0,1), (1,1): minimal accumulated local cost,
// divided by the number of cells on the chosen path. On equal accumulated
// cost the diagonal predecessor wins, then the vertical one.
// Throws kDimensionMismatch, kInvalidArgument (empty input).
double DtwDistance(const FrameMatrix &a, const FrameMatrix &b,
                   FrameMetric metric = FrameMetric::kCosine);

/// Word-level feature sequences from every speaker, keyed by normalized
/// word token. Built once, then read-only.
class ReferencePool {
 public:
  struct Occurrence {
    std::string speaker;
    FrameMatrix frames;
  };

  // `word` is normalized (lowercase, punctuation stripped) before storage.
  void Add(const std::string &word, const std::string &speaker, FrameMatrix frames);

  const std::vector<Occurrence> *Find(const std::string &word) const;
  size_t NumWords() const { return words_.size(); }

 private:
  std::map<std::string, std::vector<Occurrence>> words_;
};

// Mean DTW distance from `target` to every occurrence of `word` whose
// speaker differs from `exclude_speaker`. Throws kNoReference.
double NadWord(const FrameMatrix &target, const std::string &word,
               const ReferencePool &pool, const std::string &exclude_speaker,
               FrameMetric metric = FrameMetric::kCosine);

// Arithmetic mean of word scores. Throws kEmptyUtterance.
double NadUtterance(std::span<const double> word_scores);

struct NadResult {
  double score = 0.0;
  size_t words_scored = 0;
  size_t words_omitted = 0;  // words without any reference
};

// Scores every segment of one utterance; words lacking references are
// omitted and counted. Throws kEmptyUtterance if nothing could be scored.
NadResult ScoreUtteranceNad(std::span<const WordSegment> segments,
                            const ReferencePool &pool, const std::string &speaker,
                            FrameMetric metric = FrameMetric::kCosine);

}  // namespace speechmeter

#endif  // SPEECHMETER_DISTANCE_H_

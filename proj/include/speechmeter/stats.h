// include/speechmeter/stats.h

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

#ifndef SPEECHMETER_STATS_H_
#define SPEECHMETER_STATS_H_

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace speechmeter {

// Canonical order: the subjective scales as tabulated for the listening
// test, then the objective measures.
enum class Measure {
  kNas, kPho, kSpeed, kAp, kInt, kVq, kNoise,
  kPer, kNad, kPcx, kRateS, kRateA, kSnrN, kSnrW,
};

inline constexpr size_t kNumMeasures = 14;

const std::array<Measure, kNumMeasures> &AllMeasures();
const char *MeasureName(Measure m);
std::optional<Measure> ParseMeasure(const std::string &name);
bool IsSubjective(Measure m);
// Inclusive rating-scale bounds of a subjective measure.
std::pair<double, double> ScaleBounds(Measure m);

enum class Stage { kPre, kPost10w, kPost12m, kUnknown1, kUnknown2 };

const char *StageName(Stage s);
std::optional<Stage> ParseStage(const std::string &name);

struct SpeakerStage {
  std::string speaker;
  Stage stage = Stage::kPre;

  auto operator<=>(const SpeakerStage &) const = default;
  std::string Label() const;  // "<speaker>_<stage>"
};

struct RatingRow {
  std::string speaker;
  Stage stage = Stage::kPre;
  std::string segment;
  std::string rater;
  Measure measure = Measure::kInt;
  double value = 0.0;
};

/// Long-format listener ratings. Values are checked against the measure's
/// scale and (speaker, stage, segment, rater, measure) is unique.
class RatingTable {
 public:
  // Throws kInvalidArgument on an objective measure, an out-of-scale
  // value or a duplicate key.
  void Add(const RatingRow &row);
  const std::vector<RatingRow> &Rows() const { return rows_; }
  bool Empty() const { return rows_.empty(); }

 private:
  std::vector<RatingRow> rows_;
  std::map<std::tuple<std::string, Stage, std::string, std::string, Measure>, size_t> index_;
};

// CSV header `speaker,stage,segment,rater,measure,value`. Throws
// kIo / kParseError; scale violations are reported as kParseError with the
// line number.
RatingTable ReadRatingTable(const std::string &path);

/// One optional value per (speaker-stage, measure).
class MeasureTable {
 public:
  using Row = std::array<std::optional<double>, kNumMeasures>;

  void Set(const SpeakerStage &key, Measure m, double value);
  std::optional<double> Get(const SpeakerStage &key, Measure m) const;
  // Makes sure the speaker-stage exists even when it has no values yet.
  void Touch(const SpeakerStage &key);

  const std::map<SpeakerStage, Row> &Rows() const { return rows_; }
  // Column in key order, missing cells as nullopt.
  std::vector<std::optional<double>> Column(Measure m) const;
  // Present values only, in key order.
  std::vector<double> Values(Measure m) const;

 private:
  std::map<SpeakerStage, Row> rows_;
};

// Mean over every (rater, segment) value per speaker-stage and measure.
MeasureTable AggregateRatings(const RatingTable &table);

struct SummaryStats {
  size_t n = 0;
  double mean = 0.0;
  std::optional<double> std;  // sample std (n - 1); missing for n == 1
  double min = 0.0;
  double max = 0.0;
  double q1 = 0.0;  // type-7 quartiles
  double q3 = 0.0;
};

// Throws kEmpty.
SummaryStats Summarize(std::span<const double> values);

// ICC(2,k): two-way random effects, absolute agreement, mean of k raters.
//   (MS_R - MS_E) / (MS_R + (MS_C - MS_E) / n)
// `ratings` is n targets x k raters; NaN marks a missing cell.
// Throws kInsufficientData (n < 2 or k < 2), kIncompleteMatrix and
// kZeroVariance (vanishing denominator, e.g. a constant matrix).
double Icc2k(const std::vector<std::vector<double>> &ratings);

struct IccMatrix {
  std::vector<std::vector<double>> ratings;  // targets x raters
  std::vector<std::string> raters;
  size_t dropped_targets = 0;  // targets missing at least one rater
};

// Targets are (speaker, stage, segment) stimuli, raters every rater who
// scored the measure. Targets without a full set of ratings are dropped.
IccMatrix BuildIccMatrix(const RatingTable &table, Measure m);

// Sample Pearson correlation, clamped to [-1, 1]. Throws kLengthMismatch,
// kInsufficientData (n < 3), kConstantInput.
double Pearson(std::span<const double> x, std::span<const double> y);

/// Sign per measure that orients every measure as "higher is better".
class DirectionalityRegistry {
 public:
  DirectionalityRegistry();  // -1 for NAD, PER, NOISE; +1 otherwise
  void Set(Measure m, int sign);  // sign must be +1 or -1
  int Sign(Measure m) const { return signs_[static_cast<size_t>(m)]; }

 private:
  std::array<int, kNumMeasures> signs_;
};

struct CorrelationResult {
  std::vector<Measure> measures;  // canonical order, columns with data only
  std::vector<std::vector<std::optional<double>>> r;
  std::vector<std::vector<size_t>> n;  // pairwise-complete counts
};

inline constexpr size_t kMinCorrelationPairs = 3;

// Registry signs applied per column, then pairwise-complete Pearson per
// cell. Cells with fewer than `min_pairs` pairs or a constant side are
// missing; the diagonal is exactly 1.
CorrelationResult CorrelationMatrix(const MeasureTable &table,
                                    const DirectionalityRegistry &registry,
                                    size_t min_pairs = kMinCorrelationPairs);

}  // namespace speechmeter

#endif  // SPEECHMETER_STATS_H_

// src/stats.cc

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

#include "speechmeter/stats.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "speechmeter/error.h"
#include "speechmeter/numeric.h"
#include "speechmeter/text.h"

namespace speechmeter {

namespace {

struct MeasureInfo {
  const char *name;
  bool subjective;
  double lo, hi;
};

constexpr std::array<MeasureInfo, kNumMeasures> kMeasureInfo = {{
    {"NAS", true, 1, 5},
    {"PHO", true, 1, 5},
    {"SPEED", true, 1, 9},
    {"AP", true, 1, 5},
    {"INT", true, 1, 7},
    {"VQ", true, 1, 5},
    {"NOISE", true, 0, 2},
    {"PER", false, 0, 0},
    {"NAD", false, 0, 0},
    {"PCX", false, 0, 0},
    {"RATE_S", false, 0, 0},
    {"RATE_A", false, 0, 0},
    {"SNR_N", false, 0, 0},
    {"SNR_W", false, 0, 0},
}};

constexpr std::array<const char *, 5> kStageNames = {"pre", "post10w", "post12m",
                                                     "unknown1", "unknown2"};

const MeasureInfo &Info(Measure m) { return kMeasureInfo[static_cast<size_t>(m)]; }

}  // namespace

const std::array<Measure, kNumMeasures> &AllMeasures() {
  static const std::array<Measure, kNumMeasures> all = [] {
    std::array<Measure, kNumMeasures> a{};
    for (size_t i = 0; i < kNumMeasures; ++i) a[i] = static_cast<Measure>(i);
    return a;
  }();
  return all;
}

const char *MeasureName(Measure m) { return Info(m).name; }

std::optional<Measure> ParseMeasure(const std::string &name) {
  for (size_t i = 0; i < kNumMeasures; ++i)
    if (name == kMeasureInfo[i].name) return static_cast<Measure>(i);
  return std::nullopt;
}

bool IsSubjective(Measure m) { return Info(m).subjective; }

std::pair<double, double> ScaleBounds(Measure m) {
  if (!IsSubjective(m))
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MeasureName(m)) + " is not a rating scale");
  return {Info(m).lo, Info(m).hi};
}

const char *StageName(Stage s) { return kStageNames[static_cast<size_t>(s)]; }

std::optional<Stage> ParseStage(const std::string &name) {
  for (size_t i = 0; i < kStageNames.size(); ++i)
    if (name == kStageNames[i]) return static_cast<Stage>(i);
  return std::nullopt;
}

std::string SpeakerStage::Label() const { return speaker + "_" + StageName(stage); }

void RatingTable::Add(const RatingRow &row) {
  if (!IsSubjective(row.measure))
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MeasureName(row.measure)) + " is not a rated measure");
  auto [lo, hi] = ScaleBounds(row.measure);
  if (!(row.value >= lo && row.value <= hi))
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MeasureName(row.measure)) + " value " +
                    FormatFull(row.value) + " outside [" + FormatFull(lo) + ", " +
                    FormatFull(hi) + "]");
  auto key = std::make_tuple(row.speaker, row.stage, row.segment, row.rater, row.measure);
  if (!index_.emplace(key, rows_.size()).second)
    throw Error(ErrorCode::kInvalidArgument,
                "duplicate rating for " + row.speaker + "/" + StageName(row.stage) +
                    "/" + row.segment + "/" + row.rater + "/" + MeasureName(row.measure));
  rows_.push_back(row);
}

RatingTable ReadRatingTable(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  if (!std::getline(is, line) ||
      Trim(line) != "speaker,stage,segment,rater,measure,value")
    throw Error(ErrorCode::kParseError,
                path + ": expected header speaker,stage,segment,rater,measure,value");
  RatingTable table;
  size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    auto f = SplitCsvLine(line);
    if (f.size() != 6) throw Error(ErrorCode::kParseError, where + ": need 6 fields");
    auto stage = ParseStage(f[1]);
    if (!stage) throw Error(ErrorCode::kParseError, where + ": unknown stage " + f[1]);
    auto measure = ParseMeasure(f[4]);
    if (!measure) throw Error(ErrorCode::kParseError, where + ": unknown measure " + f[4]);
    RatingRow row{f[0], *stage, f[2], f[3], *measure, ParseDouble(f[5], "value")};
    try {
      table.Add(row);
    } catch (const Error &e) {
      throw Error(ErrorCode::kParseError, where + ": " + e.what());
    }
  }
  return table;
}

void MeasureTable::Set(const SpeakerStage &key, Measure m, double value) {
  rows_[key][static_cast<size_t>(m)] = value;
}

std::optional<double> MeasureTable::Get(const SpeakerStage &key, Measure m) const {
  auto it = rows_.find(key);
  if (it == rows_.end()) return std::nullopt;
  return it->second[static_cast<size_t>(m)];
}

void MeasureTable::Touch(const SpeakerStage &key) { rows_[key]; }

std::vector<std::optional<double>> MeasureTable::Column(Measure m) const {
  std::vector<std::optional<double>> col;
  col.reserve(rows_.size());
  for (const auto &[key, row] : rows_) col.push_back(row[static_cast<size_t>(m)]);
  return col;
}

std::vector<double> MeasureTable::Values(Measure m) const {
  std::vector<double> v;
  for (const auto &[key, row] : rows_)
    if (row[static_cast<size_t>(m)]) v.push_back(*row[static_cast<size_t>(m)]);
  return v;
}

MeasureTable AggregateRatings(const RatingTable &table) {
  std::map<std::pair<SpeakerStage, Measure>, std::pair<double, size_t>> acc;
  for (const RatingRow &r : table.Rows()) {
    auto &slot = acc[{SpeakerStage{r.speaker, r.stage}, r.measure}];
    slot.first += r.value;
    ++slot.second;
  }
  MeasureTable out;
  for (const auto &[key, sum] : acc)
    out.Set(key.first, key.second, sum.first / static_cast<double>(sum.second));
  return out;
}

SummaryStats Summarize(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::kEmpty, "no values to summarize");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.n = sorted.size();
  s.mean = Mean(values);
  if (s.n >= 2) {
    double ss = 0.0;
    for (double x : values) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  s.min = sorted.front();
  s.max = sorted.back();
  s.q1 = QuantileSorted(sorted, 0.25);
  s.q3 = QuantileSorted(sorted, 0.75);
  return s;
}

double Icc2k(const std::vector<std::vector<double>> &ratings) {
  const size_t n = ratings.size();
  const size_t k = n > 0 ? ratings[0].size() : 0;
  if (n < 2 || k < 2)
    throw Error(ErrorCode::kInsufficientData,
                "ICC needs >= 2 targets and >= 2 raters, got " + std::to_string(n) +
                    "x" + std::to_string(k));
  bool identical_columns = true;
  for (const auto &row : ratings) {
    if (row.size() != k)
      throw Error(ErrorCode::kIncompleteMatrix, "ragged rating matrix");
    for (double x : row)
      if (std::isnan(x)) throw Error(ErrorCode::kIncompleteMatrix, "missing rating");
    for (double x : row) identical_columns = identical_columns && x == row[0];
  }

  double grand = 0.0;
  std::vector<double> row_mean(n, 0.0), col_mean(k, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j) {
      row_mean[i] += ratings[i][j];
      col_mean[j] += ratings[i][j];
      grand += ratings[i][j];
    }
  for (double &m : row_mean) m /= static_cast<double>(k);
  for (double &m : col_mean) m /= static_cast<double>(n);
  grand /= static_cast<double>(n * k);

  double ss_rows = 0.0, ss_cols = 0.0, ss_err = 0.0;
  for (size_t i = 0; i < n; ++i) ss_rows += (row_mean[i] - grand) * (row_mean[i] - grand);
  ss_rows *= static_cast<double>(k);
  if (!identical_columns) {
    for (size_t j = 0; j < k; ++j) ss_cols += (col_mean[j] - grand) * (col_mean[j] - grand);
    ss_cols *= static_cast<double>(n);
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < k; ++j) {
        double r = ratings[i][j] - row_mean[i] - col_mean[j] + grand;
        ss_err += r * r;
      }
  }
  const double ms_rows = ss_rows / static_cast<double>(n - 1);
  const double ms_cols = ss_cols / static_cast<double>(k - 1);
  const double ms_err = ss_err / static_cast<double>((n - 1) * (k - 1));
  const double denom = ms_rows + (ms_cols - ms_err) / static_cast<double>(n);
  if (denom == 0.0)
    throw Error(ErrorCode::kZeroVariance, "ICC denominator vanishes");
  return (ms_rows - ms_err) / denom;
}

IccMatrix BuildIccMatrix(const RatingTable &table, Measure m) {
  using Target = std::tuple<std::string, Stage, std::string>;
  std::set<std::string> rater_set;
  std::map<Target, std::map<std::string, double>> cells;
  for (const RatingRow &r : table.Rows()) {
    if (r.measure != m) continue;
    rater_set.insert(r.rater);
    cells[{r.speaker, r.stage, r.segment}][r.rater] = r.value;
  }
  IccMatrix out;
  out.raters.assign(rater_set.begin(), rater_set.end());
  for (const auto &[target, by_rater] : cells) {
    if (by_rater.size() != out.raters.size()) {
      ++out.dropped_targets;
      continue;
    }
    std::vector<double> row;
    row.reserve(out.raters.size());
    for (const std::string &rater : out.raters) row.push_back(by_rater.at(rater));
    out.ratings.push_back(std::move(row));
  }
  return out;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  if (x.size() < 3)
    throw Error(ErrorCode::kInsufficientData, "Pearson needs n >= 3");
  const double mx = Mean(x), my = Mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error(ErrorCode::kConstantInput, "constant input to Pearson");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

DirectionalityRegistry::DirectionalityRegistry() {
  signs_.fill(1);
  signs_[static_cast<size_t>(Measure::kNad)] = -1;
  signs_[static_cast<size_t>(Measure::kPer)] = -1;
  signs_[static_cast<size_t>(Measure::kNoise)] = -1;
}

void DirectionalityRegistry::Set(Measure m, int sign) {
  if (sign != 1 && sign != -1)
    throw Error(ErrorCode::kInvalidArgument, "direction must be +1 or -1");
  signs_[static_cast<size_t>(m)] = sign;
}

CorrelationResult CorrelationMatrix(const MeasureTable &table,
                                    const DirectionalityRegistry &registry,
                                    size_t min_pairs) {
  CorrelationResult out;
  std::vector<std::vector<std::optional<double>>> columns;
  for (Measure m : AllMeasures()) {
    auto col = table.Column(m);
    size_t present = 0;
    for (auto &v : col) {
      if (v) {
        *v *= registry.Sign(m);
        ++present;
      }
    }
    if (present == 0) continue;
    out.measures.push_back(m);
    columns.push_back(std::move(col));
  }

  const size_t q = out.measures.size();
  out.r.assign(q, std::vector<std::optional<double>>(q));
  out.n.assign(q, std::vector<size_t>(q, 0));
  for (size_t a = 0; a < q; ++a) {
    size_t present = 0;
    for (const auto &v : columns[a]) present += v.has_value();
    out.r[a][a] = 1.0;
    out.n[a][a] = present;
    for (size_t b = a + 1; b < q; ++b) {
      std::vector<double> x, y;
      for (size_t i = 0; i < columns[a].size(); ++i) {
        if (columns[a][i] && columns[b][i]) {
          x.push_back(*columns[a][i]);
          y.push_back(*columns[b][i]);
        }
      }
      out.n[a][b] = out.n[b][a] = x.size();
      if (x.size() < std::max<size_t>(min_pairs, 3)) continue;
      try {
        double r = Pearson(x, y);
        out.r[a][b] = out.r[b][a] = r;
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kConstantInput) throw;
      }
    }
  }
  return out;
}

}  // namespace speechmeter

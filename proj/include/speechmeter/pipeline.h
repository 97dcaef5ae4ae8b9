// include/speechmeter/pipeline.h

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

#ifndef SPEECHMETER_PIPELINE_H_
#define SPEECHMETER_PIPELINE_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "speechmeter/distance.h"
#include "speechmeter/snr.h"
#include "speechmeter/stats.h"
#include "speechmeter/xppg_pca.h"

namespace speechmeter {

/// One utterance of the scoring corpus. Every path is absolute after
/// validation; absent optional inputs simply disable the measures that
/// need them.
struct UtteranceSpec {
  std::string id;
  std::string speaker;
  Stage stage = Stage::kPre;
  std::optional<std::string> wav;
  std::optional<std::string> transcript;  // orthographic text, inline
  std::optional<std::string> words;       // word,start_s,end_s CSV
  std::optional<std::string> features;    // FMAT, frame-level features for NAD
  std::optional<std::string> ppg;         // FMAT, phone posteriors
  std::optional<std::string> xvec;        // FMAT with one row
  std::optional<std::string> ref_phonemes;
  std::optional<std::string> hyp_phonemes;
};

struct TrainingItem {
  std::string id;
  std::string xvec;
  std::string ppg;
};

struct Manifest {
  std::string path;
  std::string corpus;
  std::optional<std::string> ratings;
  std::optional<std::string> pca_model;              // pre-fitted model CSV
  std::optional<std::string> pca_training_manifest;  // fit corpus
  std::vector<TrainingItem> pca_training;
  std::vector<UtteranceSpec> utterances;
  DirectionalityRegistry directionality;
  std::string source_json;  // compact dump of the parsed document
};

// Parses and checks a JSON manifest: unique utterance ids, known stages,
// every referenced file present. Relative paths resolve against the
// manifest's directory. Throws kIo, kParseError, kMissingFile (naming the
// utterance) and kDuplicateUtterance.
Manifest ValidateManifest(const std::string &path);

struct RunOptions {
  size_t jobs = 1;
  std::set<Measure> measures;  // objective measures to compute; empty = all
  uint64_t wada_seed = kDefaultWadaSeed;
  size_t wada_mc_samples = WadaTableOptions{}.mc_samples;
  std::string wada_table_path;  // cache location; empty = build in memory
  FrameMetric metric = FrameMetric::kCosine;
};

const std::array<Measure, 7> &ObjectiveMeasures();

struct UtteranceRecord {
  std::string id;
  SpeakerStage speaker_stage;
  std::array<std::optional<double>, kNumMeasures> values;
  std::vector<std::string> errors;    // "<MEASURE>: <reason>"
  std::vector<std::string> warnings;  // non-fatal notes
  size_t nad_words_omitted = 0;

  bool Ok() const;
};

struct IccRecord {
  Measure measure = Measure::kInt;
  std::optional<double> icc;
  size_t targets = 0;
  size_t raters = 0;
  size_t dropped_targets = 0;
  std::string note;  // reason when icc is missing
};

struct RunReport {
  std::string version;
  std::string config_hash;
  std::string corpus;
  std::vector<UtteranceRecord> utterances;  // manifest order
  MeasureTable table;                       // speaker-stage level
  std::map<SpeakerStage, size_t> utterance_counts;
  std::vector<std::string> warnings;
  std::array<std::optional<SummaryStats>, kNumMeasures> summary;
  std::vector<IccRecord> icc;
  CorrelationResult correlations;
  DirectionalityRegistry directionality;
  std::optional<PcaModel> pca_model;

  size_t NumSuccessful() const;
};

// Computes every requested measure per utterance (failures are recorded,
// not fatal), averages them per speaker-stage, joins the listener ratings
// and derives summary, ICC and correlation tables. Output is independent
// of opts.jobs. Throws kParseError for an unreadable ratings file and
// kNoSuccessfulUtterances when no utterance produced any value.
RunReport Run(const Manifest &manifest, const RunOptions &opts = {});

// Writes summary.csv, icc.csv, correlations.csv, correlations.json,
// utterances.csv, speaker_stages.csv, warnings.txt and report.json (plus
// pca_model.csv when a model was used). Creates out_dir. Throws kIo.
void EmitReports(const RunReport &report, const std::string &out_dir);

}  // namespace speechmeter

#endif  // SPEECHMETER_PIPELINE_H_

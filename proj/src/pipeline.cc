// src/pipeline.cc

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

#include "speechmeter/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "speechmeter/audio_io.h"
#include "speechmeter/error.h"
#include "speechmeter/per.h"
#include "speechmeter/text.h"
#include "speechmeter/vad_rate.h"

namespace speechmeter {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

#ifndef SPEECHMETER_VERSION
#define SPEECHMETER_VERSION "dev"
#endif

namespace {

constexpr int kCsvDecimals = 3;
const char *const kMissing = "N/A";

std::string ResolvePath(const fs::path &base, const std::string &p) {
  fs::path path(p);
  if (path.is_relative()) path = base / path;
  return fs::absolute(path).lexically_normal().string();
}

std::string RequireString(const json &obj, const char *key, const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty())
    throw Error(ErrorCode::kParseError, where + ": missing string field '" + key + "'");
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json &obj, const char *key,
                                          const std::string &where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string())
    throw Error(ErrorCode::kParseError, where + ": field '" + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> OptionalPath(const json &obj, const char *key,
                                        const fs::path &base, const std::string &owner) {
  auto s = OptionalString(obj, key, owner);
  if (!s) return std::nullopt;
  std::string resolved = ResolvePath(base, *s);
  if (!fs::is_regular_file(resolved))
    throw Error(ErrorCode::kMissingFile,
                owner + ": " + key + " file not found: " + resolved);
  return resolved;
}

json ParseJsonFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  try {
    return json::parse(is);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
}

std::vector<TrainingItem> ReadTrainingManifest(const std::string &path) {
  json doc = ParseJsonFile(path);
  fs::path base = fs::path(path).parent_path();
  if (!doc.is_object() || !doc.contains("utterances") || !doc["utterances"].is_array())
    throw Error(ErrorCode::kParseError, path + ": need an 'utterances' array");
  std::vector<TrainingItem> items;
  std::set<std::string> seen;
  for (const json &u : doc["utterances"]) {
    if (!u.is_object())
      throw Error(ErrorCode::kParseError, path + ": utterance entry must be an object");
    TrainingItem item;
    item.id = RequireString(u, "id", path);
    if (!seen.insert(item.id).second)
      throw Error(ErrorCode::kDuplicateUtterance, path + ": duplicate id " + item.id);
    const std::string owner = "training utterance " + item.id;
    auto x = OptionalPath(u, "xvec", base, owner);
    auto p = OptionalPath(u, "ppg", base, owner);
    if (!x || !p)
      throw Error(ErrorCode::kParseError, owner + ": needs both xvec and ppg");
    item.xvec = *x;
    item.ppg = *p;
    items.push_back(std::move(item));
  }
  return items;
}

// FNV-1a, 64 bit.
std::string HashHex(const std::string &s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// escaping fn is rethrown after all workers finish.
void ParallelFor(size_t n, size_t jobs, const std::function<void(size_t)> &fn) {
  jobs = std::max<size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> workers;
  for (size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&]() {
      for (size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto &t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string Cell(const std::optional<double> &v) {
  return v ? FormatFixed(*v, kCsvDecimals) : kMissing;
}

ordered_json JsonValue(const std::optional<double> &v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

void WriteFile(const fs::path &path, const std::string &content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot create " + path.string());
  os << content;
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

// Per-utterance intermediate state shared between the two passes.
struct WorkItem {
  std::vector<WordSegment> segments;
  std::optional<UtteranceEmbedding> embedding;
};

}  // namespace

Manifest ValidateManifest(const std::string &path) {
  const std::string abs_path = fs::absolute(path).lexically_normal().string();
  if (!fs::is_regular_file(abs_path))
    throw Error(ErrorCode::kIo, "manifest not found: " + abs_path);
  json doc = ParseJsonFile(abs_path);
  if (!doc.is_object()) throw Error(ErrorCode::kParseError, abs_path + ": not a JSON object");
  const fs::path base = fs::path(abs_path).parent_path();

  Manifest m;
  m.path = abs_path;
  m.source_json = doc.dump();
  m.corpus = OptionalString(doc, "corpus", "manifest").value_or("");
  m.ratings = OptionalPath(doc, "ratings", base, "manifest");
  m.pca_model = OptionalPath(doc, "pca_model", base, "manifest");
  m.pca_training_manifest = OptionalPath(doc, "pca_training_manifest", base, "manifest");
  if (m.pca_training_manifest) m.pca_training = ReadTrainingManifest(*m.pca_training_manifest);
  auto default_ref = OptionalPath(doc, "ref_phonemes", base, "manifest");
  auto default_hyp = OptionalPath(doc, "hyp_phonemes", base, "manifest");

  if (doc.contains("directionality")) {
    const json &dir = doc["directionality"];
    if (!dir.is_object())
      throw Error(ErrorCode::kParseError, "directionality must be an object");
    for (const auto &[name, sign] : dir.items()) {
      auto measure = ParseMeasure(name);
      if (!measure) throw Error(ErrorCode::kParseError, "unknown measure " + name);
      if (!sign.is_number_integer() || (sign.get<int>() != 1 && sign.get<int>() != -1))
        throw Error(ErrorCode::kParseError, "direction of " + name + " must be 1 or -1");
      m.directionality.Set(*measure, sign.get<int>());
    }
  }

  if (!doc.contains("utterances") || !doc["utterances"].is_array())
    throw Error(ErrorCode::kParseError, abs_path + ": need an 'utterances' array");
  std::set<std::string> ids;
  for (const json &u : doc["utterances"]) {
    if (!u.is_object())
      throw Error(ErrorCode::kParseError, "utterance entry must be an object");
    UtteranceSpec spec;
    spec.id = RequireString(u, "id", "utterance");
    const std::string owner = "utterance " + spec.id;
    if (!ids.insert(spec.id).second)
      throw Error(ErrorCode::kDuplicateUtterance, "duplicate utterance id " + spec.id);
    spec.speaker = RequireString(u, "speaker", owner);
    std::string stage = RequireString(u, "stage", owner);
    auto parsed = ParseStage(stage);
    if (!parsed) throw Error(ErrorCode::kParseError, owner + ": unknown stage " + stage);
    spec.stage = *parsed;
    spec.transcript = OptionalString(u, "transcript", owner);
    spec.wav = OptionalPath(u, "wav", base, owner);
    spec.words = OptionalPath(u, "words", base, owner);
    spec.features = OptionalPath(u, "features", base, owner);
    spec.ppg = OptionalPath(u, "ppg", base, owner);
    spec.xvec = OptionalPath(u, "xvec", base, owner);
    spec.ref_phonemes = OptionalPath(u, "ref_phonemes", base, owner);
    spec.hyp_phonemes = OptionalPath(u, "hyp_phonemes", base, owner);
    if (!spec.ref_phonemes) spec.ref_phonemes = default_ref;
    if (!spec.hyp_phonemes) spec.hyp_phonemes = default_hyp;
    m.utterances.push_back(std::move(spec));
  }
  if (m.utterances.empty())
    throw Error(ErrorCode::kParseError, abs_path + ": manifest lists no utterances");
  return m;
}

const std::array<Measure, 7> &ObjectiveMeasures() {
  static const std::array<Measure, 7> kObjective = {
      Measure::kPer,   Measure::kNad,  Measure::kPcx,  Measure::kRateS,
      Measure::kRateA, Measure::kSnrN, Measure::kSnrW};
  return kObjective;
}

bool UtteranceRecord::Ok() const {
  return std::any_of(values.begin(), values.end(),
                     [](const std::optional<double> &v) { return v.has_value(); });
}

size_t RunReport::NumSuccessful() const {
  return static_cast<size_t>(std::count_if(utterances.begin(), utterances.end(),
                                           [](const UtteranceRecord &u) { return u.Ok(); }));
}

RunReport Run(const Manifest &manifest, const RunOptions &opts) {
  std::set<Measure> wanted = opts.measures;
  if (wanted.empty()) wanted.insert(ObjectiveMeasures().begin(), ObjectiveMeasures().end());
  for (Measure m : wanted)
    if (IsSubjective(m))
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(MeasureName(m)) + " is a rated measure, not computable");
  auto want = [&](Measure m) { return wanted.count(m) != 0; };

  RunReport report;
  report.version = SPEECHMETER_VERSION;
  report.corpus = manifest.corpus;
  report.directionality = manifest.directionality;
  {
    std::ostringstream cfg;
    cfg << report.version << "|" << manifest.source_json << "|measures=";
    for (Measure m : wanted) cfg << MeasureName(m) << ",";
    cfg << "|seed=" << opts.wada_seed << "|mc=" << opts.wada_mc_samples
        << "|metric=" << (opts.metric == FrameMetric::kCosine ? "cosine" : "euclidean");
    report.config_hash = HashHex(cfg.str());
  }

  std::optional<RatingTable> ratings;
  if (manifest.ratings) ratings = ReadRatingTable(*manifest.ratings);

  const size_t n = manifest.utterances.size();
  report.utterances.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const UtteranceSpec &u = manifest.utterances[i];
    report.utterances[i].id = u.id;
    report.utterances[i].speaker_stage = {u.speaker, u.stage};
  }

  // Shared read-only inputs.
  std::optional<WadaTable> wada;
  const bool any_wav = std::any_of(manifest.utterances.begin(), manifest.utterances.end(),
                                   [](const UtteranceSpec &u) { return u.wav.has_value(); });
  if (want(Measure::kSnrW) && any_wav) {
    WadaTableOptions wopts;
    wopts.seed = opts.wada_seed;
    wopts.mc_samples = opts.wada_mc_samples;
    wada = opts.wada_table_path.empty() ? BuildWadaTable(wopts)
                                        : LoadOrBuildWadaTable(opts.wada_table_path, wopts);
  }

  std::map<std::string, std::map<std::string, PhonemeSeq>> phoneme_files;
  std::map<std::string, std::string> phoneme_file_errors;
  if (want(Measure::kPer)) {
    for (const UtteranceSpec &u : manifest.utterances) {
      for (const auto &p : {u.ref_phonemes, u.hyp_phonemes}) {
        if (!p || phoneme_files.count(*p) || phoneme_file_errors.count(*p)) continue;
        try {
          phoneme_files[*p] = ReadPhonemeFile(*p);
        } catch (const Error &e) {
          phoneme_file_errors[*p] = e.what();
          report.warnings.push_back(std::string("phoneme file unreadable: ") + e.what());
        }
      }
    }
  }

  std::vector<WorkItem> work(n);

  // Pass 1: everything that depends on one utterance only.
  ParallelFor(n, opts.jobs, [&](size_t i) {
    const UtteranceSpec &u = manifest.utterances[i];
    UtteranceRecord &rec = report.utterances[i];
    auto fail = [&](Measure m, const std::string &why) {
      rec.errors.push_back(std::string(MeasureName(m)) + ": " + why);
    };

    const bool audio_wanted = want(Measure::kRateS) || want(Measure::kRateA) ||
                              want(Measure::kSnrN) || want(Measure::kSnrW);
    if (u.wav && audio_wanted) {
      std::vector<Measure> audio_measures;
      for (Measure m : {Measure::kRateS, Measure::kRateA, Measure::kSnrN, Measure::kSnrW})
        if (want(m)) audio_measures.push_back(m);
      std::optional<AudioBuffer> audio;
      try {
        AudioBuffer raw = LoadWav(*u.wav);
        if (raw.sample_rate != kAnalysisSampleRate)
          raw = Resample(raw, kAnalysisSampleRate);
        audio = NormalizeEnergy(raw, kDefaultTargetDbfs);
        if (PeakAbs(*audio) > 1.0)
          rec.warnings.push_back(u.id + ": peak exceeds full scale after normalization (" +
                                 FormatFixed(20.0 * std::log10(PeakAbs(*audio)), 2) +
                                 " dBFS)");
      } catch (const Error &e) {
        for (Measure m : audio_measures) fail(m, e.what());
      }
      if (audio) {
        std::optional<EnergyTrack> track;
        try {
          track = FrameRmsDb(*audio);
        } catch (const Error &e) {
          for (Measure m : {Measure::kRateA, Measure::kSnrN})
            if (want(m)) fail(m, e.what());
        }
        std::optional<size_t> word_count;
        if (u.transcript) word_count = TokenizeTranscript(*u.transcript).size();
        if (want(Measure::kRateS)) {
          if (!word_count) {
            fail(Measure::kRateS, "no transcript");
          } else {
            try {
              rec.values[static_cast<size_t>(Measure::kRateS)] =
                  SpeechRate(*word_count, audio->DurationSeconds());
            } catch (const Error &e) {
              fail(Measure::kRateS, e.what());
            }
          }
        }
        if (want(Measure::kRateA) && track) {
          if (!word_count) {
            fail(Measure::kRateA, "no transcript");
          } else {
            try {
              rec.values[static_cast<size_t>(Measure::kRateA)] =
                  ArticulationRate(*word_count, DetectSpeech(*track));
            } catch (const Error &e) {
              fail(Measure::kRateA, e.what());
            }
          }
        }
        if (want(Measure::kSnrN) && track) {
          try {
            rec.values[static_cast<size_t>(Measure::kSnrN)] = NistSnr(*track);
          } catch (const Error &e) {
            fail(Measure::kSnrN, e.what());
          }
        }
        if (want(Measure::kSnrW) && wada) {
          try {
            rec.values[static_cast<size_t>(Measure::kSnrW)] = WadaSnr(*audio, *wada);
          } catch (const Error &e) {
            fail(Measure::kSnrW, e.what());
          }
        }
      }
    }

    if (want(Measure::kPer) && u.ref_phonemes && u.hyp_phonemes) {
      auto lookup = [&](const std::string &file) -> const PhonemeSeq * {
        auto f = phoneme_files.find(file);
        if (f == phoneme_files.end()) return nullptr;
        auto it = f->second.find(u.id);
        return it == f->second.end() ? nullptr : &it->second;
      };
      const PhonemeSeq *ref = lookup(*u.ref_phonemes);
      const PhonemeSeq *hyp = lookup(*u.hyp_phonemes);
      if (ref == nullptr || hyp == nullptr) {
        fail(Measure::kPer, std::string("no ") + (ref == nullptr ? "reference" : "hypothesis") +
                                " phonemes for " + u.id);
      } else {
        try {
          rec.values[static_cast<size_t>(Measure::kPer)] = PhonemeErrorRate(*ref, *hyp);
        } catch (const Error &e) {
          fail(Measure::kPer, e.what());
        }
      }
    }

    if (want(Measure::kNad) && u.features && u.words) {
      try {
        FrameMatrix feats = ReadFmat(*u.features);
        auto intervals = ReadWordIntervals(*u.words);
        std::vector<std::string> dropped;
        work[i].segments = SegmentWords(feats, intervals, &dropped);
        for (auto &d : dropped) rec.warnings.push_back(u.id + ": " + d);
        if (work[i].segments.empty()) fail(Measure::kNad, "no word segments");
      } catch (const Error &e) {
        work[i].segments.clear();
        fail(Measure::kNad, e.what());
      }
    }

    if (want(Measure::kPcx) && u.xvec && u.ppg) {
      try {
        work[i].embedding = LoadEmbedding(*u.xvec, *u.ppg);
      } catch (const Error &e) {
        fail(Measure::kPcx, e.what());
      }
    }
  });

  // Shared models, built in manifest order.
  ReferencePool pool;
  for (size_t i = 0; i < n; ++i)
    for (const WordSegment &seg : work[i].segments)
      pool.Add(seg.word, manifest.utterances[i].speaker, seg.frames);

  std::optional<PcaModel> pca;
  const bool any_embedding = std::any_of(work.begin(), work.end(),
                                         [](const WorkItem &w) { return w.embedding.has_value(); });
  if (want(Measure::kPcx) && any_embedding) {
    try {
      if (manifest.pca_model) {
        pca = LoadPcaModel(*manifest.pca_model);
      } else {
        std::vector<UtteranceEmbedding> train;
        if (!manifest.pca_training.empty()) {
          for (const TrainingItem &item : manifest.pca_training) {
            try {
              train.push_back(LoadEmbedding(item.xvec, item.ppg));
            } catch (const Error &e) {
              report.warnings.push_back("PCA training utterance " + item.id +
                                        " skipped: " + e.what());
            }
          }
        } else {
          report.warnings.push_back(
              "no PCA training manifest; fitting PCX on the scored corpus itself");
          for (const WorkItem &w : work)
            if (w.embedding) train.push_back(*w.embedding);
        }
        pca = PcaFit(train);
      }
    } catch (const Error &e) {
      report.warnings.push_back(std::string("PCX unavailable: ") + e.what());
    }
  }
  report.pca_model = pca;

  // Pass 2: measures that need the shared models.
  ParallelFor(n, opts.jobs, [&](size_t i) {
    const UtteranceSpec &u = manifest.utterances[i];
    UtteranceRecord &rec = report.utterances[i];
    if (!work[i].segments.empty()) {
      try {
        NadResult nad = ScoreUtteranceNad(work[i].segments, pool, u.speaker, opts.metric);
        rec.values[static_cast<size_t>(Measure::kNad)] = nad.score;
        rec.nad_words_omitted = nad.words_omitted;
        if (nad.words_omitted > 0)
          rec.warnings.push_back(u.id + ": NAD omitted " + std::to_string(nad.words_omitted) +
                                 " word(s) without reference");
      } catch (const Error &e) {
        rec.errors.push_back(std::string("NAD: ") + e.what());
      }
    }
    if (work[i].embedding) {
      if (!pca) {
        rec.errors.push_back("PCX: no PCA model");
      } else {
        try {
          rec.values[static_cast<size_t>(Measure::kPcx)] = PcxScore(*pca, *work[i].embedding);
        } catch (const Error &e) {
          rec.errors.push_back(std::string("PCX: ") + e.what());
        }
      }
    }
  });

  // Speaker-stage aggregation: uniform mean over the utterances that have
  // a value.
  std::map<SpeakerStage, std::array<std::pair<double, size_t>, kNumMeasures>> sums;
  std::map<SpeakerStage, size_t> successes;
  for (const UtteranceRecord &rec : report.utterances) {
    auto &s = sums[rec.speaker_stage];
    ++report.utterance_counts[rec.speaker_stage];
    if (rec.Ok()) ++successes[rec.speaker_stage];
    for (size_t m = 0; m < kNumMeasures; ++m) {
      if (rec.values[m]) {
        s[m].first += *rec.values[m];
        ++s[m].second;
      }
    }
  }
  std::set<SpeakerStage> included;
  for (const auto &[key, s] : sums) {
    if (successes[key] == 0) {
      report.warnings.push_back("speaker-stage " + key.Label() +
                                " excluded: no utterance produced a value");
      continue;
    }
    included.insert(key);
    report.table.Touch(key);
    for (size_t m = 0; m < kNumMeasures; ++m)
      if (s[m].second > 0)
        report.table.Set(key, static_cast<Measure>(m),
                         s[m].first / static_cast<double>(s[m].second));
  }

  for (const UtteranceRecord &rec : report.utterances) {
    for (const auto &w : rec.warnings) report.warnings.push_back(w);
    for (const auto &e : rec.errors) report.warnings.push_back(rec.id + ": " + e);
    if (!rec.Ok()) report.warnings.push_back(rec.id + ": excluded, no measure computed");
  }

  if (report.NumSuccessful() == 0)
    throw Error(ErrorCode::kNoSuccessfulUtterances,
                "none of " + std::to_string(n) + " utterances produced a value");

  // Listener ratings, restricted to the included speaker-stages.
  if (ratings) {
    RatingTable kept;
    std::set<SpeakerStage> unmatched;
    for (const RatingRow &r : ratings->Rows()) {
      SpeakerStage key{r.speaker, r.stage};
      if (included.count(key)) kept.Add(r);
      else unmatched.insert(key);
    }
    for (const SpeakerStage &key : unmatched)
      report.warnings.push_back("ratings for " + key.Label() +
                                " ignored: speaker-stage not in the analysis");
    MeasureTable subjective = AggregateRatings(kept);
    for (const auto &[key, row] : subjective.Rows())
      for (size_t m = 0; m < kNumMeasures; ++m)
        if (row[m]) report.table.Set(key, static_cast<Measure>(m), *row[m]);

    for (Measure m : AllMeasures()) {
      if (!IsSubjective(m)) continue;
      IccRecord rec;
      rec.measure = m;
      IccMatrix mat = BuildIccMatrix(kept, m);
      rec.targets = mat.ratings.size();
      rec.raters = mat.raters.size();
      rec.dropped_targets = mat.dropped_targets;
      if (mat.raters.empty()) {
        rec.note = "no ratings";
      } else if (mat.raters.size() == 1) {
        rec.note = "single rater";
      } else {
        try {
          rec.icc = Icc2k(mat.ratings);
        } catch (const Error &e) {
          rec.note = e.what();
        }
      }
      report.icc.push_back(rec);
    }
  }

  for (Measure m : AllMeasures()) {
    std::vector<double> v = report.table.Values(m);
    if (!v.empty()) report.summary[static_cast<size_t>(m)] = Summarize(v);
  }
  report.correlations = CorrelationMatrix(report.table, report.directionality);
  return report;
}

void EmitReports(const RunReport &report, const std::string &out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);

  {
    std::ostringstream os;
    os << "statistic";
    for (Measure m : AllMeasures()) os << "," << MeasureName(m);
    os << "\n";
    auto stat_row = [&](const char *name, auto getter) {
      os << name;
      for (Measure m : AllMeasures()) {
        const auto &s = report.summary[static_cast<size_t>(m)];
        os << "," << (s ? Cell(getter(*s)) : std::string(kMissing));
      }
      os << "\n";
    };
    os << "n";
    for (Measure m : AllMeasures()) {
      const auto &s = report.summary[static_cast<size_t>(m)];
      os << "," << (s ? s->n : 0);
    }
    os << "\n";
    stat_row("mean", [](const SummaryStats &s) { return std::optional<double>(s.mean); });
    stat_row("std", [](const SummaryStats &s) { return s.std; });
    stat_row("min", [](const SummaryStats &s) { return std::optional<double>(s.min); });
    stat_row("max", [](const SummaryStats &s) { return std::optional<double>(s.max); });
    stat_row("q1", [](const SummaryStats &s) { return std::optional<double>(s.q1); });
    stat_row("q3", [](const SummaryStats &s) { return std::optional<double>(s.q3); });
    os << "icc2k";
    for (Measure m : AllMeasures()) {
      std::optional<double> icc;
      for (const IccRecord &r : report.icc)
        if (r.measure == m) icc = r.icc;
      os << "," << Cell(icc);
    }
    os << "\n";
    WriteFile(dir / "summary.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "measure,icc2k,targets,raters,dropped_targets,note\n";
    for (const IccRecord &r : report.icc)
      os << MeasureName(r.measure) << "," << Cell(r.icc) << "," << r.targets << ","
         << r.raters << "," << r.dropped_targets << "," << r.note << "\n";
    WriteFile(dir / "icc.csv", os.str());
  }

  const CorrelationResult &corr = report.correlations;
  {
    std::ostringstream os;
    os << "measure";
    for (Measure m : corr.measures) os << "," << MeasureName(m);
    os << "\n";
    for (size_t a = 0; a < corr.measures.size(); ++a) {
      os << MeasureName(corr.measures[a]);
      for (size_t b = 0; b < corr.measures.size(); ++b) os << "," << Cell(corr.r[a][b]);
      os << "\n";
    }
    WriteFile(dir / "correlations.csv", os.str());
  }
  {
    ordered_json j;
    j["measures"] = ordered_json::array();
    ordered_json signs = ordered_json::object();
    for (Measure m : corr.measures) {
      j["measures"].push_back(MeasureName(m));
      signs[MeasureName(m)] = report.directionality.Sign(m);
    }
    j["directionality"] = signs;
    j["min_pairs"] = kMinCorrelationPairs;
    ordered_json r = ordered_json::array(), cnt = ordered_json::array();
    for (size_t a = 0; a < corr.measures.size(); ++a) {
      ordered_json rr = ordered_json::array(), nn = ordered_json::array();
      for (size_t b = 0; b < corr.measures.size(); ++b) {
        rr.push_back(JsonValue(corr.r[a][b]));
        nn.push_back(corr.n[a][b]);
      }
      r.push_back(rr);
      cnt.push_back(nn);
    }
    j["r"] = r;
    j["n"] = cnt;
    WriteFile(dir / "correlations.json", j.dump(2) + "\n");
  }

  {
    std::ostringstream os;
    os << "utterance,speaker,stage,status";
    for (Measure m : ObjectiveMeasures()) os << "," << MeasureName(m);
    os << "\n";
    for (const UtteranceRecord &u : report.utterances) {
      os << u.id << "," << u.speaker_stage.speaker << "," << StageName(u.speaker_stage.stage)
         << "," << (u.Ok() ? "ok" : "excluded");
      for (Measure m : ObjectiveMeasures()) os << "," << Cell(u.values[static_cast<size_t>(m)]);
      os << "\n";
    }
    WriteFile(dir / "utterances.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "speaker,stage,utterances";
    for (Measure m : AllMeasures()) os << "," << MeasureName(m);
    os << "\n";
    for (const auto &[key, row] : report.table.Rows()) {
      auto it = report.utterance_counts.find(key);
      os << key.speaker << "," << StageName(key.stage) << ","
         << (it == report.utterance_counts.end() ? 0 : it->second);
      for (size_t m = 0; m < kNumMeasures; ++m) os << "," << Cell(row[m]);
      os << "\n";
    }
    WriteFile(dir / "speaker_stages.csv", os.str());
  }

  {
    std::ostringstream os;
    os << "# speechmeter " << report.version << " config " << report.config_hash << "\n";
    for (const auto &w : report.warnings) os << w << "\n";
    WriteFile(dir / "warnings.txt", os.str());
  }

  {
    ordered_json j;
    j["version"] = report.version;
    j["config_hash"] = report.config_hash;
    j["corpus"] = report.corpus;
    j["units"] = {{"RATE_S", "words/s"}, {"RATE_A", "words/s"}, {"SNR_N", "dB"},
                  {"SNR_W", "dB"}, {"PER", "errors/phoneme"}};
    ordered_json utts = ordered_json::array();
    for (const UtteranceRecord &u : report.utterances) {
      ordered_json e;
      e["id"] = u.id;
      e["speaker"] = u.speaker_stage.speaker;
      e["stage"] = StageName(u.speaker_stage.stage);
      e["status"] = u.Ok() ? "ok" : "excluded";
      ordered_json vals = ordered_json::object();
      for (Measure m : ObjectiveMeasures()) vals[MeasureName(m)] = JsonValue(u.values[static_cast<size_t>(m)]);
      e["values"] = vals;
      e["errors"] = u.errors;
      e["nad_words_omitted"] = u.nad_words_omitted;
      utts.push_back(e);
    }
    j["utterances"] = utts;
    ordered_json stages = ordered_json::array();
    for (const auto &[key, row] : report.table.Rows()) {
      ordered_json e;
      e["speaker"] = key.speaker;
      e["stage"] = StageName(key.stage);
      ordered_json vals = ordered_json::object();
      for (size_t m = 0; m < kNumMeasures; ++m)
        vals[MeasureName(static_cast<Measure>(m))] = JsonValue(row[m]);
      e["values"] = vals;
      stages.push_back(e);
    }
    j["speaker_stages"] = stages;
    WriteFile(dir / "report.json", j.dump(2) + "\n");
  }

  if (report.pca_model) SavePcaModel(*report.pca_model, (dir / "pca_model.csv").string());
}

}  // namespace speechmeter

// tests/synthetic_corpus.cc

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

#include "synthetic_corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "speechmeter/frame_matrix.h"
#include "speechmeter/stats.h"
#include "speechmeter/text.h"

namespace speechmeter {
namespace synth {

namespace fs = std::filesystem;

std::vector<double> GammaSpeech(size_t n, std::mt19937_64 &rng, double shape) {
  std::gamma_distribution<double> gamma(shape, 1.0);
  std::bernoulli_distribution sign(0.5);
  const double unit = 1.0 / std::sqrt(shape * (shape + 1.0));
  std::vector<double> x(n);
  for (double &v : x) v = (sign(rng) ? 1.0 : -1.0) * gamma(rng) * unit;
  return x;
}

std::vector<double> AddNoiseAtSnr(const std::vector<double> &x, double snr_db,
                                  std::mt19937_64 &rng) {
  double power = 0.0;
  for (double v : x) power += v * v;
  power /= static_cast<double>(x.size());
  std::normal_distribution<double> noise(0.0, std::sqrt(power * std::pow(10.0, -snr_db / 10.0)));
  std::vector<double> y(x);
  for (double &v : y) v += noise(rng);
  return y;
}

AudioBuffer TwoLevelBursts(double burst_dbfs, double floor_dbfs, double seconds,
                           uint64_t seed, int sample_rate) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double burst = std::pow(10.0, burst_dbfs / 20.0);
  const double floor = std::pow(10.0, floor_dbfs / 20.0);
  const size_t n = static_cast<size_t>(seconds * sample_rate);
  const size_t block = static_cast<size_t>(0.25 * sample_rate);
  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double v = floor * gauss(rng);
    if ((i / block) % 2 == 0) v += burst * gauss(rng);
    buf.samples[i] = v;
  }
  return buf;
}

AudioBuffer Sine(double freq_hz, double amplitude, double seconds, int sample_rate,
                 double phase) {
  AudioBuffer buf;
  buf.sample_rate = sample_rate;
  buf.samples.resize(static_cast<size_t>(std::llround(seconds * sample_rate)));
  for (size_t i = 0; i < buf.samples.size(); ++i)
    buf.samples[i] = amplitude * std::sin(2.0 * M_PI * freq_hz * i / sample_rate + phase);
  return buf;
}

namespace {

constexpr double kFeatureHop = 0.02;
constexpr size_t kFeatureDim = 12;
constexpr size_t kPpgDim = 10;
constexpr size_t kXvecDim = 8;
constexpr double kSpeechRms = 0.03;

const char *const kPhones[] = {"p", "t", "k", "b", "d", "g", "m", "n", "s", "f",
                               "a", "e", "i", "o", "u", "@", "l", "r", "j", "w"};

struct Word {
  std::string text;
  std::vector<std::string> phones;
  std::vector<std::vector<double>> keyframes;  // feature trajectory anchors
  double seconds = 0.0;                        // unstretched duration
  size_t ppg_class = 0;
};

const std::vector<std::vector<std::string>> kSentences = {
    {"the", "north", "wind", "and", "the", "sun", "were", "arguing"},
    {"which", "was", "the", "stronger", "when", "a", "traveller", "came"},
    {"along", "wrapped", "in", "a", "warm", "cloak"},
};

std::vector<double> Normal(size_t n, double sd, std::mt19937_64 &rng) {
  std::normal_distribution<double> g(0.0, sd);
  std::vector<double> v(n);
  for (double &x : v) x = g(rng);
  return v;
}

std::map<std::string, Word> MakeLexicon(std::mt19937_64 &rng) {
  std::map<std::string, Word> lex;
  std::uniform_int_distribution<size_t> phone(0, std::size(kPhones) - 1);
  std::uniform_int_distribution<size_t> nphones(2, 5);
  std::uniform_real_distribution<double> dur(0.22, 0.42);
  std::uniform_int_distribution<size_t> cls(0, kPpgDim - 1);
  for (const auto &sentence : kSentences) {
    for (const auto &w : sentence) {
      if (lex.count(w)) continue;
      Word word;
      word.text = w;
      size_t k = nphones(rng);
      for (size_t i = 0; i < k; ++i) word.phones.push_back(kPhones[phone(rng)]);
      for (size_t i = 0; i < 4; ++i) word.keyframes.push_back(Normal(kFeatureDim, 1.0, rng));
      word.seconds = dur(rng);
      word.ppg_class = cls(rng);
      lex[w] = word;
    }
  }
  return lex;
}

// Linear interpolation of the keyframe trajectory at position t in [0, 1].
std::vector<double> Trajectory(const Word &w, double t) {
  const double pos = t * (w.keyframes.size() - 1);
  const size_t lo = std::min(static_cast<size_t>(pos), w.keyframes.size() - 2);
  const double f = pos - lo;
  std::vector<double> out(kFeatureDim);
  for (size_t d = 0; d < kFeatureDim; ++d)
    out[d] = (1 - f) * w.keyframes[lo][d] + f * w.keyframes[lo + 1][d];
  return out;
}

std::vector<double> Softmax(std::vector<double> logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double &l : logits) sum += (l = std::exp(l - mx));
  for (double &l : logits) l /= sum;
  return logits;
}

std::vector<std::string> CorruptPhones(const std::vector<std::string> &ref, double p,
                                       std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<size_t> phone(0, std::size(kPhones) - 1);
  std::vector<std::string> hyp;
  for (const auto &ph : ref) {
    if (u(rng) >= p) {
      hyp.push_back(ph);
      continue;
    }
    double kind = u(rng);
    if (kind < 0.5) {
      std::string sub = ph;
      while (sub == ph) sub = kPhones[phone(rng)];
      hyp.push_back(sub);
    } else if (kind < 0.75) {
      // deletion
    } else {
      hyp.push_back(ph);
      hyp.push_back(kPhones[phone(rng)]);
    }
  }
  return hyp;
}

std::string Join(const std::vector<std::string> &v, const char *sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

struct UttInput {
  std::string speaker;
  uint64_t seed;
  std::vector<double> speaker_offset;  // feature-space voice offset
  std::vector<double> xvec_base;
  double severity;
  size_t sentence;
};

struct UttOutput {
  AudioBuffer audio;
  std::string transcript;
  std::string words_csv;
  FrameMatrix features, ppg, xvec;
  std::vector<std::string> ref_phones, hyp_phones;
};

UttOutput MakeUtterance(const UttInput &in, const std::map<std::string, Word> &lex,
                        const std::vector<double> &severity_axis) {
  std::mt19937_64 rng(in.seed);
  const double s = in.severity;
  const double stretch = 1.0 + s;
  const double pause = 0.12 * stretch;
  const int rate = 16000;
  const auto &sentence = kSentences[in.sentence];

  // Word timeline.
  std::vector<std::pair<double, double>> spans;
  double t = 0.2 * stretch;
  for (const auto &w : sentence) {
    double d = lex.at(w).seconds * stretch;
    spans.push_back({t, t + d});
    t += d + pause;
  }
  const double total = t - pause + 0.2 * stretch;

  UttOutput out;
  // Audio: gamma speech inside words with 10 ms ramps, noise everywhere.
  const size_t n = static_cast<size_t>(total * rate);
  std::vector<double> speech(n, 0.0);
  std::vector<double> raw = GammaSpeech(n, rng);
  const double ramp = 0.01 * rate;
  for (const auto &[a, b] : spans) {
    size_t i0 = static_cast<size_t>(a * rate), i1 = std::min(n, static_cast<size_t>(b * rate));
    for (size_t i = i0; i < i1; ++i) {
      double env = std::min({1.0, (i - i0) / ramp, (i1 - i) / ramp});
      speech[i] = kSpeechRms * env * raw[i];
    }
  }
  out.audio.sample_rate = rate;
  out.audio.samples = AddNoiseAtSnr(speech, 30.0 - 25.0 * s, rng);

  std::ostringstream words;
  words << "word,start_s,end_s\n";
  for (size_t i = 0; i < sentence.size(); ++i)
    words << sentence[i] << "," << FormatFixed(spans[i].first, 4) << ","
          << FormatFixed(spans[i].second, 4) << "\n";
  out.words_csv = words.str();
  out.transcript = Join(sentence, " ") + ".";
  out.transcript[0] = static_cast<char>(std::toupper(out.transcript[0]));

  // Frame-level features and posteriorgrams.
  const size_t frames = static_cast<size_t>(total / kFeatureHop);
  std::normal_distribution<double> g(0.0, 1.0);
  const double feat_noise = 0.05 + 0.8 * s;
  out.features = FrameMatrix(frames, kFeatureDim, kFeatureHop);
  out.ppg = FrameMatrix(frames, kPpgDim, kFeatureHop);
  for (size_t f = 0; f < frames; ++f) {
    const double time = (f + 0.5) * kFeatureHop;
    const Word *word = nullptr;
    double pos = 0.0;
    for (size_t i = 0; i < spans.size(); ++i) {
      if (time >= spans[i].first && time < spans[i].second) {
        word = &lex.at(sentence[i]);
        pos = (time - spans[i].first) / (spans[i].second - spans[i].first);
      }
    }
    std::vector<double> base = word ? Trajectory(*word, pos) : std::vector<double>(kFeatureDim, 0.0);
    for (size_t d = 0; d < kFeatureDim; ++d)
      out.features(f, d) = base[d] + in.speaker_offset[d] + feat_noise * g(rng);
    std::vector<double> logits(kPpgDim, 0.0);
    logits[word ? word->ppg_class : 0] = 4.0 * (1.0 - 0.6 * s);
    for (double &l : logits) l += (0.3 + s) * g(rng);
    std::vector<double> post = Softmax(logits);
    for (size_t d = 0; d < kPpgDim; ++d) out.ppg(f, d) = post[d];
  }
  out.xvec = FrameMatrix(1, kXvecDim, 1.0);
  for (size_t d = 0; d < kXvecDim; ++d)
    out.xvec(0, d) = in.xvec_base[d] + 2.5 * s * severity_axis[d] + 0.05 * g(rng);

  for (const auto &w : sentence)
    for (const auto &p : lex.at(w).phones) out.ref_phones.push_back(p);
  out.hyp_phones = CorruptPhones(out.ref_phones, 0.05 + 0.5 * s, rng);
  return out;
}

void WriteText(const fs::path &path, const std::string &text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
}

}  // namespace

Corpus WriteCorpus(const std::string &dir, const CorpusOptions &opts) {
  fs::create_directories(fs::path(dir) / "audio");
  fs::create_directories(fs::path(dir) / "feats");
  fs::create_directories(fs::path(dir) / "train");
  std::mt19937_64 rng(opts.seed);
  const auto lex = MakeLexicon(rng);
  const std::vector<double> axis = Normal(kXvecDim, 1.0, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  Corpus corpus;
  corpus.manifest_path = (fs::path(dir) / "manifest.json").string();
  nlohmann::ordered_json manifest;
  manifest["corpus"] = "synthetic";
  manifest["ratings"] = "ratings.csv";
  manifest["pca_training_manifest"] = "train/manifest.json";
  manifest["ref_phonemes"] = "ref_phonemes.txt";
  manifest["hyp_phonemes"] = "hyp_phonemes.txt";
  manifest["utterances"] = nlohmann::ordered_json::array();
  std::ostringstream ref_file, hyp_file, ratings;
  ratings << "speaker,stage,segment,rater,measure,value\n";

  auto rating = [&](double v, double lo, double hi) {
    return std::clamp(v, lo, hi);
  };

  for (size_t spk = 0; spk < opts.speakers; ++spk) {
    const std::string speaker = "spk" + std::to_string(spk + 1);
    const double base = 0.8 * u(rng);
    const std::vector<double> offset = Normal(kFeatureDim, 0.15, rng);
    const std::vector<double> xbase = Normal(kXvecDim, 1.0, rng);
    std::vector<double> rater_bias = Normal(opts.raters, 0.2, rng);
    for (Stage stage : {Stage::kPre, Stage::kPost10w}) {
      const double s = stage == Stage::kPre ? base : std::min(1.0, base + 0.15 + 0.1 * u(rng));
      const SpeakerStage key{speaker, stage};
      corpus.severity[key.Label()] = s;
      for (size_t k = 0; k < opts.utterances_per_stage; ++k) {
        const std::string id = key.Label() + "_u" + std::to_string(k + 1);
        UttInput in{speaker, rng(), offset, xbase, s, k % kSentences.size()};
        UttOutput out = MakeUtterance(in, lex, axis);
        WriteWav(out.audio, (fs::path(dir) / "audio" / (id + ".wav")).string());
        WriteText(fs::path(dir) / "feats" / (id + ".words.csv"), out.words_csv);
        WriteFmat(out.features, (fs::path(dir) / "feats" / (id + ".feat.fmat")).string());
        WriteFmat(out.ppg, (fs::path(dir) / "feats" / (id + ".ppg.fmat")).string());
        WriteFmat(out.xvec, (fs::path(dir) / "feats" / (id + ".xvec.fmat")).string());
        ref_file << id << "\t" << Join(out.ref_phones, " ") << "\n";
        hyp_file << id << "\t" << Join(out.hyp_phones, " ") << "\n";
        manifest["utterances"].push_back({{"id", id},
                                          {"speaker", speaker},
                                          {"stage", StageName(stage)},
                                          {"wav", "audio/" + id + ".wav"},
                                          {"transcript", out.transcript},
                                          {"words", "feats/" + id + ".words.csv"},
                                          {"features", "feats/" + id + ".feat.fmat"},
                                          {"ppg", "feats/" + id + ".ppg.fmat"},
                                          {"xvec", "feats/" + id + ".xvec.fmat"}});

        // Listener ratings per segment (one segment per utterance).
        const std::string seg = "seg" + std::to_string(k + 1);
        for (size_t r = 0; r < opts.raters; ++r) {
          const std::string rater = "r" + std::to_string(r + 1);
          std::normal_distribution<double> eps(0.0, 0.3);
          auto emit = [&](const char *m, double v) {
            ratings << speaker << "," << StageName(stage) << "," << seg << "," << rater << ","
                    << m << "," << FormatFixed(v, 3) << "\n";
          };
          emit("INT", rating(6.5 - 4.0 * s + rater_bias[r] + eps(rng), 1, 7));
          emit("AP", rating(4.6 - 3.0 * s + eps(rng), 1, 5));
          emit("VQ", rating(4.4 - 2.5 * s + eps(rng), 1, 5));
          emit("PHO", rating(4.5 - 2.0 * s + eps(rng), 1, 5));
          emit("NAS", rating(4.0 - 1.0 * s + eps(rng), 1, 5));
          emit("SPEED", rating(5.0 + 3.0 * s + eps(rng), 1, 9));
          if (r == 0) emit("NOISE", rating(2.0 * s + 0.3 * eps(rng), 0, 2));
        }
      }
    }
  }

  // Separate fit corpus for the PCA.
  nlohmann::ordered_json train;
  train["utterances"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < opts.pca_training_items; ++i) {
    const std::string id = "train" + std::to_string(i + 1);
    UttInput in{"trainspk", rng(), Normal(kFeatureDim, 0.15, rng), Normal(kXvecDim, 1.0, rng),
                u(rng), i % kSentences.size()};
    UttOutput out = MakeUtterance(in, lex, axis);
    WriteFmat(out.ppg, (fs::path(dir) / "train" / (id + ".ppg.fmat")).string());
    WriteFmat(out.xvec, (fs::path(dir) / "train" / (id + ".xvec.fmat")).string());
    train["utterances"].push_back(
        {{"id", id}, {"xvec", id + ".xvec.fmat"}, {"ppg", id + ".ppg.fmat"}});
  }
  WriteText(fs::path(dir) / "train" / "manifest.json", train.dump(2) + "\n");
  WriteText(fs::path(dir) / "ref_phonemes.txt", ref_file.str());
  WriteText(fs::path(dir) / "hyp_phonemes.txt", hyp_file.str());
  WriteText(fs::path(dir) / "ratings.csv", ratings.str());
  WriteText(corpus.manifest_path, manifest.dump(2) + "\n");
  return corpus;
}

}  // namespace synth
}  // namespace speechmeter

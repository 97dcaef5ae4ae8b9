// tests/synthetic_corpus.h

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

// Seeded generators for test signals and a complete on-disk study corpus
// driven by a latent severity per speaker-stage.

#ifndef SPEECHMETER_TESTS_SYNTHETIC_CORPUS_H_
#define SPEECHMETER_TESTS_SYNTHETIC_CORPUS_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "speechmeter/audio_io.h"

namespace speechmeter {
namespace synth {

// Gamma(shape, 1) magnitudes with random signs, scaled to unit power.
std::vector<double> GammaSpeech(size_t n, std::mt19937_64 &rng, double shape = 0.4);

// x + Gaussian noise whose power sits snr_db below the power of x.
std::vector<double> AddNoiseAtSnr(const std::vector<double> &x, double snr_db,
                                  std::mt19937_64 &rng);

// Alternating 0.25 s blocks: Gaussian bursts at burst_dbfs RMS on top of a
// stationary Gaussian floor at floor_dbfs RMS (50/50 duty).
AudioBuffer TwoLevelBursts(double burst_dbfs, double floor_dbfs, double seconds,
                           uint64_t seed, int sample_rate = 16000);

AudioBuffer Sine(double freq_hz, double amplitude, double seconds, int sample_rate,
                 double phase = 0.0);

struct CorpusOptions {
  size_t speakers = 10;
  size_t utterances_per_stage = 3;
  size_t raters = 3;
  size_t pca_training_items = 30;
  uint64_t seed = 20260101;
};

struct Corpus {
  std::string manifest_path;
  std::map<std::string, double> severity;  // keyed by SpeakerStage::Label()
};

// Writes wavs, transcripts, word intervals, feature/PPG/x-vector FMATs,
// phoneme files, ratings and manifest.json below `dir`. Severity s in
// [0, 1] lowers the SNR (30 - 25 s dB), perturbs the features, corrupts
// phonemes with probability 0.05 + 0.5 s and stretches time by 1 + s.
// Ratings follow INT = 6.5 - 4 s + noise.
Corpus WriteCorpus(const std::string &dir, const CorpusOptions &opts = {});

}  // namespace synth
}  // namespace speechmeter

#endif  // SPEECHMETER_TESTS_SYNTHETIC_CORPUS_H_

// include/speechmeter/snr.h

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

#ifndef SPEECHMETER_SNR_H_
#define SPEECHMETER_SNR_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "speechmeter/audio_io.h"

namespace speechmeter {

/// One-dimensional Gaussian mixture over dB values. Components are sorted
/// by ascending mean once fitting is finished.
struct Gmm1D {
  std::vector<double> weights;
  std::vector<double> means;
  std::vector<double> variances;
  double log_likelihood = 0.0;
  int iterations = 0;

  size_t NumComponents() const { return means.size(); }
};

struct GmmOptions {
  int num_components = 2;
  int max_iter = 200;
  double tol = 1e-6;            // stop when the log-likelihood gains less
  double variance_floor = 0.01; // dB^2
};

// EM fit. Initial means sit at the (i + 0.5)/k quantiles of the data, all
// weights are equal and every variance starts at the sample variance.
// Throws kInsufficientData (fewer than 2k values), kDegenerateData (all
// values identical) and kInvalidArgument (non-finite input). Raises
// std::logic_error if an iteration ever lowers the log-likelihood.
Gmm1D FitGmm1D(std::span<const double> values, const GmmOptions &opts = {});

inline constexpr size_t kNistMinFrames = 20;
inline constexpr double kNistSignalPercentile = 0.95;

// Energy-histogram SNR: a two-component mixture over frame levels (silence
// floor frames excluded) gives the noise level as its lower mean; the
// signal level is the 95th percentile of frame levels. Returns signal
// minus noise in dB. Throws kTooFewFrames and kDegenerateData.
double NistSnr(const EnergyTrack &track, Gmm1D *fit = nullptr);

inline constexpr uint64_t kDefaultWadaSeed = 0x57414441;  // "WADA"

struct WadaTableOptions {
  double shape = 0.4;
  double snr_min_db = -20.0;
  double snr_max_db = 60.0;
  double snr_step_db = 0.5;
  size_t mc_samples = 1000000;
  uint64_t seed = kDefaultWadaSeed;

  std::string Describe() const;  // header comment of the cached CSV
};

/// Lookup table from the amplitude statistic
///   G = ln(mean |x|) - mean(ln |x|)
/// to SNR. g_values is strictly increasing along snr_db.
struct WadaTable {
  std::vector<double> g_values;
  std::vector<double> snr_db;
  WadaTableOptions options;

  // Linear interpolation in G, clamped to the grid ends.
  double Lookup(double g) const;
};

// G expected for Gamma speech amplitudes `speech` (|x| values) mixed with
// Gaussian noise at `snr_db`, where the noise expectation is taken exactly
// and only the speech side is sampled. snr_db = +inf gives the clean value.
double MixtureStatistic(std::span<const double> speech, double snr_db);

// Builds the table. Speech amplitudes are a seeded stratified sample of
// Gamma(shape, 1); the Gaussian noise enters through its exact
// expectation, so the only randomness is the stratum jitter. The raw curve
// is made nondecreasing by isotonic regression and then nudged to be
// strictly increasing.
WadaTable BuildWadaTable(const WadaTableOptions &opts = {});

void SaveWadaTable(const WadaTable &table, const std::string &path);
WadaTable LoadWadaTable(const std::string &path);

// Loads `path` if it exists and was built with the same options; otherwise
// builds the table and writes it to `path`.
WadaTable LoadOrBuildWadaTable(const std::string &path,
                               const WadaTableOptions &opts = {});

// G computed from a waveform over its nonzero samples. Invariant under any
// power-of-two gain bit for bit.
double AmplitudeStatistic(std::span<const double> samples);

inline constexpr size_t kWadaMinSamples = 4000;

// Throws kTooShort (< 4000 samples) and kSilentInput.
double WadaSnr(const AudioBuffer &buf, const WadaTable &table);

}  // namespace speechmeter

#endif  // SPEECHMETER_SNR_H_

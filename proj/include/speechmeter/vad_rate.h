// include/speechmeter/vad_rate.h

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

#ifndef SPEECHMETER_VAD_RATE_H_
#define SPEECHMETER_VAD_RATE_H_

#include <cstddef>
#include <vector>

#include "speechmeter/audio_io.h"

namespace speechmeter {

/// One flag per EnergyTrack frame; true marks speech.
struct SpeechMask {
  std::vector<bool> flags;
  double hop_ms = 0.0;

  size_t SpeechFrames() const;
  // Frame-count proxy for the duration of speech: frames * hop.
  double SpeechDurationSeconds() const;
};

inline constexpr double kDefaultVadThresholdDb = 20.0;

// Marks frames whose level is strictly above (peak - threshold_db).
// Throws kEmptyTrack.
SpeechMask DetectSpeech(const EnergyTrack &track,
                        double threshold_db = kDefaultVadThresholdDb);

// Words per second over the whole recording. Throws kZeroDuration.
double SpeechRate(size_t word_count, double total_duration_s);

// Words per second over detected speech only. Throws kNoSpeechDetected.
double ArticulationRate(size_t word_count, const SpeechMask &mask);

}  // namespace speechmeter

#endif  // SPEECHMETER_VAD_RATE_H_

// src/vad_rate.cc

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

#include "speechmeter/vad_rate.h"

#include <algorithm>
#include <string>

#include "speechmeter/error.h"

namespace speechmeter {

size_t SpeechMask::SpeechFrames() const {
  return static_cast<size_t>(std::count(flags.begin(), flags.end(), true));
}

double SpeechMask::SpeechDurationSeconds() const {
  return static_cast<double>(SpeechFrames()) * hop_ms / 1000.0;
}

SpeechMask DetectSpeech(const EnergyTrack &track, double threshold_db) {
  if (track.frame_db.empty())
    throw Error(ErrorCode::kEmptyTrack, "no frames to classify");
  double peak = *std::max_element(track.frame_db.begin(), track.frame_db.end());
  double threshold = peak - threshold_db;
  SpeechMask mask;
  mask.hop_ms = track.hop_ms;
  mask.flags.reserve(track.frame_db.size());
  for (double db : track.frame_db) mask.flags.push_back(db > threshold);
  return mask;
}

double SpeechRate(size_t word_count, double total_duration_s) {
  if (!(total_duration_s > 0.0))
    throw Error(ErrorCode::kZeroDuration, "recording has no duration");
  return static_cast<double>(word_count) / total_duration_s;
}

double ArticulationRate(size_t word_count, const SpeechMask &mask) {
  double speech_s = mask.SpeechDurationSeconds();
  if (!(speech_s > 0.0))
    throw Error(ErrorCode::kNoSpeechDetected, "mask has no speech frames");
  return static_cast<double>(word_count) / speech_s;
}

}  // namespace speechmeter

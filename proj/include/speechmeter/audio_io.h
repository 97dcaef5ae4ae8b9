// include/speechmeter/audio_io.h

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

#ifndef SPEECHMETER_AUDIO_IO_H_
#define SPEECHMETER_AUDIO_IO_H_

#include <string>
#include <vector>

namespace speechmeter {

/// Mono PCM signal with amplitudes nominally in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 0;

  double DurationSeconds() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate
                           : 0.0;
  }
};

/// Per-frame RMS level in dBFS. Frames that are exactly zero are reported
/// at kSilenceFloorDb instead of -inf.
struct EnergyTrack {
  std::vector<double> frame_db;
  double frame_ms = 0.0;
  double hop_ms = 0.0;
};

inline constexpr double kSilenceFloorDb = -120.0;
inline constexpr double kDefaultTargetDbfs = -10.0;
inline constexpr int kAnalysisSampleRate = 16000;

// Reads a RIFF/WAVE file holding 16-bit PCM mono audio. Samples are scaled
// by 1/32768. Throws Error with kIo, kNotWav or kUnsupportedEncoding.
AudioBuffer LoadWav(const std::string &path);

// Writes 16-bit PCM mono. Samples are rounded and clamped to the int16
// range.
void WriteWav(const AudioBuffer &buf, const std::string &path);

// Band-limited rational resampling with a Kaiser-windowed sinc
// (beta = 8, 64 taps per polyphase branch). Output length is
// ceil(n * target / source); samples beyond the input are taken as zero.
AudioBuffer Resample(const AudioBuffer &buf, int target_rate);

double RmsDbfs(const AudioBuffer &buf);

double PeakAbs(const AudioBuffer &buf);

// Applies the single positive gain that brings the buffer RMS to
// `target_dbfs`. Samples are never clipped; callers that care check
// PeakAbs() on the result. Throws kSilentInput for an all-zero buffer.
AudioBuffer NormalizeEnergy(const AudioBuffer &buf,
                            double target_dbfs = kDefaultTargetDbfs,
                            double *gain_out = nullptr);

// Short-time RMS levels. frame_len and hop_len are rounded to whole
// samples; the number of frames is floor((n - frame_len) / hop_len) + 1.
EnergyTrack FrameRmsDb(const AudioBuffer &buf, double frame_ms = 20.0,
                       double hop_ms = 10.0);

}  // namespace speechmeter

#endif  // SPEECHMETER_AUDIO_IO_H_

// src/audio_io.cc

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

#include "speechmeter/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numeric>

#include "speechmeter/error.h"

namespace speechmeter {

namespace {

uint32_t ReadU32(const unsigned char *p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char *p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::string *out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out->push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutU16(std::string *out, uint16_t v) {
  out->push_back(static_cast<char>(v & 0xFF));
  out->push_back(static_cast<char>((v >> 8) & 0xFF));
}

constexpr uint16_t kWaveFormatPcm = 1;
constexpr uint16_t kWaveFormatExtensible = 0xFFFE;

// Zeroth-order modified Bessel function of the first kind.
double BesselI0(double x) { return std::cyl_bessel_i(0.0, x); }

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  double px = M_PI * x;
  return std::sin(px) / px;
}

}  // namespace

AudioBuffer LoadWav(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  if (is.bad()) throw Error(ErrorCode::kIo, "read failed: " + path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorCode::kNotWav, path + " is not a RIFF/WAVE file");

  bool have_fmt = false;
  uint16_t channels = 0, bits = 0;
  uint32_t rate = 0;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char *chunk = bytes.data() + pos;
    uint32_t size = ReadU32(chunk + 4);
    size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size())
        throw Error(ErrorCode::kNotWav, path + ": truncated fmt chunk");
      const unsigned char *f = bytes.data() + body;
      uint16_t format = ReadU16(f);
      channels = ReadU16(f + 2);
      rate = ReadU32(f + 4);
      bits = ReadU16(f + 14);
      if (format == kWaveFormatExtensible && size >= 40) {
        // First two bytes of the SubFormat GUID carry the actual format tag.
        format = ReadU16(f + 24);
      }
      if (format != kWaveFormatPcm)
        throw Error(ErrorCode::kUnsupportedEncoding,
                    path + ": format tag " + std::to_string(format) + " is not PCM");
      if (bits != 16)
        throw Error(ErrorCode::kUnsupportedEncoding,
                    path + ": " + std::to_string(bits) + "-bit samples, need 16");
      if (channels != 1)
        throw Error(ErrorCode::kUnsupportedEncoding,
                    path + ": " + std::to_string(channels) + " channels, need mono");
      if (rate == 0)
        throw Error(ErrorCode::kNotWav, path + ": zero sample rate");
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt)
        throw Error(ErrorCode::kNotWav, path + ": data chunk before fmt chunk");
      size_t avail = std::min<size_t>(size, bytes.size() - body);
      if (avail < size)
        throw Error(ErrorCode::kIo, path + ": truncated data chunk");
      AudioBuffer buf;
      buf.sample_rate = static_cast<int>(rate);
      size_t n = size / 2;
      buf.samples.resize(n);
      const unsigned char *d = bytes.data() + body;
      for (size_t i = 0; i < n; ++i) {
        int16_t s = static_cast<int16_t>(ReadU16(d + 2 * i));
        buf.samples[i] = s / 32768.0;
      }
      return buf;
    }
    pos = body + size + (size & 1);  // chunks are word aligned
  }
  throw Error(ErrorCode::kNotWav, path + ": no " +
                                      std::string(have_fmt ? "data" : "fmt") +
                                      " chunk");
}

void WriteWav(const AudioBuffer &buf, const std::string &path) {
  if (buf.sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  uint32_t data_bytes = static_cast<uint32_t>(buf.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  PutU32(&out, 36 + data_bytes);
  out += "WAVEfmt ";
  PutU32(&out, 16);
  PutU16(&out, kWaveFormatPcm);
  PutU16(&out, 1);
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate));
  PutU32(&out, static_cast<uint32_t>(buf.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out += "data";
  PutU32(&out, data_bytes);
  for (double x : buf.samples) {
    double v = std::round(x * 32768.0);
    v = std::clamp(v, -32768.0, 32767.0);
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(v)));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::kIo, "cannot create " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + path);
}

AudioBuffer Resample(const AudioBuffer &buf, int target_rate) {
  if (target_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "target rate must be positive");
  if (buf.sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "source rate must be positive");
  if (target_rate == buf.sample_rate) return buf;

  constexpr int kTaps = 64;
  constexpr int kHalf = kTaps / 2;
  constexpr double kBeta = 8.0;
  // Cutoff sits a little below the lower Nyquist frequency so the short
  // filter's transition band does not fold back.
  constexpr double kRolloff = 0.9;

  const int64_t g = std::gcd(buf.sample_rate, target_rate);
  const int64_t up = target_rate / g;
  const int64_t down = buf.sample_rate / g;
  const double cutoff =
      kRolloff * std::min(1.0, static_cast<double>(up) / static_cast<double>(down));
  const double i0_beta = BesselI0(kBeta);

  // One 64-tap branch per output phase. Branch `phase` interpolates at
  // fractional position phase/up between input samples; taps cover input
  // offsets -31..32 relative to the integer part.
  std::vector<double> bank(static_cast<size_t>(up) * kTaps);
  for (int64_t phase = 0; phase < up; ++phase) {
    double frac = static_cast<double>(phase) / static_cast<double>(up);
    double *taps = &bank[static_cast<size_t>(phase) * kTaps];
    double sum = 0.0;
    for (int k = 0; k < kTaps; ++k) {
      double x = static_cast<double>(k - (kHalf - 1)) - frac;
      double r = x / kHalf;
      double w = std::abs(r) < 1.0 ? BesselI0(kBeta * std::sqrt(1.0 - r * r)) / i0_beta
                                   : 0.0;
      taps[k] = cutoff * Sinc(cutoff * x) * w;
      sum += taps[k];
    }
    for (int k = 0; k < kTaps; ++k) taps[k] /= sum;
  }

  const int64_t n_in = static_cast<int64_t>(buf.samples.size());
  const int64_t n_out = (n_in * up + down - 1) / down;
  AudioBuffer out;
  out.sample_rate = target_rate;
  out.samples.resize(static_cast<size_t>(n_out));
  for (int64_t n = 0; n < n_out; ++n) {
    int64_t pos = n * down;
    int64_t base = pos / up;
    int64_t phase = pos % up;
    const double *taps = &bank[static_cast<size_t>(phase) * kTaps];
    double acc = 0.0;
    for (int k = 0; k < kTaps; ++k) {
      int64_t j = base + k - (kHalf - 1);
      if (j >= 0 && j < n_in) acc += taps[k] * buf.samples[static_cast<size_t>(j)];
    }
    out.samples[static_cast<size_t>(n)] = acc;
  }
  return out;
}

double RmsDbfs(const AudioBuffer &buf) {
  if (buf.samples.empty()) return kSilenceFloorDb;
  double ss = 0.0;
  for (double x : buf.samples) ss += x * x;
  double rms = std::sqrt(ss / static_cast<double>(buf.samples.size()));
  return rms > 0.0 ? 20.0 * std::log10(rms) : kSilenceFloorDb;
}

double PeakAbs(const AudioBuffer &buf) {
  double peak = 0.0;
  for (double x : buf.samples) peak = std::max(peak, std::abs(x));
  return peak;
}

AudioBuffer NormalizeEnergy(const AudioBuffer &buf, double target_dbfs,
                            double *gain_out) {
  double ss = 0.0;
  for (double x : buf.samples) ss += x * x;
  if (buf.samples.empty() || ss == 0.0)
    throw Error(ErrorCode::kSilentInput, "cannot normalize a silent buffer");
  double rms = std::sqrt(ss / static_cast<double>(buf.samples.size()));
  double gain = std::pow(10.0, target_dbfs / 20.0) / rms;
  AudioBuffer out;
  out.sample_rate = buf.sample_rate;
  out.samples.resize(buf.samples.size());
  for (size_t i = 0; i < buf.samples.size(); ++i)
    out.samples[i] = buf.samples[i] * gain;
  if (gain_out != nullptr) *gain_out = gain;
  return out;
}

EnergyTrack FrameRmsDb(const AudioBuffer &buf, double frame_ms, double hop_ms) {
  if (!(hop_ms > 0.0) || frame_ms < hop_ms)
    throw Error(ErrorCode::kInvalidArgument,
                "need frame_ms >= hop_ms > 0");
  if (buf.sample_rate <= 0)
    throw Error(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const size_t frame_len =
      static_cast<size_t>(std::llround(frame_ms * buf.sample_rate / 1000.0));
  const size_t hop_len =
      static_cast<size_t>(std::llround(hop_ms * buf.sample_rate / 1000.0));
  if (frame_len == 0 || hop_len == 0)
    throw Error(ErrorCode::kInvalidArgument, "frame shorter than one sample");
  if (buf.samples.size() < frame_len)
    throw Error(ErrorCode::kTooShort,
                std::to_string(buf.samples.size()) + " samples, frame needs " +
                    std::to_string(frame_len));

  EnergyTrack track;
  track.frame_ms = frame_ms;
  track.hop_ms = hop_ms;
  const size_t n_frames = (buf.samples.size() - frame_len) / hop_len + 1;
  track.frame_db.resize(n_frames);
  for (size_t f = 0; f < n_frames; ++f) {
    const double *x = buf.samples.data() + f * hop_len;
    double ss = 0.0;
    for (size_t i = 0; i < frame_len; ++i) ss += x[i] * x[i];
    double rms = std::sqrt(ss / static_cast<double>(frame_len));
    track.frame_db[f] = rms > 0.0 ? 20.0 * std::log10(rms) : kSilenceFloorDb;
  }
  return track;
}

}  // namespace speechmeter

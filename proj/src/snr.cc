// src/snr.cc

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

#include "speechmeter/snr.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "speechmeter/error.h"
#include "speechmeter/numeric.h"
#include "speechmeter/text.h"

namespace speechmeter {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;  // ln(2 pi)

double LogSumExp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

Gmm1D FitGmm1D(std::span<const double> values, const GmmOptions &opts) {
  const int k = opts.num_components;
  const size_t n = values.size();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one component");
  if (n < static_cast<size_t>(2 * k))
    throw Error(ErrorCode::kInsufficientData,
                std::to_string(n) + " values for " + std::to_string(k) + " components");
  for (double x : values)
    if (!std::isfinite(x))
      throw Error(ErrorCode::kInvalidArgument, "non-finite value in GMM input");

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw Error(ErrorCode::kDegenerateData, "all values identical");

  const double mean = Mean(values);
  double var = 0.0;
  for (double x : values) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n);

  Gmm1D gmm;
  gmm.weights.assign(k, 1.0 / k);
  gmm.variances.assign(k, std::max(var, opts.variance_floor));
  gmm.means.resize(k);
  for (int c = 0; c < k; ++c)
    gmm.means[c] = QuantileSorted(sorted, (c + 0.5) / k);

  std::vector<double> resp(n * k);
  std::vector<double> logp(k);
  auto e_step = [&]() {
    double ll = 0.0;
    for (size_t i = 0; i < n; ++i) {
      for (int c = 0; c < k; ++c) {
        double d = values[i] - gmm.means[c];
        logp[c] = gmm.weights[c] > 0.0
                      ? std::log(gmm.weights[c]) -
                            0.5 * (kLog2Pi + std::log(gmm.variances[c]) +
                                   d * d / gmm.variances[c])
                      : -std::numeric_limits<double>::infinity();
      }
      double lse = LogSumExp(logp);
      ll += lse;
      for (int c = 0; c < k; ++c) resp[i * k + c] = std::exp(logp[c] - lse);
    }
    return ll;
  };

  double prev = -std::numeric_limits<double>::infinity();
  bool converged = false;
  for (int iter = 0; iter < opts.max_iter; ++iter) {
    double ll = e_step();
    if (ll < prev - 1e-9 * std::max(1.0, std::abs(prev)))
      throw std::logic_error("GMM log-likelihood decreased from " +
                             FormatFull(prev) + " to " + FormatFull(ll));
    gmm.log_likelihood = ll;
    gmm.iterations = iter;
    if (iter > 0 && ll - prev < opts.tol) {
      converged = true;
      break;
    }
    prev = ll;
    // M-step. The floored variance is the constrained maximizer, so the
    // monotonicity check above still holds.
    for (int c = 0; c < k; ++c) {
      double nk = 0.0, sx = 0.0;
      for (size_t i = 0; i < n; ++i) {
        nk += resp[i * k + c];
        sx += resp[i * k + c] * values[i];
      }
      if (nk <= 0.0) {
        gmm.weights[c] = 0.0;
        continue;
      }
      double mu = sx / nk;
      double sv = 0.0;
      for (size_t i = 0; i < n; ++i) {
        double d = values[i] - mu;
        sv += resp[i * k + c] * d * d;
      }
      gmm.weights[c] = nk / static_cast<double>(n);
      gmm.means[c] = mu;
      gmm.variances[c] = std::max(sv / nk, opts.variance_floor);
    }
  }
  if (!converged) {
    gmm.log_likelihood = e_step();
    gmm.iterations = opts.max_iter;
  }

  std::vector<int> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return gmm.means[a] < gmm.means[b]; });
  Gmm1D sorted_gmm = gmm;
  for (int c = 0; c < k; ++c) {
    sorted_gmm.weights[c] = gmm.weights[order[c]];
    sorted_gmm.means[c] = gmm.means[order[c]];
    sorted_gmm.variances[c] = gmm.variances[order[c]];
  }
  return sorted_gmm;
}

double NistSnr(const EnergyTrack &track, Gmm1D *fit) {
  std::vector<double> levels;
  levels.reserve(track.frame_db.size());
  for (double db : track.frame_db)
    if (db != kSilenceFloorDb) levels.push_back(db);
  if (levels.size() < kNistMinFrames)
    throw Error(ErrorCode::kTooFewFrames,
                std::to_string(levels.size()) + " non-silent frames, need " +
                    std::to_string(kNistMinFrames));
  Gmm1D gmm = FitGmm1D(levels);
  double noise_db = gmm.means.front();
  double signal_db = Quantile(levels, kNistSignalPercentile);
  if (fit != nullptr) *fit = gmm;
  return signal_db - noise_db;
}

// ---------------------------------------------------------------------------
// WADA

namespace {

constexpr double kEulerGamma = 0.57721566490153286;

// E|mu + Z| for Z ~ N(0, 1) (folded normal mean).
double NoiseAbsMean(double mu) {
  mu = std::abs(mu);
  if (mu > 9.0) return mu;  // remaining terms are below 1e-17 relative
  return std::sqrt(2.0 / M_PI) * std::exp(-0.5 * mu * mu) +
         mu * std::erf(mu / std::sqrt(2.0));
}

// E ln|mu + Z| for Z ~ N(0, 1). (mu + Z)^2 is noncentral chi-square with
// one degree of freedom, i.e. a Poisson(mu^2/2) mixture of central
// chi-squares with 1 + 2j degrees of freedom, each with
// E ln = ln 2 + digamma(1/2 + j).
double NoiseLogMeanExact(double mu) {
  const double lambda = 0.5 * mu * mu;
  double digamma = -kEulerGamma - 2.0 * std::log(2.0);  // digamma(1/2)
  double weight = std::exp(-lambda);
  double acc = weight * digamma;
  const int terms = static_cast<int>(lambda + 12.0 * std::sqrt(lambda) + 40.0);
  for (int j = 1; j <= terms; ++j) {
    digamma += 1.0 / (j - 0.5);
    weight *= lambda / j;
    acc += weight * digamma;
  }
  return 0.5 * (std::log(2.0) + acc);
}

// Large-|mu| expansion: ln|mu| + E ln(1 + Z/mu).
double NoiseLogMeanAsymptotic(double mu) {
  double inv2 = 1.0 / (mu * mu);
  // sum over m of -(2m-1)!! / (2m mu^2m)
  double term = inv2, series = 0.0, dfact = 1.0;
  for (int m = 1; m <= 7; ++m) {
    series -= dfact * term / (2.0 * m);
    dfact *= 2.0 * m + 1.0;
    term *= inv2;
  }
  return std::log(std::abs(mu)) + series;
}

class NoiseLogMeanTable {
 public:
  static constexpr double kMax = 10.0;
  static constexpr int kSteps = 100000;

  NoiseLogMeanTable() : values_(kSteps + 2) {
    for (int i = 0; i <= kSteps; ++i)
      values_[i] = NoiseLogMeanExact(kMax * i / kSteps);
    values_[kSteps + 1] = values_[kSteps];
  }

  double operator()(double mu) const {
    mu = std::abs(mu);
    if (mu >= kMax) return NoiseLogMeanAsymptotic(mu);
    double pos = mu * (kSteps / kMax);
    int i = static_cast<int>(pos);
    double frac = pos - i;
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }

 private:
  std::vector<double> values_;
};

const NoiseLogMeanTable &LogMeanTable() {
  static const NoiseLogMeanTable table;
  return table;
}

// Pool-adjacent-violators for a nondecreasing fit with unit weights.
std::vector<double> IsotonicIncreasing(const std::vector<double> &y) {
  std::vector<double> level;
  std::vector<size_t> count;
  for (double v : y) {
    level.push_back(v);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      size_t c = count.back() + count[count.size() - 2];
      double merged = (level.back() * count.back() +
                       level[level.size() - 2] * count[count.size() - 2]) / c;
      level.pop_back();
      count.pop_back();
      level.back() = merged;
      count.back() = c;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (size_t b = 0; b < level.size(); ++b) out.insert(out.end(), count[b], level[b]);
  return out;
}

}  // namespace

double MixtureStatistic(std::span<const double> speech, double snr_db) {
  if (speech.empty()) throw Error(ErrorCode::kEmpty, "no speech amplitudes");
  double power = 0.0;
  for (double s : speech) power += s * s;
  power /= static_cast<double>(speech.size());
  if (!(power > 0.0)) throw Error(ErrorCode::kSilentInput, "speech amplitudes all zero");

  if (std::isinf(snr_db) && snr_db > 0.0) return AmplitudeStatistic(speech);

  const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));
  const NoiseLogMeanTable &log_mean = LogMeanTable();
  double abs_acc = 0.0, log_acc = 0.0;
  for (double s : speech) {
    double mu = s / sigma;
    abs_acc += NoiseAbsMean(mu);
    log_acc += log_mean(mu);
  }
  const double n = static_cast<double>(speech.size());
  // The sigma factor cancels between ln E|x| and E ln|x|.
  return std::log(abs_acc / n) - log_acc / n;
}

std::string WadaTableOptions::Describe() const {
  std::ostringstream os;
  os << "wada_table shape=" << FormatFull(shape)
     << " snr_min=" << FormatFull(snr_min_db)
     << " snr_max=" << FormatFull(snr_max_db)
     << " snr_step=" << FormatFull(snr_step_db) << " mc_samples=" << mc_samples
     << " seed=" << seed;
  return os.str();
}

double WadaTable::Lookup(double g) const {
  if (g_values.empty()) throw Error(ErrorCode::kEmpty, "empty WADA table");
  if (g <= g_values.front()) return snr_db.front();
  if (g >= g_values.back()) return snr_db.back();
  auto it = std::upper_bound(g_values.begin(), g_values.end(), g);
  size_t hi = static_cast<size_t>(it - g_values.begin());
  size_t lo = hi - 1;
  double t = (g - g_values[lo]) / (g_values[hi] - g_values[lo]);
  return snr_db[lo] + t * (snr_db[hi] - snr_db[lo]);
}

WadaTable BuildWadaTable(const WadaTableOptions &opts) {
  if (!(opts.shape > 0.0) || !(opts.snr_step_db > 0.0) ||
      opts.snr_max_db < opts.snr_min_db || opts.mc_samples < 2)
    throw Error(ErrorCode::kInvalidArgument, "bad WADA table options");

  // Stratified sample of Gamma(shape, 1) amplitudes: one draw per
  // probability stratum [i/N, (i+1)/N). Signs are irrelevant because the
  // noise expectation is symmetric in the speech sample.
  const size_t n = opts.mc_samples;
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<double> speech(n);
  for (size_t i = 0; i < n; ++i) {
    double u = (static_cast<double>(i) + jitter(rng)) / static_cast<double>(n);
    u = std::clamp(u, std::numeric_limits<double>::min(), 1.0 - 1e-16);
    speech[i] = boost::math::gamma_p_inv(opts.shape, u);
  }

  const size_t points =
      static_cast<size_t>(std::llround((opts.snr_max_db - opts.snr_min_db) /
                                       opts.snr_step_db)) + 1;
  WadaTable table;
  table.options = opts;
  table.snr_db.resize(points);
  std::vector<double> raw(points);
  for (size_t p = 0; p < points; ++p)
    table.snr_db[p] = opts.snr_min_db + opts.snr_step_db * static_cast<double>(p);

  LogMeanTable();  // initialize before the workers start
  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(points)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (size_t p = w; p < points; p += workers)
        raw[p] = MixtureStatistic(speech, table.snr_db[p]);
    });
  }
  for (auto &t : pool) t.join();

  table.g_values = IsotonicIncreasing(raw);
  for (size_t p = 1; p < points; ++p)
    if (table.g_values[p] <= table.g_values[p - 1])
      table.g_values[p] = std::nextafter(table.g_values[p - 1],
                                         std::numeric_limits<double>::infinity());
  return table;
}

void SaveWadaTable(const WadaTable &table, const std::string &path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "cannot create " + path);
  os << "# " << table.options.Describe() << "\n";
  os << "g_value,snr_db\n";
  for (size_t i = 0; i < table.g_values.size(); ++i)
    os << FormatFull(table.g_values[i]) << "," << FormatFull(table.snr_db[i]) << "\n";
  if (!os) throw Error(ErrorCode::kIo, "write failed: " + path);
}

namespace {

WadaTableOptions ParseDescription(const std::string &line) {
  WadaTableOptions o;
  std::istringstream is(line);
  std::string tok;
  is >> tok;  // '#'
  is >> tok;
  if (tok != "wada_table") throw Error(ErrorCode::kParseError, "not a WADA table header");
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) continue;
    std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
    if (key == "shape") o.shape = ParseDouble(value, key);
    else if (key == "snr_min") o.snr_min_db = ParseDouble(value, key);
    else if (key == "snr_max") o.snr_max_db = ParseDouble(value, key);
    else if (key == "snr_step") o.snr_step_db = ParseDouble(value, key);
    else if (key == "mc_samples") o.mc_samples = std::stoull(value);
    else if (key == "seed") o.seed = std::stoull(value);
  }
  return o;
}

}  // namespace

WadaTable LoadWadaTable(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::string line;
  WadaTable table;
  if (!std::getline(is, line) || line.rfind("#", 0) != 0)
    throw Error(ErrorCode::kParseError, path + ": missing header comment");
  table.options = ParseDescription(line);
  if (!std::getline(is, line) || Trim(line) != "g_value,snr_db")
    throw Error(ErrorCode::kParseError, path + ": missing column header");
  while (std::getline(is, line)) {
    if (Trim(line).empty()) continue;
    auto f = SplitCsvLine(line);
    if (f.size() != 2) throw Error(ErrorCode::kParseError, path + ": bad row " + line);
    table.g_values.push_back(ParseDouble(f[0], "g_value"));
    table.snr_db.push_back(ParseDouble(f[1], "snr_db"));
  }
  if (table.g_values.size() < 2)
    throw Error(ErrorCode::kParseError, path + ": table needs two rows");
  for (size_t i = 1; i < table.g_values.size(); ++i)
    if (!(table.g_values[i] > table.g_values[i - 1]))
      throw Error(ErrorCode::kParseError, path + ": g_value not strictly increasing");
  return table;
}

WadaTable LoadOrBuildWadaTable(const std::string &path, const WadaTableOptions &opts) {
  {
    std::ifstream probe(path);
    std::string header;
    if (probe && std::getline(probe, header) &&
        header == "# " + opts.Describe()) {
      try {
        return LoadWadaTable(path);
      } catch (const Error &) {
        // unreadable cache; rebuild below
      }
    }
  }
  WadaTable table = BuildWadaTable(opts);
  SaveWadaTable(table, path);
  return table;
}

double AmplitudeStatistic(std::span<const double> samples) {
  double abs_sum = 0.0;
  size_t count = 0;
  for (double x : samples) {
    if (x != 0.0) {
      abs_sum += std::abs(x);
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::kSilentInput, "no nonzero samples");
  const double mean_abs = abs_sum / static_cast<double>(count);
  double log_sum = 0.0;
  for (double x : samples)
    if (x != 0.0) log_sum += std::log(std::abs(x) / mean_abs);
  return -log_sum / static_cast<double>(count);
}

double WadaSnr(const AudioBuffer &buf, const WadaTable &table) {
  if (buf.samples.size() < kWadaMinSamples)
    throw Error(ErrorCode::kTooShort, std::to_string(buf.samples.size()) +
                                          " samples, need " +
                                          std::to_string(kWadaMinSamples));
  return table.Lookup(AmplitudeStatistic(buf.samples));
}

}  // namespace speechmeter

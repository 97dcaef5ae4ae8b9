// tools/speechmeter.cc

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

// Command-line front end: validate a manifest, score a corpus, or
// precompute the WADA lookup table.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "speechmeter/error.h"
#include "speechmeter/pipeline.h"
#include "speechmeter/snr.h"
#include "speechmeter/stats.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitNothingScored = 2;

uint64_t ParseSeed(const std::string &s) {
  size_t used = 0;
  uint64_t v = std::stoull(s, &used, 0);
  if (used != s.size()) throw std::invalid_argument("bad seed " + s);
  return v;
}

std::set<speechmeter::Measure> ParseMeasureList(const std::string &list) {
  std::set<speechmeter::Measure> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto m = speechmeter::ParseMeasure(item);
    if (!m) throw speechmeter::Error(speechmeter::ErrorCode::kInvalidArgument,
                                     "unknown measure " + item);
    out.insert(*m);
  }
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  using namespace speechmeter;
  CLI::App app{"Objective speech measures and listener-rating statistics"};
  app.set_version_flag("--version", SPEECHMETER_VERSION);
  app.require_subcommand(1);

  std::string manifest_path;
  auto *validate = app.add_subcommand("validate", "Check a manifest and its files");
  validate->add_option("manifest", manifest_path, "Manifest JSON")->required();

  std::string out_dir, measures, seed = "0x57414441", table_path;
  size_t jobs = 1, mc_samples = WadaTableOptions{}.mc_samples;
  bool euclidean = false;
  auto *run = app.add_subcommand("run", "Score a corpus and write reports");
  run->add_option("manifest", manifest_path, "Manifest JSON")->required();
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--measures", measures, "Comma-separated subset, e.g. PER,NAD");
  run->add_option("--seed", seed, "WADA table seed");
  run->add_option("--mc-samples", mc_samples, "WADA samples per grid point");
  run->add_option("--wada-table", table_path, "WADA table cache file");
  run->add_flag("--euclidean", euclidean, "Euclidean frame distance for NAD");

  std::string table_out;
  auto *wada = app.add_subcommand("wada-table", "Build and save the WADA table");
  wada->add_option("--out", table_out, "Output CSV")->required();
  wada->add_option("--seed", seed, "Seed");
  wada->add_option("--mc-samples", mc_samples, "Samples per grid point");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) {
      Manifest m = ValidateManifest(manifest_path);
      if (m.ratings) ReadRatingTable(*m.ratings);
      std::cout << m.path << ": " << m.utterances.size() << " utterances OK\n";
      return kExitOk;
    }
    if (*wada) {
      WadaTableOptions opts;
      opts.seed = ParseSeed(seed);
      opts.mc_samples = mc_samples;
      SaveWadaTable(BuildWadaTable(opts), table_out);
      return kExitOk;
    }
    RunOptions opts;
    opts.jobs = jobs;
    opts.measures = ParseMeasureList(measures);
    opts.wada_seed = ParseSeed(seed);
    opts.wada_mc_samples = mc_samples;
    opts.wada_table_path = table_path;
    opts.metric = euclidean ? FrameMetric::kEuclidean : FrameMetric::kCosine;
    Manifest m = ValidateManifest(manifest_path);
    RunReport report = Run(m, opts);
    EmitReports(report, out_dir);
    std::cerr << report.NumSuccessful() << "/" << report.utterances.size()
              << " utterances scored, " << report.warnings.size() << " warnings\n";
    return kExitOk;
  } catch (const Error &e) {
    std::cerr << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return e.code() == ErrorCode::kNoSuccessfulUtterances ? kExitNothingScored : kExitInvalid;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

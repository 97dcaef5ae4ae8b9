// src/per.cc

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

#include "speechmeter/per.h"

#include <algorithm>
#include <fstream>

#include "speechmeter/error.h"
#include "speechmeter/text.h"

namespace speechmeter {

EditCounts EditOps(const PhonemeSeq &ref, const PhonemeSeq &hyp) {
  if (ref.empty()) throw Error(ErrorCode::kEmptyReference, "empty reference sequence");
  const size_t n = ref.size(), m = hyp.size();
  // dist(i, j): edits turning ref[0..i) into hyp[0..j).
  std::vector<size_t> dist((n + 1) * (m + 1));
  auto at = [&](size_t i, size_t j) -> size_t & { return dist[i * (m + 1) + j]; };
  for (size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  EditCounts counts;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool same = ref[i - 1] == hyp[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

double PhonemeErrorRate(const PhonemeSeq &ref, const PhonemeSeq &hyp) {
  EditCounts c = EditOps(ref, hyp);
  return static_cast<double>(c.Total()) / static_cast<double>(ref.size());
}

PhonemeSeq ParsePhonemes(const std::string &line) {
  PhonemeSeq out;
  for (const std::string &tok : SplitWhitespace(line)) out.push_back(NfcNormalize(tok));
  return out;
}

std::map<std::string, PhonemeSeq> ReadPhonemeFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "cannot open " + path);
  std::map<std::string, PhonemeSeq> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(ErrorCode::kParseError,
                  path + ":" + std::to_string(line_no) + ": missing tab after utterance id");
    std::string id = Trim(line.substr(0, tab));
    if (id.empty())
      throw Error(ErrorCode::kParseError,
                  path + ":" + std::to_string(line_no) + ": empty utterance id");
    if (out.count(id) != 0)
      throw Error(ErrorCode::kParseError, path + ": repeated utterance id " + id);
    out.emplace(id, ParsePhonemes(line.substr(tab + 1)));
  }
  return out;
}

}  // namespace speechmeter

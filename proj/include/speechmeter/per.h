// include/speechmeter/per.h

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

#ifndef SPEECHMETER_PER_H_
#define SPEECHMETER_PER_H_

#include <map>
#include <string>
#include <vector>

namespace speechmeter {

/// Phoneme symbols in order; symbols carry no whitespace.
using PhonemeSeq = std::vector<std::string>;

struct EditCounts {
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;

  size_t Total() const { return substitutions + deletions + insertions; }
  bool operator==(const EditCounts &) const = default;
};

// Unit-cost Levenshtein alignment of `hyp` against `ref`. The backtrace
// prefers substitution (or match), then deletion, then insertion.
// Throws kEmptyReference.
EditCounts EditOps(const PhonemeSeq &ref, const PhonemeSeq &hyp);

// (S + D + I) / len(ref); not clamped to 1. Throws kEmptyReference.
double PhonemeErrorRate(const PhonemeSeq &ref, const PhonemeSeq &hyp);

// Splits a space-separated phoneme string into NFC-normalized symbols.
PhonemeSeq ParsePhonemes(const std::string &line);

// UTF-8 file, one utterance per line: `<utt-id>\t<sym> <sym> ...`.
// Blank lines are skipped; a repeated id is kParseError.
std::map<std::string, PhonemeSeq> ReadPhonemeFile(const std::string &path);

}  // namespace speechmeter

#endif  // SPEECHMETER_PER_H_

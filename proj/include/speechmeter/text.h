// include/speechmeter/text.h

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

#ifndef SPEECHMETER_TEXT_H_
#define SPEECHMETER_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace speechmeter {

// Unicode NFC normalization of a UTF-8 string. Invalid UTF-8 is an error.
std::string NfcNormalize(std::string_view utf8);

// Lowercases and strips punctuation (Unicode P* categories) from a single
// orthographic word. "Vijver," -> "vijver", "well-known" -> "wellknown".
std::string NormalizeWord(std::string_view utf8);

// Whitespace tokenization after NormalizeWord; tokens that become empty
// (pure punctuation) are dropped.
std::vector<std::string> TokenizeTranscript(std::string_view utf8);

// Splits on ASCII whitespace, dropping empty pieces.
std::vector<std::string> SplitWhitespace(std::string_view s);

// Splits one CSV line on commas. No quoting support: the toolkit's CSV
// files never contain embedded commas.
std::vector<std::string> SplitCsvLine(std::string_view line);

std::string Trim(std::string_view s);

// Fixed-point rendering with the given number of decimals; "-0.000" is
// rendered as "0.000".
std::string FormatFixed(double value, int decimals);

// Shortest round-trip rendering ("%.17g").
std::string FormatFull(double value);

// Parses a finite double; throws Error(kParseError) naming `what`.
double ParseDouble(std::string_view s, std::string_view what);

}  // namespace speechmeter

#endif  // SPEECHMETER_TEXT_H_

// include/speechmeter/error.h

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

#ifndef SPEECHMETER_ERROR_H_
#define SPEECHMETER_ERROR_H_

#include <stdexcept>
#include <string>

namespace speechmeter {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kParseError,
  // audio_io
  kNotWav,
  kUnsupportedEncoding,
  kSilentInput,
  kTooShort,
  // vad_rate
  kEmptyTrack,
  kZeroDuration,
  kNoSpeechDetected,
  // snr
  kDegenerateData,
  kTooFewFrames,
  // distance
  kIntervalOutOfRange,
  kDimensionMismatch,
  kNoReference,
  kEmptyUtterance,
  // per
  kEmptyReference,
  // xppg_pca
  kInsufficientData,
  kAllConstant,
  // stats
  kEmpty,
  kIncompleteMatrix,
  kZeroVariance,
  kLengthMismatch,
  kConstantInput,
  // pipeline
  kMissingFile,
  kDuplicateUtterance,
  kNoSuccessfulUtterances,
};

const char *ErrorCodeName(ErrorCode code);

/// Every failure raised by the library carries one of the codes above, so
/// callers (the batch runner in particular) can record and continue.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace speechmeter

#endif  // SPEECHMETER_ERROR_H_

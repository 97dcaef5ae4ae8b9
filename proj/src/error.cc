// src/error.cc

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

#include "speechmeter/error.h"

namespace speechmeter {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kNotWav: return "NotWav";
    case ErrorCode::kUnsupportedEncoding: return "UnsupportedEncoding";
    case ErrorCode::kSilentInput: return "SilentInput";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kEmptyTrack: return "EmptyTrack";
    case ErrorCode::kZeroDuration: return "ZeroDuration";
    case ErrorCode::kNoSpeechDetected: return "NoSpeechDetected";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kTooFewFrames: return "TooFewFrames";
    case ErrorCode::kIntervalOutOfRange: return "IntervalOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoReference: return "NoReference";
    case ErrorCode::kEmptyUtterance: return "EmptyUtterance";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kAllConstant: return "AllConstant";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kIncompleteMatrix: return "IncompleteMatrix";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kConstantInput: return "ConstantInput";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kDuplicateUtterance: return "DuplicateUtterance";
    case ErrorCode::kNoSuccessfulUtterances: return "NoSuccessfulUtterances";
  }
  return "Unknown";
}

}  // namespace speechmeter

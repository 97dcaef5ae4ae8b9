// tests/distance_test.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "speechmeter/distance.h"
#include "speechmeter/frame_matrix.h"
#include "test_util.h"

using namespace speechmeter;
using testing::CodeOf;

namespace {

FrameMatrix Random(size_t rows, size_t cols, std::mt19937_64 &rng, double hop = 0.02) {
  std::normal_distribution<double> g(0.0, 1.0);
  FrameMatrix m(rows, cols, hop);
  for (size_t r = 0; r < rows; ++r)
    for (size_t c = 0; c < cols; ++c) m(r, c) = g(rng);
  return m;
}

oracle::Matrix ToRows(const FrameMatrix &m) {
  oracle::Matrix out(m.NumRows());
  for (size_t r = 0; r < m.NumRows(); ++r) out[r].assign(m.Row(r).begin(), m.Row(r).end());
  return out;
}

FrameMatrix RepeatFrames(const FrameMatrix &m) {
  FrameMatrix out(2 * m.NumRows(), m.NumCols(), m.HopSeconds() / 2);
  for (size_t r = 0; r < out.NumRows(); ++r)
    for (size_t c = 0; c < m.NumCols(); ++c) out(r, c) = m(r / 2, c);
  return out;
}

}  // namespace

TEST_CASE("FMAT round trip and format errors") {
  testing::TempDir dir("fmat");
  std::mt19937_64 rng(1);
  FrameMatrix m = Random(7, 3, rng);
  WriteFmat(m, dir.File("m.fmat"));
  FrameMatrix back = ReadFmat(dir.File("m.fmat"));
  REQUIRE(back.NumRows() == 7);
  REQUIRE(back.NumCols() == 3);
  CHECK(back.HopSeconds() == 0.02);
  for (size_t r = 0; r < 7; ++r)
    for (size_t c = 0; c < 3; ++c)
      CHECK(back(r, c) == static_cast<double>(static_cast<float>(m(r, c))));

  const std::string bytes = testing::ReadText(dir.File("m.fmat"));
  CHECK(bytes.substr(0, 8) == std::string("FMAT1\0\0\0", 8));
  CHECK(bytes.size() == 8 + 4 + 4 + 8 + 7 * 3 * 4);
  testing::WriteText(dir.File("bad.fmat"), "FMAT2" + bytes.substr(5));
  CHECK(CodeOf([&] { ReadFmat(dir.File("bad.fmat")); }) == ErrorCode::kParseError);
  testing::WriteText(dir.File("short.fmat"), bytes.substr(0, bytes.size() - 3));
  CHECK(CodeOf([&] { ReadFmat(dir.File("short.fmat")); }) == ErrorCode::kParseError);
  CHECK(CodeOf([&] { ReadFmat(dir.File("none.fmat")); }) == ErrorCode::kIo);
}

TEST_CASE("word interval CSV") {
  testing::TempDir dir("words");
  testing::WriteText(dir.File("w.csv"), "word,start_s,end_s\nthe,0.00,0.20\nSun,0.2,0.5\n");
  auto w = ReadWordIntervals(dir.File("w.csv"));
  REQUIRE(w.size() == 2);
  CHECK(w[1].word == "Sun");
  CHECK(w[1].end_s == 0.5);
  testing::WriteText(dir.File("x.csv"), "token,a,b\nthe,0,1\n");
  CHECK(CodeOf([&] { ReadWordIntervals(dir.File("x.csv")); }) == ErrorCode::kParseError);
  testing::WriteText(dir.File("y.csv"), "word,start_s,end_s\nthe,0.5,0.2\n");
  CHECK(CodeOf([&] { ReadWordIntervals(dir.File("y.csv")); }) == ErrorCode::kParseError);
}

TEST_CASE("SegmentWords") {
  std::mt19937_64 rng(2);
  FrameMatrix utt = Random(30, 4, rng);
  std::vector<WordInterval> whole = {{"all", 0.0, 0.6}};
  auto seg = SegmentWords(utt, whole);
  REQUIRE(seg.size() == 1);
  CHECK(seg[0].frames.Data() == utt.Data());

  std::vector<WordInterval> one = {{"x", 0.2, 0.22}};
  auto s1 = SegmentWords(utt, one);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].frames.NumRows() == 1);
  CHECK(s1[0].frames.Data() == utt.RowRange(10, 11).Data());

  std::vector<WordInterval> tiles = {{"a", 0.0, 0.2}, {"b", 0.2, 0.4}, {"c", 0.4, 0.6}};
  auto s3 = SegmentWords(utt, tiles);
  REQUIRE(s3.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(s3[i].frames.NumRows() == 10);
    CHECK(s3[i].frames.Data() == utt.RowRange(10 * i, 10 * i + 10).Data());
  }

  // Partial frames are included at both edges.
  std::vector<WordInterval> partial = {{"p", 0.05, 0.11}};
  CHECK(SegmentWords(utt, partial)[0].frames.NumRows() == 4);

  std::vector<WordInterval> overhang = {{"o", 0.58, 0.615}};
  CHECK(SegmentWords(utt, overhang)[0].frames.NumRows() == 1);
  std::vector<WordInterval> beyond = {{"o", 0.5, 0.7}};
  CHECK(CodeOf([&] { SegmentWords(utt, beyond); }) == ErrorCode::kIntervalOutOfRange);

  std::vector<WordInterval> empty = {{"e", 0.605, 0.615}, {"a", 0.0, 0.1}};
  std::vector<std::string> warnings;
  auto kept = SegmentWords(utt, empty, &warnings);
  CHECK(kept.size() == 1);
  CHECK(warnings.size() == 1);
}

TEST_CASE("frame metrics") {
  std::vector<double> a = {1, 0}, b = {0, 2}, z = {0, 0};
  CHECK(CosineDistance(a, a) == 0.0);
  CHECK(CosineDistance(a, b) == doctest::Approx(1.0));
  CHECK(CosineDistance(a, std::vector<double>{-3, 0}) == doctest::Approx(2.0));
  CHECK(CosineDistance(z, z) == 0.0);
  CHECK(CosineDistance(z, a) == 1.0);
  CHECK(EuclideanDistance(a, b) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("DTW basics") {
  std::mt19937_64 rng(3);
  for (size_t t : {1, 4, 9}) {
    FrameMatrix a = Random(t, 5, rng);
    CHECK(DtwDistance(a, a) == 0.0);
    CHECK(DtwDistance(a, a, FrameMetric::kEuclidean) == 0.0);
  }
  FrameMatrix zero(1, 1, 0.02, {0.0}), one(1, 1, 0.02, {1.0});
  CHECK(DtwDistance(zero, one, FrameMetric::kEuclidean) == 1.0);
  CHECK(CodeOf([&] { DtwDistance(Random(3, 2, rng), Random(3, 4, rng)); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("DTW equals the exhaustive alignment minimum") {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<size_t> len(1, 6), dim(1, 3);
  for (int i = 0; i < 200; ++i) {
    size_t d = dim(rng);
    FrameMatrix a = Random(len(rng), d, rng), b = Random(len(rng), d, rng);
    for (bool euclidean : {false, true}) {
      double expect = oracle::DtwByEnumeration(ToRows(a), ToRows(b), euclidean);
      CHECK(DtwDistance(a, b, euclidean ? FrameMetric::kEuclidean : FrameMetric::kCosine) ==
            expect);
    }
  }
  // A 3x3 grid has D(2,2) = 13 monotone paths (central Delannoy number).
  FrameMatrix a = Random(3, 2, rng), b = Random(3, 2, rng);
  oracle::DtwByEnumeration(ToRows(a), ToRows(b), true);
  CHECK(oracle::LastPathCount() == 13);
}

TEST_CASE("DTW symmetry and frame repetition") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<size_t> len(1, 12);
  for (int i = 0; i < 100; ++i) {
    FrameMatrix a = Random(len(rng), 3, rng), b = Random(len(rng), 3, rng);
    CHECK(DtwDistance(a, b) == doctest::Approx(DtwDistance(b, a)).epsilon(1e-12));
    CHECK(DtwDistance(a, b, FrameMetric::kEuclidean) ==
          doctest::Approx(DtwDistance(b, a, FrameMetric::kEuclidean)).epsilon(1e-12));
  }
  // Constant-rate pairs: b is a small perturbation of a, so the diagonal
  // is the optimal path before and after repeating every frame.
  std::normal_distribution<double> g(0.0, 0.01);
  for (int i = 0; i < 50; ++i) {
    FrameMatrix a = Random(len(rng) + 2, 4, rng);
    FrameMatrix b = a;
    for (size_t r = 0; r < b.NumRows(); ++r)
      for (size_t c = 0; c < 4; ++c) b(r, c) += g(rng);
    for (FrameMetric metric : {FrameMetric::kCosine, FrameMetric::kEuclidean}) {
      double base = DtwDistance(a, b, metric);
      double doubled = DtwDistance(RepeatFrames(a), RepeatFrames(b), metric);
      CHECK(std::abs(base - doubled) < 1e-9);
    }
  }
}

TEST_CASE("NAD word and utterance scores") {
  std::mt19937_64 rng(6);
  FrameMatrix target = Random(8, 3, rng);
  FrameMatrix r1 = Random(7, 3, rng), r2 = Random(9, 3, rng);

  ReferencePool same;
  same.Add("Sun", "ref", target);
  CHECK(NadWord(target, "sun", same, "tgt") == 0.0);

  ReferencePool two;
  two.Add("sun", "a", r1);
  two.Add("SUN,", "b", r2);
  const double d1 = DtwDistance(target, r1), d2 = DtwDistance(target, r2);
  CHECK(NadWord(target, "sun", two, "tgt") == doctest::Approx((d1 + d2) / 2));

  // A planted identical self-copy must not pull the score to zero.
  ReferencePool with_self = two;
  with_self.Add("sun", "tgt", target);
  CHECK(NadWord(target, "sun", with_self, "tgt") == doctest::Approx((d1 + d2) / 2));
  // An identical occurrence from another speaker never raises the score.
  ReferencePool with_copy = two;
  with_copy.Add("sun", "other", target);
  CHECK(NadWord(target, "sun", with_copy, "tgt") <= NadWord(target, "sun", two, "tgt"));

  CHECK(CodeOf([&] { NadWord(target, "moon", two, "tgt"); }) == ErrorCode::kNoReference);
  ReferencePool only_self;
  only_self.Add("sun", "tgt", r1);
  CHECK(CodeOf([&] { NadWord(target, "sun", only_self, "tgt"); }) == ErrorCode::kNoReference);

  CHECK(NadUtterance(std::vector<double>{0, 0, 0}) == 0.0);
  CHECK(NadUtterance(std::vector<double>{1, 2, 3}) == 2.0);
  CHECK(CodeOf([] { NadUtterance(std::vector<double>{}); }) == ErrorCode::kEmptyUtterance);
}

TEST_CASE("rare words are omitted and counted") {
  std::mt19937_64 rng(7);
  ReferencePool pool;
  FrameMatrix the = Random(5, 3, rng), sun = Random(6, 3, rng);
  pool.Add("the", "a", the);
  pool.Add("sun", "a", sun);
  std::vector<WordSegment> segs = {{"the", Random(4, 3, rng)},
                                   {"xylophone", Random(4, 3, rng)},
                                   {"sun", Random(5, 3, rng)}};
  NadResult res = ScoreUtteranceNad(segs, pool, "tgt");
  CHECK(res.words_scored == 2);
  CHECK(res.words_omitted == 1);
  const double expect = (DtwDistance(segs[0].frames, the) + DtwDistance(segs[2].frames, sun)) / 2;
  CHECK(res.score == doctest::Approx(expect));

  std::vector<WordSegment> none = {{"xylophone", Random(4, 3, rng)}};
  CHECK(CodeOf([&] { ScoreUtteranceNad(none, pool, "tgt"); }) == ErrorCode::kEmptyUtterance);
}

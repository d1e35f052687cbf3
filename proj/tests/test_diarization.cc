// tests/test_diarization.cc

// Copyright 2026  The sotkit Authors

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

#include <cmath>
#include <random>

#include "doctest.h"
#include "sotkit/diarization.h"
#include "test_util.h"

using namespace sotkit;
using namespace sotkit::testing;

namespace {

constexpr FrameProbs kSil{0.05, 0.05, 0.9};
constexpr FrameProbs kChildSpeech{0.9, 0.05, 0.05};
constexpr FrameProbs kAdultSpeech{0.05, 0.9, 0.05};

// n frames of speech with silence on frames [lo, hi).
FrameProbSequence WithSilence(size_t n, size_t lo, size_t hi) {
  std::vector<FrameProbs> p(n, kChildSpeech);
  for (size_t i = lo; i < hi; ++i) p[i] = kSil;
  return FrameProbSequence(0.02, p);
}

}  // namespace

TEST_CASE("frame probability validation") {
  CHECK_THROWS_AS(FrameProbSequence(0.02, {{0.5, 0.5, 0.5}}), Error);
  CHECK_THROWS_AS(FrameProbSequence(0.02, {{-0.1, 0.6, 0.5}}), Error);
  CHECK_THROWS_AS(FrameProbSequence(0.0, {}), Error);
  CHECK_NOTHROW(FrameProbSequence(0.02, {{0.2, 0.3, 0.5 + 5e-7}}));
}

TEST_CASE("silence region shrinks by 0.2 s at both ends") {
  const SuppressionSet s = SilenceRegions(WithSilence(400, 100, 250));
  REQUIRE(s.regions().size() == 1);
  CHECK(s.regions()[0].start == 2.2);
  CHECK(s.regions()[0].end == 4.8);
}

TEST_CASE("silence threshold is inclusive") {
  std::vector<FrameProbs> p(100, kChildSpeech);
  for (size_t i = 20; i < 80; ++i) p[i] = {0.15, 0.15, 0.7};
  const SuppressionSet s = SilenceRegions(FrameProbSequence(0.02, p));
  REQUIRE(s.regions().size() == 1);
  CHECK(s.regions()[0].start == doctest::Approx(0.6));
  CHECK(s.regions()[0].end == doctest::Approx(1.4));
  for (size_t i = 20; i < 80; ++i) p[i] = {0.16, 0.15, 0.69};
  CHECK(SilenceRegions(FrameProbSequence(0.02, p)).empty());
}

TEST_CASE("short silence vanishes after shrinking") {
  CHECK(SilenceRegions(WithSilence(200, 50, 65)).empty());  // [1.0, 1.3]
  CHECK(SilenceRegions(WithSilence(200, 50, 70)).empty());  // exactly 0.4 s
  CHECK(SilenceRegions(WithSilence(200, 50, 71)).regions().size() == 1);
}

TEST_CASE("all speech gives no regions") {
  CHECK(SilenceRegions(WithSilence(300, 0, 0)).empty());
}

TEST_CASE("silence regions with zero shrink are the exact frame runs") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<FrameProbs> p(200);
    std::vector<bool> sil(200);
    for (size_t i = 0; i < p.size(); ++i) {
      sil[i] = rng() % 3 == 0;
      p[i] = sil[i] ? kSil : kAdultSpeech;
    }
    const FrameProbSequence f(0.02, p);
    const SuppressionSet s0 = SilenceRegions(f, 0.7, 0.0);
    std::vector<bool> covered(200, false);
    for (const TimeInterval &r : s0.regions()) {
      const long a = std::lround(r.start / 0.02), b = std::lround(r.end / 0.02);
      CHECK(std::fabs(a * 0.02 - r.start) < 1e-9);
      CHECK(std::fabs(b * 0.02 - r.end) < 1e-9);
      for (long i = a; i < b; ++i) covered[static_cast<size_t>(i)] = true;
    }
    CHECK(covered == sil);
    const SuppressionSet s = SilenceRegions(f);
    for (size_t i = 1; i < s.regions().size(); ++i)
      CHECK(s.regions()[i].start > s.regions()[i - 1].end);
    for (const TimeInterval &r : s.regions()) CHECK(r.duration() > 0.0);
  }
}

TEST_CASE("rasterize by frame centre") {
  SUBCASE("single child utterance") {
    const FrameLabelSequence l =
        RasterizeLabels(Transcript({Utt(kC, 0, 1, {"a"})}), 0.02, {0, 2});
    REQUIRE(l.labels.size() == 100);
    for (size_t n = 0; n < 100; ++n)
      CHECK(l.labels[n] == (n < 50 ? FrameLabel::kChild : FrameLabel::kSilence));
  }
  SUBCASE("empty transcript") {
    const FrameLabelSequence l = RasterizeLabels(Transcript(), 0.02, {0, 1});
    CHECK(l.labels == std::vector<FrameLabel>(50, FrameLabel::kSilence));
  }
  SUBCASE("adjacent utterances") {
    const FrameLabelSequence l = RasterizeLabels(
        Transcript({Utt(kC, 0, 1, {"a"}), Utt(kA, 1, 2, {"b"})}), 0.02, {0, 2});
    CHECK(l.labels[49] == FrameLabel::kChild);  // centre 0.99
    CHECK(l.labels[50] == FrameLabel::kAdult);  // centre 1.01
  }
}

TEST_CASE("rasterize then segment recovers spans within a frame") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Utterance> utts;
    double cursor = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double s = cursor + 0.05 + u(rng), e = s + 0.05 + u(rng);
      utts.push_back(Utt(rng() % 2 ? kA : kC, s, e, {"w"}));
      cursor = e;
    }
    const Transcript t(utts);
    const std::vector<RoleSegment> segs =
        LabelsToSegments(RasterizeLabels(t, 0.02, {0.0, cursor + 0.5}));
    REQUIRE(segs.size() == t.size());
    for (size_t k = 0; k < segs.size(); ++k) {
      CHECK(segs[k].role == t.utterances()[k].role);
      CHECK(std::fabs(segs[k].span.start - t.utterances()[k].span.start) <= 0.02 + 1e-9);
      CHECK(std::fabs(segs[k].span.end - t.utterances()[k].span.end) <= 0.02 + 1e-9);
    }
  }
}

TEST_CASE("argmax labels") {
  const FrameProbSequence f(0.02, {kSil, kChildSpeech, kAdultSpeech, {0.4, 0.4, 0.2},
                                   {0.4, 0.2, 0.4}});
  const FrameLabelSequence l = ArgmaxLabels(f);
  CHECK(l.labels == std::vector<FrameLabel>{FrameLabel::kSilence, FrameLabel::kChild,
                                            FrameLabel::kAdult, FrameLabel::kChild,
                                            FrameLabel::kSilence});
}

TEST_CASE("word attribution") {
  SUBCASE("dominant class") {
    const FrameProbSequence f(0.02, std::vector<FrameProbs>(100, kChildSpeech));
    CHECK(AttributeWords({{"hi", {1.0, 1.5}}}, f)[0].role == kC);
  }
  SUBCASE("symmetric alternation ties to the child") {
    std::vector<FrameProbs> p;
    for (int i = 0; i < 100; ++i)
      p.push_back(i % 2 ? FrameProbs{0.1, 0.8, 0.1} : FrameProbs{0.8, 0.1, 0.1});
    CHECK(AttributeWords({{"hi", {0.2, 1.0}}}, FrameProbSequence(0.02, p))[0].role == kC);
  }
  SUBCASE("word shorter than a frame uses the frame at its midpoint") {
    std::vector<FrameProbs> p(10, kChildSpeech);
    p[0] = kAdultSpeech;
    CHECK(AttributeWords({{"a", {0.0, 0.01}}}, FrameProbSequence(0.02, p))[0].role == kA);
    // Centre of frame 1 is 0.03; a word in [0.021, 0.029] covers no centre.
    p[1] = kAdultSpeech;
    p[0] = kChildSpeech;
    CHECK(AttributeWords({{"b", {0.021, 0.029}}}, FrameProbSequence(0.02, p))[0].role == kA);
  }
  SUBCASE("zero probabilities are floored") {
    std::vector<FrameProbs> p(10, FrameProbs{0.0, 1.0, 0.0});
    CHECK(AttributeWords({{"a", {0.0, 0.2}}}, FrameProbSequence(0.02, p))[0].role == kA);
  }
  SUBCASE("words past the last frame are rejected") {
    const FrameProbSequence f(0.02, std::vector<FrameProbs>(10, kChildSpeech));
    CHECK(AttributeWords({{"a", {0.1, 0.2}}}, f).size() == 1);
    CHECK(CodeOf([&] { AttributeWords({{"a", {0.1, 0.25}}}, f); }) == ErrorCode::kOutOfRange);
  }
}

TEST_CASE("attribution is invariant to rescaling the speech classes of a frame") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.01, 1.0), c(0.1, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<FrameProbs> p, q;
    for (int i = 0; i < 60; ++i) {
      double a = u(rng), b = u(rng), s = u(rng);
      const double z = a + b + s;
      a /= z; b /= z; s /= z;
      p.push_back({a, b, s});
      const double k = c(rng);
      const double z2 = k * a + k * b + s;
      q.push_back({k * a / z2, k * b / z2, s / z2});
    }
    std::vector<TimedText> words;
    for (int w = 0; w < 10; ++w) {
      const double s = 0.1 * w;
      words.push_back({"w", {s, s + 0.1}});
    }
    const auto wp = AttributeWords(words, FrameProbSequence(0.02, p));
    const auto wq = AttributeWords(words, FrameProbSequence(0.02, q));
    for (size_t i = 0; i < words.size(); ++i) CHECK(wp[i].role == wq[i].role);
  }
}

TEST_CASE("segment postprocessing") {
  SUBCASE("merge small same-role gap") {
    const auto out = PostprocessSegments({{kC, {0, 1}}, {kC, {1.2, 2}}});
    CHECK(out == std::vector<RoleSegment>{{kC, {0, 2}}});
  }
  SUBCASE("gap of exactly 0.3 is kept apart") {
    const auto out = PostprocessSegments({{kC, {0, 1}}, {kC, {1.3, 2}}});
    CHECK(out.size() == 2);
  }
  SUBCASE("drop short") {
    CHECK(PostprocessSegments({{kC, {0, 0.15}}}).empty());
    CHECK(PostprocessSegments({{kC, {0, 0.2}}}).size() == 1);
  }
  SUBCASE("different roles never merge") {
    const std::vector<RoleSegment> in = {{kC, {0, 1}}, {kA, {1.1, 2}}};
    CHECK(PostprocessSegments(in) == in);
  }
  SUBCASE("merge happens before the duration filter") {
    const auto out = PostprocessSegments({{kC, {0, 0.1}}, {kC, {0.2, 0.3}}});
    CHECK(out == std::vector<RoleSegment>{{kC, {0, 0.3}}});
  }
  SUBCASE("transitive merge across an interleaved role") {
    const auto out =
        PostprocessSegments({{kC, {0, 1}}, {kA, {1.05, 1.1}}, {kC, {1.15, 2}}});
    CHECK(out == std::vector<RoleSegment>{{kC, {0, 2}}});
  }
}

TEST_CASE("segment postprocessing is idempotent") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> gap(0.0, 0.6), len(0.01, 0.8);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<RoleSegment> segs;
    double t = 0.0;
    for (int k = 0; k < 12; ++k) {
      const double s = t + gap(rng), e = s + len(rng);
      segs.push_back({rng() % 2 ? kA : kC, {s, e}});
      t = e;
    }
    const auto once = PostprocessSegments(segs);
    CHECK(PostprocessSegments(once) == once);
    for (const RoleSegment &s : once) CHECK(s.span.duration() >= 0.2 - 1e-9);
  }
}

// tests/test_sot.cc

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
#include "sotkit/sot.h"
#include "test_util.h"

using namespace sotkit;
using namespace sotkit::testing;

namespace {

using T = Token;

TokenStream Stream(std::vector<Token> toks, bool truncated = false) {
  return TokenStream{std::move(toks), truncated};
}

}  // namespace

TEST_CASE("quantization") {
  CHECK(QuantizeTime(0.5) == 25);
  CHECK(QuantizeTime(1.24) == 62);
  CHECK(QuantizeTime(30.0) == 1500);
  CHECK(QuantizeTime(0.0) == 0);
  CHECK(QuantizeTime(0.009) == 0);
  CHECK(QuantizeTime(0.011) == 1);
  CHECK_THROWS_AS(QuantizeTime(30.02), Error);
  CHECK_THROWS_AS(QuantizeTime(-0.1), Error);
}

TEST_CASE("serialize single utterance") {
  const TokenStream s = SerializeTranscript(Transcript({Utt(kC, 0.5, 1.24, {"hi", "there"})}));
  const std::vector<Token> want = {T::Header(), T::Timestamp(25), T::Speaker(kC),
                                   T::Text("hi"), T::Text("there"), T::Timestamp(62),
                                   T::Eot()};
  CHECK(s.tokens == want);
  CHECK_FALSE(s.truncated);
}

TEST_CASE("serialize empty transcript") {
  CHECK(SerializeTranscript(Transcript()).tokens == std::vector<Token>{T::Header(), T::Eot()});
}

TEST_CASE("serialize two utterances keeps the token order") {
  const TokenStream s = SerializeTranscript(
      Transcript({Utt(kC, 0, 1, {"a", "b"}), Utt(kA, 1, 2, {"c"})}));
  std::vector<TokenKind> kinds;
  for (const Token &t : s.tokens) kinds.push_back(t.kind);
  using K = TokenKind;
  CHECK(kinds == std::vector<K>{K::kHeader, K::kTimestamp, K::kSpeakerChild, K::kText,
                                K::kText, K::kTimestamp, K::kTimestamp, K::kSpeakerAdult,
                                K::kText, K::kTimestamp, K::kEndOfTranscript});
}

TEST_CASE("serialize errors") {
  CHECK_THROWS_AS(SerializeTranscript(Transcript({Utt(kC, 29, 31, {"a"})})), Error);
  try {
    SerializeTranscript(Transcript({Utt(kC, 0, 1, {})}));
    FAIL("expected EmptyUtterance");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kEmptyUtterance);
  }
}

TEST_CASE("parse a valid stream") {
  const Transcript t({Utt(kC, 0.5, 1.24, {"hi", "there"}), Utt(kA, 2, 3, {"yes"})}, {0, 30});
  const ParseResult r = ParseTokenStream(SerializeTranscript(t));
  CHECK(r.transcript == t);
  CHECK(r.report == StructuralErrorReport{0, 0, 0, false, 2});
}

TEST_CASE("missing speaker") {
  const ParseResult r = ParseTokenStream(
      Stream({T::Header(), T::Timestamp(0), T::Text("hi"), T::Timestamp(50), T::Eot()}));
  CHECK(r.transcript.empty());
  CHECK(r.report.miss_speaker == 1);
  CHECK(r.report.missing_total() == 1);
}

TEST_CASE("missing timestamp") {
  const auto r = ValidateStructure(Stream({T::Header(), T::Speaker(kC), T::Text("a"), T::Eot()}));
  CHECK(r.miss_timestamp == 1);
  CHECK(r.missing_total() == 1);
}

TEST_CASE("missing both") {
  const auto r = ValidateStructure(Stream({T::Header(), T::Text("a"), T::Eot()}));
  CHECK(r.miss_both == 1);
  CHECK(r.missing_total() == 1);
}

TEST_CASE("missing end timestamp is repaired from the next start") {
  const ParseResult r = ParseTokenStream(
      Stream({T::Header(), T::Timestamp(10), T::Speaker(kC), T::Text("a"), T::Speaker(kA),
              T::Text("b"), T::Timestamp(90), T::Eot()}));
  // First group lacks its end; the second lacks its start.
  CHECK(r.report.miss_timestamp == 2);
  REQUIRE(r.transcript.size() == 2);
  CHECK(r.transcript.utterances()[0].span == TimeInterval{GridTime(10), GridTime(90)});
  CHECK(r.transcript.utterances()[1].role == kA);
}

TEST_CASE("missing final end timestamp drops the utterance") {
  const ParseResult r = ParseTokenStream(Stream(
      {T::Header(), T::Timestamp(10), T::Speaker(kC), T::Text("a"), T::Eot()}));
  CHECK(r.report.miss_timestamp == 1);
  CHECK(r.transcript.empty());
}

TEST_CASE("truncated stream drops the trailing partial utterance") {
  std::vector<Token> toks = {T::Header(), T::Timestamp(0), T::Speaker(kC), T::Text("a"),
                             T::Timestamp(20), T::Timestamp(30), T::Speaker(kA)};
  for (int i = 0; i < 20; ++i) toks.push_back(T::Text("no"));
  const ParseResult r = ParseTokenStream(Stream(toks, true));
  CHECK(r.report.infinite_loop);
  CHECK(r.report.missing_total() == 0);
  REQUIRE(r.transcript.size() == 1);
  CHECK(r.transcript.utterances()[0].role == kC);
}

TEST_CASE("round trip on random grid transcripts") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const Transcript t = RandomGridTranscript(rng, 12);
    const TokenStream s = SerializeTranscript(t);
    const ParseResult r = ParseTokenStream(s);
    CHECK(r.report.missing_total() == 0);
    CHECK_FALSE(r.report.infinite_loop);
    REQUIRE(r.transcript.size() == t.size());
    for (size_t k = 0; k < t.size(); ++k) {
      const Utterance &a = t.utterances()[k], &b = r.transcript.utterances()[k];
      CHECK(a.role == b.role);
      CHECK(a.words == b.words);
      CHECK(std::fabs(a.span.start - b.span.start) <= 0.01);
      CHECK(std::fabs(a.span.end - b.span.end) <= 0.01);
    }
    CHECK(ValidateStructure(s) == r.report);
  }
}

TEST_CASE("round trip off the grid stays within half a step") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int i = 0; i < 300; ++i) {
    std::vector<Utterance> utts;
    double cursor = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double s = cursor + 0.05 + u(rng), e = s + 0.05 + u(rng);
      utts.push_back(Utt(k % 2 ? kA : kC, s, e, {"w"}));
      cursor = e;
    }
    const Transcript t(utts);
    const ParseResult r = ParseTokenStream(SerializeTranscript(t));
    REQUIRE(r.transcript.size() == t.size());
    for (size_t k = 0; k < t.size(); ++k) {
      CHECK(std::fabs(t.utterances()[k].span.start - r.transcript.utterances()[k].span.start) <=
            0.01 + 1e-9);
      CHECK(std::fabs(t.utterances()[k].span.end - r.transcript.utterances()[k].span.end) <=
            0.01 + 1e-9);
    }
  }
}

TEST_CASE("parser is total on random token soup") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> kind(0, 5), len(0, 256), ts(0, kMaxTimestamp);
  for (int i = 0; i < 3000; ++i) {
    TokenStream s;
    const int n = len(rng);
    for (int k = 0; k < n; ++k) {
      switch (kind(rng)) {
        case 0: s.tokens.push_back(T::Header()); break;
        case 1: s.tokens.push_back(T::Timestamp(ts(rng))); break;
        case 2: s.tokens.push_back(T::Speaker(kC)); break;
        case 3: s.tokens.push_back(T::Speaker(kA)); break;
        case 4: s.tokens.push_back(T::Text("x")); break;
        default: if (k + 1 == n) s.tokens.push_back(T::Eot()); else s.tokens.push_back(T::Text("y"));
      }
    }
    s.truncated = (i % 3 == 0);
    ParseResult r;
    CHECK_NOTHROW(r = ParseTokenStream(s));
    CHECK(r.report.missing_total() <= r.report.utterances);
    CHECK(ValidateStructure(s) == r.report);
  }
}

TEST_CASE("token strings") {
  CHECK(TokenString(T::Timestamp(25)) == "<|0.50|>");
  CHECK(TokenString(T::Speaker(kC)) == "<child>");
  CHECK(TokenString(T::Text("hi")) == "hi");
}

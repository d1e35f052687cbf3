// tests/test_metrics_asr.cc

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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sotkit/metrics_asr.h"
#include "oracles.h"
#include "test_util.h"

using namespace sotkit;
using namespace sotkit::testing;

namespace {

using Op = AlignOpKind;

int64_t Levenshtein(const std::vector<Word> &r, const std::vector<Word> &h) {
  std::vector<int64_t> prev(h.size() + 1), cur(h.size() + 1);
  for (size_t j = 0; j <= h.size(); ++j) prev[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= r.size(); ++i) {
    cur[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= h.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1,
                         prev[j - 1] + (r[i - 1].text != h[j - 1].text)});
    std::swap(prev, cur);
  }
  return prev[h.size()];
}

std::vector<Word> Random(std::mt19937_64 &rng, size_t n) {
  static const char *vocab[] = {"a", "b", "c"};
  std::vector<Word> out;
  for (size_t i = 0; i < n; ++i) out.push_back(W(vocab[rng() % 3], rng() % 2 ? kA : kC));
  return out;
}

Transcript RoleSwapped(const Transcript &t) {
  std::vector<Utterance> u = t.utterances();
  for (Utterance &x : u) x.role = OtherRole(x.role);
  return Transcript(u, t.session_span());
}

}  // namespace

TEST_CASE("identical streams align as matches") {
  const std::vector<Word> r = {W("a", kC), W("b", kA), W("c", kC)};
  const Alignment a = AlignWords(r, r);
  REQUIRE(a.ops.size() == 3);
  for (const AlignOp &op : a.ops) CHECK(op.kind == Op::kMatch);
  CHECK(AlignmentCost(a, r, r) == std::pair<int64_t, int64_t>{0, 0});
}

TEST_CASE("empty hypothesis deletes") {
  const std::vector<Word> r = {W("a", kC)};
  const Alignment a = AlignWords(r, {});
  CHECK(a.ops == std::vector<AlignOp>{{Op::kDel, 0, -1}});
  const RoleErrorCounts c = ClassifyErrors(a, r, {});
  CHECK(c[kC] == RoleCounts{0, 1, 0, 0, 1});
  CHECK(c[kA] == RoleCounts{});
  CHECK(AlignWords({}, {}).ops.empty());
}

TEST_CASE("worked example alignment") {
  const auto r = WorkedExampleRef(), h = WorkedExampleHyp();
  const Alignment a = AlignWords(r, h);
  const std::vector<AlignOp> want = {{Op::kIns, -1, 0}, {Op::kMatch, 0, 1}, {Op::kSub, 1, 2},
                                     {Op::kMatch, 2, 3}, {Op::kMatch, 3, 4}, {Op::kMatch, 4, 5},
                                     {Op::kSub, 5, 6}, {Op::kDel, 6, -1}};
  CHECK(a.ops == want);
}

TEST_CASE("worked example error components") {
  const auto r = WorkedExampleRef(), h = WorkedExampleHyp();
  const RoleErrorCounts c = ClassifyErrors(AlignWords(r, h), r, h);
  CHECK(c[kC] == RoleCounts{1, 0, 1, 1, 3});
  CHECK(c[kA] == RoleCounts{0, 1, 1, 1, 4});
  const ScoreReport s = Score(c);
  CHECK(s[kC].mtwer == Ratio{1, 1});
  CHECK(s[kA].mtwer == Ratio{3, 4});
  CHECK(s.macro_mtwer == Ratio{7, 8});
  CHECK(s[kC].wer == Ratio{2, 3});
  CHECK(s[kC].aer == Ratio{1, 3});
  CHECK(s[kA].wer == Ratio{1, 2});
  CHECK(s[kA].aer == Ratio{1, 4});
}

TEST_CASE("worked example through transcripts") {
  const Transcript ref({Utt(kC, 0, 3, {"How", "are", "you"}),
                        Utt(kA, 3, 7, {"I", "am", "good,", "thanks."})});
  const Transcript hyp({Utt(kC, 0, 3, {"oh", "how", "were"}), Utt(kA, 3, 6, {"you", "I", "am"}),
                        Utt(kC, 6, 7, {"great"})});
  const RoleErrorCounts c = CountErrors(ref, hyp);
  CHECK(c[kC] == RoleCounts{1, 0, 1, 1, 3});
  CHECK(c[kA] == RoleCounts{0, 1, 1, 1, 4});
}

TEST_CASE("role swap on one word is an attribution error only") {
  const std::vector<Word> r = {W("a", kC), W("b", kA), W("c", kC)};
  std::vector<Word> h = r;
  h[1].role = kC;
  const RoleErrorCounts c = ClassifyErrors(AlignWords(r, h), r, h);
  CHECK(c[kA] == RoleCounts{0, 0, 0, 1, 1});
  CHECK(c[kC] == RoleCounts{0, 0, 0, 0, 2});
}

TEST_CASE("insertions are charged to the hypothesis role") {
  const std::vector<Word> r = {W("a", kC)};
  const std::vector<Word> h = {W("a", kC), W("b", kA)};
  const RoleErrorCounts c = ClassifyErrors(AlignWords(r, h), r, h);
  CHECK(c[kA].ins == 1);
  CHECK(c[kC].ins == 0);
}

TEST_CASE("score arithmetic") {
  RoleErrorCounts c;
  c[kC] = {0, 0, 1, 1, 1};
  const ScoreReport s = Score(c);
  CHECK(s[kC].wer == Ratio{1, 1});
  CHECK(s[kC].aer == Ratio{1, 1});
  CHECK(s[kC].mtwer == Ratio{2, 1});
  CHECK_FALSE(s[kA].included);
  CHECK(s.macro_mtwer == Ratio{2, 1});  // only the child is included

  RoleErrorCounts zero;
  zero[kC].nref = 5;
  zero[kA].nref = 2;
  const ScoreReport z = Score(zero);
  CHECK(z.macro_mtwer == Ratio{0, 1});
  CHECK(z[kA].wer.value() == 0.0);

  CHECK_THROWS_AS(Score(RoleErrorCounts{}), Error);
}

TEST_CASE("ratios stay reduced and exact") {
  CHECK(Ratio::Of(6, 8) == Ratio{3, 4});
  CHECK(Ratio::Of(1, 3) + Ratio::Of(1, 6) == Ratio{1, 2});
  CHECK(Ratio::Of(0, 7) == Ratio{0, 1});
  CHECK_THROWS_AS(Ratio::Of(1, 0), Error);
}

TEST_CASE("classify rejects a mismatched alignment") {
  const std::vector<Word> r = {W("a", kC), W("b", kC)};
  const std::vector<Word> h = {W("a", kC)};
  auto code = [&](const Alignment &a) {
    try {
      ClassifyErrors(a, r, h);
    } catch (const Error &e) {
      return e.code();
    }
    return ErrorCode::kInvalidInput;
  };
  CHECK(code(Alignment{{{Op::kMatch, 0, 0}}}) == ErrorCode::kMismatchedAlignment);
  CHECK(code(Alignment{{{Op::kMatch, 0, 0}, {Op::kDel, 5, -1}}}) ==
        ErrorCode::kMismatchedAlignment);
  CHECK(code(Alignment{{{Op::kDel, 1, -1}, {Op::kMatch, 0, 0}}}) ==
        ErrorCode::kMismatchedAlignment);
  CHECK(code(Alignment{{{Op::kMatch, 0, 0}, {Op::kDel, 1, -1}, {Op::kIns, -1, 0}}}) ==
        ErrorCode::kMismatchedAlignment);
}

TEST_CASE("alignment cost equals exhaustive enumeration on all small pairs") {
  long pairs = 0;
  int pow6[7] = {1, 6, 36, 216, 1296, 7776, 46656};
  for (size_t n = 0; n <= 6; ++n)
    for (size_t m = 0; n + m <= 6; ++m)
      for (int rc = 0; rc < pow6[n]; ++rc)
        for (int hc = 0; hc < pow6[m]; ++hc) {
          const auto r = WordsFromCode(rc, n), h = WordsFromCode(hc, m);
          const Alignment a = AlignWords(r, h);
          const auto [edits, attr] = AlignmentCost(a, r, h);
          const Cost bf = BruteForceAlignCost(r, h);
          if (edits != bf.edits || attr != bf.attr) FAIL("mismatch at n=" << n << " m=" << m);
          ++pairs;
        }
  CHECK(pairs == 380713);  // sum of (k + 1) * 6^k for k = 0..6
}

TEST_CASE("alignment cost equals enumeration on random pairs up to 6 + 6") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 3000; ++trial) {
    const auto r = Random(rng, rng() % 7), h = Random(rng, rng() % 7);
    const Alignment a = AlignWords(r, h);
    const auto [edits, attr] = AlignmentCost(a, r, h);
    CHECK(Cost{edits, attr} == BruteForceAlignCost(r, h));
    const RoleErrorCounts c = ClassifyErrors(a, r, h);
    int64_t sid = 0;
    for (SpeakerRole role : kRoles) {
      sid += c[role].sub + c[role].del + c[role].ins;
      CHECK(c[role].attr <= c[role].nref);
      CHECK(c[role].sub + c[role].del <= c[role].nref);
    }
    CHECK(sid == Levenshtein(r, h));
  }
}

TEST_CASE("mtWER is exactly WER plus AER") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const Transcript ref = RandomGridTranscript(rng, 8);
    const Transcript hyp = RandomGridTranscript(rng, 8);
    if (ref.empty()) continue;
    const ScoreReport s = Score(CountErrors(ref, hyp));
    for (SpeakerRole role : kRoles)
      if (s[role].included) CHECK(s[role].mtwer == s[role].wer + s[role].aer);
    CHECK(s.macro_mtwer == s.macro_wer + s.macro_aer);
  }
}

TEST_CASE("swapping roles swaps the per-role results") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const Transcript ref = RandomGridTranscript(rng, 8);
    const Transcript hyp = RandomGridTranscript(rng, 8);
    const RoleErrorCounts a = CountErrors(ref, hyp);
    const RoleErrorCounts b = CountErrors(RoleSwapped(ref), RoleSwapped(hyp));
    // Counts carry over except where equal-cost alignments tie differently;
    // the totals per error type are invariant.
    CHECK(a[kC].nref == b[kA].nref);
    CHECK(a[kA].nref == b[kC].nref);
    CHECK(a[kC].ins + a[kA].ins + a[kC].del + a[kA].del + a[kC].sub + a[kA].sub ==
          b[kC].ins + b[kA].ins + b[kC].del + b[kA].del + b[kC].sub + b[kA].sub);
    CHECK(a[kC].attr + a[kA].attr == b[kC].attr + b[kA].attr);
  }
}

TEST_CASE("published rows satisfy the identity up to rounding") {
  struct Row {
    double mtwer, wer, aer;
  };
  const Row rows[] = {{94.4, 89.9, 4.5}, {45.4, 43.5, 1.9}, {41.4, 38.0, 3.4},
                      {37.4, 35.5, 1.9}, {91.7, 87.0, 4.7}, {38.8, 37.2, 1.6},
                      {47.5, 41.8, 5.7}, {34.3, 32.2, 2.1}, {93.9, 85.0, 8.9},
                      {36.1, 35.1, 1.0}, {33.6, 29.6, 4.1}, {28.8, 27.8, 1.0},
                      {95.8, 86.1, 9.7}, {29.7, 28.6, 1.0}, {27.0, 22.4, 4.6},
                      {21.7, 20.6, 1.1}};
  for (const Row &r : rows) CHECK(std::fabs(r.mtwer - (r.wer + r.aer)) <= 0.1 + 1e-9);
  CHECK(43.5 + 1.9 == doctest::Approx(45.4));
  CHECK(35.5 + 1.9 == doctest::Approx(37.4));
}

TEST_CASE("corpus scoring is independent of the thread count") {
  std::mt19937_64 rng(42);
  std::vector<TranscriptPair> pairs;
  for (int i = 0; i < 200; ++i)
    pairs.emplace_back(RandomGridTranscript(rng, 10), RandomGridTranscript(rng, 10));
  const RoleErrorCounts serial = CountCorpusErrorsSerial(pairs);
  for (int jobs : {1, 2, 4, 8}) CHECK(CountCorpusErrors(pairs, jobs) == serial);
  RoleErrorCounts manual;
  for (const auto &[r, h] : pairs) manual += CountErrors(r, h);
  CHECK(manual == serial);
}

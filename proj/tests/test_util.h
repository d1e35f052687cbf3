// tests/test_util.h

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

// Random generators and small builders shared by the unit tests.

#ifndef SOTKIT_TESTS_TEST_UTIL_H_
#define SOTKIT_TESTS_TEST_UTIL_H_

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sotkit/core.h"
#include "sotkit/sot.h"

namespace sotkit::testing {

inline Utterance Utt(SpeakerRole role, double start, double end,
                     std::vector<std::string> words) {
  return Utterance{role, {start, end}, std::move(words)};
}

inline Word W(std::string text, SpeakerRole role, double start = 0.0,
              double end = 0.0) {
  return Word{std::move(text), {start, end}, role};
}

/// The code of the sotkit::Error thrown by fn, or nullopt if none is thrown.
template <typename Fn>
std::optional<ErrorCode> CodeOf(Fn fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return std::nullopt;
}

constexpr SpeakerRole kC = SpeakerRole::kChild;
constexpr SpeakerRole kA = SpeakerRole::kAdult;

/// The worked mtWER example: "how are you" by the child and "i am good
/// thanks" by the adult, recognized with one insertion, two substitutions, a
/// deletion and two attribution errors.
inline std::vector<Word> WorkedExampleRef() {
  return {W("how", kC), W("are", kC), W("you", kC), W("i", kA),
          W("am", kA), W("good", kA), W("thanks", kA)};
}
inline std::vector<Word> WorkedExampleHyp() {
  return {W("oh", kC), W("how", kC), W("were", kC), W("you", kA),
          W("i", kA), W("am", kA), W("great", kC)};
}

/// Random non-overlapping transcript on the 0.02 s grid within [0, max_s].
inline Transcript RandomGridTranscript(std::mt19937_64 &rng, int max_utts,
                                       double max_s = 30.0) {
  const std::vector<std::string> vocab = {"a", "b", "c", "hi", "no"};
  std::uniform_int_distribution<int> n_utts(0, max_utts), n_words(1, 4),
      gap(0, 60), len(0, 100), word(0, 4), role(0, 1);
  const int limit = static_cast<int>(std::lround(max_s / kTimestampStep));
  std::vector<Utterance> utts;
  int cursor = 0;
  const int n = n_utts(rng);
  for (int k = 0; k < n; ++k) {
    const int start = cursor + gap(rng);
    const int end = start + len(rng);
    if (end > limit) break;
    std::vector<std::string> words;
    const int m = n_words(rng);
    for (int w = 0; w < m; ++w) words.push_back(vocab[word(rng)]);
    utts.push_back(Utterance{role(rng) ? kA : kC,
                             {GridTime(start), GridTime(end)}, std::move(words)});
    cursor = end;
  }
  return Transcript(std::move(utts), {0.0, max_s});
}

}  // namespace sotkit::testing

#endif  // SOTKIT_TESTS_TEST_UTIL_H_

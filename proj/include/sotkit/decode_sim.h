// include/sotkit/decode_sim.h

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

// Synthetic dialogues and an error-injecting scorer for comparing decoding
// with and without the forced-decoding automaton.

#ifndef SOTKIT_DECODE_SIM_H_
#define SOTKIT_DECODE_SIM_H_

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "sotkit/decode_fsm.h"
#include "sotkit/diarization.h"
#include "sotkit/sot.h"

namespace sotkit {

/// Random source for every simulation: std::mt19937_64 (whose output
/// sequence is fixed by the C++ standard) with our own conversions to reals
/// and integers, so streams are identical across platforms.
class SimRng {
 public:
  explicit SimRng(uint64_t seed) : engine_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  /// Uniform integer in [lo, hi].  Modulo bias is below 2^-50 for our ranges.
  int UniformInt(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; derives independent per-trial seeds.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

struct SimConfig {
  uint64_t seed = 0;
  int n_utterances = 8;
  std::vector<std::string> vocab = {"hi", "yes", "no", "look", "ball",
                                    "what", "is", "that", "my", "turn"};
  double p_drop_speaker = 0.0;
  double p_drop_timestamp = 0.0;
  double p_loop = 0.0;
  std::pair<double, double> silence_gap_range = {0.5, 1.5};
  std::pair<int, int> words_per_utterance = {1, 4};
  std::pair<double, double> word_duration = {0.2, 0.5};

  /// Throws kInvalidInput on out-of-range values.
  void Check() const;
};

struct SynthDialogue {
  Transcript transcript;
  FrameProbSequence frames;
};

/// Alternating child/adult utterances on the 0.02 s grid, starting with the
/// child.  Generation stops early if the next utterance would leave the 30 s
/// window or the 256-token budget.  Speech frames carry 0.9 on their role,
/// silence frames 0.9 on silence, 0.05 elsewhere.
SynthDialogue SynthesizeDialogue(const SimConfig &config);

/**
   Replays a reference token stream while injecting decoder failures.  Each
   speaker token is dropped with p_drop_speaker and each timestamp token with
   p_drop_timestamp; each utterance independently turns into a loop on its
   first word with p_loop.  The next intended token scores 1.  A dropped token
   the scorer is currently skipping keeps a residual score of 0.1, so a
   masked decoder that cannot follow the intended token falls back to it.
   Everything else scores 0.
*/
class MockScorer : public StepScorer {
 public:
  MockScorer(TokenStream truth, const SimConfig &config, uint64_t seed);

  const std::vector<std::string> &Vocabulary() const override { return vocab_; }
  void Score(std::span<const Token> prefix, std::span<const Token> candidates,
             std::span<double> scores) override;

 private:
  size_t NextKept(size_t from) const;
  void Observe(const Token &emitted);

  std::vector<Token> truth_;
  std::vector<uint8_t> dropped_;
  std::vector<uint8_t> loop_start_;  // first word of a looping utterance
  std::vector<std::string> vocab_;
  size_t cursor_ = 0;
  size_t seen_ = 0;
  bool looping_ = false;
  std::string loop_word_;
};

struct ConditionCounts {
  long miss_speaker = 0;
  long miss_timestamp = 0;
  long miss_both = 0;
  long loops = 0;
  long utterances = 0;  // decoded text groups examined
  long decodes = 0;
  long suppression_violations = 0;  // timestamps strictly inside silence

  ConditionCounts &operator+=(const ConditionCounts &o);
  bool operator==(const ConditionCounts &) const = default;

  double miss_speaker_rate() const;
  double miss_timestamp_rate() const;
  double miss_both_rate() const;
  double loop_rate() const;
};

struct ErrorStudyResult {
  ConditionCounts free;    // no automaton
  ConditionCounts forced;  // automaton plus silence suppression

  bool operator==(const ErrorStudyResult &) const = default;
};

/// One synthetic dialogue decoded under both conditions with identical
/// injected failures.
ErrorStudyResult RunTrial(const SimConfig &config, uint64_t trial_seed);

/// n_trials independent trials seeded from config.seed, parallel over trials.
/// Results do not depend on the thread count.
ErrorStudyResult RunErrorStudy(const SimConfig &config, int n_trials, int jobs = 0);
/// Single-threaded reference for RunErrorStudy.
ErrorStudyResult RunErrorStudySerial(const SimConfig &config, int n_trials);

}  // namespace sotkit

#endif  // SOTKIT_DECODE_SIM_H_

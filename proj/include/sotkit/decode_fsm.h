// include/sotkit/decode_fsm.h

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

#ifndef SOTKIT_DECODE_FSM_H_
#define SOTKIT_DECODE_FSM_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sotkit/core.h"
#include "sotkit/sot.h"

namespace sotkit {

/**
   Forced-decoding automaton.  States name the position in the grammar

     S1 header -> S2 start time -> S3 speaker -> S4 text (loops)
       -> S5 end time -> S2 (next utterance) | S6 done

   A timestamp emitted from S5 is the next utterance's start time, so it
   moves straight to S3.  S2 also accepts the end token, which makes the
   empty transcript "header EOT" reachable.
*/
enum class FsmState { kS1Header, kS2StartTime, kS3Speaker, kS4Text, kS5EndTime, kS6Done };

struct DecodeState {
  FsmState state = FsmState::kS1Header;
  int last_ts = 0;                   // monotone floor for the next timestamp
  std::optional<int> current_start;  // start time of the open utterance
  size_t tokens_emitted = 0;
  int text_count_in_utt = 0;

  bool operator==(const DecodeState &) const = default;
};

/// Disjoint, sorted silence regions.  A timestamp is suppressed when its time
/// lies strictly inside a region, or at 0 s / 30 s when a region reaches
/// that edge of the window.
class SuppressionSet {
 public:
  SuppressionSet() = default;
  /// Throws kInvalidInput unless the regions are sorted, pairwise disjoint and
  /// of positive length.
  explicit SuppressionSet(std::vector<TimeInterval> regions);

  const std::vector<TimeInterval> &regions() const { return regions_; }
  bool empty() const { return regions_.empty(); }
  bool Suppresses(int grid_index) const;

 private:
  std::vector<TimeInterval> regions_;
};

struct MaskSpec {
  uint32_t allowed = 0;  // bit per TokenKind
  int ts_min = 0;
  std::vector<TimeInterval> suppressed;

  bool Allows(TokenKind kind) const {
    return (allowed >> static_cast<int>(kind)) & 1u;
  }
  bool Allows(const Token &tok) const;
  /// Legal timestamp grid values, ascending.  Empty if timestamps are not
  /// allowed in this state.
  std::vector<int> TimestampValues() const;
  bool empty() const { return allowed == 0; }
};

DecodeState InitState();

/// Legal next tokens.  In S6 the mask is empty.  Throws kExhausted when the
/// state requires or offers a timestamp and none survives the floor and the
/// suppression set.
MaskSpec AllowedClasses(const DecodeState &state, const SuppressionSet &supp);

/// Deterministic transition.  Only the grammar and the timestamp floor are
/// checked here; suppression is the caller's concern.  Throws
/// kIllegalTransition.
DecodeState Advance(const DecodeState &state, const Token &tok);

/// Step oracle for greedy decoding.  Implementations may keep state between
/// calls; each call sees the full prefix emitted so far.
class StepScorer {
 public:
  virtual ~StepScorer() = default;
  /// Words that may be proposed as text tokens.
  virtual const std::vector<std::string> &Vocabulary() const = 0;
  /// Writes one score per candidate.  Higher is better.
  virtual void Score(std::span<const Token> prefix,
                     std::span<const Token> candidates,
                     std::span<double> scores) = 0;
};

struct DecodeOptions {
  double repetition_penalty = 1.1;
  size_t max_tokens = kMaxDecodeTokens;
};

/// Greedy decoding under the automaton.  Text tokens already emitted in the
/// current utterance get the repetition penalty.  When suppression blocks
/// every timestamp, the decoder ends the transcript between utterances and
/// otherwise closes the utterance at its start time.
TokenStream RunForcedDecode(StepScorer &scorer, const SuppressionSet &supp,
                            const DecodeOptions &opts = {});

/// Greedy decoding over the full token inventory with no grammar.
TokenStream RunUnconstrainedDecode(StepScorer &scorer,
                                   const DecodeOptions &opts = {});

/// Maps a tokenizer's integer ids onto token kinds so an external decoding
/// loop can use the automaton as a logits mask.  Ids not listed are text.
struct VocabularyMap {
  std::vector<int> header_ids;
  int child_id = -1;
  int adult_id = -1;
  int eot_id = -1;
  int timestamp_id_base = -1;  // ids base..base+1500 are timestamps
  int vocab_size = 0;

  /// Throws kInvalidInput on overlapping or out-of-range ids.
  void Check() const;
  /// The token class for an id; text ids yield an empty word.
  Token Classify(int id) const;
};

/// mask[id] is 1 iff Classify(id) is legal in the current state.
std::vector<uint8_t> TokenMask(const DecodeState &state,
                               const SuppressionSet &supp,
                               const VocabularyMap &vocab);

}  // namespace sotkit

#endif  // SOTKIT_DECODE_FSM_H_

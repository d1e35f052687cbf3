// src/decode_fsm.cc

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

#include "sotkit/decode_fsm.h"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace sotkit {

namespace {

constexpr uint32_t Bit(TokenKind kind) { return 1u << static_cast<int>(kind); }

// Strict interior, except that a region reaching a window edge also covers
// the edge itself: silence there continues beyond the window.
bool Covers(const TimeInterval &r, double t) {
  const double window_end = GridTime(kMaxTimestamp);
  const bool after_start = t > r.start + kTimeEps || r.start <= kTimeEps;
  const bool before_end = t < r.end - kTimeEps || r.end >= window_end - kTimeEps;
  return after_start && before_end;
}

bool InsideAny(const std::vector<TimeInterval> &regions, int grid_index) {
  const double t = GridTime(grid_index);
  for (const TimeInterval &r : regions) {
    if (Covers(r, t)) return true;
    if (r.start > t) break;
  }
  return false;
}

// Grid values from `floor` up that no region covers, ascending.  One pass
// over the sorted regions.
template <typename Visit>
void ForEachFreeTimestamp(int floor, const std::vector<TimeInterval> &regions,
                          Visit visit) {
  size_t r = 0;
  for (int v = std::max(floor, 0); v <= kMaxTimestamp; ++v) {
    const double t = GridTime(v);
    while (r < regions.size() && regions[r].end <= t + kTimeEps &&
           !Covers(regions[r], t))
      ++r;
    if (r < regions.size() && Covers(regions[r], t)) continue;
    if (!visit(v)) return;
  }
}

bool AnyTimestampFrom(int floor, const std::vector<TimeInterval> &regions) {
  bool found = false;
  ForEachFreeTimestamp(floor, regions, [&](int) { return !(found = true); });
  return found;
}

int StateNumber(FsmState s) { return static_cast<int>(s) + 1; }

}  // namespace

SuppressionSet::SuppressionSet(std::vector<TimeInterval> regions)
    : regions_(std::move(regions)) {
  for (size_t i = 0; i < regions_.size(); ++i) {
    if (!regions_[i].valid() || regions_[i].duration() <= 0.0)
      throw Error(ErrorCode::kInvalidInput,
                  "suppression regions must have positive length");
    if (regions_[i].end > GridTime(kMaxTimestamp) + kTimeEps)
      throw Error(ErrorCode::kInvalidInput, "suppression regions must lie within 30 s");
    if (i > 0 && regions_[i].start < regions_[i - 1].end)
      throw Error(ErrorCode::kInvalidInput,
                  "suppression regions must be sorted and disjoint");
  }
}

bool SuppressionSet::Suppresses(int grid_index) const {
  return InsideAny(regions_, grid_index);
}

bool MaskSpec::Allows(const Token &tok) const {
  if (!Allows(tok.kind)) return false;
  if (tok.kind == TokenKind::kTimestamp)
    return tok.value >= ts_min && tok.value <= kMaxTimestamp &&
           !InsideAny(suppressed, tok.value);
  return true;
}

std::vector<int> MaskSpec::TimestampValues() const {
  std::vector<int> out;
  if (!Allows(TokenKind::kTimestamp)) return out;
  ForEachFreeTimestamp(ts_min, suppressed, [&](int v) {
    out.push_back(v);
    return true;
  });
  return out;
}

DecodeState InitState() { return DecodeState{}; }

MaskSpec AllowedClasses(const DecodeState &d, const SuppressionSet &supp) {
  MaskSpec mask;
  mask.suppressed = supp.regions();
  switch (d.state) {
    case FsmState::kS1Header:
      mask.allowed = Bit(TokenKind::kHeader);
      return mask;
    case FsmState::kS2StartTime:
    case FsmState::kS5EndTime:
      mask.allowed = Bit(TokenKind::kTimestamp) | Bit(TokenKind::kEndOfTranscript);
      mask.ts_min = d.last_ts;
      break;
    case FsmState::kS3Speaker:
      mask.allowed = Bit(TokenKind::kSpeakerChild) | Bit(TokenKind::kSpeakerAdult);
      return mask;
    case FsmState::kS4Text:
      if (d.text_count_in_utt == 0) {
        mask.allowed = Bit(TokenKind::kText);
        return mask;
      }
      mask.allowed = Bit(TokenKind::kText) | Bit(TokenKind::kTimestamp);
      mask.ts_min = d.current_start.value_or(d.last_ts);
      break;
    case FsmState::kS6Done:
      return mask;
  }
  if (!AnyTimestampFrom(mask.ts_min, mask.suppressed))
    throw Error(ErrorCode::kExhausted,
                fmt::format("no legal timestamp at or after {:.2f} s in S{}",
                            GridTime(mask.ts_min), StateNumber(d.state)));
  return mask;
}

DecodeState Advance(const DecodeState &d, const Token &tok) {
  auto illegal = [&]() {
    return Error(ErrorCode::kIllegalTransition,
                 fmt::format("token {} is illegal in S{}", TokenString(tok),
                             StateNumber(d.state)));
  };
  DecodeState next = d;
  next.tokens_emitted = d.tokens_emitted + 1;
  switch (d.state) {
    case FsmState::kS1Header:
      if (tok.kind != TokenKind::kHeader) throw illegal();
      next.state = FsmState::kS2StartTime;
      break;
    case FsmState::kS2StartTime:
    case FsmState::kS5EndTime:
      if (tok.kind == TokenKind::kEndOfTranscript) {
        next.state = FsmState::kS6Done;
        break;
      }
      if (tok.kind != TokenKind::kTimestamp || tok.value < d.last_ts ||
          tok.value > kMaxTimestamp)
        throw illegal();
      next.state = FsmState::kS3Speaker;
      next.last_ts = tok.value;
      next.current_start = tok.value;
      next.text_count_in_utt = 0;
      break;
    case FsmState::kS3Speaker:
      if (!tok.is_speaker()) throw illegal();
      next.state = FsmState::kS4Text;
      break;
    case FsmState::kS4Text:
      if (tok.kind == TokenKind::kText) {
        next.text_count_in_utt = d.text_count_in_utt + 1;
        break;
      }
      if (tok.kind != TokenKind::kTimestamp || d.text_count_in_utt == 0 ||
          tok.value < d.current_start.value_or(d.last_ts) ||
          tok.value > kMaxTimestamp)
        throw illegal();
      next.state = FsmState::kS5EndTime;
      next.last_ts = tok.value;
      next.current_start.reset();
      break;
    case FsmState::kS6Done:
      throw illegal();
  }
  return next;
}

namespace {

// Timestamp tokens no region suppresses, ascending.  Built once per decode.
std::vector<Token> FreeTimestampTokens(const std::vector<TimeInterval> &regions) {
  std::vector<Token> out;
  ForEachFreeTimestamp(0, regions, [&](int v) {
    out.push_back(Token::Timestamp(v));
    return true;
  });
  return out;
}

// free_ts must come from the mask's own suppression regions.
void AppendCandidates(const MaskSpec &mask, const std::vector<std::string> &vocab,
                      const std::vector<Token> &free_ts, std::vector<Token> &out) {
  if (mask.Allows(TokenKind::kHeader)) out.push_back(Token::Header());
  if (mask.Allows(TokenKind::kTimestamp)) {
    auto first = std::lower_bound(
        free_ts.begin(), free_ts.end(), mask.ts_min,
        [](const Token &t, int v) { return t.value < v; });
    out.insert(out.end(), first, free_ts.end());
  }
  if (mask.Allows(TokenKind::kSpeakerChild))
    out.push_back(Token::Speaker(SpeakerRole::kChild));
  if (mask.Allows(TokenKind::kSpeakerAdult))
    out.push_back(Token::Speaker(SpeakerRole::kAdult));
  if (mask.Allows(TokenKind::kText))
    for (const std::string &w : vocab) out.push_back(Token::Text(w));
  if (mask.Allows(TokenKind::kEndOfTranscript)) out.push_back(Token::Eot());
}

// Greedy pick with the repetition penalty on text already used in the
// current utterance.  Ties go to the earliest candidate.
size_t PickCandidate(StepScorer &scorer, std::span<const Token> prefix,
                     const std::vector<Token> &candidates,
                     const std::set<std::string> &used_words, double penalty,
                     std::vector<double> &scores) {
  scores.assign(candidates.size(), 0.0);
  scorer.Score(prefix, candidates, scores);
  size_t best = 0;
  double best_score = 0.0;
  for (size_t i = 0; i < candidates.size(); ++i) {
    double s = scores[i];
    if (!used_words.empty() && candidates[i].kind == TokenKind::kText &&
        used_words.count(candidates[i].word))
      s = s > 0.0 ? s / penalty : s * penalty;
    if (i == 0 || s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return best;
}

void TrackRepetition(const Token &tok, std::set<std::string> &used_words) {
  if (tok.kind == TokenKind::kText)
    used_words.insert(tok.word);
  else
    used_words.clear();
}

}  // namespace

TokenStream RunForcedDecode(StepScorer &scorer, const SuppressionSet &supp,
                            const DecodeOptions &opts) {
  TokenStream out;
  DecodeState state = InitState();
  std::set<std::string> used_words;
  const std::vector<Token> free_ts = FreeTimestampTokens(supp.regions());
  std::vector<Token> candidates;
  std::vector<double> scores;
  while (state.state != FsmState::kS6Done) {
    if (out.tokens.size() >= opts.max_tokens) {
      out.truncated = true;
      break;
    }
    candidates.clear();
    try {
      AppendCandidates(AllowedClasses(state, supp), scorer.Vocabulary(), free_ts,
                       candidates);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kExhausted) throw;
      if (state.state == FsmState::kS4Text) {
        // Close the utterance at the smallest structurally legal time.
        MaskSpec mask = AllowedClasses(state, SuppressionSet());
        mask.allowed &= ~Bit(TokenKind::kTimestamp);
        AppendCandidates(mask, scorer.Vocabulary(), free_ts, candidates);
        candidates.push_back(Token::Timestamp(mask.ts_min));
      } else {
        candidates.push_back(Token::Eot());
      }
    }
    if (candidates.empty())
      throw Error(ErrorCode::kInvalidInput, "scorer vocabulary is empty");
    const size_t pick = PickCandidate(scorer, out.tokens, candidates, used_words,
                                      opts.repetition_penalty, scores);
    const Token &tok = candidates[pick];
    state = Advance(state, tok);
    TrackRepetition(tok, used_words);
    out.tokens.push_back(tok);
  }
  return out;
}

TokenStream RunUnconstrainedDecode(StepScorer &scorer,
                                   const DecodeOptions &opts) {
  MaskSpec everything;
  everything.allowed = Bit(TokenKind::kHeader) | Bit(TokenKind::kTimestamp) |
                       Bit(TokenKind::kSpeakerChild) |
                       Bit(TokenKind::kSpeakerAdult) | Bit(TokenKind::kText) |
                       Bit(TokenKind::kEndOfTranscript);
  std::vector<Token> candidates;
  AppendCandidates(everything, scorer.Vocabulary(), FreeTimestampTokens({}),
                   candidates);

  TokenStream out;
  std::set<std::string> used_words;
  std::vector<double> scores;
  while (true) {
    if (out.tokens.size() >= opts.max_tokens) {
      out.truncated = true;
      break;
    }
    const size_t pick = PickCandidate(scorer, out.tokens, candidates, used_words,
                                      opts.repetition_penalty, scores);
    const Token &tok = candidates[pick];
    TrackRepetition(tok, used_words);
    out.tokens.push_back(tok);
    if (tok.kind == TokenKind::kEndOfTranscript) break;
  }
  return out;
}

void VocabularyMap::Check() const {
  if (vocab_size <= 0)
    throw Error(ErrorCode::kInvalidInput, "vocab_size must be positive");
  if (header_ids.empty())
    throw Error(ErrorCode::kInvalidInput, "at least one header id is required");
  std::vector<int> structural = header_ids;
  structural.push_back(child_id);
  structural.push_back(adult_id);
  structural.push_back(eot_id);
  for (int id : structural) {
    if (id < 0 || id >= vocab_size)
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("token id {} outside [0, {})", id, vocab_size));
    if (id >= timestamp_id_base && id <= timestamp_id_base + kMaxTimestamp)
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("token id {} collides with the timestamp range", id));
  }
  std::sort(structural.begin(), structural.end());
  if (std::adjacent_find(structural.begin(), structural.end()) != structural.end())
    throw Error(ErrorCode::kInvalidInput, "structural token ids must be distinct");
  if (timestamp_id_base < 0 || timestamp_id_base + kMaxTimestamp >= vocab_size)
    throw Error(ErrorCode::kInvalidInput, "timestamp id range exceeds the vocabulary");
}

Token VocabularyMap::Classify(int id) const {
  if (id >= timestamp_id_base && id <= timestamp_id_base + kMaxTimestamp)
    return Token::Timestamp(id - timestamp_id_base);
  if (id == child_id) return Token::Speaker(SpeakerRole::kChild);
  if (id == adult_id) return Token::Speaker(SpeakerRole::kAdult);
  if (id == eot_id) return Token::Eot();
  if (std::find(header_ids.begin(), header_ids.end(), id) != header_ids.end())
    return Token::Header();
  return Token::Text({});
}

std::vector<uint8_t> TokenMask(const DecodeState &state,
                               const SuppressionSet &supp,
                               const VocabularyMap &vocab) {
  const MaskSpec mask = AllowedClasses(state, supp);
  std::vector<uint8_t> out(static_cast<size_t>(vocab.vocab_size), 0);
  for (int id = 0; id < vocab.vocab_size; ++id)
    out[static_cast<size_t>(id)] = mask.Allows(vocab.Classify(id)) ? 1 : 0;
  return out;
}

}  // namespace sotkit

// include/sotkit/sot.h

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

// Serialized (SOT) token streams: one utterance is written as
//   <|t_start|> <speaker> word+ <|t_end|>
// between a header token and an end-of-transcript token.

#ifndef SOTKIT_SOT_H_
#define SOTKIT_SOT_H_

#include <string>
#include <vector>

#include "sotkit/core.h"

namespace sotkit {

inline constexpr double kTimestampStep = 0.02;
inline constexpr int kMaxTimestamp = 1500;  // 30 s
inline constexpr int kNumTimestamps = kMaxTimestamp + 1;
inline constexpr size_t kMaxDecodeTokens = 256;

enum class TokenKind {
  kHeader,
  kTimestamp,
  kSpeakerChild,
  kSpeakerAdult,
  kText,
  kEndOfTranscript,
};

struct Token {
  TokenKind kind = TokenKind::kHeader;
  int value = 0;     // grid index, kTimestamp only
  std::string word;  // kText only

  static Token Header() { return {TokenKind::kHeader, 0, {}}; }
  static Token Timestamp(int v) { return {TokenKind::kTimestamp, v, {}}; }
  static Token Speaker(SpeakerRole r) {
    return {r == SpeakerRole::kChild ? TokenKind::kSpeakerChild
                                     : TokenKind::kSpeakerAdult,
            0, {}};
  }
  static Token Text(std::string w) { return {TokenKind::kText, 0, std::move(w)}; }
  static Token Eot() { return {TokenKind::kEndOfTranscript, 0, {}}; }

  bool is_speaker() const {
    return kind == TokenKind::kSpeakerChild || kind == TokenKind::kSpeakerAdult;
  }
  SpeakerRole role() const {
    return kind == TokenKind::kSpeakerAdult ? SpeakerRole::kAdult
                                            : SpeakerRole::kChild;
  }
  bool operator==(const Token &) const = default;
};

/// Human-readable form, e.g. "<|0.50|>", "<child>", "hi".
std::string TokenString(const Token &tok);

struct TokenStream {
  std::vector<Token> tokens;
  bool truncated = false;  // decoding hit the token cap

  bool operator==(const TokenStream &) const = default;
};

/// Per-utterance structural error counts.  The three missing-token
/// categories are disjoint: an utterance lacking both a speaker and a
/// timestamp counts only towards miss_both.
struct StructuralErrorReport {
  int miss_speaker = 0;
  int miss_timestamp = 0;
  int miss_both = 0;
  bool infinite_loop = false;
  int utterances = 0;  // text groups examined (the discarded tail excluded)

  int missing_total() const { return miss_speaker + miss_timestamp + miss_both; }
  bool operator==(const StructuralErrorReport &) const = default;
};

/// Nearest grid index for a time in seconds.  Throws kOutOfRange outside
/// [0, 30] s.
int QuantizeTime(double seconds);
inline double GridTime(int index) { return index * kTimestampStep; }

/// Header, (TS speaker words TS)*, EOT.  Throws kOutOfRange / kEmptyUtterance.
TokenStream SerializeTranscript(const Transcript &transcript);

struct ParseResult {
  Transcript transcript;
  StructuralErrorReport report;
};

/// Total parser: never throws on malformed structure.  Groups missing a
/// speaker are dropped; a missing start time is taken from the preceding
/// timestamp token (or 0), a missing end time from the following one (the
/// group is dropped when none follows).  A truncated stream loses its final
/// utterance.  The result's session span is [0, 30] s.
ParseResult ParseTokenStream(const TokenStream &stream);

/// Same report as ParseTokenStream without building the transcript.
StructuralErrorReport ValidateStructure(const TokenStream &stream);

}  // namespace sotkit

#endif  // SOTKIT_SOT_H_

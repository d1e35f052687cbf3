// src/sot.cc

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

#include "sotkit/sot.h"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

namespace sotkit {

std::string TokenString(const Token &tok) {
  switch (tok.kind) {
    case TokenKind::kHeader: return "<|startoftranscript|>";
    case TokenKind::kTimestamp: return fmt::format("<|{:.2f}|>", GridTime(tok.value));
    case TokenKind::kSpeakerChild: return "<child>";
    case TokenKind::kSpeakerAdult: return "<adult>";
    case TokenKind::kText: return tok.word;
    case TokenKind::kEndOfTranscript: return "<|endoftranscript|>";
  }
  return "?";
}

int QuantizeTime(double seconds) {
  if (!(seconds >= -kTimeEps) || seconds > GridTime(kMaxTimestamp) + kTimeEps)
    throw Error(ErrorCode::kOutOfRange,
                fmt::format("time {} outside [0, 30] s", seconds));
  const long idx = std::lround(seconds / kTimestampStep);
  return static_cast<int>(std::clamp(idx, 0L, static_cast<long>(kMaxTimestamp)));
}

TokenStream SerializeTranscript(const Transcript &transcript) {
  TokenStream out;
  out.tokens.push_back(Token::Header());
  for (const Utterance &u : transcript.utterances()) {
    if (u.words.empty())
      throw Error(ErrorCode::kEmptyUtterance,
                  fmt::format("utterance at {} s has no words", u.span.start));
    out.tokens.push_back(Token::Timestamp(QuantizeTime(u.span.start)));
    out.tokens.push_back(Token::Speaker(u.role));
    for (const std::string &w : u.words) out.tokens.push_back(Token::Text(w));
    out.tokens.push_back(Token::Timestamp(QuantizeTime(u.span.end)));
  }
  out.tokens.push_back(Token::Eot());
  return out;
}

namespace {

// A run of text tokens together with whatever structural tokens were seen
// around it.
struct Group {
  std::optional<int> start;
  std::optional<SpeakerRole> role;
  std::vector<std::string> words;
  std::optional<int> end;
  size_t first = 0;  // index of the first token belonging to the group
  size_t last = 0;   // index of the last token belonging to the group
};

enum class GroupError { kNone, kMissSpeaker, kMissTimestamp, kMissBoth };

GroupError Classify(const Group &g) {
  const bool no_speaker = !g.role.has_value();
  const bool no_time = !g.start.has_value() || !g.end.has_value();
  if (no_speaker && no_time) return GroupError::kMissBoth;
  if (no_speaker) return GroupError::kMissSpeaker;
  if (no_time) return GroupError::kMissTimestamp;
  return GroupError::kNone;
}

std::vector<Group> ScanGroups(const std::vector<Token> &tokens) {
  std::vector<Group> groups;
  Group cur;
  bool cur_open = false;  // cur holds at least one token
  auto reset = [&](size_t at) {
    cur = Group();
    cur.first = at;
    cur_open = false;
  };
  reset(0);
  for (size_t i = 0; i < tokens.size(); ++i) {
    const Token &tok = tokens[i];
    if (tok.kind == TokenKind::kEndOfTranscript) break;
    switch (tok.kind) {
      case TokenKind::kHeader:
        break;
      case TokenKind::kTimestamp:
        if (!cur.words.empty()) {
          cur.end = tok.value;
          cur.last = i;
          groups.push_back(std::move(cur));
          reset(i + 1);
        } else {
          // A timestamp with no text yet opens a fresh group; an earlier
          // stray timestamp or speaker without words carries no utterance.
          reset(i);
          cur.start = tok.value;
          cur_open = true;
        }
        break;
      case TokenKind::kSpeakerChild:
      case TokenKind::kSpeakerAdult:
        if (!cur.words.empty()) {
          groups.push_back(std::move(cur));
          reset(i);
        }
        if (!cur_open) cur.first = i;
        cur.role = tok.role();
        cur_open = true;
        break;
      case TokenKind::kText:
        if (!cur_open) cur.first = i;
        cur.words.push_back(tok.word);
        cur.last = i;
        cur_open = true;
        break;
      case TokenKind::kEndOfTranscript:
        break;
    }
  }
  if (!cur.words.empty()) groups.push_back(std::move(cur));
  return groups;
}

std::optional<int> PreviousTimestamp(const std::vector<Token> &tokens,
                                     size_t before) {
  for (size_t i = before; i-- > 0;)
    if (tokens[i].kind == TokenKind::kTimestamp) return tokens[i].value;
  return std::nullopt;
}

std::optional<int> NextTimestamp(const std::vector<Token> &tokens,
                                 size_t after) {
  for (size_t i = after + 1; i < tokens.size(); ++i) {
    if (tokens[i].kind == TokenKind::kEndOfTranscript) break;
    if (tokens[i].kind == TokenKind::kTimestamp) return tokens[i].value;
  }
  return std::nullopt;
}

ParseResult Parse(const TokenStream &stream, bool build) {
  std::vector<Group> groups = ScanGroups(stream.tokens);
  StructuralErrorReport report;
  if (stream.truncated) {
    report.infinite_loop = true;
    if (!groups.empty()) groups.pop_back();
  }
  std::vector<Utterance> utts;
  double prev_end = 0.0;
  for (const Group &g : groups) {
    ++report.utterances;
    switch (Classify(g)) {
      case GroupError::kMissBoth: ++report.miss_both; continue;
      case GroupError::kMissSpeaker: ++report.miss_speaker; continue;
      case GroupError::kMissTimestamp: ++report.miss_timestamp; break;
      case GroupError::kNone: break;
    }
    if (!build) continue;
    std::optional<int> start = g.start, end = g.end;
    if (!start) start = PreviousTimestamp(stream.tokens, g.first).value_or(0);
    if (!end) end = NextTimestamp(stream.tokens, g.last);
    if (!end) continue;
    Utterance u;
    u.role = *g.role;
    u.span.start = std::max(GridTime(*start), prev_end);
    u.span.end = std::max(GridTime(*end), u.span.start);
    u.words = g.words;
    prev_end = u.span.end;
    utts.push_back(std::move(u));
  }
  ParseResult result{Transcript(), report};
  if (build)
    result.transcript =
        Transcript(std::move(utts), TimeInterval{0.0, GridTime(kMaxTimestamp)});
  return result;
}

}  // namespace

ParseResult ParseTokenStream(const TokenStream &stream) {
  return Parse(stream, true);
}

StructuralErrorReport ValidateStructure(const TokenStream &stream) {
  return Parse(stream, false).report;
}

}  // namespace sotkit

// src/core.cc

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

#include "sotkit/core.h"

#include <algorithm>
#include <cctype>
#include <fmt/format.h>

namespace sotkit {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kEmptyUtterance: return "EmptyUtterance";
    case ErrorCode::kExhausted: return "Exhausted";
    case ErrorCode::kIllegalTransition: return "IllegalTransition";
    case ErrorCode::kMismatchedAlignment: return "MismatchedAlignment";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kDegenerate: return "Degenerate";
    case ErrorCode::kNoSpeech: return "NoSpeech";
    case ErrorCode::kInsufficientData: return "InsufficientData";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kOversizedUtterance: return "OversizedUtterance";
    case ErrorCode::kParseError: return "ParseError";
  }
  return "Unknown";
}

std::string_view RoleName(SpeakerRole role) {
  return role == SpeakerRole::kChild ? "child" : "adult";
}

SpeakerRole ParseRole(std::string_view name) {
  if (name == "child") return SpeakerRole::kChild;
  if (name == "adult") return SpeakerRole::kAdult;
  throw Error(ErrorCode::kInvalidInput,
              fmt::format("unknown speaker role '{}'", name));
}

TimeInterval MakeInterval(double start, double end) {
  TimeInterval span{start, end};
  if (!span.valid())
    throw Error(ErrorCode::kInvalidInput,
                fmt::format("invalid interval [{}, {}]", start, end));
  return span;
}

double IntervalOverlap(const TimeInterval &a, const TimeInterval &b) {
  return std::max(0.0, std::min(a.end, b.end) - std::max(a.start, b.start));
}

std::string Utterance::Text() const {
  std::string out;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

Transcript::Transcript(std::vector<Utterance> utterances,
                       TimeInterval session_span)
    : utterances_(std::move(utterances)), session_span_(session_span) {
  Check();
}

Transcript::Transcript(std::vector<Utterance> utterances)
    : utterances_(std::move(utterances)) {
  session_span_.start = 0.0;
  session_span_.end = utterances_.empty() ? 0.0 : utterances_.back().span.end;
  for (const Utterance &u : utterances_)
    session_span_.end = std::max(session_span_.end, u.span.end);
  Check();
}

void Transcript::Check() const {
  if (!session_span_.valid())
    throw Error(ErrorCode::kInvalidInput, "invalid session span");
  for (size_t i = 0; i < utterances_.size(); ++i) {
    const Utterance &u = utterances_[i];
    if (!u.span.valid())
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("utterance {} has invalid span [{}, {}]", i,
                              u.span.start, u.span.end));
    if (u.span.start < session_span_.start - kTimeEps ||
        u.span.end > session_span_.end + kTimeEps)
      throw Error(ErrorCode::kInvalidInput,
                  fmt::format("utterance {} lies outside the session span", i));
    if (i > 0) {
      const Utterance &prev = utterances_[i - 1];
      if (u.span.start < prev.span.start)
        throw Error(ErrorCode::kInvalidInput,
                    fmt::format("utterance {} starts before its predecessor", i));
      if (u.span.start < prev.span.end - kTimeEps)
        throw Error(ErrorCode::kInvalidInput,
                    fmt::format("utterances {} and {} overlap", i - 1, i));
    }
  }
}

std::vector<std::string> NormalizeText(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    std::string_view tok = text.substr(i, j - i);
    size_t b = 0, e = tok.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(tok[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(tok[e - 1]))) --e;
    if (b < e) {
      std::string word(tok.substr(b, e - b));
      for (char &c : word)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(word));
    }
    i = j;
  }
  return out;
}

std::vector<Word> TranscriptWords(const Transcript &transcript) {
  std::vector<Word> words;
  for (const Utterance &u : transcript.utterances()) {
    std::vector<std::string> normalized;
    for (const std::string &w : u.words) {
      for (std::string &piece : NormalizeText(w))
        normalized.push_back(std::move(piece));
    }
    const double step =
        normalized.empty() ? 0.0 : u.span.duration() / normalized.size();
    for (size_t k = 0; k < normalized.size(); ++k) {
      const double start = u.span.start + step * k;
      const double end = k + 1 == normalized.size() ? u.span.end : start + step;
      words.push_back(Word{std::move(normalized[k]), {start, end}, u.role});
    }
  }
  std::stable_sort(words.begin(), words.end(),
                   [](const Word &a, const Word &b) {
                     if (a.span.start != b.span.start)
                       return a.span.start < b.span.start;
                     return RoleIndex(a.role) < RoleIndex(b.role);
                   });
  return words;
}

}  // namespace sotkit

// include/sotkit/core.h

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

#ifndef SOTKIT_CORE_H_
#define SOTKIT_CORE_H_

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sotkit {

/// Tolerance used for time comparisons that are not grid-quantized.
inline constexpr double kTimeEps = 1e-9;

/// Error categories surfaced by the library.  The CLI maps these to the
/// machine-readable "error" field of its stderr JSON.
enum class ErrorCode {
  kInvalidInput,
  kOutOfRange,
  kEmptyUtterance,
  kExhausted,
  kIllegalTransition,
  kMismatchedAlignment,
  kEmptyReference,
  kDegenerate,
  kNoSpeech,
  kInsufficientData,
  kDimensionMismatch,
  kZeroVariance,
  kOversizedUtterance,
  kParseError,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class SpeakerRole { kChild = 0, kAdult = 1 };

inline constexpr std::array<SpeakerRole, 2> kRoles = {SpeakerRole::kChild,
                                                      SpeakerRole::kAdult};

std::string_view RoleName(SpeakerRole role);
/// Accepts "child" / "adult" (case-sensitive); throws kInvalidInput otherwise.
SpeakerRole ParseRole(std::string_view name);
inline int RoleIndex(SpeakerRole role) { return static_cast<int>(role); }
inline SpeakerRole OtherRole(SpeakerRole role) {
  return role == SpeakerRole::kChild ? SpeakerRole::kAdult
                                     : SpeakerRole::kChild;
}

/// Closed time interval in seconds.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  double duration() const { return end - start; }
  bool valid() const { return start >= 0.0 && start <= end; }
  bool operator==(const TimeInterval &) const = default;
};

/// Throws kInvalidInput unless 0 <= start <= end.
TimeInterval MakeInterval(double start, double end);

/// Length of the intersection of two intervals, 0 if they are disjoint.
double IntervalOverlap(const TimeInterval &a, const TimeInterval &b);

struct Word {
  std::string text;
  TimeInterval span;
  SpeakerRole role = SpeakerRole::kChild;

  bool operator==(const Word &) const = default;
};

struct Utterance {
  SpeakerRole role = SpeakerRole::kChild;
  TimeInterval span;
  std::vector<std::string> words;

  /// Words joined by single spaces.
  std::string Text() const;
  bool operator==(const Utterance &) const = default;
};

/// Time-ordered, non-overlapping utterances inside a session span.  The
/// ordering invariant is checked on construction.
class Transcript {
 public:
  Transcript() = default;
  Transcript(std::vector<Utterance> utterances, TimeInterval session_span);
  /// Session span defaults to [0, last utterance end].
  explicit Transcript(std::vector<Utterance> utterances);

  const std::vector<Utterance> &utterances() const { return utterances_; }
  const TimeInterval &session_span() const { return session_span_; }
  bool empty() const { return utterances_.empty(); }
  size_t size() const { return utterances_.size(); }

  bool operator==(const Transcript &) const = default;

 private:
  void Check() const;

  std::vector<Utterance> utterances_;
  TimeInterval session_span_;
};

/// Lowercases, strips leading/trailing punctuation of each word and splits on
/// whitespace.  Words that are pure punctuation disappear.
std::vector<std::string> NormalizeText(std::string_view text);

/// Flattens a transcript into words, spreading each utterance's span
/// uniformly over its words.  Text is normalized.
std::vector<Word> TranscriptWords(const Transcript &transcript);

}  // namespace sotkit

#endif  // SOTKIT_CORE_H_

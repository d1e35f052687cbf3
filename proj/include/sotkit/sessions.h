// include/sotkit/sessions.h

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

// Corpus preprocessing and per-child conversational measures.

#ifndef SOTKIT_SESSIONS_H_
#define SOTKIT_SESSIONS_H_

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sotkit/core.h"

namespace sotkit {

/// Drops words longer than max_dur seconds (strictly longer).
std::vector<Word> CleanWords(std::span<const Word> words, double max_dur = 2.0);

/// Joins consecutive same-role words whose gap is strictly shorter than `gap`.
/// The session span runs from 0 to the last word end.
Transcript MergeWordsToUtterances(std::span<const Word> words, double gap = 0.3);

/// Inverse of MergeWordsToUtterances on a transcript: one Word per word with
/// the utterance span spread uniformly.
std::vector<Word> ExplodeUtterances(const Transcript &transcript);

/// A window of complete utterances.  transcript times are relative to
/// span.start.
struct Segment {
  TimeInterval span;
  Transcript transcript;
};

struct WindowResult {
  std::vector<Segment> segments;
  std::vector<size_t> oversized;  // indices of skipped utterances
};

/**
   Greedy left-to-right packing.  From the current boundary, a window takes
   the longest run of utterances whose last end is within max_dur of the
   boundary.  The next boundary is the midpoint of the silence that follows.
   A window never exceeds max_dur: its end is clipped to boundary + max_dur,
   and a boundary is pushed later (still inside the silence) when the next
   utterance would not fit after the midpoint.  The last window ends at the
   session end (clipped the same way).  Utterances longer than max_dur are
   skipped and reported.
*/
WindowResult WindowSegments(const Transcript &transcript, double max_dur = 30.0);

enum class Measure {
  kWordsPerMinute,
  kUtterancesPerMinute,
  kMeanWordsPerUtterance,
  kMeanUtteranceDuration,
  kSpeakingRate,
};
inline constexpr std::array<Measure, 5> kMeasures = {
    Measure::kWordsPerMinute, Measure::kUtterancesPerMinute,
    Measure::kMeanWordsPerUtterance, Measure::kMeanUtteranceDuration,
    Measure::kSpeakingRate};

/// Column name used in measure CSV files.
std::string_view MeasureKey(Measure m);
/// Row label used in agreement tables.
std::string_view MeasureLabel(Measure m);

struct MeasureSet {
  double words_per_minute = 0.0;
  double utterances_per_minute = 0.0;
  double mean_words_per_utterance = 0.0;
  double mean_utterance_duration_s = 0.0;
  double speaking_rate = 0.0;  // words per minute of the role's speaking time

  long total_words = 0;
  long utterances = 0;
  double session_seconds = 0.0;
  double speaking_seconds = 0.0;

  double Get(Measure m) const;
};

/// Measures for one role over segments pooled from all of a child's
/// sessions.  Throws kNoSpeech if the role never speaks.
MeasureSet SpeechMeasures(std::span<const Segment> segments, SpeakerRole role);

struct AgreementRow {
  Measure measure;
  double gt_mean = 0.0;
  double pred_mean = 0.0;
  double pcc = 0.0;  // NaN when either side has zero variance
};

/// Means across children and Pearson correlation per measure over children
/// present in both maps.  Throws kInsufficientData for fewer than two.
std::vector<AgreementRow> Agreement(const std::map<std::string, MeasureSet> &gt,
                                    const std::map<std::string, MeasureSet> &pred);

}  // namespace sotkit

#endif  // SOTKIT_SESSIONS_H_

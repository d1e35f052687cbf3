// include/sotkit/metrics_asr.h

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

// Speaker-attributed word error rates.  Reference and hypothesis words are
// aligned as single time-ordered streams ignoring speakers; a matched or
// substituted pair whose roles differ is additionally an attribution error
// charged to the reference role.

#ifndef SOTKIT_METRICS_ASR_H_
#define SOTKIT_METRICS_ASR_H_

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sotkit/core.h"

namespace sotkit {

enum class AlignOpKind { kMatch, kSub, kIns, kDel };

struct AlignOp {
  AlignOpKind kind = AlignOpKind::kMatch;
  int ref = -1;  // -1 for insertions
  int hyp = -1;  // -1 for deletions

  bool operator==(const AlignOp &) const = default;
};

struct Alignment {
  std::vector<AlignOp> ops;
};

/// Weight of one edit in the composite cost edits*K + attribution mismatches.
/// Any K larger than the number of aligned pairs makes the objective
/// lexicographic.
inline int64_t CompositeWeight(size_t n_ref, size_t n_hyp) {
  return static_cast<int64_t>(n_ref + n_hyp + 1);
}

/// Minimum edit distance alignment (unit costs).  Among equal-edit
/// alignments, the one with the fewest role-mismatched pairs wins.
Alignment AlignWords(std::span<const Word> ref, std::span<const Word> hyp);

/// Edits and attribution mismatches of an alignment.
std::pair<int64_t, int64_t> AlignmentCost(const Alignment &a,
                                          std::span<const Word> ref,
                                          std::span<const Word> hyp);

struct RoleCounts {
  int64_t ins = 0;
  int64_t del = 0;
  int64_t sub = 0;
  int64_t attr = 0;
  int64_t nref = 0;

  RoleCounts &operator+=(const RoleCounts &o) {
    ins += o.ins; del += o.del; sub += o.sub; attr += o.attr; nref += o.nref;
    return *this;
  }
  bool operator==(const RoleCounts &) const = default;
};

struct RoleErrorCounts {
  std::array<RoleCounts, 2> roles{};

  RoleCounts &operator[](SpeakerRole r) { return roles[RoleIndex(r)]; }
  const RoleCounts &operator[](SpeakerRole r) const { return roles[RoleIndex(r)]; }
  RoleErrorCounts &operator+=(const RoleErrorCounts &o) {
    for (int k = 0; k < 2; ++k) roles[k] += o.roles[k];
    return *this;
  }
  bool operator==(const RoleErrorCounts &) const = default;
};

/// Throws kMismatchedAlignment if the alignment does not cover ref and hyp
/// monotonically.
RoleErrorCounts ClassifyErrors(const Alignment &a, std::span<const Word> ref,
                               std::span<const Word> hyp);

/// Exact non-negative rational, kept reduced.
struct Ratio {
  int64_t num = 0;
  int64_t den = 1;

  static Ratio Of(int64_t num, int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  Ratio operator+(const Ratio &o) const;
  bool operator==(const Ratio &) const = default;
};

struct RoleScore {
  bool included = false;  // false when the role has no reference words
  int64_t nref = 0;
  Ratio mtwer, wer, aer;
};

struct ScoreReport {
  std::array<RoleScore, 2> roles{};
  // Unweighted means over included roles.
  Ratio macro_mtwer, macro_wer, macro_aer;

  const RoleScore &operator[](SpeakerRole r) const { return roles[RoleIndex(r)]; }
};

/// Throws kEmptyReference if no role has reference words.
ScoreReport Score(const RoleErrorCounts &counts);

/// Counts for one reference/hypothesis transcript pair.
RoleErrorCounts CountErrors(const Transcript &ref, const Transcript &hyp);

using TranscriptPair = std::pair<Transcript, Transcript>;

/// Pooled counts over many pairs, parallel over pairs.  jobs <= 0 uses the
/// OpenMP default.  The sum is taken in input order, so the result does not
/// depend on the thread count.
RoleErrorCounts CountCorpusErrors(std::span<const TranscriptPair> pairs, int jobs = 0);
/// Single-threaded reference for CountCorpusErrors.
RoleErrorCounts CountCorpusErrorsSerial(std::span<const TranscriptPair> pairs);

}  // namespace sotkit

#endif  // SOTKIT_METRICS_ASR_H_

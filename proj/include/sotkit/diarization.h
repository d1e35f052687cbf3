// include/sotkit/diarization.h

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

#ifndef SOTKIT_DIARIZATION_H_
#define SOTKIT_DIARIZATION_H_

#include <string>
#include <vector>

#include "sotkit/core.h"
#include "sotkit/decode_fsm.h"

namespace sotkit {

/// Per-frame class probabilities.  Frame n covers [n*period, (n+1)*period).
struct FrameProbs {
  double child = 0.0;
  double adult = 0.0;
  double silence = 0.0;
};

class FrameProbSequence {
 public:
  FrameProbSequence() = default;
  /// Throws kInvalidInput if a triple is negative or does not sum to 1.
  FrameProbSequence(double frame_period, std::vector<FrameProbs> probs);

  double frame_period() const { return frame_period_; }
  const std::vector<FrameProbs> &probs() const { return probs_; }
  size_t size() const { return probs_.size(); }
  double duration() const { return frame_period_ * probs_.size(); }

 private:
  double frame_period_ = 0.02;
  std::vector<FrameProbs> probs_;
};

enum class FrameLabel { kSilence, kChild, kAdult };

struct FrameLabelSequence {
  double frame_period = 0.02;
  double origin = 0.0;  // start time of frame 0
  std::vector<FrameLabel> labels;
};

struct RoleSegment {
  SpeakerRole role = SpeakerRole::kChild;
  TimeInterval span;

  bool operator==(const RoleSegment &) const = default;
};

/// Maximal runs of frames with p_sil >= threshold, shrunk by `shrink` at both
/// ends.  Runs that vanish after shrinking are dropped.
SuppressionSet SilenceRegions(const FrameProbSequence &frames,
                              double threshold = 0.7, double shrink = 0.2);

/// Labels each frame in `span` with the role of the utterance covering the
/// frame centre, or silence.
FrameLabelSequence RasterizeLabels(const Transcript &transcript,
                                   double frame_period, TimeInterval span);

/// Maximal same-label runs of speech frames.
std::vector<RoleSegment> LabelsToSegments(const FrameLabelSequence &labels);

/// Hard labels by per-frame argmax (ties prefer silence, then child).
FrameLabelSequence ArgmaxLabels(const FrameProbSequence &frames);

struct TimedText {
  std::string text;
  TimeInterval span;
};

/// Assigns each word the role with the higher mean log probability over the
/// frames whose centres fall inside the word.  Ties go to the child.  A word
/// shorter than a frame uses the frame nearest its midpoint.  Throws
/// kOutOfRange for a word ending after the last frame.
std::vector<Word> AttributeWords(const std::vector<TimedText> &words,
                                 const FrameProbSequence &frames);

/// Merges same-role segments separated by less than `merge_gap` (transitively,
/// per role), then drops segments shorter than `min_dur`.  Input must be
/// sorted by start; output is sorted by start, then role.
std::vector<RoleSegment> PostprocessSegments(std::vector<RoleSegment> segments,
                                             double merge_gap = 0.3,
                                             double min_dur = 0.2);

}  // namespace sotkit

#endif  // SOTKIT_DIARIZATION_H_
